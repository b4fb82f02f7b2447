"""Numeric linear-algebra controllability: Kalman rank, eigenstructure,
and the eigenvalue-wise (PBH) minimum driver count with driver selection.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass
class DenseSystem:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray = None

    def __post_init__(self):
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        if self.b.ndim == 1:
            self.b = self.b[:, None]
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise DimensionMismatch("A must be square")
        if self.b.shape[0] != n:
            raise DimensionMismatch("B must have one row per state")
        if self.c is not None:
            self.c = np.atleast_2d(np.asarray(self.c, dtype=float))
            if self.c.shape[1] != n:
                raise DimensionMismatch("C must have one column per state")
        for m in (self.a, self.b) + (() if self.c is None else (self.c,)):
            if not np.isfinite(m).all():
                raise ValueError("matrix entries must be finite")

    @property
    def n(self):
        return self.a.shape[0]


@dataclass
class EigenStructure:
    eigenvalues: list  # distinct (clustered) eigenvalues
    algebraic: list  # algebraic multiplicity per distinct eigenvalue
    geometric: list  # geometric multiplicity per distinct eigenvalue


def _matrix_rank(m, tol=None):
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if tol is None:
        tol = max(m.shape) * np.finfo(float).eps * (s[0] if s[0] > 0 else 1.0)
    return int((s > tol).sum())


def kalman_rank(sys: DenseSystem):
    """Rank of the reachability matrix [B, AB, ..., A^(N-1)B].

    Limited to N <= 50: high matrix powers mix extreme scales and the
    explicit construction loses meaning numerically beyond that.
    Returns (rank, controllable).
    """
    n = sys.n
    if n > 50:
        raise ValueError("explicit reachability matrix limited to N <= 50; "
                         "use pbh_min_drivers for larger systems")
    blocks = [sys.b]
    for _ in range(n - 1):
        blocks.append(sys.a @ blocks[-1])
    ctrb = np.hstack(blocks)
    r = _matrix_rank(ctrb)
    return r, r == n


def _cluster_eigenvalues(eig, tol):
    """Union-find clustering of eigenvalues within tol of each other."""
    n = len(eig)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eig[i] - eig[j]) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    clusters = [np.mean([eig[i] for i in idx]) for idx in groups.values()]
    counts = [len(idx) for idx in groups.values()]
    order = np.lexsort((np.array(clusters).imag, np.array(clusters).real))
    return [clusters[i] for i in order], [counts[i] for i in order]


def eigen_table(a) -> EigenStructure:
    """Distinct eigenvalues with algebraic and geometric multiplicities.

    Eigenvalues closer than 1e-8 * max(1, ||A||_2) are treated as one;
    geometric multiplicity is evaluated at the cluster centroid.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[0]
    norm = np.linalg.norm(a, 2) if n else 0.0
    tol = 1e-8 * max(1.0, norm)
    eig = np.linalg.eigvals(a)
    centers, alg = _cluster_eigenvalues(list(eig), tol)
    # singular values below the clustering scale count as zero, so the
    # rank drop is detected at the same resolution that merged the cluster
    geo = [n - _matrix_rank(lam * np.eye(n) - a, tol=tol) for lam in centers]
    if np.allclose(a, a.T):
        assert alg == geo
    return EigenStructure(centers, alg, geo)


def _dependent_rows(m, tol):
    """Indices of rows that are linear combinations of lower-index rows.

    Row order is the canonical tie-break; independence is judged by
    whether appending the row raises the numeric rank at tolerance tol.
    """
    kept = []
    dependent = []
    rank = 0
    for i, row in enumerate(m):
        cand = np.vstack(kept + [row])
        if _matrix_rank(cand, tol=tol) > rank:
            kept.append(row)
            rank += 1
        else:
            dependent.append(i)
    return dependent


def pbh_min_drivers(a):
    """Exact minimum driver count N_D = max geometric multiplicity over
    the eigenvalues, with a driver set for the maximizing eigenvalue.

    The driver set is the rows of (A - λ I) that depend linearly on
    preceding rows; it is one of many valid choices (driver sets of this
    kind are not unique).  Returns (n_d, lam_max, drivers).
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[0]
    if n == 0:
        return 0, 0.0, []
    es = eigen_table(a)
    best = int(np.argmax(es.geometric))
    n_d = es.geometric[best]
    lam = es.eigenvalues[best]
    tol = 1e-8 * max(1.0, np.linalg.norm(a, 2))
    drivers = _dependent_rows(a - lam * np.eye(n), tol)
    # row-order elimination finds exactly N - rank dependent rows
    assert len(drivers) == n_d
    return n_d, lam, drivers


def pbh_controllable(sys: DenseSystem) -> bool:
    """Eigenvalue-wise rank test: rank [A - λI, B] = N for every λ."""
    n = sys.n
    tol = 1e-8 * max(1.0, np.linalg.norm(sys.a, 2))
    es = eigen_table(sys.a)
    return all(
        _matrix_rank(np.hstack([sys.a - lam * np.eye(n), sys.b]),
                     tol=tol) == n
        for lam in es.eigenvalues
    )


def self_loop_sweep(a, loop_weights, densities, seeds):
    """n_D samples when self-loop weights are assigned to random node
    subsets of the given densities.

    For each seed, nodes are randomly partitioned into len(loop_weights)
    groups with the given fractions, each node's diagonal entry is set to
    its group's weight, and N_D is computed eigenvalue-wise.  Returns the
    per-seed n_D list.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    n = a.shape[0]
    if len(loop_weights) != len(densities):
        raise ValueError("one density per loop weight")
    if abs(sum(densities) - 1.0) > 1e-9:
        raise ValueError("densities must sum to 1")
    counts = [int(round(d * n)) for d in densities]
    counts[-1] = n - sum(counts[:-1])
    if min(counts) < 0:
        raise ValueError("densities incompatible with N")
    samples = []
    for seed in seeds:
        rng = np.random.default_rng(seed)
        perm = rng.permutation(n)
        diag = np.empty(n)
        start = 0
        for w, cnt in zip(loop_weights, counts):
            diag[perm[start:start + cnt]] = w
            start += cnt
        m = a.copy()
        np.fill_diagonal(m, diag)
        samples.append(pbh_min_drivers(m)[0] / n)
    return samples


def chain_matrix(n):
    """Adjacency of the undirected path on n nodes."""
    a = np.zeros((n, n))
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = 1.0
    return a


def ring_matrix(n):
    a = chain_matrix(n)
    a[0, n - 1] = a[n - 1, 0] = 1.0
    return a


def star_matrix(n):
    """Hub node 0 linked to n-1 leaves."""
    a = np.zeros((n, n))
    a[0, 1:] = a[1:, 0] = 1.0
    return a


def complete_matrix(n):
    return np.ones((n, n)) - np.eye(n)
