"""Ensemble-averaged driver-node fraction from degree distributions.

A directed ensemble is described by its in- and out-degree distributions;
the expected driver fraction follows from a six-variable self-consistent
fixed point evaluated through the distributions' generating functions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergence


class PoissonDist:
    """Poisson degree distribution with the given per-direction mean.

    Generating functions: G(x) = exp(mean (x-1)); the edge-excess
    function H coincides with G.
    """

    def __init__(self, mean: float):
        if mean < 0:
            raise ValueError("mean must be nonnegative")
        self.mean = float(mean)

    def pmf(self, k: int) -> float:
        return math.exp(-self.mean) * self.mean**k / math.factorial(k)

    def g(self, x: float) -> float:
        return math.exp(self.mean * (x - 1.0))

    def h(self, x: float) -> float:
        return self.g(x)


class SFStaticDist:
    """Power-law degree distribution of the static model with exponent
    gamma > 2 and per-direction mean degree `mean`.

    The distribution is a Poisson mixture: node u ∈ (0,1) has rate
    lam(u) = mean (1-a) u^(-a) with a = 1/(gamma-1), which yields
    P(k) ~ k^(-gamma) for large k.  Generating functions are computed by
    Gauss–Legendre quadrature after the substitution u = t^p (p grows as
    gamma -> 2 to resolve the integrable singularity at u = 0).
    """

    def __init__(self, mean: float, gamma: float, n_points: int = 400):
        if gamma <= 2:
            raise ValueError("gamma must exceed 2")
        if mean <= 0:
            raise ValueError("mean must be positive")
        self.mean = float(mean)
        self.gamma = float(gamma)
        a = 1.0 / (gamma - 1.0)
        # u = t^p flattens the u^(-a) singularity exactly; with this p the
        # transformed mean integrand is constant in t
        p = 1.0 / (1.0 - a)
        t, wt = np.polynomial.legendre.leggauss(n_points)
        t = 0.5 * (t + 1.0)
        wt = 0.5 * wt
        # All node quantities are kept in log space: near u = 0 the rate
        # overflows while the jacobian-weighted quadrature weight
        # underflows, but their product wt*p*mean*(1-a) stays finite.
        log_t = np.log(t)
        self._log_lam = math.log(mean * (1.0 - a)) - a * p * log_t
        self._log_w = np.log(wt * p) + (p - 1.0) * log_t
        self._log_wl = np.log(wt * p) + math.log(mean * (1.0 - a))
        # clamped rate: huge-but-finite so lam*(x-1) is -inf-like for any
        # x < 1 yet exactly 0 at x = 1
        self._lam = np.exp(np.minimum(self._log_lam, 705.0))
        # quadrature must reproduce the mean: <k> = ∫ lam(u) du
        assert abs(np.exp(self._log_wl).sum() - mean) < 1e-8 * mean

    def pmf(self, k: int) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            e = self._log_w + k * self._log_lam - self._lam - math.lgamma(k + 1)
        return float(np.exp(e).sum())

    def g(self, x: float) -> float:
        # clip: quadrature roundoff can overshoot the exact range by a few ulp
        return min(float(np.exp(self._log_w + self._lam * (x - 1.0)).sum()), 1.0)

    def h(self, x: float) -> float:
        e = self._log_wl + self._lam * (x - 1.0)
        return min(float(np.exp(e).sum()) / self.mean, 1.0)


class EmpiricalDist:
    """Degree distribution from an observed histogram."""

    def __init__(self, counts):
        counts = np.asarray(counts, dtype=float)
        if counts.ndim != 1 or counts.size == 0 or (counts < 0).any():
            raise ValueError("need a 1-d nonnegative histogram")
        total = counts.sum()
        if total == 0:
            raise ValueError("empty histogram")
        self.p = counts / total
        self.mean = float(np.arange(counts.size) @ self.p)

    @classmethod
    def from_degrees(cls, degrees):
        degrees = np.asarray(degrees, dtype=np.int64)
        return cls(np.bincount(degrees))

    def pmf(self, k: int) -> float:
        return float(self.p[k]) if k < self.p.size else 0.0

    def g(self, x: float) -> float:
        # Horner evaluation of sum_k p_k x^k
        acc = 0.0
        for pk in self.p[::-1]:
            acc = acc * x + pk
        return acc

    def h(self, x: float) -> float:
        ks = np.arange(1, self.p.size)
        return float((ks * self.p[1:]) @ x ** (ks - 1)) / self.mean


@dataclass
class CavityState:
    w1: float
    w2: float
    w3: float
    w1_hat: float
    w2_hat: float
    w3_hat: float

    def as_tuple(self):
        return (self.w1, self.w2, self.w3,
                self.w1_hat, self.w2_hat, self.w3_hat)


def solve_cavity(
    dist_in,
    dist_out,
    z: float,
    mixing: float = 0.5,
    tol: float = 1e-10,
    max_iter: int = 100_000,
):
    """Driver-node fraction for an ensemble with the given in/out degree
    distributions and mean total degree z, via damped fixed-point
    iteration of the self-consistency equations.

    Returns (n_d, CavityState).  Raises NonConvergence if the residual
    stays above tol after max_iter sweeps.
    """
    if z <= 0:
        raise ValueError("mean degree must be positive")
    g, h = dist_out.g, dist_out.h
    g_hat, h_hat = dist_in.g, dist_in.h
    # The submanifold {w2 = 1 - w1_hat, w2_hat = 1 - w1} is invariant under
    # the iteration and carries a spurious fixed point for dense ensembles;
    # the initial point is chosen off it.  Both physical branches give the
    # same driver fraction.
    w1, w2 = 0.5, 0.25
    w1h, w2h = 0.5, 0.25
    residual = math.inf
    for _ in range(max_iter):
        n1 = h(w2h)
        n2 = 1.0 - h(1.0 - w1h)
        n1h = h_hat(w2)
        n2h = 1.0 - h_hat(1.0 - w1)
        residual = max(abs(n1 - w1), abs(n2 - w2),
                       abs(n1h - w1h), abs(n2h - w2h))
        w1 = (1.0 - mixing) * w1 + mixing * n1
        w2 = (1.0 - mixing) * w2 + mixing * n2
        w1h = (1.0 - mixing) * w1h + mixing * n1h
        w2h = (1.0 - mixing) * w2h + mixing * n2h
        if residual < tol:
            break
    else:
        raise NonConvergence(
            "cavity iteration did not converge",
            residual=residual,
            iterations=max_iter,
        )
    n_d = 0.5 * (
        (g(w2h) + g(1.0 - w1h) - 1.0)
        + (g_hat(w2) + g_hat(1.0 - w1) - 1.0)
        + (z / 2.0) * (w1h * (1.0 - w2) + w1 * (1.0 - w2h))
    )
    state = CavityState(w1, w2, 1.0 - w1 - w2, w1h, w2h, 1.0 - w1h - w2h)
    return n_d, state


def solve_cavity_er(k_mean: float, **kwargs):
    """Driver fraction of the directed Erdős–Rényi ensemble with mean
    total degree k_mean."""
    d = PoissonDist(k_mean / 2.0)
    return solve_cavity(d, d, k_mean, **kwargs)


def solve_cavity_sf(k_mean: float, gamma: float, **kwargs):
    """Driver fraction of the static-model scale-free ensemble with mean
    total degree k_mean and exponent gamma (same in and out)."""
    d = SFStaticDist(k_mean / 2.0, gamma)
    return solve_cavity(d, d, k_mean, **kwargs)


def nd_asymptotic(kind: str, k_mean: float, gamma: float = None) -> float:
    """Large-<k> closed forms for the driver fraction: exp(-k/2) for the
    Erdős–Rényi ensemble, exp(-(1/2)(1 - 1/(gamma-1)) k) for the
    static-model scale-free ensemble."""
    if kind == "er":
        return math.exp(-k_mean / 2.0)
    if kind == "sf-static":
        if gamma is None or gamma <= 2:
            raise ValueError("need gamma > 2")
        return math.exp(-0.5 * (1.0 - 1.0 / (gamma - 1.0)) * k_mean)
    raise ValueError(f"unknown ensemble kind {kind!r}")


def cavity_residual(dist_in, dist_out, state: CavityState) -> float:
    """Max violation of the six self-consistency equations at `state`."""
    w1, w2, w3, w1h, w2h, w3h = state.as_tuple()
    return max(
        abs(w1 - dist_out.h(w2h)),
        abs(w2 - (1.0 - dist_out.h(1.0 - w1h))),
        abs(w3 - (1.0 - w1 - w2)),
        abs(w1h - dist_in.h(w2)),
        abs(w2h - (1.0 - dist_in.h(1.0 - w1))),
        abs(w3h - (1.0 - w1h - w2h)),
    )
