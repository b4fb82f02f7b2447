"""Independent brute-force oracles used across the test suite.

Everything here enumerates; nothing calls the algorithms under test.
"""
import itertools

import numpy as np


def all_matchings(edges):
    """Yield every matching (as a frozenset of (src, dst)) of a digraph
    edge list, in the shared-no-heads / shared-no-tails sense."""
    edges = list(edges)

    def rec(i, used_src, used_dst, current):
        if i == len(edges):
            yield frozenset(current)
            return
        yield from rec(i + 1, used_src, used_dst, current)
        s, d = edges[i]
        if s not in used_src and d not in used_dst:
            current.append((s, d))
            yield from rec(i + 1, used_src | {s}, used_dst | {d}, current)
            current.pop()

    yield from rec(0, frozenset(), frozenset(), [])


def maximum_matchings(edges):
    """All maximum matchings by exhaustive enumeration."""
    best = []
    best_size = -1
    for m in all_matchings(edges):
        if len(m) > best_size:
            best, best_size = [m], len(m)
        elif len(m) == best_size:
            best.append(m)
    return best, best_size


def kalman_rank_numeric(a, b_cols):
    """Numeric rank of [B, AB, ..., A^{N-1}B]."""
    n = a.shape[0]
    b = np.asarray(b_cols, dtype=float)
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    c = np.hstack(blocks)
    return np.linalg.matrix_rank(c)


def generic_min_drivers(pairs, n, rng, draws=5):
    """Brute-force minimum number of independent input signals giving
    numeric Kalman rank N under generic weights.  Each signal may attach
    to any subset of nodes, so B is drawn fully dense (best over `draws`)."""
    for size in range(1, n + 1):
        for _ in range(draws):
            a = np.zeros((n, n))
            for s, d in pairs:
                a[d, s] = rng.uniform(0.5, 2.0) * rng.choice([-1, 1])
            b = rng.uniform(0.5, 2.0, (n, size)) * rng.choice([-1, 1], (n, size))
            if kalman_rank_numeric(a, b) == n:
                return size
    return n


def brute_force_mds(n, edges):
    """Minimum dominating set size by bitmask subset search, n <= ~20."""
    cover = [1 << i for i in range(n)]
    for u, v in edges:
        cover[u] |= 1 << v
        cover[v] |= 1 << u
    full = (1 << n) - 1
    best = n
    for mask in range(1 << n):
        if bin(mask).count("1") >= best:
            continue
        dom = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            dom |= cover[i]
            m &= m - 1
        if dom == full:
            best = bin(mask).count("1")
    return best


def brute_force_fvs(n, pairs):
    """Minimum feedback vertex set size by increasing-size subset search."""

    def acyclic(removed):
        adj = [[] for _ in range(n)]
        for s, d in pairs:
            if s not in removed and d not in removed:
                if s == d:
                    return False
                adj[s].append(d)
        indeg = [0] * n
        for s in range(n):
            for d in adj[s]:
                indeg[d] += 1
        stack = [v for v in range(n) if v not in removed and indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for d in adj[v]:
                indeg[d] -= 1
                if indeg[d] == 0:
                    stack.append(d)
        return seen == n - len(removed)

    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            if acyclic(set(subset)):
                return size, set(subset)
    raise AssertionError("unreachable")


def longest_path_layers(n, pairs, source):
    """Layer index of `source` in a DAG: number of nodes on the longest
    directed path starting at source (source included)."""
    adj = [[] for _ in range(n)]
    for s, d in pairs:
        adj[s].append(d)
    memo = {}

    def depth(v):
        if v in memo:
            return memo[v]
        memo[v] = 1 + max((depth(w) for w in adj[v]), default=0)
        return memo[v]

    return depth(source)


def henon_lyapunov(p, b, n_iter=30000, n_skip=500, x0=(0.1, 0.1)):
    """Largest Lyapunov exponent of the quadratic map pair by tangent-vector
    iteration with per-step renormalization."""
    import numpy as np

    x, y = x0
    v = np.array([1.0, 0.0])
    total = 0.0
    counted = 0
    for k in range(n_iter):
        jac = np.array([[-2.0 * x, b], [1.0, 0.0]])
        x, y = p + b * y - x * x, x
        v = jac @ v
        norm = np.linalg.norm(v)
        v /= norm
        if k >= n_skip:
            total += np.log(norm)
            counted += 1
    return total / counted
