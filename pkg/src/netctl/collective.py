"""Collective control: spectral synchronizability, pinning a network to a
reference trajectory, and flocking with and without a leader."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import DisconnectedGraph, NoPinnedNodes
from .graphs import UnGraph


def laplacian_matrix(g: UnGraph) -> np.ndarray:
    lap = np.zeros((g.n_nodes, g.n_nodes))
    for i, j in g.edges:
        lap[i, j] -= 1.0
        lap[j, i] -= 1.0
        lap[i, i] += 1.0
        lap[j, j] += 1.0
    return lap


@dataclass
class PinningConfig:
    """Diffusively coupled network with feedback applied to a pinned subset:
    ẋ_i = f(x_i) − σ Σ_j g_ij h(x_j) + δ_i σ κ_i [h(s) − h(x_i)]."""

    sigma: float
    kappa: np.ndarray  # per-node control gains
    pinned: list
    coupling: np.ndarray  # Laplacian convention: zero row sums

    def __post_init__(self):
        self.coupling = np.asarray(self.coupling, dtype=float)
        n = self.coupling.shape[0]
        self.kappa = np.broadcast_to(
            np.asarray(self.kappa, dtype=float), (n,)).copy()
        self.pinned = sorted(self.pinned)
        if np.abs(self.coupling.sum(axis=1)).max() > 1e-12:
            raise ValueError("coupling matrix must have zero row sums")
        if any(self.kappa[i] <= 0 for i in self.pinned):
            raise ValueError("pinned nodes need positive gains")

    @property
    def n_nodes(self):
        return self.coupling.shape[0]

    def indicator(self):
        delta = np.zeros(self.n_nodes)
        delta[self.pinned] = 1.0
        return delta


@dataclass
class PinningTrace:
    t: np.ndarray
    error: np.ndarray  # max_i ||x_i - s|| over time
    kappas: np.ndarray  # final control gains (evolved in adaptive mode)


def msf_eigenratio(g: UnGraph):
    """Laplacian spectrum endpoints and the eigenratio R = λ_N/λ₂; smaller
    R means a wider stable-coupling window for synchronization."""
    lam = np.linalg.eigvalsh(laplacian_matrix(g))
    lam2, lam_n = lam[1], lam[-1]
    if lam2 < 1e-10:
        raise DisconnectedGraph("λ₂ = 0: graph is not connected")
    return float(lam2), float(lam_n), float(lam_n / lam2)


def extended_matrix(cfg: PinningConfig) -> np.ndarray:
    """(N+1)-node matrix whose spectrum governs pinned synchronization: the
    reference enters as a virtual node wired to the pinned set."""
    n = cfg.n_nodes
    delta_kappa = cfg.indicator() * cfg.kappa
    m = np.zeros((n + 1, n + 1))
    m[:n, :n] = cfg.coupling + np.diag(delta_kappa)
    m[:n, n] = -delta_kappa
    return m


def pinning_eigenratio(cfg: PinningConfig):
    """Returns (Re λ₂, Re λ_{N+1}, R^{N+1}) of the extended matrix.  Its
    spectrum is {0} ∪ eig(G + diag(δκ)) because the virtual row vanishes."""
    if not cfg.pinned:
        raise NoPinnedNodes("eigenratio undefined without pinned nodes")
    block = cfg.coupling + np.diag(cfg.indicator() * cfg.kappa)
    if np.allclose(block, block.T):
        lam = np.linalg.eigvalsh(block)
    else:
        lam = np.sort(np.linalg.eigvals(block).real)
    lam2, lam_top = float(lam[0]), float(lam[-1])
    return lam2, lam_top, lam_top / lam2


def pinning_sync_simulate(cfg, osc, h, x0, s0, t_final, dt=0.01,
                          adaptive=False, q=1.0):
    """Integrate the pinned network alongside the reference ṡ = f(s) and
    report the worst-node deviation.  In adaptive mode the pinned gains
    grow as κ̇_i = q_i |e_i| until the errors die out."""
    n, dim = cfg.n_nodes, osc.n
    h = np.asarray(h, dtype=float)
    sigma = cfg.sigma
    lap = cfg.coupling
    delta = cfg.indicator()
    kappa = cfg.kappa.copy()
    q = np.broadcast_to(np.asarray(q, dtype=float), (n,))
    zero_u = np.zeros(dim)

    x = np.array(x0, dtype=float).reshape(n, dim)
    s = np.asarray(s0, dtype=float).copy()
    n_steps = int(round(t_final / dt))
    t = np.arange(n_steps + 1) * dt
    err = np.empty(n_steps + 1)
    err[0] = np.linalg.norm(x - s, axis=1).max()

    def drift(xc, sc, kc):
        f_nodes = np.array([osc.f(0.0, row, zero_u) for row in xc])
        ds = np.asarray(osc.f(0.0, sc, zero_u), dtype=float)
        coupling = -sigma * lap @ (xc @ h.T)
        control = (sigma * (delta * kc))[:, None] * ((sc - xc) @ h.T)
        dk = q * np.linalg.norm(xc - sc, axis=1) * delta if adaptive \
            else np.zeros(n)
        return f_nodes + coupling + control, ds, dk

    for k in range(n_steps):
        k1 = drift(x, s, kappa)
        k2 = drift(x + dt / 2 * k1[0], s + dt / 2 * k1[1],
                   kappa + dt / 2 * k1[2])
        k3 = drift(x + dt / 2 * k2[0], s + dt / 2 * k2[1],
                   kappa + dt / 2 * k2[2])
        k4 = drift(x + dt * k3[0], s + dt * k3[1], kappa + dt * k3[2])
        x = x + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        s = s + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        kappa = kappa + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        err[k + 1] = np.linalg.norm(x - s, axis=1).max()
    return PinningTrace(t=t, error=err, kappas=kappa)


# ---------------------------------------------------------------------------
# Flocking


def _wrap_angle(theta):
    return (theta + np.pi) % (2 * np.pi) - np.pi


def _step_rng(seed, step):
    """Counter-based stream: draws depend only on (seed, step), not on how
    many draws earlier steps made."""
    return np.random.default_rng([np.uint64(seed), np.uint64(step)])


@dataclass
class VicsekState:
    pos: np.ndarray  # (N, 2) in [0, L)
    theta: np.ndarray  # headings in (−π, π]
    v0: float
    r: float
    eta: float
    l: float
    seed: int = 0
    step: int = 0

    def __post_init__(self):
        self.pos = np.mod(np.asarray(self.pos, dtype=float), self.l)
        self.theta = _wrap_angle(np.asarray(self.theta, dtype=float))

    @property
    def n_agents(self):
        return len(self.theta)


def vicsek_init(n, l, v0, r, eta, seed=0):
    rng = _step_rng(seed, 0)
    pos = rng.uniform(0.0, l, (n, 2))
    theta = rng.uniform(-np.pi, np.pi, n)
    return VicsekState(pos=pos, theta=theta, v0=v0, r=r, eta=eta, l=l,
                       seed=seed, step=0)


def _neighbor_lists(pos, r, l):
    if r < l / 2:
        tree = cKDTree(np.mod(pos, l), boxsize=l)
        return tree.query_pairs(r, output_type="ndarray")
    # periodic tree search is limited to half the box; fall back to direct
    # minimum-image distances for large radii
    n = len(pos)
    diff = np.abs(pos[:, None, :] - pos[None, :, :])
    diff = np.minimum(diff, l - diff)
    close = (diff ** 2).sum(axis=2) <= r * r
    i, j = np.nonzero(np.triu(close, k=1))
    return np.column_stack([i, j])


def vicsek_step(state: VicsekState) -> VicsekState:
    """One synchronous update: headings move to the full-quadrant mean of
    the neighborhood (self included) plus bounded noise, then positions
    advance with the new headings and wrap periodically."""
    n = state.n_agents
    sin_sum = np.sin(state.theta).copy()
    cos_sum = np.cos(state.theta).copy()
    pairs = _neighbor_lists(state.pos, state.r, state.l)
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        np.add.at(sin_sum, i, np.sin(state.theta[j]))
        np.add.at(sin_sum, j, np.sin(state.theta[i]))
        np.add.at(cos_sum, i, np.cos(state.theta[j]))
        np.add.at(cos_sum, j, np.cos(state.theta[i]))
    rng = _step_rng(state.seed, state.step + 1)
    noise = rng.uniform(-state.eta / 2.0, state.eta / 2.0, n)
    theta = _wrap_angle(np.arctan2(sin_sum, cos_sum) + noise)
    vel = state.v0 * np.column_stack([np.cos(theta), np.sin(theta)])
    pos = np.mod(state.pos + vel, state.l)
    return VicsekState(pos=pos, theta=theta, v0=state.v0, r=state.r,
                       eta=state.eta, l=state.l, seed=state.seed,
                       step=state.step + 1)


def order_parameter(state: VicsekState) -> float:
    v = np.array([np.cos(state.theta).sum(), np.sin(state.theta).sum()])
    return float(np.linalg.norm(v) / state.n_agents)


@dataclass
class VicsekResult:
    phi: np.ndarray  # order parameter per recorded step
    mean: float
    stderr: float
    final: VicsekState


def vicsek_order_parameter(n, l, v0, r, eta, steps, seed=0,
                           transient=None) -> VicsekResult:
    if transient is None:
        transient = steps // 2
    state = vicsek_init(n, l, v0, r, eta, seed)
    phi = np.empty(steps + 1)
    phi[0] = order_parameter(state)
    for k in range(steps):
        state = vicsek_step(state)
        phi[k + 1] = order_parameter(state)
    tail = phi[transient:]
    return VicsekResult(phi=phi, mean=float(tail.mean()),
                        stderr=float(tail.std(ddof=1) / np.sqrt(len(tail))),
                        final=state)


def vicsek_leader_run(n, l, v0, r, theta0, steps, seed=0, eta=0.0):
    """Scalar-consensus flock with one extra leader agent locked to heading
    θ₀: followers average raw heading values (no angle wrap) over their
    neighborhood, weighting the leader like an extra neighbor.  Returns
    the trace of max_i |θ_i − θ₀|."""
    rng = _step_rng(seed, 0)
    pos = rng.uniform(0.0, l, (n, 2))
    theta = rng.uniform(-np.pi, np.pi, n)
    leader_pos = rng.uniform(0.0, l, 2)
    leader_vel = v0 * np.array([np.cos(theta0), np.sin(theta0)])
    deviation = np.empty(steps + 1)
    deviation[0] = np.abs(theta - theta0).max()
    for step in range(1, steps + 1):
        pairs = _neighbor_lists(pos, r, l)
        theta_sum = theta.copy()
        count = np.ones(n)
        if len(pairs):
            i, j = pairs[:, 0], pairs[:, 1]
            np.add.at(theta_sum, i, theta[j])
            np.add.at(theta_sum, j, theta[i])
            np.add.at(count, i, 1.0)
            np.add.at(count, j, 1.0)
        diff = np.mod(pos - leader_pos, l)
        diff = np.minimum(diff, l - diff)
        near_leader = (diff ** 2).sum(axis=1) <= r * r
        theta_sum[near_leader] += theta0
        count[near_leader] += 1.0
        noise = _step_rng(seed, step).uniform(-eta / 2.0, eta / 2.0, n) \
            if eta > 0 else 0.0
        theta = theta_sum / count + noise
        vel = v0 * np.column_stack([np.cos(theta), np.sin(theta)])
        pos = np.mod(pos + vel, l)
        leader_pos = np.mod(leader_pos + leader_vel, l)
        deviation[step] = np.abs(theta - theta0).max()
    return deviation


def scalar_consensus_run(theta, adjacency, steps):
    """Leaderless scalar-averaging update on a fixed interaction graph;
    returns the heading matrix over time (one row per step)."""
    adjacency = np.asarray(adjacency, dtype=float)
    n = len(theta)
    weights = adjacency + np.eye(n)
    weights = weights / weights.sum(axis=1, keepdims=True)
    out = [np.asarray(theta, dtype=float)]
    for _ in range(steps):
        out.append(weights @ out[-1])
    return np.array(out)
