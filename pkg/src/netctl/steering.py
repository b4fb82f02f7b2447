"""Steering nonlinear systems: open-loop entrainment, chaos control via
small parameter kicks or delayed feedback, basin-hopping perturbations, and
attractor switching by clamping a feedback vertex set."""

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import lsq_linear

from .errors import (
    DimensionMismatch,
    InfeasibleConstraints,
    MissingTrajectory,
    NoCapture,
    NoCompensation,
    SingularB,
)
from .graphs import DiGraph


@dataclass
class OdeSystem:
    """Continuous-time system ẋ = f(t, x, u) with an optional analytic
    Jacobian ∂f/∂x; a central finite difference is used when none is given."""

    n: int
    f: Callable
    jac: Optional[Callable] = None
    params: dict = field(default_factory=dict)

    def jacobian(self, t, x, u):
        if self.jac is not None:
            return np.asarray(self.jac(t, x, u), dtype=float)
        x = np.asarray(x, dtype=float)
        eps = 1e-6
        cols = []
        for i in range(self.n):
            dx = np.zeros(self.n)
            dx[i] = eps * max(1.0, abs(x[i]))
            fp = np.asarray(self.f(t, x + dx, u), dtype=float)
            fm = np.asarray(self.f(t, x - dx, u), dtype=float)
            cols.append((fp - fm) / (2 * dx[i]))
        return np.column_stack(cols)


@dataclass
class HenonParams:
    p: float = 1.4
    b: float = 0.3
    delta: float = 0.2
    gain: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("activation radius must be positive")


@dataclass
class SimTrace:
    t: np.ndarray
    x: np.ndarray
    u: Optional[np.ndarray] = None
    capture_step: Optional[int] = None
    mismatch: Optional[float] = None
    terminal_distance: Optional[float] = None


@dataclass
class FvsResult:
    nodes: list
    order: list  # topological order of the remainder (acyclicity certificate)
    minimal: bool
    exact: bool


# ---------------------------------------------------------------------------
# Open-loop entrainment


def hubler_input(sys, b, goal, goal_dot, t_final, x0=None, n_steps=400):
    """Drive ẋ = F(x) + B u onto the goal trajectory with the open-loop
    input u(t) = B⁻¹ [ġ(t) − F(g(t))]."""
    b = np.asarray(b, dtype=float)
    if b.shape != (sys.n, sys.n):
        raise DimensionMismatch(f"B must be {sys.n}x{sys.n}")
    if abs(np.linalg.det(b)) < 1e-12:
        raise SingularB("input matrix is not invertible")
    b_inv = np.linalg.inv(b)
    zero_u = np.zeros(sys.n)

    def input_at(t):
        g = np.asarray(goal(t), dtype=float)
        return b_inv @ (np.asarray(goal_dot(t), dtype=float)
                        - np.asarray(sys.f(t, g, zero_u), dtype=float))

    def rhs(t, x):
        return np.asarray(sys.f(t, x, zero_u), dtype=float) + b @ input_at(t)

    if x0 is None:
        x0 = np.asarray(goal(0.0), dtype=float)
    t_eval = np.linspace(0.0, t_final, n_steps + 1)
    sol = solve_ivp(rhs, (0.0, t_final), np.asarray(x0, dtype=float),
                    t_eval=t_eval, rtol=1e-6, atol=1e-9)
    u = np.array([input_at(t) for t in t_eval])
    return SimTrace(t=t_eval, x=sol.y.T, u=u)


# ---------------------------------------------------------------------------
# Chaos control of the quadratic map pair


def henon_step(x, y, p, b):
    return p + b * y - x * x, x


def henon_fixed_point(p, b):
    """Positive solution of x² + (1−b)x − p = 0; the period-1 saddle."""
    c = 1.0 - b
    return (-c + np.sqrt(c * c + 4.0 * p)) / 2.0


def ogy_gain(hp):
    """Deadbeat gain row on the unstable direction of the period-1 saddle:
    δp = C·z kills the component of z along the expanding eigenvector."""
    x_star = henon_fixed_point(hp.p, hp.b)
    jac = np.array([[-2.0 * x_star, hp.b], [1.0, 0.0]])
    g = np.array([1.0, 0.0])  # sensitivity of the map to the parameter
    eigvals, eigvecs = np.linalg.eig(jac.T)  # left eigenvectors of jac
    i_u = int(np.argmax(np.abs(eigvals)))
    lam_u = eigvals[i_u].real
    f_u = eigvecs[:, i_u].real
    return -lam_u * f_u / (f_u @ g)


def ogy_stabilize_henon(hp, x0=None, n_steps=2000, seed=None):
    """Stabilize the period-1 saddle with parameter kicks triggered inside
    the activation radius and capped at 1% of the nominal parameter."""
    rng = np.random.default_rng(seed)
    if x0 is None:
        x0 = rng.uniform(-0.5, 0.5, 2)
    x_star = henon_fixed_point(hp.p, hp.b)
    target = np.array([x_star, x_star])
    gain = hp.gain if hp.gain is not None else ogy_gain(hp)
    cap = 0.01 * hp.p

    states = np.empty((n_steps + 1, 2))
    kicks = np.zeros(n_steps)
    states[0] = x0
    for k in range(n_steps):
        z = states[k] - target
        dp = 0.0
        if np.hypot(*z) <= hp.delta:
            dp = float(gain @ z)
            if abs(dp) > cap:
                dp = 0.0
        assert abs(dp) <= cap
        kicks[k] = dp
        states[k + 1] = henon_step(states[k, 0], states[k, 1],
                                   hp.p + dp, hp.b)

    inside = np.hypot(states[:, 0] - x_star,
                      states[:, 1] - x_star) <= hp.delta
    # capture step: first index after which the orbit never leaves the
    # activation neighbourhood
    outside = np.nonzero(~inside)[0]
    capture = 0 if inside.all() else int(outside[-1]) + 1
    if capture >= n_steps:
        raise NoCapture(f"orbit not captured within {n_steps} steps")
    return SimTrace(t=np.arange(n_steps + 1), x=states, u=kicks,
                    capture_step=capture)


# ---------------------------------------------------------------------------
# Delayed self-referencing feedback


def _lagrange4(states, pos):
    """Cubic Lagrange interpolation of a uniformly sampled history at
    fractional index pos."""
    i = int(np.floor(pos))
    if float(pos) == i:
        return states[i]
    i0 = min(max(i - 1, 0), len(states) - 4)
    s = pos - i0
    out = 0.0
    for j in range(4):
        w = 1.0
        for m in range(4):
            if m != j:
                w *= (s - m) / (j - m)
        out = out + w * states[i0 + j]
    return out


def pyragas_feedback(sys, output, k_gain, tau, t_final, x0, dt=0.02):
    """Integrate ẋ = f(t, x, u) with u(t) = K [y(t) − y(t−τ)] by fixed-step
    RK4, interpolating the delayed output from the stored history.  The
    history over [−τ, 0] is the uncontrolled flow started at x0."""
    if tau <= 0:
        raise ValueError("delay must be positive")
    k_gain = np.atleast_1d(np.asarray(k_gain, dtype=float))
    if callable(output):
        y_of = output
    else:
        idx = int(output)
        y_of = lambda x: x[idx]

    n_delay = max(int(round(tau / dt)), 4)
    dt = tau / n_delay  # snap the step so the delay is a whole number of steps
    n_main = int(round(t_final / dt))

    def rk4(xc, tc, force):
        k1 = np.asarray(sys.f(tc, xc, force(tc, xc)), dtype=float)
        k2 = np.asarray(sys.f(tc + dt / 2, xc + dt / 2 * k1,
                              force(tc + dt / 2, xc + dt / 2 * k1)), float)
        k3 = np.asarray(sys.f(tc + dt / 2, xc + dt / 2 * k2,
                              force(tc + dt / 2, xc + dt / 2 * k2)), float)
        k4 = np.asarray(sys.f(tc + dt, xc + dt * k3,
                              force(tc + dt, xc + dt * k3)), float)
        return xc + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    zero_u = np.zeros_like(k_gain)
    free = lambda tc, xc: zero_u

    history = [np.asarray(x0, dtype=float)]
    for k in range(n_delay):
        history.append(rk4(history[-1], -tau + k * dt, free))

    states = list(history)  # index k holds x(−τ + k·dt)

    def controlled(tc, xc):
        pos = (tc + tau) / dt - n_delay  # index of t−τ in `states`
        y_del = y_of(_lagrange4(states, pos))
        return k_gain * (y_of(xc) - y_del)

    us = []
    for k in range(n_main):
        tc = k * dt
        us.append(controlled(tc, states[-1]))
        states.append(rk4(states[-1], tc, controlled))
    us.append(controlled(n_main * dt, states[-1]))

    t = np.arange(n_main + 1) * dt
    xs = np.array(states[n_delay:])
    ys = np.array([y_of(x) for x in states])
    tail = max(1, n_main // 10)
    diff = np.abs(ys[n_delay:] - ys[:-n_delay])
    mismatch = float(diff[-tail:].max())
    return SimTrace(t=t, x=xs, u=np.array(us), mismatch=mismatch)


def close_return_period(sys, x0, t_transient, t_max, dt=0.01, t_min=1.0,
                        t_search=300.0):
    """Locate a periodic-orbit period by recurrence search: scan reference
    points along the post-transient flow and find the pair (point, lag)
    with the smallest return distance for lags in [t_min, t_max].  A point
    shadowing the orbit returns almost exactly after one period.  Returns
    (period, return_distance)."""
    zero_u = np.zeros(sys.n)
    rhs = lambda t, x: np.asarray(sys.f(t, x, zero_u), dtype=float)
    ref = solve_ivp(rhs, (0.0, t_transient), np.asarray(x0, dtype=float),
                    rtol=1e-9, atol=1e-11).y[:, -1]
    t_eval = np.arange(0.0, t_search + dt / 2, dt)
    xs = solve_ivp(rhs, (0.0, t_search), ref, t_eval=t_eval,
                   rtol=1e-9, atol=1e-11).y.T
    lo, hi = int(t_min / dt), int(t_max / dt)
    best = (np.inf, lo, 0)
    for lag in range(lo, hi + 1):
        d = np.linalg.norm(xs[lag:] - xs[:-lag], axis=1)
        i = int(np.argmin(d))
        if d[i] < best[0]:
            best = (float(d[i]), lag, i)
    dist_best, lag, i = best
    # parabolic refinement of the lag at the best reference point
    if lo < lag < hi:
        seg = [np.linalg.norm(xs[i + k] - xs[i]) for k in
               (lag - 1, lag, lag + 1)]
        denom = seg[0] - 2 * seg[1] + seg[2]
        shift = 0.5 * (seg[0] - seg[2]) / denom if denom > 0 else 0.0
    else:
        shift = 0.0
    return float((lag + shift) * dt), dist_best


# ---------------------------------------------------------------------------
# Compensatory perturbations of the initial state


def compensatory_perturbation(sys, x0, x_target, control_set=None,
                              bounds=None, budget=20, kappa=0.05,
                              t_horizon=20.0, n_samples=400, step_frac=0.1):
    """Nudge the initial state into the target basin by repeated small
    corrections along the linearized flow evaluated at the orbit's closest
    approach to the target.  Returns (new_x0, iterations_used)."""
    x0 = np.asarray(x0, dtype=float).copy()
    x_target = np.asarray(x_target, dtype=float)
    if control_set is None:
        control_set = list(range(sys.n))
    control_set = sorted(control_set)
    if bounds is None:
        lo = np.full(sys.n, -np.inf)
        hi = np.full(sys.n, np.inf)
    else:
        lo = np.asarray(bounds[0], dtype=float)
        hi = np.asarray(bounds[1], dtype=float)
    if np.any(lo > hi):
        raise InfeasibleConstraints("empty perturbation box")
    zero_u = np.zeros(sys.n)
    rhs = lambda t, x: np.asarray(sys.f(t, x, zero_u), dtype=float)
    shift = np.zeros(sys.n)  # cumulative perturbation applied so far
    t_eval = np.linspace(0.0, t_horizon, n_samples + 1)

    for it in range(budget + 1):
        sol = solve_ivp(rhs, (0.0, t_horizon), x0, t_eval=t_eval,
                        rtol=1e-6, atol=1e-9)
        dist = np.linalg.norm(sol.y.T - x_target, axis=1)
        k = int(np.argmin(dist))
        if dist[k] < kappa:
            return x0, it
        if it == budget:
            raise NoCompensation(f"budget of {budget} iterations exhausted")
        t_c = t_eval[k]
        m = _flow_matrix(sys, x0, t_c)
        residual = x_target - sol.y[:, k]
        cap = step_frac * np.linalg.norm(x_target - x0)
        lb = np.maximum(lo[control_set] - shift[control_set], -cap)
        ub = np.minimum(hi[control_set] - shift[control_set], cap)
        if np.any(lb > ub):
            raise InfeasibleConstraints("bounds leave no admissible step")
        res = lsq_linear(m[:, control_set], residual, bounds=(lb, ub))
        delta = np.zeros(sys.n)
        delta[control_set] = res.x
        if np.linalg.norm(delta) < 1e-12:
            raise NoCompensation("no admissible perturbation makes progress")
        x0 = x0 + delta
        shift = shift + delta
    raise NoCompensation("unreachable")


def _flow_matrix(sys, x0, t_c):
    """Variational matrix M(t_c) = ∂x(t_c)/∂x(0) along the free orbit."""
    n = sys.n
    if t_c == 0.0:
        return np.eye(n)
    zero_u = np.zeros(n)

    def rhs(t, z):
        x = z[:n]
        m = z[n:].reshape(n, n)
        dx = np.asarray(sys.f(t, x, zero_u), dtype=float)
        dm = sys.jacobian(t, x, zero_u) @ m
        return np.concatenate([dx, dm.ravel()])

    z0 = np.concatenate([np.asarray(x0, dtype=float), np.eye(n).ravel()])
    sol = solve_ivp(rhs, (0.0, t_c), z0, rtol=1e-8, atol=1e-10)
    return sol.y[n:, -1].reshape(n, n)


# ---------------------------------------------------------------------------
# Feedback vertex sets


def _topo_order(g, removed):
    """Kahn order of the nodes outside `removed`, or None if a cycle stays."""
    indeg = {}
    for v in range(g.n_nodes):
        if v not in removed:
            indeg[v] = 0
    for s, d, _ in g.edges:
        if s not in removed and d not in removed:
            indeg[d] += 1
    adj = g.out_adj()
    stack = [v for v, c in indeg.items() if c == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for d in adj[v]:
            if d in indeg and d != v:
                indeg[d] -= 1
                if indeg[d] == 0:
                    stack.append(d)
    return order if len(order) == len(indeg) else None


def _scc_partition(nodes, adj):
    """Tarjan on an adjacency dict restricted to `nodes` (iterative)."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def fvs_find(g: DiGraph, mode="heuristic") -> FvsResult:
    """Feedback vertex set: smallest node set whose removal leaves the
    digraph acyclic.  Exact mode enumerates subsets by size (N ≤ 15);
    the heuristic shrinks strongly connected components by removing
    high-traffic nodes, then restores any node not actually needed."""
    if mode == "exact":
        if g.n_nodes > 15:
            raise ValueError("exact mode limited to 15 nodes")
        for size in range(g.n_nodes + 1):
            for combo in itertools.combinations(range(g.n_nodes), size):
                order = _topo_order(g, set(combo))
                if order is not None:
                    return FvsResult(nodes=sorted(combo), order=order,
                                     minimal=True, exact=True)
        raise AssertionError("removing all nodes always leaves a DAG")
    if mode != "heuristic":
        raise ValueError(f"unknown mode {mode!r}")

    adj = {v: set() for v in range(g.n_nodes)}
    loops = set()
    for s, d, _ in g.edges:
        if s == d:
            loops.add(s)
        else:
            adj[s].add(d)
    fvs = set(loops)
    alive = set(range(g.n_nodes)) - fvs
    while True:
        sub = {v: [w for w in adj[v] if w in alive] for v in alive}
        cyclic = [c for c in _scc_partition(sorted(alive), sub) if len(c) > 1]
        if not cyclic:
            break
        for comp in cyclic:
            members = set(comp)
            best = max(comp, key=lambda v: (
                sum(1 for w in sub[v] if w in members)
                * sum(1 for w in comp if v in sub[w])))
            fvs.add(best)
            alive.discard(best)
    # minimality pass: drop any node whose return keeps the remainder acyclic
    for v in sorted(fvs):
        if _topo_order(g, fvs - {v}) is not None:
            fvs.discard(v)
    order = _topo_order(g, fvs)
    assert order is not None
    return FvsResult(nodes=sorted(fvs), order=order, minimal=True, exact=False)


def fvs_clamp(sys, clamp_nodes, times, samples, n_substeps=4):
    """Override the clamped coordinates with a prescribed trajectory while
    integrating the rest; reports terminal distance to the final sample."""
    times = np.asarray(times, dtype=float)
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (len(times), sys.n):
        raise MissingTrajectory("samples must cover every node at each time")
    if len(times) < 2:
        raise MissingTrajectory("need at least two trajectory samples")
    clamp_nodes = sorted(clamp_nodes)
    zero_u = np.zeros(sys.n)

    def prescribed(t):
        return np.array([np.interp(t, times, samples[:, j])
                         for j in clamp_nodes])

    def rhs(t, x):
        dx = np.asarray(sys.f(t, x, zero_u), dtype=float)
        dx[clamp_nodes] = 0.0
        return dx

    xs = np.empty_like(samples)
    xs[0] = samples[0]
    state = samples[0].copy()
    for k in range(len(times) - 1):
        h = (times[k + 1] - times[k]) / n_substeps
        for j in range(n_substeps):
            tc = times[k] + j * h
            state[clamp_nodes] = prescribed(tc)
            k1 = rhs(tc, state)
            k2 = rhs(tc + h / 2, state + h / 2 * k1)
            k3 = rhs(tc + h / 2, state + h / 2 * k2)
            k4 = rhs(tc + h, state + h * k3)
            state = state + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        state[clamp_nodes] = samples[k + 1, clamp_nodes]
        xs[k + 1] = state
    terminal = float(np.linalg.norm(xs[-1] - samples[-1]))
    return SimTrace(t=times, x=xs, terminal_distance=terminal)


# ---------------------------------------------------------------------------
# Toy systems


def _rossler(a=0.2, b=0.2, c=5.7):
    def f(t, x, u):
        drive = np.zeros(3)
        drive[:len(u)] = u
        return np.array([-x[1] - x[2], x[0] + a * x[1],
                         b + x[2] * (x[0] - c)]) + drive

    def jac(t, x, u):
        return np.array([[0.0, -1.0, -1.0],
                         [1.0, a, 0.0],
                         [x[2], 0.0, x[0] - c]])

    return OdeSystem(n=3, f=f, jac=jac, params={"a": a, "b": b, "c": c})


def _bistable_gene(a=2.0, h=4.0):
    """Two mutually repressing genes with first-order decay: a bistable
    toggle whose interaction digraph is a single 2-cycle."""
    def f(t, x, u):
        return np.array([a / (1.0 + x[1] ** h) - x[0],
                         a / (1.0 + x[0] ** h) - x[1]])

    def jac(t, x, u):
        d01 = -a * h * x[1] ** (h - 1) / (1.0 + x[1] ** h) ** 2
        d10 = -a * h * x[0] ** (h - 1) / (1.0 + x[0] ** h) ** 2
        return np.array([[-1.0, d01], [d10, -1.0]])

    return OdeSystem(n=2, f=f, jac=jac, params={"a": a, "h": h})


def _double_well():
    def f(t, x, u):
        return np.array([x[0] - x[0] ** 3])

    def jac(t, x, u):
        return np.array([[1.0 - 3.0 * x[0] ** 2]])

    return OdeSystem(n=1, f=f, jac=jac)


_TOYS = {
    "rossler": _rossler,
    "bistable-gene": _bistable_gene,
    "double-well": _double_well,
}


def make_system(name, **overrides) -> OdeSystem:
    try:
        factory = _TOYS[name]
    except KeyError:
        raise KeyError(f"unknown toy system {name!r}; "
                       f"choices: {sorted(_TOYS)}") from None
    return factory(**overrides)


def gene_toggle_attractors(a=2.0, h=4.0, tol=1e-12):
    """The two stable states of the toggle, found by fixed-point iteration
    from the two biased corners."""
    sys = _bistable_gene(a, h)
    out = []
    for start in (np.array([a, 0.0]), np.array([0.0, a])):
        x = start
        for _ in range(10000):
            nxt = np.array([a / (1.0 + x[1] ** h), a / (1.0 + x[0] ** h)])
            if np.linalg.norm(nxt - x) < tol:
                break
            x = nxt
        out.append(x)
    assert np.linalg.norm(np.asarray(sys.f(0, out[0], np.zeros(2)))) < 1e-9
    return out[0], out[1]
