"""Sensor placement and observability: inference diagrams, root-SCC
sensor sets, target observability, dominating sets, observability
transitions, and a Luenberger observer simulator.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, NoPathToTarget, ParseError
from .graphs import DiGraph, UnGraph, reachable_from, scc_decompose, transpose
from .structural import DriverReport, min_driver_set


@dataclass
class ReactionSystem:
    species: list  # species names, first-appearance order
    rates: list  # rate constant per elementary reaction
    alpha: np.ndarray  # reactant stoichiometry, shape (R, N)
    beta: np.ndarray  # product stoichiometry, shape (R, N)

    @property
    def gamma(self):
        """Stoichiometric matrix, shape (N, R): net change of species i
        in reaction j."""
        return (self.beta - self.alpha).T

    @property
    def n_species(self):
        return len(self.species)


_TERM = re.compile(r"^\s*(?:(\d+(?:\.\d+)?)\s+)?(\S+)\s*$")


def _parse_side(side, line_no):
    terms = {}
    side = side.strip()
    if side in ("", "0"):
        return terms
    for part in side.split("+"):
        m = _TERM.match(part)
        if not m:
            raise ParseError(line_no, f"bad species term {part!r}")
        coeff = float(m.group(1)) if m.group(1) else 1.0
        name = m.group(2)
        terms[name] = terms.get(name, 0.0) + coeff
    return terms


def parse_reactions(text: str) -> ReactionSystem:
    """Parse reaction lines "k: a A + b B -> c C + d D".

    The leading token is the rate constant (a number, or "name=value");
    "<->" expands into the two elementary directions, the reverse taking
    the rate after a comma when given ("k1,k2: A <-> B") and the forward
    rate otherwise.  '#' starts a comment.
    """
    species = []
    index = {}
    rows = []

    def intern(name):
        if name not in index:
            index[name] = len(species)
            species.append(name)
        return index[name]

    def rate_value(token, line_no):
        token = token.strip()
        if "=" in token:
            token = token.split("=", 1)[1]
        try:
            return float(token)
        except ValueError:
            raise ParseError(line_no, f"bad rate constant {token!r}")

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(line_no, "missing rate separator ':'")
        rate_part, eq = line.split(":", 1)
        reversible = "<->" in eq
        arrow = "<->" if reversible else "->"
        if "->" not in eq:
            raise ParseError(line_no, "missing '->'")
        lhs, rhs = eq.split(arrow, 1)
        left = _parse_side(lhs, line_no)
        right = _parse_side(rhs, line_no)
        rates = [rate_value(t, line_no) for t in rate_part.split(",")]
        for name in list(left) + list(right):
            intern(name)
        rows.append((rates[0], left, right))
        if reversible:
            back = rates[1] if len(rates) > 1 else rates[0]
            rows.append((back, right, left))
    n = len(species)
    r = len(rows)
    alpha = np.zeros((r, n))
    beta = np.zeros((r, n))
    rates = []
    for j, (k, left, right) in enumerate(rows):
        rates.append(k)
        for name, c in left.items():
            alpha[j, index[name]] = c
        for name, c in right.items():
            beta[j, index[name]] = c
    return ReactionSystem(species, rates, alpha, beta)


def inference_diagram(sys: ReactionSystem) -> DiGraph:
    """Digraph with an edge i -> l when species l appears in species i's
    balance equation: some reaction j both changes i (gamma_ij != 0) and
    consumes l (alpha_jl > 0)."""
    gamma = sys.gamma
    n = sys.n_species
    pairs = set()
    for j in range(len(sys.rates)):
        touched = np.flatnonzero(gamma[:, j])
        inputs = np.flatnonzero(sys.alpha[j])
        for i in touched:
            for l in inputs:
                pairs.add((int(i), int(l)))
    return DiGraph.from_pairs(n, sorted(pairs), labels=list(sys.species))


def mass_action_rhs(sys: ReactionSystem):
    """Right-hand side of the mass-action balance equations."""
    gamma = sys.gamma
    rates = np.asarray(sys.rates, dtype=float)
    alpha = sys.alpha

    def rhs(_t, x):
        x = np.maximum(x, 0.0)
        flux = rates * np.prod(x[None, :] ** alpha, axis=1)
        return gamma @ flux

    return rhs


@dataclass
class SensorReport:
    root_sccs: list  # node lists of components with no incoming links
    sensors: list  # canonical choice: lowest-index node per root SCC
    n_sensors: int
    multiplicity: int  # number of minimum sensor sets (product of sizes)
    pure_products: list  # root SCCs of size one (always sensors)


def min_sensors(g: DiGraph) -> SensorReport:
    scc = scc_decompose(g)
    roots = [scc.components[c] for c in scc.root_components()]
    sensors = [min(comp) for comp in roots]
    mult = 1
    for comp in roots:
        mult *= len(comp)
    pure = [comp[0] for comp in roots if len(comp) == 1]
    return SensorReport(roots, sensors, len(roots), mult, pure)


def is_valid_sensor_set(g: DiGraph, sensors) -> bool:
    """A sensor set is sufficient at the graph level iff every node is
    reachable from some sensor (equivalently: it hits every root SCC)."""
    sensors = set(sensors)
    if not sensors and g.n_nodes:
        return False
    return len(reachable_from(g, sensors)) == g.n_nodes


def sensors_via_duality(g: DiGraph) -> DriverReport:
    """Structural sensor count = minimum drivers of the transpose."""
    return min_driver_set(transpose(g))


def target_sensor(g_inf: DiGraph, targets):
    """One sensor observing all target nodes at minimum cost.

    Candidates are non-target nodes with directed paths (in the inference
    diagram) to every target; the cost of a candidate is the total size
    of the SCCs reachable from it, and ties break to the lowest index.
    Returns (sensor, cost).
    """
    targets = set(targets)
    if not targets:
        raise ValueError("need at least one target")
    scc = scc_decompose(g_inf)
    sizes = [len(c) for c in scc.components]
    best = None
    for v in range(g_inf.n_nodes):
        if v in targets:
            continue
        reach = reachable_from(g_inf, [v])
        if not targets <= reach:
            continue
        cost = sum(sizes[c] for c in {scc.component_of[u] for u in reach})
        if best is None or cost < best[1]:
            best = (v, cost)
    if best is None:
        raise NoPathToTarget(f"no non-target node reaches all of {sorted(targets)}")
    return best


def mds_solve(g: UnGraph):
    """Dominating set via generalized leaf removal, completed greedily on
    the residual core.

    Reduction rules on the evolving graph (every node starts unobserved):
      - an isolated unobserved node is occupied;
      - the neighbor of an unobserved leaf is occupied (it covers at
        least as much); occupied nodes observe their neighborhood and
        are removed;
      - an observed node with at most one unobserved neighbor is removed:
        occupying it could cover only that neighbor, which any of the
        neighbor's dominators covers too.
    If the rules exhaust the graph the result is a minimum dominating set
    (exact = True); otherwise the remaining core is covered greedily.
    Returns (sorted node list, exact flag).
    """
    n = g.n_nodes
    adj = [set(a) for a in g.adj()]
    observed = [False] * n
    alive = [True] * n
    occupied = []

    def occupy(v):
        occupied.append(v)
        observed[v] = True
        for u in list(adj[v]):
            observed[u] = True
        remove(v)

    def remove(v):
        alive[v] = False
        for u in list(adj[v]):
            adj[u].discard(v)
        adj[v].clear()

    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not alive[v]:
                continue
            unobserved_nb = [u for u in adj[v] if not observed[u]]
            if not observed[v]:
                if not adj[v]:
                    occupy(v)
                    changed = True
                elif len(adj[v]) == 1:
                    occupy(next(iter(adj[v])))
                    changed = True
            elif len(unobserved_nb) <= 1:
                remove(v)
                changed = True
    exact = not any(alive)
    while not all(observed[v] or not alive[v] for v in range(n)) or any(
        alive[v] and not observed[v] for v in range(n)
    ):
        # greedy completion on the residual core: occupy the node covering
        # the most still-unobserved nodes
        best, gain = None, -1
        for v in range(n):
            if not alive[v]:
                continue
            cover = (0 if observed[v] else 1) + sum(
                1 for u in adj[v] if not observed[u]
            )
            if cover > gain:
                best, gain = v, cover
        if best is None or gain <= 0:
            break
        occupy(best)
    return sorted(occupied), exact


def is_dominating_set(g: UnGraph, nodes) -> bool:
    nodes = set(nodes)
    adj = g.adj()
    return all(v in nodes or any(u in nodes for u in adj[v])
               for v in range(g.n_nodes))


def observability_transition(
    g: UnGraph,
    phi: float,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Mean fraction of nodes in the largest connected observed component
    when floor(phi N) monitors are placed uniformly at random (a monitor
    observes itself and its neighbors)."""
    if not 0.0 <= phi <= 1.0:
        raise ValueError("phi must lie in [0, 1]")
    n = g.n_nodes
    k = int(phi * n)
    if g.edges:
        u, v = np.array(g.edges).T
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        adj = csr_matrix(
            (np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n)
        )
    else:
        adj = csr_matrix((n, n), dtype=np.int8)
    sizes = []
    for _ in range(trials):
        monitors = rng.choice(n, size=k, replace=False) if k else np.array([], int)
        mask = np.zeros(n, dtype=bool)
        mask[monitors] = True
        mask |= np.asarray(adj[monitors].sum(axis=0)).ravel() > 0
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            sizes.append(0)
            continue
        sub = adj[idx][:, idx]
        _, labels = connected_components(sub, directed=False)
        sizes.append(np.bincount(labels).max())
    return float(np.mean(sizes)) / n


def luenberger_observe(sys, l_gain, x0, z0, t_final: float, n_steps: int = 200):
    """Co-simulate plant and observer; the observer corrects its copy of
    the dynamics with the output mismatch.  Returns (t, ||x - z||)."""
    if sys.c is None:
        raise DimensionMismatch("system needs an output matrix C")
    a, c = sys.a, sys.c
    l_gain = np.atleast_2d(np.asarray(l_gain, dtype=float))
    n = sys.n
    if l_gain.shape != (n, c.shape[0]):
        raise DimensionMismatch("gain must map outputs to states")
    x0 = np.asarray(x0, dtype=float)
    z0 = np.asarray(z0, dtype=float)
    big = np.zeros((2 * n, 2 * n))
    big[:n, :n] = a
    big[n:, :n] = l_gain @ c
    big[n:, n:] = a - l_gain @ c
    t = np.linspace(0.0, t_final, n_steps + 1)
    step = expm(big * (t[1] - t[0])) if n_steps else np.eye(2 * n)
    state = np.concatenate([x0, z0])
    errs = [float(np.linalg.norm(x0 - z0))]
    for _ in range(n_steps):
        state = step @ state
        errs.append(float(np.linalg.norm(state[:n] - state[n:])))
    return t, np.array(errs)


# Eleven-species mass-action demo network: two reversible conversions,
# one condensation, and one synthesis reaction.  Its inference diagram
# has three root SCCs, of sizes 1, 2, and 3.
DEMO_REACTIONS = """\
1.0,0.5: x7 + x8 <-> x9
1.0,0.5: x4 <-> x5
1.0: x1 + x2 -> x6
1.0: x3 + x10 + x11 -> x1
"""
