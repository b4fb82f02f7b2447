"""Command-line front end: one subcommand per analysis, deterministic
seeding, and JSON/CSV reports."""

import argparse
import json
import os
import sys

import numpy as np

from . import cavity, collective, energy, exact, generators, observability, \
    steering, structural
from .errors import NetctlError
from .graphs import parse_edge_list, transpose

SCHEMA = "netctl/1"


def _default_seed():
    return int(os.environ.get("NETCTL_SEED", "0"))


def _read_digraph(path):
    with open(path) as fh:
        return parse_edge_list(fh.read(), directed=True)


def _read_ungraph(path):
    with open(path) as fh:
        return parse_edge_list(fh.read(), directed=False)


def _read_matrix(path):
    return np.loadtxt(path, ndmin=2)


def _read_vector(text):
    return np.array([float(v) for v in text.split(",")])


def _labels(g, nodes):
    return [g.labels[v] for v in nodes]


def _indices(g, text):
    lookup = {lab: i for i, lab in enumerate(g.labels)}
    out = []
    for token in text.split(","):
        token = token.strip()
        if token in lookup:
            out.append(lookup[token])
        else:
            out.append(int(token))
    return out


# ---------------------------------------------------------------------------
# Handlers (one per subcommand; each returns a JSON-ready payload)


def cmd_drivers(args):
    g = _read_digraph(args.input)
    rep = structural.min_driver_set(g)
    return {"n_drivers": rep.n_drivers, "n_d": rep.n_drivers / g.n_nodes,
            "drivers": _labels(g, rep.drivers)}


def cmd_check(args):
    g = _read_digraph(args.input)
    ok, witness = structural.structural_controllability_check(
        g, _indices(g, args.drivers))
    return {"controllable": ok, "witness": witness}


def cmd_classify_links(args):
    g = _read_digraph(args.input)
    cls = structural.classify_links(g)
    return dict(cls.fractions)


def cmd_classify_nodes(args):
    g = _read_digraph(args.input)
    cls = structural.classify_nodes_deletion(g) if args.deletion \
        else structural.classify_nodes(g)
    return dict(cls.fractions)


def cmd_profile(args):
    g = _read_digraph(args.input)
    p = structural.control_profile(g)
    eta_s, eta_e, eta_i = p.eta
    return {"eta_source": eta_s, "eta_external": eta_e,
            "eta_internal": eta_i}


def cmd_centrality(args):
    g = _read_digraph(args.input)
    nodes = _indices(g, args.nodes)
    return {"nodes": _labels(g, nodes),
            "control_centrality": structural.control_centrality(g, nodes)}


def cmd_actuators(args):
    g = _read_digraph(args.input)
    rep = structural.min_actuators(g)
    return {"n_drivers": rep.n_drivers, "beta": rep.beta, "alpha": rep.alpha,
            "n_actuators": rep.n_actuators,
            "actuators": _labels(g, rep.actuators)}


def cmd_switchboard(args):
    g = _read_digraph(args.input)
    drivers = structural.switchboard_drivers(g)
    return {"n_drivers": len(drivers), "drivers": _labels(g, drivers)}


def cmd_cavity(args):
    if args.dist == "er":
        n_d, _ = cavity.solve_cavity_er(args.kmean)
    else:
        n_d, _ = cavity.solve_cavity_sf(args.kmean, args.gamma)
    return {"dist": args.dist, "kmean": args.kmean, "n_d": n_d}


def cmd_exact_nd(args):
    a = _read_matrix(args.a)
    n_d, lam, drivers = exact.pbh_min_drivers(a)
    return {"n_drivers": n_d, "eigenvalue": complex(lam).real,
            "drivers": [int(v) for v in drivers]}


def cmd_energy(args):
    sys_ = exact.DenseSystem(_read_matrix(args.a), _read_matrix(args.b))
    if args.x0 is not None and args.xf is not None:
        trace = energy.min_energy_input(sys_, _read_vector(args.x0),
                                        _read_vector(args.xf), args.t)
        return {"t_final": args.t, "energy": trace.energy}
    e_min, e_max = energy.energy_bounds(sys_, args.t)
    return {"t_final": args.t, "e_min": e_min, "e_max": e_max}


def cmd_spectrum(args):
    sys_ = exact.DenseSystem(_read_matrix(args.a), _read_matrix(args.b))
    energies, _ = energy.energy_spectrum(sys_, args.t)
    return {"t_final": args.t,
            "rows": [{"index": i, "energy": float(e)}
                     for i, e in enumerate(energies)]}


def cmd_sensors(args):
    with open(args.reactions) as fh:
        rs = observability.parse_reactions(fh.read())
    g = observability.inference_diagram(rs)
    rep = observability.min_sensors(g)
    return {"n_sensors": rep.n_sensors,
            "sensors": _labels(g, rep.sensors),
            "multiplicity": rep.multiplicity,
            "root_scc_sizes": sorted(len(c) for c in rep.root_sccs)}


def cmd_target_sensor(args):
    with open(args.reactions) as fh:
        rs = observability.parse_reactions(fh.read())
    g = observability.inference_diagram(rs)
    sensor, cost = observability.target_sensor(g, _indices(g, args.targets))
    return {"sensor": g.labels[sensor], "cost": cost}


def cmd_mds(args):
    g = _read_ungraph(args.input)
    nodes, exact_flag = observability.mds_solve(g)
    return {"size": len(nodes), "nodes": _labels(g, nodes),
            "exact": exact_flag}


def cmd_obs_transition(args):
    g = _read_ungraph(args.input)
    rng = np.random.default_rng(args.seed)
    frac = observability.observability_transition(g, args.phi, args.trials,
                                                  rng)
    return {"phi": args.phi, "observed_fraction": frac}


def cmd_observer(args):
    sys_ = exact.DenseSystem(_read_matrix(args.a),
                             np.zeros((_read_matrix(args.a).shape[0], 1)),
                             _read_matrix(args.c))
    t, err = observability.luenberger_observe(
        sys_, _read_matrix(args.l), _read_vector(args.x0),
        _read_vector(args.z0), args.t)
    return {"t_final": args.t, "final_error": float(err[-1]),
            "rows": [{"t": float(tv), "error": float(ev)}
                     for tv, ev in zip(t[::10], err[::10])]}


def cmd_hubler(args):
    a = _read_matrix(args.a)
    sys_ = steering.OdeSystem(n=a.shape[0],
                              f=lambda t, x, u: a @ np.asarray(x) + u)
    goal = lambda t: args.amp * np.sin(args.freq * t) * np.ones(a.shape[0])
    goal_dot = lambda t: args.amp * args.freq * np.cos(args.freq * t) \
        * np.ones(a.shape[0])
    trace = steering.hubler_input(sys_, np.eye(a.shape[0]), goal, goal_dot,
                                  args.t, x0=_read_vector(args.x0)
                                  if args.x0 else None)
    err = max(np.linalg.norm(trace.x[i] - goal(tv))
              for i, tv in enumerate(trace.t))
    return {"t_final": args.t, "max_tracking_error": float(err)}


def cmd_ogy(args):
    hp = steering.HenonParams(delta=args.delta)
    trace = steering.ogy_stabilize_henon(hp, n_steps=args.steps,
                                         seed=args.seed)
    x_star = steering.henon_fixed_point(hp.p, hp.b)
    tail = trace.x[trace.capture_step:]
    return {"capture_step": trace.capture_step, "x_star": x_star,
            "post_capture_deviation": float(
                np.abs(tail[:, 0] - x_star).max())}


def cmd_pyragas(args):
    sys_ = steering.make_system("rossler")
    trace = steering.pyragas_feedback(sys_, 1, [0.0, -args.k, 0.0],
                                      args.tau, args.t, [1.0, 1.0, 0.0])
    return {"k": args.k, "tau": args.tau, "mismatch": trace.mismatch}


def cmd_compensate(args):
    sys_ = steering.make_system(args.system)
    bounds = None
    if args.lo is not None and args.hi is not None:
        bounds = (_read_vector(args.lo), _read_vector(args.hi))
    x0p, iters = steering.compensatory_perturbation(
        sys_, _read_vector(args.x0), _read_vector(args.target),
        bounds=bounds, budget=args.budget)
    return {"x0_new": [float(v) for v in x0p], "iterations": iters}


def cmd_fvs(args):
    g = _read_digraph(args.input)
    res = steering.fvs_find(g, args.mode)
    return {"size": len(res.nodes), "nodes": _labels(g, res.nodes),
            "exact": res.exact}


def cmd_clamp(args):
    sys_ = steering.make_system("bistable-gene")
    s1, s3 = steering.gene_toggle_attractors()
    times = np.linspace(0.0, args.t, int(20 * args.t) + 1)
    samples = np.tile(s3, (len(times), 1))
    trace = steering.fvs_clamp(sys_, [0], times, samples)
    return {"t_final": args.t,
            "terminal_distance": trace.terminal_distance}


def cmd_msf(args):
    g = _read_ungraph(args.input)
    lam2, lam_n, r = collective.msf_eigenratio(g)
    return {"lambda2": lam2, "lambda_n": lam_n, "eigenratio": r}


def cmd_pinning(args):
    g = _read_ungraph(args.input)
    lap = collective.laplacian_matrix(g)
    n = g.n_nodes
    k = max(1, int(args.fraction * n))
    if args.strategy == "degree":
        deg = np.diag(lap)
        pinned = list(np.argsort(-deg)[:k])
    else:
        rng = np.random.default_rng(args.seed)
        pinned = list(rng.choice(n, k, replace=False))
    cfg = collective.PinningConfig(args.sigma, args.kappa, pinned, lap)
    lam2, lam_top, r = collective.pinning_eigenratio(cfg)
    return {"lambda2": lam2, "lambda_top": lam_top, "eigenratio": r,
            "pinned": sorted(int(v) for v in pinned)}


def cmd_pinning_sim(args):
    osc = steering.make_system("rossler")
    g = collective.laplacian_matrix(
        collective.UnGraph(args.nodes, [(i, (i + 1) % args.nodes)
                                        for i in range(args.nodes)]))
    cfg = collective.PinningConfig(args.sigma, args.kappa,
                                   list(range(args.nodes)), g)
    rng = np.random.default_rng(args.seed)
    x0 = np.array([1.0, 1.0, 0.0]) + 0.2 * rng.normal(size=(args.nodes, 3))
    trace = collective.pinning_sync_simulate(
        cfg, osc, np.eye(3), x0, [1.0, 1.0, 0.0], args.t,
        adaptive=args.adaptive, q=args.q)
    return {"final_error": float(trace.error[-1]),
            "max_gain": float(trace.kappas.max())}


def _vicsek_one(params):
    n, l, v0, r, eta, steps, seed = params
    res = collective.vicsek_order_parameter(n, l, v0, r, eta, steps, seed)
    return {"seed": seed, "phi_mean": res.mean, "phi_stderr": res.stderr}


def cmd_vicsek(args):
    jobs = [(args.n, args.l, args.v0, args.r, args.eta, args.steps, s)
            for s in range(args.seed, args.seed + args.seeds)]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_vicsek_one, jobs))
    else:
        rows = [_vicsek_one(p) for p in jobs]
    means = [row["phi_mean"] for row in rows]
    return {"phi_mean": float(np.mean(means)),
            "phi_stderr": float(np.std(means, ddof=1) / np.sqrt(len(means)))
            if len(means) > 1 else 0.0,
            "rows": rows}


def cmd_vicsek_leader(args):
    dev = collective.vicsek_leader_run(args.n, args.l, args.v0, args.r,
                                       theta0=args.theta0, steps=args.steps,
                                       seed=args.seed, eta=args.eta)
    return {"final_deviation": float(dev[-1]),
            "steps": args.steps}


DISPATCH = {
    "drivers": cmd_drivers,
    "check": cmd_check,
    "classify-links": cmd_classify_links,
    "classify-nodes": cmd_classify_nodes,
    "profile": cmd_profile,
    "centrality": cmd_centrality,
    "actuators": cmd_actuators,
    "switchboard": cmd_switchboard,
    "cavity": cmd_cavity,
    "exact-nd": cmd_exact_nd,
    "energy": cmd_energy,
    "spectrum": cmd_spectrum,
    "sensors": cmd_sensors,
    "target-sensor": cmd_target_sensor,
    "mds": cmd_mds,
    "obs-transition": cmd_obs_transition,
    "observer": cmd_observer,
    "hubler": cmd_hubler,
    "ogy": cmd_ogy,
    "pyragas": cmd_pyragas,
    "compensate": cmd_compensate,
    "fvs": cmd_fvs,
    "clamp": cmd_clamp,
    "msf": cmd_msf,
    "pinning": cmd_pinning,
    "pinning-sim": cmd_pinning_sim,
    "vicsek": cmd_vicsek,
    "vicsek-leader": cmd_vicsek_leader,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netctl",
        description="Network controllability and observability toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None)
        p.add_argument("--jobs", type=int, default=1)
        return p

    for name in ("drivers", "classify-links", "profile", "actuators",
                 "switchboard"):
        add(name).add_argument("--input", required=True)

    p = add("check")
    p.add_argument("--input", required=True)
    p.add_argument("--drivers", required=True)

    p = add("classify-nodes")
    p.add_argument("--input", required=True)
    p.add_argument("--deletion", action="store_true")

    p = add("centrality")
    p.add_argument("--input", required=True)
    p.add_argument("--nodes", required=True)

    p = add("cavity")
    p.add_argument("--dist", choices=("er", "sf-static"), required=True)
    p.add_argument("--kmean", type=float, required=True)
    p.add_argument("--gamma", type=float, default=3.0)

    add("exact-nd").add_argument("--a", required=True)

    p = add("energy")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x0")
    p.add_argument("--xf")

    p = add("spectrum")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--t", type=float, required=True)

    add("sensors").add_argument("--reactions", required=True)

    p = add("target-sensor")
    p.add_argument("--reactions", required=True)
    p.add_argument("--targets", required=True)

    add("mds").add_argument("--input", required=True)

    p = add("obs-transition")
    p.add_argument("--input", required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--trials", type=int, default=10)

    p = add("observer")
    p.add_argument("--a", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--l", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--z0", required=True)
    p.add_argument("--t", type=float, required=True)

    p = add("hubler")
    p.add_argument("--a", required=True)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--amp", type=float, default=1.0)
    p.add_argument("--freq", type=float, default=1.0)
    p.add_argument("--x0")

    p = add("ogy")
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--steps", type=int, default=2000)

    p = add("pyragas")
    p.add_argument("--k", type=float, default=0.2)
    p.add_argument("--tau", type=float, default=5.88)
    p.add_argument("--t", type=float, default=200.0)

    p = add("compensate")
    p.add_argument("--system", default="double-well")
    p.add_argument("--x0", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--lo")
    p.add_argument("--hi")
    p.add_argument("--budget", type=int, default=20)

    p = add("fvs")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("exact", "heuristic"),
                   default="heuristic")

    add("clamp").add_argument("--t", type=float, default=25.0)

    add("msf").add_argument("--input", required=True)

    p = add("pinning")
    p.add_argument("--input", required=True)
    p.add_argument("--fraction", type=float, default=0.1)
    p.add_argument("--kappa", type=float, default=5.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--strategy", choices=("random", "degree"),
                   default="random")

    p = add("pinning-sim")
    p.add_argument("--nodes", type=int, default=10)
    p.add_argument("--kappa", type=float, default=0.1)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--t", type=float, default=60.0)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--q", type=float, default=1.0)

    p = add("vicsek")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--l", type=float, default=5.0)
    p.add_argument("--v0", type=float, default=0.03)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--seeds", type=int, default=1)

    p = add("vicsek-leader")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--l", type=float, default=1.0)
    p.add_argument("--v0", type=float, default=0.03)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--theta0", type=float, default=0.7)
    p.add_argument("--steps", type=int, default=500)

    return parser


def _render(payload, fmt, command):
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": command}
        doc.update(payload)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    rows = payload.pop("rows", None)
    lines = []
    if payload:
        keys = sorted(payload)
        lines.append(",".join(keys))
        lines.append(",".join(str(payload[k]) for k in keys))
    if rows:
        keys = list(rows[0])
        lines.append(",".join(keys))
        for row in rows:
            lines.append(",".join(str(row[k]) for k in keys))
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = DISPATCH[args.command](args)
    except NetctlError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = _render(payload, args.format, args.command)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
