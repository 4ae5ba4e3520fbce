"""Command-line front door: identity corpora, LDC sweeps, decay, zero scans.

Every randomized command derives its whole corpus from --seed, and report
files are byte-identical across runs with the same configuration. Exit
codes: 0 when every contract assertion passed, 1 on a contract failure
(the first failing instance is dumped as JSON for `replay`), 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import corpus
from .errors import ZeroPartitionError
from .graphs import (Graph, MINUS, PLUS, Pinning, build_saw_tree,
                     is_proper, parse_graph, parse_pinning)
from .identities import cd_equivalent_forms, cd_sides, gutman_sides, qspin_det_sides
from .mixing import (decay_profile, ldc_report, ldc_report_beta, marginal,
                     path_decay_instances, verify_saw_marginal,
                     weitz_approx_marginal)
from .numerics import ExactComplex, ONE, parse_scalar
from .partition import Params, QSpinParams
from .zerofree import lambda_root_scan, pinned_annulus_check, region_min_modulus

COMMANDS = ("cd-check", "gutman-check", "qspin-check", "saw-check", "ldc",
            "ldc-beta", "decay", "roots", "annulus", "region", "weitz")


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    trials: int = 100
    max_vertices: int | None = None
    graph_path: str | None = None
    pins_path: str | None = None
    beta: ExactComplex | None = None
    gamma: ExactComplex | None = None
    lam: ExactComplex | None = None
    q: int = 2
    depth: int | None = None
    kmax: int = 10
    kmin: int = 1
    mode: str = "ssm"
    center: ExactComplex | None = None
    ising: bool = False
    out: str | None = None
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Serialization helpers (also the replay wire format)
# ---------------------------------------------------------------------------


def _pins_to_json(p: Pinning) -> dict:
    return {"pins": {str(v): s for v, s in p.items()}}


def _pins_from_json(doc: dict) -> Pinning:
    pins = {}
    for k, s in doc.get("pins", {}).items():
        pins[int(k)] = s if isinstance(s, str) else int(s)
    return Pinning.of(pins)


def _graph_from_json(doc: dict) -> Graph:
    return parse_graph(doc)


def _scalar_json(x: ExactComplex) -> dict:
    return x.to_json()


def _fmt_exact(x: ExactComplex) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# Single-instance evaluators (shared by corpus runs and replay)
# ---------------------------------------------------------------------------


def eval_cd(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    p = _pins_from_json(inst["pins"])
    params = Params.from_json(inst["params"])
    rep = cd_sides(g, p, inst["u"], inst["v"], params)
    forms_ok = cd_equivalent_forms(g, p, inst["u"], inst["v"], params)
    ok = rep.equal and forms_ok
    row = {"n": g.n, "u": inst["u"], "v": inst["v"], "distance": rep.distance,
           "path_hits_pinning": rep.path_hits_pinning,
           "lhs": _fmt_exact(rep.lhs), "rhs": _fmt_exact(rep.rhs),
           "equal": rep.equal, "equivalent_forms": forms_ok, "pass": ok}
    return ok, row


def eval_gutman(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    lam = ExactComplex.from_json(inst["lambda"])
    rep = gutman_sides(g, inst["u"], inst["v"], lam)
    row = {"n": g.n, "u": inst["u"], "v": inst["v"], "distance": rep.distance,
           "lhs": _fmt_exact(rep.lhs), "rhs": _fmt_exact(rep.rhs),
           "equal": rep.equal, "pass": rep.equal}
    return rep.equal, row


def eval_qspin(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    p = _pins_from_json(inst["pins"])
    qp = QSpinParams.from_json(inst["qparams"])
    rep = qspin_det_sides(g, p, inst["u"], inst["v"], qp)
    row = {"n": g.n, "q": qp.q, "u": inst["u"], "v": inst["v"],
           "distance": rep.distance, "path_hits_pinning": rep.path_hits_pinning,
           "lhs": _fmt_exact(rep.lhs), "rhs": _fmt_exact(rep.rhs),
           "equal": rep.equal, "pass": rep.equal}
    return rep.equal, row


def eval_saw(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    p = _pins_from_json(inst["pins"])
    params = Params.from_json(inst["params"])
    v = inst["v"]
    equal = verify_saw_marginal(g, p, v, params)
    bare = build_saw_tree(g, v, Pinning())
    degree_ok = bare.tree.max_degree() == g.max_degree()
    dist_g = g.distances_from(v)
    dist_t = bare.tree.distances_from(bare.root)
    distances_ok = True
    for w in range(g.n):
        copies = bare.copies_of(w)
        d_t = min((dist_t[x] for x in copies), default=math.inf)
        if d_t != dist_g[w]:
            distances_ok = False
            break
    ok = equal and degree_ok and distances_ok
    row = {"n": g.n, "v": v, "marginal_equal": equal, "degree_ok": degree_ok,
           "distances_ok": distances_ok, "pass": ok}
    return ok, row


def eval_ldc(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    a = _pins_from_json(inst["pins_a"])
    b = _pins_from_json(inst["pins_b"])
    beta = ExactComplex.from_json(inst["beta"])
    gamma = ExactComplex.from_json(inst["gamma"])
    rep = ldc_report(g, a, b, inst["v"], beta, gamma, inst.get("order"))
    row = {"n": g.n, "v": inst["v"],
           "distance": "inf" if rep.distance == math.inf else rep.distance,
           "first_difference": rep.first_difference, "order": rep.order,
           "satisfied": rep.satisfied, "pass": rep.satisfied}
    return rep.satisfied, row


def eval_ldc_beta(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    a = _pins_from_json(inst["pins_a"])
    b = _pins_from_json(inst["pins_b"])
    gamma = None if inst["gamma"] is None else ExactComplex.from_json(inst["gamma"])
    lam = ExactComplex.from_json(inst["lambda"])
    center = ExactComplex.from_json(inst["center"])
    rep = ldc_report_beta(g, a, b, inst["v"], gamma, lam, center, inst.get("order"))
    row = {"n": g.n, "v": inst["v"],
           "distance": "inf" if rep.distance == math.inf else rep.distance,
           "first_difference": rep.first_difference, "order": rep.order,
           "satisfied": rep.satisfied, "pass": rep.satisfied}
    return rep.satisfied, row


def eval_weitz(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    p = _pins_from_json(inst["pins"])
    params = Params.from_json(inst["params"])
    v, depth = inst["v"], inst["depth"]
    value, exact = weitz_approx_marginal(g, v, p, params, depth)
    ok = True
    matches = None
    if depth >= g.n:
        truth = marginal(g, p, v, params)
        matches = value == truth
        ok = exact and matches
    row = {"n": g.n, "v": v, "depth": depth, "value": _fmt_exact(value),
           "exact": exact, "matches_marginal": matches, "pass": ok}
    return ok, row


def eval_annulus(inst: dict) -> tuple[bool, dict]:
    g = _graph_from_json(inst["graph"])
    p = _pins_from_json(inst["pins"])
    beta = ExactComplex.from_json(inst["beta"])
    rep = pinned_annulus_check(g, p, beta, inst.get("degree_bound"))
    ok = rep.annulus_violations == 0 and (rep.cross_check_mismatch or 0.0) < 1e-9
    row = {"n": g.n, "degree_bound": inst.get("degree_bound"),
           "violations": rep.annulus_violations,
           "cross_check_mismatch": rep.cross_check_mismatch,
           "min_modulus": rep.min_modulus, "max_modulus": rep.max_modulus,
           "pass": ok}
    return ok, row


EVALUATORS = {
    "cd-check": eval_cd,
    "gutman-check": eval_gutman,
    "qspin-check": eval_qspin,
    "saw-check": eval_saw,
    "ldc": eval_ldc,
    "ldc-beta": eval_ldc_beta,
    "weitz": eval_weitz,
    "annulus": eval_annulus,
}


# ---------------------------------------------------------------------------
# Corpus generators per command
# ---------------------------------------------------------------------------


def _gen_cd(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    n = rng.randint(2, cfg.max_vertices or 14)
    t = corpus.rand_tree(rng, n)
    mode = corpus.PARAM_MODES[trial % len(corpus.PARAM_MODES)]
    params = corpus.rand_params(rng, mode, n)
    u, v = corpus.rand_unpinned_pair(rng, t, Pinning())
    pins = corpus.rand_feasible_pinning(rng, t, params.beta_is_zero,
                                        params.gamma_is_zero, exclude=(u, v))
    return {"graph": t.to_json(), "pins": _pins_to_json(pins),
            "params": params.to_json(), "u": u, "v": v, "mode": mode}


def _gen_gutman(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    n = rng.randint(2, cfg.max_vertices or 12)
    t = corpus.rand_tree(rng, n)
    u, v = rng.sample(range(n), 2)
    lam = corpus.rand_scalar(rng, nonzero=True, complex_prob=0.25)
    return {"graph": t.to_json(), "u": u, "v": v, "lambda": lam.to_json()}


def _gen_qspin(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    n = rng.randint(2, cfg.max_vertices or 8)
    t = corpus.rand_tree(rng, n)
    q = cfg.q if cfg.q else (2 if trial % 2 == 0 else 3)
    qp = corpus.rand_qspin_params(rng, q)
    u, v = rng.sample(range(n), 2)
    pins = corpus.rand_qspin_pinning(rng, t, q, exclude=(u, v))
    return {"graph": t.to_json(), "pins": _pins_to_json(pins),
            "qparams": qp.to_json(), "u": u, "v": v}


def _gen_saw(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    while True:
        n = rng.randint(2, cfg.max_vertices or 9)
        g = corpus.rand_connected_graph(rng, n)
        mode = ("generic", "beta0", "gamma0", "complex", "fields")[trial % 5]
        params = corpus.rand_params(rng, mode, n)
        pins = corpus.rand_feasible_pinning(rng, g, params.beta_is_zero,
                                            params.gamma_is_zero)
        proper = [v for v in range(n)
                  if is_proper(g, pins, v, params.beta_is_zero, params.gamma_is_zero)]
        if not proper:
            continue
        v = rng.choice(proper)
        try:
            marginal(g, pins, v, params)
        except ZeroPartitionError:
            continue
        try:
            from .mixing import saw_tree_marginal
            saw_tree_marginal(g, pins, v, params)
        except ZeroPartitionError:
            continue
        return {"graph": g.to_json(), "pins": _pins_to_json(pins),
                "params": params.to_json(), "v": v, "mode": mode}


def _gen_ldc(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    n = rng.randint(2, cfg.max_vertices or 8)
    g = corpus.rand_connected_graph(rng, n)
    beta = corpus.rand_scalar(rng, complex_prob=0.2)
    if trial % 4 == 0:
        beta = ExactComplex(0)
    gamma = corpus.rand_scalar(rng, nonzero=True, complex_prob=0.2)
    bz = beta.is_zero()
    v = rng.randrange(n)
    a, b = corpus.rand_pinning_pair(rng, g, bz, False, exclude=(v,))
    return {"graph": g.to_json(), "pins_a": _pins_to_json(a),
            "pins_b": _pins_to_json(b), "beta": beta.to_json(),
            "gamma": gamma.to_json(), "v": v}


def _gen_ldc_beta(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    while True:
        n = rng.randint(2, cfg.max_vertices or 7)
        g = corpus.rand_connected_graph(rng, n)
        gamma = corpus.rand_scalar(rng, nonzero=True, complex_prob=0.2)
        lam = corpus.rand_scalar(rng, nonzero=True, complex_prob=0.2)
        center = ONE / gamma
        v = rng.randrange(n)
        a, b = corpus.rand_pinning_pair(rng, g, False, False, exclude=(v,))
        inst = {"graph": g.to_json(), "pins_a": _pins_to_json(a),
                "pins_b": _pins_to_json(b), "gamma": gamma.to_json(),
                "lambda": lam.to_json(), "center": center.to_json(), "v": v}
        try:
            eval_ldc_beta(inst)
        except ZeroPartitionError:
            continue
        return inst


def _gen_weitz(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    while True:
        n = rng.randint(2, cfg.max_vertices or 9)
        g = corpus.rand_connected_graph(rng, n)
        mode = ("generic", "beta0", "complex")[trial % 3]
        params = corpus.rand_params(rng, mode, n)
        pins = corpus.rand_feasible_pinning(rng, g, params.beta_is_zero,
                                            params.gamma_is_zero)
        proper = [v for v in range(n)
                  if is_proper(g, pins, v, params.beta_is_zero, params.gamma_is_zero)]
        if not proper:
            continue
        v = rng.choice(proper)
        depth = cfg.depth if cfg.depth is not None else n
        inst = {"graph": g.to_json(), "pins": _pins_to_json(pins),
                "params": params.to_json(), "v": v, "depth": depth}
        try:
            eval_weitz(inst)
        except ZeroPartitionError:
            continue
        return inst


def _gen_annulus(cfg: RunConfig, rng: random.Random, trial: int) -> dict:
    dmax = cfg.extra.get("degree_bound", 3)
    n = rng.randint(2, cfg.max_vertices or 8)
    g = corpus.rand_bounded_degree_graph(rng, n, dmax)
    beta = cfg.beta if cfg.beta is not None else ExactComplex(Fraction(3, 2))
    # keep one vertex unpinned so the field polynomial has degree >= 1
    free = rng.randrange(n)
    pins = corpus.rand_feasible_pinning(rng, g, False, False, exclude=(free,))
    return {"graph": g.to_json(), "pins": _pins_to_json(pins),
            "beta": beta.to_json(), "degree_bound": dmax}


GENERATORS = {
    "cd-check": _gen_cd,
    "gutman-check": _gen_gutman,
    "qspin-check": _gen_qspin,
    "saw-check": _gen_saw,
    "ldc": _gen_ldc,
    "ldc-beta": _gen_ldc_beta,
    "weitz": _gen_weitz,
    "annulus": _gen_annulus,
}


# ---------------------------------------------------------------------------
# Report writing
# ---------------------------------------------------------------------------


def _write_rows(path: str, rows: list[dict], fmt: str):
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        p.write_text(json.dumps(rows, sort_keys=True, indent=1) + "\n")
        return
    keys: list[str] = []
    for row in rows:
        for k in row:
            if k not in keys:
                keys.append(k)
    lines = [",".join(keys)]
    for row in rows:
        cells = []
        for k in keys:
            val = row.get(k, "")
            if isinstance(val, float):
                val = repr(val)
            elif val is None:
                val = ""
            cells.append(str(val))
        lines.append(",".join(cells))
    p.write_text("\n".join(lines) + "\n")


def _dump_failure(cfg: RunConfig, trial: int, inst: dict, row: dict) -> str:
    name = f"{cfg.command}_failure.json"
    base = Path(cfg.out).parent if cfg.out else Path(".")
    path = base / name
    doc = {"command": cfg.command, "seed": cfg.seed, "trial": trial,
           "instance": inst, "row": row}
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return str(path)


# ---------------------------------------------------------------------------
# Command drivers
# ---------------------------------------------------------------------------


def _run_corpus_command(cfg: RunConfig) -> int:
    rng = random.Random(cfg.seed)
    gen = GENERATORS[cfg.command]
    evaluate = EVALUATORS[cfg.command]
    rows = []
    passes = fails = 0
    first_failure = None
    for trial in range(cfg.trials):
        inst = gen(cfg, rng, trial)
        ok, row = evaluate(inst)
        row = {"trial": trial, **row}
        rows.append(row)
        if ok:
            passes += 1
        else:
            fails += 1
            if first_failure is None:
                first_failure = (trial, inst, row)
    if cfg.out:
        _write_rows(cfg.out, rows, cfg.fmt)
    if first_failure is not None:
        where = _dump_failure(cfg, *first_failure)
        print(f"first failing instance dumped to {where}", file=sys.stderr)
    print(f"{cfg.command} pass={passes} fail={fails} seed={cfg.seed}")
    return 0 if fails == 0 else 1


def _run_single_file_command(cfg: RunConfig) -> int:
    """Commands driven by an explicit --graph file instead of a seeded corpus."""
    g = parse_graph(Path(cfg.graph_path).read_text())
    pins = Pinning()
    if cfg.pins_path:
        pins = parse_pinning(Path(cfg.pins_path).read_text())

    if cfg.command == "roots":
        rep = lambda_root_scan(g, pins, cfg.beta, cfg.gamma if cfg.gamma is not None else cfg.beta)
        doc = rep.to_json()
        if cfg.out:
            if cfg.fmt == "json":
                Path(cfg.out).write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
            else:
                rows = [{"re": r.real, "im": r.imag, "modulus": abs(r)} for r in rep.roots]
                _write_rows(cfg.out, rows, "csv")
        else:
            print(json.dumps(doc, sort_keys=True, indent=1))
        print(f"{cfg.command} pass=1 fail=0 seed={cfg.seed}")
        return 0

    if cfg.command == "annulus":
        inst = {"graph": g.to_json(), "pins": _pins_to_json(pins),
                "beta": ExactComplex._coerce(cfg.beta).to_json(),
                "degree_bound": cfg.extra.get("degree_bound")}
        ok, row = eval_annulus(inst)
        if cfg.out:
            _write_rows(cfg.out, [row], cfg.fmt)
        if not ok:
            _dump_failure(cfg, 0, inst, row)
        print(f"{cfg.command} pass={int(ok)} fail={int(not ok)} seed={cfg.seed}")
        return 0 if ok else 1

    if cfg.command == "ldc":
        beta = cfg.beta if cfg.beta is not None else ExactComplex(0)
        gamma = cfg.gamma if cfg.gamma is not None else ExactComplex(1)
        rows = []
        fails = 0
        first_failure = None
        for v in range(g.n):
            for u in range(g.n):
                if u == v or u in pins or v in pins:
                    continue
                for spin in (PLUS, MINUS):
                    inst = {"graph": g.to_json(), "pins_a": _pins_to_json(pins),
                            "pins_b": _pins_to_json(pins.with_pin(u, spin)),
                            "beta": ExactComplex._coerce(beta).to_json(),
                            "gamma": ExactComplex._coerce(gamma).to_json(), "v": v}
                    ok, row = eval_ldc(inst)
                    row = {"v": v, "u": u, "pin": spin, **row}
                    rows.append(row)
                    if not ok:
                        fails += 1
                        if first_failure is None:
                            first_failure = (0, inst, row)
        if cfg.out:
            _write_rows(cfg.out, rows, cfg.fmt)
        else:
            for row in rows:
                print(json.dumps(row, sort_keys=True))
        if first_failure is not None:
            _dump_failure(cfg, *first_failure)
        print(f"{cfg.command} pass={len(rows) - fails} fail={fails} seed={cfg.seed}")
        return 0 if fails == 0 else 1

    if cfg.command == "weitz":
        depth = cfg.depth if cfg.depth is not None else g.n
        params = _params_from_cfg(cfg, g)
        inst = {"graph": g.to_json(), "pins": _pins_to_json(pins),
                "params": params.to_json(), "v": cfg.extra.get("vertex", 0),
                "depth": depth}
        ok, row = eval_weitz(inst)
        if cfg.out:
            _write_rows(cfg.out, [row], cfg.fmt)
        else:
            print(json.dumps(row, sort_keys=True))
        print(f"{cfg.command} pass={int(ok)} fail={int(not ok)} seed={cfg.seed}")
        return 0 if ok else 1

    raise ValueError(f"command {cfg.command} needs a seeded corpus")


def _params_from_cfg(cfg: RunConfig, g: Graph) -> Params:
    beta = cfg.beta if cfg.beta is not None else ExactComplex(0)
    gamma = cfg.gamma if cfg.gamma is not None else ExactComplex(1)
    if g.fields is not None:
        if cfg.lam is not None:
            raise ValueError("--lambda conflicts with per-vertex fields in the graph file")
        return Params(beta, gamma, g.fields)
    lam = cfg.lam if cfg.lam is not None else ExactComplex(1)
    return Params(beta, gamma, lam)


def _run_decay(cfg: RunConfig) -> int:
    beta = cfg.beta if cfg.beta is not None else ExactComplex(0)
    gamma = cfg.gamma if cfg.gamma is not None else ExactComplex(1)
    lam = cfg.lam if cfg.lam is not None else ExactComplex(1)
    params = Params(beta, gamma, lam)
    kmin = cfg.kmin
    if params.beta_is_zero and cfg.mode in ("ssm", "psm") and kmin < 2:
        kmin = 2
    prof = decay_profile(path_decay_instances(cfg.kmax, cfg.mode, kmin), params)
    if cfg.out:
        rows = [{"k": r.k, "gap": r.gap,
                 "log_gap": r.log_gap if r.log_gap is not None else None}
                for r in prof.rows]
        _write_rows(cfg.out, rows, cfg.fmt)
        Path(str(cfg.out) + ".json").write_text(
            json.dumps(prof.sidecar(), sort_keys=True, indent=1) + "\n")
    else:
        for r in prof.rows:
            print(json.dumps({"k": r.k, "gap": r.gap, "log_gap": r.log_gap}))
        print(json.dumps(prof.sidecar(), sort_keys=True))
    print(f"decay pass={len(prof.rows)} fail=0 seed={cfg.seed}")
    return 0


def _run_region(cfg: RunConfig) -> int:
    max_n = cfg.max_vertices or 10
    instances = []
    for n in range(2, max_n + 1):
        g = Graph(n, tuple((i, i + 1) for i in range(n - 1)))
        instances.append((g, Pinning()))
    beta = cfg.beta if cfg.beta is not None else ExactComplex(0)
    gamma = cfg.gamma if cfg.gamma is not None else ExactComplex(1)
    side = cfg.extra.get("grid", 9)
    span = cfg.extra.get("span", 0.4)
    grid = []
    for i in range(side):
        for j in range(side):
            re = -span + 2 * span * i / (side - 1) if side > 1 else 0.0
            im = -span + 2 * span * j / (side - 1) if side > 1 else 0.0
            grid.append(complex(re, im))
    table = region_min_modulus(instances, beta, gamma, grid)
    rows = [{"re": lam.real, "im": lam.imag, "min_modulus": m} for lam, m in table]
    if cfg.out:
        _write_rows(cfg.out, rows, cfg.fmt)
    else:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    print(f"region pass={len(rows)} fail=0 seed={cfg.seed}")
    return 0


def run(cfg: RunConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    try:
        if cfg.command == "decay":
            return _run_decay(cfg)
        if cfg.command == "region":
            return _run_region(cfg)
        if cfg.command == "roots":
            if not cfg.graph_path:
                raise ValueError("roots needs --graph")
            return _run_single_file_command(cfg)
        if cfg.graph_path:
            return _run_single_file_command(cfg)
        if cfg.command in GENERATORS:
            return _run_corpus_command(cfg)
        raise ValueError(f"unknown command {cfg.command!r}")
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


def replay(dump_path: str) -> int:
    """Re-execute exactly one dumped instance; deterministic."""
    try:
        doc = json.loads(Path(dump_path).read_text())
        command = doc["command"]
        evaluate = EVALUATORS[command]
        inst = doc["instance"]
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"malformed dump: {exc}", file=sys.stderr)
        return 2
    ok, row = evaluate(inst)
    print(json.dumps({"command": command, "row": row}, sort_keys=True))
    print(f"replay {command} pass={int(ok)} fail={int(not ok)}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinmix",
        description=("Exact 2-spin identity corpora, locality sweeps, decay "
                     "profiles, and zero scans. Random corpora are Erdos-Renyi "
                     "graphs (edge probability 1/2, conditioned on "
                     "connectivity); trees are uniform spanning trees of such "
                     "graphs; rational parameters keep numerator and "
                     "denominator magnitudes within 10. The seed fully "
                     "determines every corpus."))
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, trials_default=100):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=trials_default)
        sp.add_argument("--max-vertices", type=int, default=None)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    def add_params(sp):
        sp.add_argument("--beta", type=str, default=None,
                        help="rational p/q, optionally p/q,p/q for a complex value")
        sp.add_argument("--gamma", type=str, default=None)
        sp.add_argument("--lambda", dest="lam", type=str, default=None)

    sp = sub.add_parser("cd-check", help="pair-difference identity corpus on trees")
    add_common(sp, 200)
    sp = sub.add_parser("gutman-check", help="hard-core deletion identity corpus")
    add_common(sp, 200)
    sp = sub.add_parser("qspin-check", help="q-spin determinant identity corpus")
    add_common(sp)
    sp.add_argument("--q", type=int, default=0, help="spin count (0 alternates 2 and 3)")
    sp = sub.add_parser("saw-check", help="SAW-tree marginal and structure corpus")
    add_common(sp)
    sp = sub.add_parser("ldc", help="field-series coefficient locality")
    add_common(sp)
    add_params(sp)
    sp.add_argument("--graph", type=str, default=None)
    sp.add_argument("--pins", type=str, default=None)
    sp = sub.add_parser("ldc-beta", help="edge-activity series locality at 1/gamma")
    add_common(sp)
    sp = sub.add_parser("decay", help="gap decay profile on path families")
    add_common(sp)
    add_params(sp)
    sp.add_argument("--mode", choices=("ssm", "psm", "msm"), default="ssm")
    sp.add_argument("--kmax", type=int, default=10)
    sp.add_argument("--kmin", type=int, default=1)
    sp = sub.add_parser("roots", help="field-polynomial root scan of one instance")
    add_common(sp, 1)
    add_params(sp)
    sp.add_argument("--graph", type=str, required=True)
    sp.add_argument("--pins", type=str, default=None)
    sp = sub.add_parser("annulus", help="pinned root-modulus band checks")
    add_common(sp, 50)
    sp.add_argument("--beta", type=str, default="3/2")
    sp.add_argument("--graph", type=str, default=None)
    sp.add_argument("--pins", type=str, default=None)
    sp.add_argument("--degree-bound", type=int, default=3)
    sp = sub.add_parser("region", help="min |Z| table over a field grid")
    add_common(sp, 1)
    add_params(sp)
    sp.add_argument("--grid", type=int, default=9, help="grid points per axis")
    sp.add_argument("--span", type=float, default=0.4)
    sp = sub.add_parser("weitz", help="truncated-SAW marginal approximation")
    add_common(sp, 50)
    add_params(sp)
    sp.add_argument("--graph", type=str, default=None)
    sp.add_argument("--pins", type=str, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--vertex", type=int, default=0)
    sp = sub.add_parser("replay", help="re-execute a dumped failing instance")
    sp.add_argument("dump", type=str)
    return parser


def _cfg_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("seed", "trials", "out"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "max_vertices"):
        cfg.max_vertices = args.max_vertices
    if hasattr(args, "format"):
        cfg.fmt = args.format
    for name, attr in (("beta", "beta"), ("gamma", "gamma"), ("lam", "lam")):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, attr, parse_scalar(getattr(args, name)))
    if hasattr(args, "graph"):
        cfg.graph_path = args.graph
    if hasattr(args, "pins"):
        cfg.pins_path = args.pins
    for name in ("q", "depth", "kmax", "kmin", "mode"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "degree_bound"):
        cfg.extra["degree_bound"] = args.degree_bound
    if hasattr(args, "grid"):
        cfg.extra["grid"] = args.grid
    if hasattr(args, "span"):
        cfg.extra["span"] = args.span
    if hasattr(args, "vertex"):
        cfg.extra["vertex"] = args.vertex
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "replay":
        return replay(args.dump)
    return run(_cfg_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
