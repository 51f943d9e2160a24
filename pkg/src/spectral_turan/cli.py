"""``btr`` command line: analyze, search, enumerate, ramsey.

Exit codes: 0 success, 1 a check failed, 2 bad input or configuration,
3 search budget exhausted without any feasible improvement.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from . import bounds as B
from .counting import (
    BudgetExceeded,
    clique_number,
    count_c4,
    count_triangles,
    independent_set_count,
    pair_degree_moment,
)
from .graph import Graph, GraphError, complete_graph, path_graph
from .io import Graph6Error, InputError, encode_graph6, named_graph, parse_graph6, read_graphs
from .ramsey import BRUTE_MAX_ORDER, default_oracle, ramsey_brute_force, ramsey_lookup
from .spectral import ConvergenceError, closed_walks_4, full_spectrum, spectral_radius

SCHEMA = "btr/1"
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NO_IMPROVEMENT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_pattern(text: str) -> Graph:
    """A built-in name (K3, P3, C5, petersen, ...) or a graph6 string."""
    try:
        return named_graph(text)
    except KeyError:
        pass
    try:
        return parse_graph6(text)
    except GraphError as exc:
        raise UsageError(f"cannot read pattern {text!r}: {exc}") from None


# -- analyze ----------------------------------------------------------------------

ANALYZE_CHECKS = ("prop1", "prop2", "prop3", "prop4", "in6", "lemma1", "c5pair", "turan-step",
                  "th0", "th0-chain", "th1", "nikiforov", "identity-c4", "identity-in",
                  "identity-in3", "identity-cw4", "hofmeister", "motzkin", "spectral-range")


def _run_check(name: str, g: Graph, spec, o: dict) -> list:
    h = o["H"]
    if name == "prop1":
        return [B.verify_proposition1(g, spec)]
    if name == "prop2":
        return [B.verify_proposition2(g, k, spec) for k in (2, 3, 4)]
    if name == "prop3":
        return [B.verify_proposition3(g, max(3, o["s"]), o["k"] or 2.0)]
    if name == "prop4":
        pats = [complete_graph(3), path_graph(3)]
        if h not in pats:
            pats.append(h)
        return [B.verify_proposition4(g, p, s) for p in pats for s in (2, 3)]
    if name == "in6":
        return [B.verify_in6(g, h, max(2, o["s"]))]
    if name == "lemma1":
        return [B.lemma1_rhs(g, h, o["t"], spec=spec)]
    if name == "c5pair":
        return [B.verify_c5_pair_count(g)]
    if name == "turan-step":
        return [B.verify_turan_step(g, r) for r in (2, 3, 4)]
    if name == "th0":
        p = B.BoundParams(s=2, t=o["t"], r=o["r"], h=None, k_const=o["k"])
        return [B.theorem_verdict(g, p, "th0", spec=spec)]
    if name == "th0-chain":
        return [B.verify_th0_chain(g, o["r"], spec)]
    if name == "th1":
        s = max(3, o["s"])
        p = B.BoundParams(s=s, t=max(s, o["t"]), r=o["r"], h=h, k_const=o["k"])
        return [B.theorem_verdict(g, p, "th1", spec=spec)]
    if name == "nikiforov":
        return [B.verify_nikiforov(g, 2, 2, spec), B.verify_nikiforov(g, 3, 3, spec)]
    if name == "identity-c4":
        return [B.verify_identity_c4(g)]
    if name == "identity-in":
        return [B.verify_identity_in(g)]
    if name == "identity-in3":
        return [B.verify_identity_in3(g)]
    if name == "identity-cw4":
        return [B.verify_identity_cw4(g, spec if spec.eigenvalues is not None else None)]
    if name == "hofmeister":
        return [B.verify_hofmeister(g, spec)]
    if name == "motzkin":
        return [B.verify_motzkin(g, spec)]
    if name == "spectral-range":
        return [B.verify_spectral_range(g, spec)]
    raise UsageError(f"unknown check {name!r}")


def _init_worker(tol, uppers):
    if tol is not None:
        B.REL_TOL = tol
    for h6, t, v in uppers:
        try:
            default_oracle().set_upper(parse_graph6(h6), t, v)
        except ValueError as exc:
            raise UsageError(f"--ramsey-upper: {exc}") from None


def analyze_graph(index: int, g: Graph, o: dict) -> dict:
    """The analysis record of one graph (a plain JSON-ready dict)."""
    out: dict = {"schema": SCHEMA, "kind": "analysis", "index": index,
                 "graph6": encode_graph6(g), "order": g.n, "size": g.edge_count}
    if g.n == 0:
        out["error"] = "null graph"
        out["checks"] = []
        return out
    spec = full_spectrum(g) if o["full_spectrum"] else spectral_radius(g)
    out["lambda"] = spec.lam
    out["method"] = spec.method
    out["residual"] = spec.residual
    if spec.eigenvalues is not None:
        out["eigenvalues"] = [float(x) for x in spec.eigenvalues]
    out["cw4"] = closed_walks_4(g)
    out["c4"] = count_c4(g)
    out["k3"] = count_triangles(g)
    out["omega"] = clique_number(g)
    out["is_counts"] = {str(s): independent_set_count(g, s) for s in o["sizes"]}
    out["pair_moments"] = {str(k): pair_degree_moment(g, k) for k in o["moments"]}
    reports = []
    for name in o["checks"]:
        try:
            reports += [r.to_dict() for r in _run_check(name, g, spec, o)]
        except BudgetExceeded as exc:
            reports.append({"schema": SCHEMA, "which": name, "verdict": "withheld",
                            "error": str(exc)})
    out["checks"] = reports
    return out


def _analyze_task(args):
    index, g6, o = args
    return analyze_graph(index, parse_graph6(g6), o)


def _parse_list(text: str, kind=int) -> list:
    try:
        return [kind(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad list {text!r}") from None


def _checks_arg(text: str, allowed) -> list[str]:
    if text in ("all", ""):
        return list(allowed)
    names = [x.strip() for x in text.split(",") if x.strip()]
    bad = [x for x in names if x not in allowed]
    if bad:
        raise UsageError(f"unknown checks {bad}; choose from {', '.join(allowed)}")
    return names


def _pretty_analysis(rec: dict) -> str:
    lines = [f"# graph {rec['index']}  {rec['graph6']}  n={rec['order']}  e={rec['size']}"]
    if "lambda" in rec:
        lines.append(f"  lambda={rec['lambda']:.10g}  C4={rec['c4']}  k3={rec['k3']}  "
                     f"omega={rec['omega']}  CW4={rec['cw4']}")
    for r in rec["checks"]:
        lhs, rhs, m = r.get("lhs"), r.get("rhs"), r.get("margin")
        lines.append(f"  {r['which']:<24} {r['verdict']:<14} lhs={_fmt(lhs)}  rhs={_fmt(rhs)}  "
                     f"margin={_fmt(m)}")
    return "\n".join(lines)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def cmd_analyze(a) -> int:
    checks = _checks_arg(a.checks, ANALYZE_CHECKS)
    uppers = []
    for h_text, t, v in a.ramsey_upper or []:
        h = load_pattern(h_text)
        try:
            uppers.append((encode_graph6(h), int(t), int(v)))
        except ValueError:
            raise UsageError(f"--ramsey-upper needs integers, got {t!r} {v!r}") from None
    o = {"checks": checks, "full_spectrum": a.full_spectrum, "sizes": _parse_list(a.sizes),
         "moments": _parse_list(a.moments), "H": load_pattern(a.H), "s": a.s, "t": a.t,
         "r": a.r, "k": a.k_const}
    graphs = []
    for src in a.inputs:
        graphs += read_graphs(src)
    _init_worker(a.tol, uppers)
    jobs = a.jobs or os.cpu_count() or 1
    tasks = [(i, encode_graph6(g), o) for i, g in enumerate(graphs)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(a.tol, uppers)) as ex:
            records = list(ex.map(_analyze_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        records = [analyze_graph(i, g, o) for i, g in enumerate(graphs)]
    verdicts = Counter(r["verdict"] for rec in records for r in rec["checks"])
    with _output(a.out) as fh:
        for rec in records:
            fh.write((_pretty_analysis(rec) if a.pretty else json.dumps(rec, sort_keys=True)) + "\n")
    _manifest(a, "analyze", a.inputs, dict(verdicts), sum(verdicts.values()))
    return EXIT_FAIL if verdicts.get("fails", 0) else EXIT_OK


# -- search -------------------------------------------------------------------------

SEARCH_KEYS = {"n", "constraints", "budget", "restarts", "seed", "schedule"}


def load_search_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read search config: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("search config must be a JSON object")
    unknown = set(cfg) - SEARCH_KEYS
    if unknown:
        raise UsageError(f"unknown config keys {sorted(unknown)}")
    if not isinstance(cfg.get("n"), int) or cfg["n"] < 2:
        raise UsageError("config needs integer n >= 2")
    for key, default in (("budget", 100_000), ("restarts", 20), ("seed", 0)):
        val = cfg.setdefault(key, default)
        if not isinstance(val, int) or isinstance(val, bool) or (key != "seed" and val <= 0):
            raise UsageError(f"config {key} must be a positive integer")
    if not isinstance(cfg.setdefault("constraints", []), list):
        raise UsageError("config constraints must be a list")
    return cfg


def cmd_search(a) -> int:
    from .search import ConstraintSet, local_search

    cfg = load_search_config(a.config)
    if a.seed is not None:
        cfg["seed"] = a.seed
    try:
        c = ConstraintSet.from_json(cfg["constraints"])
    except (ValueError, KeyError, TypeError, GraphError) as exc:
        raise UsageError(f"bad constraint: {exc}") from None

    def progress(step, lam):
        print(f"step {step} best_lambda {lam:.10g}", file=sys.stderr)

    try:
        rec = local_search(cfg["n"], c, cfg["budget"], cfg["seed"], cfg["restarts"],
                           cfg.get("schedule"), progress=progress, log_every=a.log_every)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    with _output(a.out) as fh:
        fh.write(rec.to_json() + "\n")
    status = "improved" if rec.improved else "no_improvement"
    _manifest(a, "search", [a.config], {status: 1}, 1)
    return EXIT_OK if rec.improved else EXIT_NO_IMPROVEMENT


# -- enumerate ------------------------------------------------------------------------

def cmd_enumerate(a) -> int:
    from .search import default_verify_checks, exhaustive_scan

    if a.n > 7 or a.n < 1:
        raise UsageError(f"--n must be between 1 and 7 (order 8 has 2^28 labelled graphs)")
    allowed = tuple(default_verify_checks())
    checks = _checks_arg(a.checks, allowed)
    lo = a.n if a.n_min is None else a.n_min
    res = exhaustive_scan(a.n, None, "verify_inequalities", checks, n_min=lo)
    verdicts = {}
    for order in res:
        for name, app in order["applicable"].items():
            v = verdicts.setdefault(name, {"holds": 0, "fails": 0, "premise_unmet": 0})
            bad = order["violations"][name]
            v["holds"] += app - bad
            v["fails"] += bad
            v["premise_unmet"] += order["scanned"] - app
    total_bad = sum(o["total_violations"] for o in res)
    out = {"schema": SCHEMA, "kind": "enumerate", "n_min": lo, "n_max": a.n, "checks": checks,
           "scanned": sum(o["scanned"] for o in res), "violations": total_bad,
           "zero_violations": total_bad == 0, "verdicts": verdicts, "orders": res}
    with _output(a.out) as fh:
        fh.write(json.dumps(out, sort_keys=True, indent=2 if a.pretty else None) + "\n")
    hist = Counter()
    for v in verdicts.values():
        hist.update(v)
    _manifest(a, "enumerate", [], dict(hist), sum(hist.values()))
    return EXIT_FAIL if total_bad else EXIT_OK


# -- ramsey -------------------------------------------------------------------------------

def cmd_ramsey(a) -> int:
    h = load_pattern(a.H)
    if a.t < 1:
        raise UsageError("t must be at least 1")
    if a.mode == "table":
        rv = ramsey_lookup(h, a.t)
    elif a.mode == "brute":
        if a.n_max > BRUTE_MAX_ORDER:
            raise UsageError(f"brute force is capped at order {BRUTE_MAX_ORDER}")
        rv = ramsey_brute_force(h, a.t, a.n_max)
    else:
        rv = ramsey_lookup(h, a.t)
        if not rv.exact and rv.lower <= BRUTE_MAX_ORDER:
            bf = ramsey_brute_force(h, a.t, BRUTE_MAX_ORDER)
            if bf.exact:
                rv = bf
    out = {"schema": SCHEMA, "kind": "ramsey", **rv.to_dict()}
    with _output(a.out) as fh:
        fh.write(json.dumps(out, sort_keys=True) + "\n")
    _manifest(a, "ramsey", [], {"exact" if rv.exact else "interval": 1}, 1)
    return EXIT_OK


# -- plumbing -------------------------------------------------------------------------------

class _output:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def _digest(a, inputs) -> str:
    skip = {"out", "manifest", "timestamp", "func", "jobs", "log_every", "_t0"}
    args = {k: v for k, v in sorted(vars(a).items()) if k not in skip}
    h = hashlib.sha256(json.dumps(args, sort_keys=True, default=str).encode())
    for src in inputs:
        p = Path(src)
        h.update(p.read_bytes() if p.exists() else str(src).encode())
    return h.hexdigest()


def _manifest(a, command: str, inputs, verdicts: dict, items: int) -> None:
    if not getattr(a, "manifest", None):
        return
    m = {"schema": SCHEMA, "kind": "manifest", "command": command,
         "inputs": [str(x) for x in inputs], "config_digest": _digest(a, inputs),
         "tool_version": __version__, "verdict_counts": verdicts, "items": items}
    if a.timestamp:
        m["wall_time"] = time.time() - a._t0
    Path(a.manifest).write_text(json.dumps(m, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="btr", description="Spectral Turan bound toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--manifest", help="write a run manifest JSON here")
        sp.add_argument("--timestamp", action="store_true", help="include wall time in the manifest")
        sp.add_argument("--pretty", action="store_true", help="human-readable output")

    an = sub.add_parser("analyze", help="spectra, counts and bound checks per graph")
    an.add_argument("inputs", nargs="+", help="graph6 / edge-list files or built-in names")
    an.add_argument("--checks", default="all", help=f"comma list or 'all': {','.join(ANALYZE_CHECKS)}")
    an.add_argument("--full-spectrum", action="store_true")
    an.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")
    an.add_argument("--tol", type=float, default=None, help="relative tolerance for verdicts")
    an.add_argument("--ramsey-upper", nargs=3, action="append", metavar=("H", "T", "VALUE"))
    an.add_argument("--sizes", default="1,2,3", help="independent set sizes to count")
    an.add_argument("--moments", default="1,2", help="pair co-degree moments")
    an.add_argument("--H", default="K3", help="forbidden pattern for lemma1/th1/in6")
    an.add_argument("--s", type=int, default=3)
    an.add_argument("--t", type=int, default=2)
    an.add_argument("--r", type=int, default=2)
    an.add_argument("--k-const", type=float, default=None)
    common(an)
    an.set_defaults(func=cmd_analyze)

    se = sub.add_parser("search", help="extremal local search from a JSON config")
    se.add_argument("config")
    se.add_argument("--seed", type=int, default=None)
    se.add_argument("--log-every", type=int, default=0)
    common(se)
    se.set_defaults(func=cmd_search)

    en = sub.add_parser("enumerate", help="exhaustive checks over labelled graphs of order n")
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--n-min", type=int, default=None, help="also scan orders n-min..n")
    en.add_argument("--checks", default="all")
    common(en)
    en.set_defaults(func=cmd_enumerate)

    ra = sub.add_parser("ramsey", help="R(H, K_t) with provenance")
    ra.add_argument("H")
    ra.add_argument("t", type=int)
    ra.add_argument("--mode", choices=("table", "brute", "auto"), default="auto")
    ra.add_argument("--n-max", type=int, default=BRUTE_MAX_ORDER)
    common(ra)
    ra.set_defaults(func=cmd_ramsey)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    a._t0 = time.time()
    try:
        return a.func(a)
    except (UsageError, InputError, Graph6Error, FileNotFoundError) as exc:
        print(f"btr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GraphError as exc:
        print(f"btr: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"btr: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
