"""Command-line surface: measures, bounds, the chain sweep, and check suites.

Every command writes a machine-readable JSON report next to its human
output, plus a run manifest (command, flags, seed, version, wall time, and
input digests) so deterministic runs can be reproduced bit-identically.

Exit codes: 0 success, 1 input error, 2 iteration limit, 3 property-suite
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ITER_LIMIT = 2
EXIT_CHECK_FAILED = 3
EXIT_USAGE = 64

VERSION = "0.1.0"


def _workers() -> int:
    raw = os.environ.get("GMRE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_base: str, command: str, flags: dict, seed: int,
                    wall_time: float, inputs: list[str]) -> None:
    manifest = {
        "command": command,
        "flags": flags,
        "seed": seed,
        "version": VERSION,
        "wall_time_s": round(wall_time, 3),
        "input_digests": {p: _digest(p) for p in inputs if os.path.exists(p)},
    }
    with open(out_base + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_json(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


class _InputError(Exception):
    """Signals an input problem already reported to stderr."""


def _load_state(path: str):
    from .states import StateFormatError, read_state_file

    try:
        return read_state_file(path)
    except FileNotFoundError:
        print(f"error: state file not found: {path}", file=sys.stderr)
        raise _InputError()
    except StateFormatError as e:
        print(f"error: {path}: {e}", file=sys.stderr)
        raise _InputError()


def _solve_config(args) -> "SolveConfig":
    from .solver import SolveConfig

    return SolveConfig(
        value_tol=args.tol,
        max_iter=args.max_iter,
        seed=args.seed,
    )


def _report_doc(rep) -> dict:
    return {
        "value_bits": rep.value,
        "iterations": rep.iterations,
        "final_feasibility": rep.final_feasibility,
        "grad_norm": rep.grad_norm,
        "floored": rep.floored,
        "status": rep.status,
    }


def cmd_gmre(args) -> int:
    from .solver import STATUS_CONVERGED, gmre

    t0 = time.time()
    rho = _load_state(args.state_file)
    rep = gmre(rho, _solve_config(args))
    print(f"gmre: {rep.value:.4f} bits ({rep.status}, {rep.iterations} iterations)")
    out = args.output or (args.state_file + ".gmre.json")
    _write_json(out, _report_doc(rep))
    _write_manifest(out, "gmre", _flags(args), args.seed, time.time() - t0,
                    [args.state_file])
    return EXIT_OK if rep.status == STATUS_CONVERGED else EXIT_ITER_LIMIT


def cmd_gmn(args) -> int:
    from .solver import STATUS_CONVERGED, gmn_from_log, log_gmn

    t0 = time.time()
    rho = _load_state(args.state_file)
    rep = log_gmn(rho, _solve_config(args))
    neg = gmn_from_log(max(rep.value, 0.0))
    print(f"log_gmn: {rep.value:.4f} bits (negativity {neg:.4f}, {rep.status})")
    out = args.output or (args.state_file + ".gmn.json")
    doc = _report_doc(rep)
    doc["negativity"] = neg
    _write_json(out, doc)
    _write_manifest(out, "gmn", _flags(args), args.seed, time.time() - t0,
                    [args.state_file])
    return EXIT_OK if rep.status == STATUS_CONVERGED else EXIT_ITER_LIMIT


def cmd_bounds(args) -> int:
    from .bounds import one_shot_bound, renyi_one_shot_bound
    from .solver import STATUS_CONVERGED, gmre

    t0 = time.time()
    rho = _load_state(args.state_file)
    try:
        alpha_grid = [float(a) for a in args.alpha_grid.split(",") if a.strip()]
    except ValueError:
        print(f"error: bad --alpha-grid {args.alpha_grid!r}", file=sys.stderr)
        return EXIT_INPUT
    if not alpha_grid or any(not 1.0 < a <= 2.0 for a in alpha_grid):
        print("error: --alpha-grid entries must lie in (1, 2]", file=sys.stderr)
        return EXIT_INPUT
    cfg = _solve_config(args)
    rep = gmre(rho, cfg)
    oneshot = one_shot_bound(rep.value, args.epsilon)
    renyi = renyi_one_shot_bound(rho, args.epsilon, alpha_grid, cfg,
                                 max_workers=_workers())
    print(f"{'bound':<24}{'bits':>12}")
    print(f"{'gmre':<24}{rep.value:>12.5f}")
    print(f"{'one-shot':<24}{oneshot:>12.5f}")
    print(f"{'renyi one-shot':<24}{renyi:>12.5f}")
    out = args.output or (args.state_file + ".bounds.json")
    _write_json(out, {
        "gmre_bits": rep.value,
        "gmre_status": rep.status,
        "epsilon": args.epsilon,
        "one_shot_bound": oneshot,
        "renyi_one_shot_bound": renyi,
        "alpha_grid": alpha_grid,
    })
    _write_manifest(out, "bounds", _flags(args), args.seed, time.time() - t0,
                    [args.state_file])
    return EXIT_OK if rep.status == STATUS_CONVERGED else EXIT_ITER_LIMIT


def _parse_h_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValueError(f"bad h grid {spec!r}, expected start:stop:step")
    if step <= 0:
        raise ValueError("h grid step must be positive")
    out = []
    v = start
    while v <= stop + step / 2:
        out.append(round(v, 12))
        v += step
    return out


def cmd_tfim(args) -> int:
    from .solver import SolveConfig
    from .tfim import ChainConfig, SweepSpec, rows_to_csv, rows_to_json, sweep

    t0 = time.time()
    try:
        h_values = _parse_h_grid(args.h_grid)
        measures = tuple(m.strip() for m in args.measures.split(",") if m.strip())
        spec = SweepSpec(h_values=h_values, measures=measures)
        chain = ChainConfig(n_sites=args.n)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    cfg = SolveConfig(value_tol=args.tol, max_iter=args.max_iter, seed=args.seed)
    rows = sweep(spec, chain, cfg, max_workers=_workers())
    csv_text = rows_to_csv(rows)
    json_text = rows_to_json(rows)
    out = args.output or "tfim_sweep.csv"
    base = out[:-4] if out.endswith(".csv") else out
    if args.format == "json":
        with open(out, "w") as fh:
            fh.write(json_text)
    else:
        with open(out, "w") as fh:
            fh.write(csv_text)
        with open(base + ".json", "w") as fh:
            fh.write(json_text)
    print(csv_text, end="")
    _write_manifest(out, "tfim", _flags(args), args.seed, time.time() - t0, [])
    return EXIT_OK


def cmd_check(args) -> int:
    from . import checks

    t0 = time.time()
    suites = checks.available_suites()
    if args.suite != "all" and args.suite not in suites:
        print(f"error: unknown suite {args.suite!r}; choose from "
              f"{['all'] + sorted(suites)}", file=sys.stderr)
        return EXIT_INPUT
    selected = sorted(suites) if args.suite == "all" else [args.suite]
    results = []
    for name in selected:
        results.extend(checks.run_suite(name, seed=args.seed))
    n_fail = 0
    for r in results:
        mark = "pass" if r.passed else "FAIL"
        print(f"[{mark}] {r.suite}: {r.name} ({r.detail})")
        n_fail += 0 if r.passed else 1
    print(f"{len(results) - n_fail}/{len(results)} properties passed")
    out = args.output or "check_report.json"
    _write_json(out, {
        "suite": args.suite,
        "seed": args.seed,
        "results": [
            {"suite": r.suite, "name": r.name, "passed": bool(r.passed), "detail": r.detail}
            for r in results
        ],
    })
    _write_manifest(out, "check", _flags(args), args.seed, time.time() - t0, [])
    return EXIT_OK if n_fail == 0 else EXIT_CHECK_FAILED


def _flags(args) -> dict:
    skip = {"func", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gmre",
        description="Genuine multipartite entanglement measures, bounds, and "
                    "transverse-field Ising sweeps.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, state: bool = True):
        if state:
            sp.add_argument("state_file", help="state file (JSON dims/matrix)")
        sp.add_argument("--tol", type=float, default=1e-4, help="value tolerance in bits")
        sp.add_argument("--max-iter", dest="max_iter", type=int, default=2000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default=None, help="output file path")

    sp = sub.add_parser("gmre", help="compute the entanglement measure of a state file")
    common(sp)
    sp.set_defaults(func=cmd_gmre)

    sp = sub.add_parser("gmn", help="compute the log-negativity variant of a state file")
    common(sp)
    sp.set_defaults(func=cmd_gmn)

    sp = sub.add_parser("bounds", help="one-shot distillation bounds for a state file")
    common(sp)
    sp.add_argument("--epsilon", type=float, default=0.0, help="error tolerance in [0,1)")
    sp.add_argument("--alpha-grid", dest="alpha_grid", default="1.001,1.01,1.1,1.25,1.5,2",
                    help="comma-separated Renyi orders in (1,2]")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("tfim", help="sweep the chain's three-site measures over a field grid")
    common(sp, state=False)
    sp.add_argument("--n", type=int, default=12, help="number of chain sites (even)")
    sp.add_argument("--h-grid", dest="h_grid", default="0.2:2.0:0.1",
                    help="field grid start:stop:step (inclusive)")
    sp.add_argument("--measures", default="gmre,log_gmn")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_tfim)

    sp = sub.add_parser("check", help="run seeded property suites")
    common(sp, state=False)
    sp.add_argument("--suite", default="all", help="suite name or 'all'")
    sp.set_defaults(func=cmd_check)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage problems; remap per the documented codes
        if e.code not in (0, None):
            raise SystemExit(EXIT_USAGE)
        raise
    try:
        return args.func(args)
    except _InputError:
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
