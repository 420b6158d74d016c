"""Command-line interface: ``pbedg {run,bench,converge,geometry-dump,validate}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .geometry import (build_aggregation_refinement, build_breakage_refinement,
                       dump_breakage_csv, dump_triangles_csv)
from .harness import (BENCHMARKS, ConfigError, ProblemSpec, benchmark_spec, convergence_study,
                      emit_csv, run_problem)
from .kernels import validate
from .limiter import LimiterError
from .timestepping import NumericalFailure

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("pbedg")


def _out_dir(args, spec: ProblemSpec) -> Path:
    return Path(args.out or spec.output.dir or ".")


def _summary(res) -> str:
    parts = [f"{res.name}: t_end reached in {len(res.steps)} steps",
             f"max |dM1|/M1 = {res.max_relative_mass_deviation:.2e}"]
    if res.errors is not None:
        parts.append("L1 = {:.4e}  L2 = {:.4e}  Linf = {:.4e}".format(*res.errors))
    if res.reference_averages is not None:
        parts.append(f"relative L1 vs DPBE = {res.relative_l1_to_reference():.4e}")
    return "; ".join(parts)


def _execute(spec: ProblemSpec, out: Path, name: str | None = None) -> None:
    res = run_problem(spec, name=name)
    emit_csv(res, out)
    (out / "config.json").write_text(spec.to_json() + "\n")
    print(_summary(res))


def cmd_run(args) -> int:
    spec = ProblemSpec.load(args.config)
    _execute(spec, _out_dir(args, spec))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        spec = benchmark_spec(args.name)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _execute(spec, Path(args.out), name=args.name)
    return EXIT_OK


def cmd_converge(args) -> int:
    spec = ProblemSpec.load(args.config)

    def show(row, _res):
        orders = "" if row.orders is None else "  orders " + " ".join(f"{o:.2f}" for o in row.orders)
        print(f"level {row.level} (L={row.L}): " + " ".join(f"{e:.4e}" for e in row.errors) + orders)

    rows = convergence_study(spec, args.levels, on_level=show)
    if args.out or spec.output.dir:
        emit_csv(None, _out_dir(args, spec), rows)
    return EXIT_OK


def cmd_geometry_dump(args) -> int:
    spec = ProblemSpec.load(args.config)
    mesh = spec.build_mesh()
    out = _out_dir(args, spec)
    out.mkdir(parents=True, exist_ok=True)
    kernels = spec.kernels()
    if kernels.has_aggregation:
        ref = build_aggregation_refinement(mesh)
        dump_triangles_csv(ref, out / "aggregation_triangles.csv")
        print(f"aggregation refinement: {len(ref)} triangles, area {ref.areas.sum():.15g}")
    if kernels.has_breakage:
        ref = build_breakage_refinement(mesh)
        dump_breakage_csv(ref, out / "breakage_elements.csv")
        print(f"breakage refinement: {len(ref)} elements "
              f"({int(ref.is_triangle.sum())} triangles), area {ref.areas.sum():.15g}")
    if not (kernels.has_aggregation or kernels.has_breakage):
        print("no aggregation or breakage process: nothing to dump")
    return EXIT_OK


def cmd_validate(args) -> int:
    spec = ProblemSpec.load(args.config)
    report = validate(spec.kernels(), spec.mesh.v_max)
    if not report.ok:
        for msg in report.failures:
            print(f"FAIL: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    print("kernels OK")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pbedg", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a JSON problem description")
    r.add_argument("--config", required=True)
    r.add_argument("--out", help="output directory (default: output.dir or .)")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bench", help="run a prewired benchmark")
    b.add_argument("--name", required=True, help=", ".join(BENCHMARKS))
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("converge", help="convergence study on nested meshes")
    c.add_argument("--config", required=True)
    c.add_argument("--levels", type=int, default=4)
    c.add_argument("--out")
    c.set_defaults(func=cmd_converge)

    g = sub.add_parser("geometry-dump", help="write the integration-region refinements as CSV")
    g.add_argument("--config", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_geometry_dump)

    v = sub.add_parser("validate", help="check kernel symmetry, daughter mass and growth sign")
    v.add_argument("--config", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, LimiterError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
