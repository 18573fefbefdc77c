"""Command-line interface.

Exit status: 0 success, 1 a reproduction gate failed, 2 usage or
configuration error, 3 solver did not converge (outputs are still written),
4 file I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .array_model import AngleGrid, ArrayModelError, array_factor_symmetric
from .cs_synthesis import PositionGrid, SolverConfig, SynthesisError, build_dictionary, synthesize
from .cs_theory import RipBudgetError, mutual_coherence, restricted_isometry_constant, sparsity_bound_holds
from .metrics import element_reduction, pattern_metrics, peak_sidelobe_level
from .reference_patterns import COMPARISON_COLUMNS, UnknownFixtureError, load_fixture
from .repro import EXAMPLES, run_example
from .tables import TableError, TableReadError, dumps_report, write_element_table, write_json, write_pattern_csv

log = logging.getLogger("csarray")

EXIT_OK, EXIT_GATE, EXIT_USAGE, EXIT_NOCONV, EXIT_IO = 0, 1, 2, 3, 4
OUT_ENV = "CSARRAY_OUT_DIR"
COMMANDS = ("synthesize", "evaluate", "rip", "compare", "repro-example1", "repro-example2")


class UsageError(Exception):
    pass


@dataclass
class Option:
    dest: str
    convert: type
    default: object


# keys accepted in a config file; flags use the same names with '-' for '_'
OPTIONS = {
    o.dest: o
    for o in [
        Option("target", str, None),
        Option("candidate", str, None),
        Option("x_max", float, 10.0),
        Option("step", float, 0.1),
        Option("samples", int, 401),
        Option("epsilon", float, 1e-3),
        Option("threshold", float, 1e-3),
        Option("merge_gap", int, 1),
        Option("method", str, "homotopy"),
        Option("max_iterations", int, 5000),
        Option("convergence_tol", float, 1e-8),
        Option("penalty", float, 1.0),
        Option("seed", int, 0),
        Option("floor_db", float, -50.0),
        Option("k", int, 2),
        Option("matrix", str, None),
        Option("out", str, None),
        Option("format", str, "json,csv"),
    ]
}


def read_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableReadError(f"cannot read config file {path}: {exc}") from exc
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config {path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"config {path}:{lineno}: unknown key '{key}'")
        values[key] = value
    return values


def _convert(key, value):
    opt = OPTIONS[key]
    try:
        return opt.convert(value)
    except (TypeError, ValueError):
        raise UsageError(f"invalid value for '{key}': {value!r}") from None


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = {k: o.default for k, o in OPTIONS.items()}
    if os.environ.get(OUT_ENV):
        settings["out"] = os.environ[OUT_ENV]
    if args.config:
        for key, value in read_config_file(args.config).items():
            settings[key] = _convert(key, value)
    for key in OPTIONS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value

    formats = {f.strip() for f in str(settings["format"]).split(",") if f.strip()}
    if not formats or not formats <= {"json", "csv"}:
        raise UsageError(f"invalid value for 'format': {settings['format']!r} (use json, csv or json,csv)")
    settings["format"] = formats
    if not (settings["x_max"] > settings["step"] > 0):
        raise UsageError("need x_max > step > 0 ('x_max', 'step')")
    if settings["samples"] < 2:
        raise UsageError("'samples' must be >= 2")
    if settings["merge_gap"] < 0:
        raise UsageError("'merge_gap' must be >= 0")
    if not 0 < settings["threshold"] < 1:
        raise UsageError("'threshold' must be in (0, 1)")
    try:
        settings["solver"] = SolverConfig(
            epsilon=settings["epsilon"],
            max_iterations=settings["max_iterations"],
            convergence_tol=settings["convergence_tol"],
            penalty=settings["penalty"],
            seed=settings["seed"],
            method=settings["method"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return settings


def _out_dir(settings, required: bool) -> Path | None:
    out = settings["out"]
    if out is None:
        if not required:
            return None
        out = "csarray_out"
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise TableReadError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _synthesis_kwargs(settings):
    return dict(
        x_max=settings["x_max"],
        step=settings["step"],
        angle_grid=AngleGrid.uniform(settings["samples"]),
        config=settings["solver"],
        threshold_rel=settings["threshold"],
        merge_gap=settings["merge_gap"],
        floor_db=settings["floor_db"],
    )


def _emit_report(report, out: Path, formats) -> list[Path]:
    written = []
    try:
        if "json" in formats:
            payload = report.to_dict()
            written.append(write_json(payload, out / "report.json"))
        if "csv" in formats:
            written.append(write_element_table(report.sparse_array, out / "elements.csv"))
            written.append(write_pattern_csv(report.target_pattern, out / "pattern_target.csv"))
            written.append(write_pattern_csv(report.synthesized_pattern, out / "pattern_synthesized.csv"))
    except OSError as exc:
        raise TableReadError(f"cannot write outputs to {out}: {exc}") from exc
    return written


def cmd_synthesize(settings) -> int:
    if settings["target"] is None:
        raise UsageError("missing 'target' (fixture name or element-table path)")
    fixture = load_fixture(settings["target"])
    report = synthesize(fixture.array, **_synthesis_kwargs(settings))
    report.settings["target"] = fixture.name
    out = _out_dir(settings, required=True)
    for path in _emit_report(report, out, settings["format"]):
        print(f"wrote {path}")
    m = report.metrics
    print(
        f"{fixture.name}: {report.n_reference} -> {report.n_synthesized} elements "
        f"({report.reduction_pct:.2f}% fewer), max dev {m.max_dev_db:.3f} dB, "
        f"peak sidelobe {m.peak_sidelobe_db:.3f} dB, converged={report.solution.converged}"
    )
    return EXIT_OK if report.solution.converged else EXIT_NOCONV


def cmd_evaluate(settings) -> int:
    if settings["target"] is None or settings["candidate"] is None:
        raise UsageError("evaluate needs 'target' and 'candidate'")
    target = load_fixture(settings["target"]).array
    cand = load_fixture(settings["candidate"]).array
    grid = AngleGrid.uniform(settings["samples"])
    tp, cp = array_factor_symmetric(target, grid), array_factor_symmetric(cand, grid)
    m = pattern_metrics(tp, cp, settings["floor_db"])
    result = {
        "target": settings["target"],
        "candidate": settings["candidate"],
        "n_target": target.n_physical,
        "n_candidate": cand.n_physical,
        "reduction_pct": 100.0 * (target.n_physical - cand.n_physical) / target.n_physical,
        "peak_sidelobe_db": m.peak_sidelobe_db,
        "target_peak_sidelobe_db": peak_sidelobe_level(tp),
        "rmse_db": m.rmse_db,
        "max_dev_db": m.max_dev_db,
        "floor_db": settings["floor_db"],
        "samples": grid.m,
    }
    text = dumps_report(result)
    sys.stdout.write(text)
    out = _out_dir(settings, required=False)
    if out is not None and "json" in settings["format"]:
        write_json(result, out / "evaluate.json")
    return EXIT_OK


def _load_matrix(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableReadError(f"cannot read matrix {path}: {exc}") from exc
    try:
        return np.loadtxt(text.splitlines(), delimiter=",", ndmin=2, dtype=complex if "j" in text else float)
    except ValueError as exc:
        raise UsageError(f"malformed matrix file {path}: {exc}") from None


def cmd_rip(settings) -> int:
    if settings["matrix"]:
        M = _load_matrix(settings["matrix"])
        source = {"matrix": settings["matrix"]}
    else:
        d = build_dictionary(PositionGrid(settings["x_max"], settings["step"]), AngleGrid.uniform(settings["samples"]))
        M = d.matrix
        source = {"dictionary": {"x_max": settings["x_max"], "step": settings["step"], "samples": settings["samples"]}}
    m, n = M.shape
    try:
        rip = restricted_isometry_constant(M, settings["k"])
    except RipBudgetError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(f"invalid 'k': {exc}") from None
    result = {
        "source": source,
        "shape": [m, n],
        "rip": {"k": rip.k, "delta_k": rip.delta_k, "witness_subset": list(rip.witness_subset), "n_subsets": rip.n_subsets},
        "mutual_coherence": mutual_coherence(M),
    }
    if n > m:
        b = sparsity_bound_holds(settings["k"], m, n)
        result["sparsity_bound"] = {"c": 1.0, "bound": b.bound, "holds": b.holds}
    sys.stdout.write(dumps_report(result))
    out = _out_dir(settings, required=False)
    if out is not None:
        write_json(result, out / "rip.json")
    return EXIT_OK


def cmd_compare(settings) -> int:
    target_name = settings["target"] or "chebyshev20"
    if target_name not in COMPARISON_COLUMNS:
        raise UsageError(f"no published comparison columns for target {target_name!r}; use one of {sorted(COMPARISON_COLUMNS)}")
    target = load_fixture(target_name).array
    grid = AngleGrid.uniform(settings["samples"])
    status = EXIT_OK
    if settings["candidate"]:
        ours = load_fixture(settings["candidate"]).array
        label = settings["candidate"]
    else:
        report = synthesize(target, **_synthesis_kwargs(settings))
        ours, label = report.sparse_array, "synthesized"
        if not report.solution.converged:
            status = EXIT_NOCONV
    columns = [(label, ours)] + [(name, load_fixture(name).array) for name in COMPARISON_COLUMNS[target_name]]

    tp = array_factor_symmetric(target, grid)
    rows = max(a.n_half for _, a in columns)
    head = "  i | " + " | ".join(f"{name[:22]:>22s}" for name, _ in columns)
    print(f"target: {target_name} ({target.n_physical} elements); entries are d/lambda, R")
    print(head)
    print("-" * len(head))
    for i in range(rows):
        cells = []
        for _, a in columns:
            if i < a.n_half:
                cells.append(f"{a.positions[i]:9.4f}, {a.excitations[i]:10.5f}")
            else:
                cells.append(" " * 22)
        print(f"{i + 1:3d} | " + " | ".join(cells))
    summary = {"target": target_name, "columns": []}
    for name, a in columns:
        m = pattern_metrics(tp, array_factor_symmetric(a, grid), settings["floor_db"])
        entry = {
            "name": name,
            "n_physical": a.n_physical,
            "peak_sidelobe_db": m.peak_sidelobe_db,
            "max_dev_db": m.max_dev_db,
            "rmse_db": m.rmse_db,
        }
        if a.n_physical <= target.n_physical:
            entry["reduction_pct"] = element_reduction(target.n_physical, a.n_physical)
        summary["columns"].append(entry)
        print(
            f"{name}: {a.n_physical} elements, peak sidelobe {m.peak_sidelobe_db:.2f} dB, "
            f"max dev {m.max_dev_db:.2f} dB, rms {m.rmse_db:.2f} dB"
        )
    out = _out_dir(settings, required=False)
    if out is not None:
        write_json(summary, out / "compare.json")
    return status


def cmd_repro(settings, key) -> int:
    ex = EXAMPLES[key]
    report, checks, agreement, runtime = run_example(key, **_synthesis_kwargs(settings))
    report.settings["target"] = ex.target
    print(f"{key}: target {ex.target} ({report.n_reference} elements)")
    print(
        f"  synthesized {report.n_synthesized} physical elements, reduction {report.reduction_pct:.2f}% "
        f"(published: {ex.published_count} elements, "
        f"{element_reduction(report.n_reference, ex.published_count):.0f}%)"
    )
    print("  published CS position -> nearest synthesized (|diff|, within 0.2 lambda)")
    for p, q, diff in agreement:
        print(f"    {p:6.3f} -> {q:6.3f}  ({diff:.3f}, {'yes' if diff <= 0.2 else 'no'})")
    for c in checks:
        print("  " + c.line())
    out = _out_dir(settings, required=False)
    if out is not None:
        for path in _emit_report(report, out, settings["format"]):
            print(f"  wrote {path}")
    if not report.solution.converged:
        return EXIT_NOCONV
    return EXIT_OK if all(c.passed for c in checks) else EXIT_GATE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat 'key = value' file; flags override it")
    common.add_argument("--target", help="fixture name or element-table path")
    common.add_argument("--candidate", help="element table (or fixture) to evaluate/compare")
    common.add_argument("--x-max", dest="x_max", type=float, help="half-aperture in wavelengths (default 10)")
    common.add_argument("--step", type=float, help="grid pitch in wavelengths (default 0.1)")
    common.add_argument("--samples", type=int, help="angle samples in u = cos(theta) over [0, 1] (default 401)")
    common.add_argument("--epsilon", type=float, help="relative residual bound (default 1e-3)")
    common.add_argument("--threshold", type=float, help="relative coefficient threshold (default 1e-3)")
    common.add_argument("--merge-gap", dest="merge_gap", type=int, help="merge columns this many steps apart (default 1)")
    common.add_argument("--method", choices=("homotopy", "admm"), help="l1 solver (default homotopy)")
    common.add_argument("--max-iterations", dest="max_iterations", type=int)
    common.add_argument("--convergence-tol", dest="convergence_tol", type=float)
    common.add_argument("--penalty", type=float, help="ADMM coupling parameter")
    common.add_argument("--seed", type=int)
    common.add_argument("--floor-db", dest="floor_db", type=float, help="comparison floor (default -50)")
    common.add_argument("--k", type=int, help="sparsity level for 'rip' (default 2)")
    common.add_argument("--matrix", help="CSV matrix for 'rip' (default: the synthesis dictionary)")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV})")
    common.add_argument("--format", help="json, csv or json,csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="csarray", description="Sparse linear array synthesis by l1 recovery.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "synthesize": "thin a target array and write report/element/pattern files",
        "evaluate": "score a candidate element table against a target",
        "rip": "restricted isometry constant and coherence of a matrix",
        "compare": "tabulate a result against the published comparison columns",
        "repro-example1": "Chebyshev N=20, -30 dB experiment with pass/fail gates",
        "repro-example2": "29-element Taylor-Kaiser experiment with pass/fail gates",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        settings = resolve_settings(args)
        if args.command == "synthesize":
            return cmd_synthesize(settings)
        if args.command == "evaluate":
            return cmd_evaluate(settings)
        if args.command == "rip":
            return cmd_rip(settings)
        if args.command == "compare":
            return cmd_compare(settings)
        return cmd_repro(settings, "example1" if args.command.endswith("1") else "example2")
    except UsageError as exc:
        print(f"csarray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownFixtureError,) as exc:
        print(f"csarray: error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (TableReadError, OSError) as exc:
        print(f"csarray: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TableError as exc:
        print(f"csarray: error: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SynthesisError, ArrayModelError, ValueError) as exc:
        print(f"csarray: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
