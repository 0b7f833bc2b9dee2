"""Command-line front end.

Three subcommands:

* ``classify``        boundary and global classification of the configured
                      spec (and of each sequence member when one is present)
* ``mosco``           run the configured convergence experiment; write
                      ``errors.csv`` and ``report.md``
* ``paper-examples``  run the five packaged scenarios and compare expected
                      against observed classifications and verdicts

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure.  Output files are byte-identical across repeated runs.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .config import build_limit_spec, build_scenario, load_config
from .convergence import (CSV_HEADER, ConvergenceReport, Verdict, run_convergence)
from .errors import (AdmissibilityError, ConfigError, DegenerateGrid, DirformError,
                     NotConverged, SingularSystem)
from .examples import EXAMPLE_NAMES, classify_example, paper_example
from .spaces import DirichletSpaceSpec, classify_global

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_NUMERICAL = (NotConverged, AdmissibilityError, SingularSystem, DegenerateGrid)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except DirformError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirform",
        description="1-d Dirichlet forms in scale/speed form: classification "
                    "and resolvent-convergence experiments")
    sub = parser.add_subparsers(required=True)

    p = sub.add_parser("classify", help="classify the configured spec")
    p.add_argument("--config", required=True)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("mosco", help="run the configured convergence experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(handler=_cmd_mosco)

    p = sub.add_parser("paper-examples", help="run the packaged scenarios")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(handler=_cmd_paper_examples)
    return parser


# ---------------------------------------------------------------------------

def _classification_lines(label: str, spec: DirichletSpaceSpec) -> list[str]:
    cls = classify_global(spec)
    lines = [f"{label}:"]
    for side, b in (("lower", cls.lower), ("upper", cls.upper)):
        feller = "inf" if math.isinf(b.feller_value) else repr(b.feller_value)
        lines.append(
            f"  {side}: approachable={_yn(b.s_approachable)} "
            f"regular={_yn(b.s_regular)} finite_time={_yn(b.finite_time_approachable)} "
            f"feller={feller}")
    cons = {True: "conservative", False: "non-conservative", None: "unclassified"}
    lines.append(f"  global: {cls.transience.value}, {cons[cls.conservative]}")
    return lines


def _yn(v: bool) -> str:
    return "yes" if v else "no"


def _cmd_classify(args) -> int:
    cfg = load_config(args.config)
    spec = build_limit_spec(cfg)
    for line in _classification_lines("limit", spec):
        print(line)
    if cfg.sequence is not None:
        scn = build_scenario(cfg)
        for n in cfg.sequence.indices:
            member = DirichletSpaceSpec(scn.set_for(n).scale(), scn.speed,
                                        scn.bc_sequence)
            for line in _classification_lines(f"n={n}", member):
                print(line)
    return EXIT_OK


def _cmd_mosco(args) -> int:
    cfg = load_config(args.config)
    scn = build_scenario(cfg, name=Path(args.config).stem)
    report = run_convergence(scn, threads=max(1, args.threads))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "errors.csv", report)
    _write_report(out / "report.md", report)
    print(f"verdict: {report.verdict.value}")
    return EXIT_OK


def _cmd_paper_examples(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    all_match = True
    for name in EXAMPLE_NAMES:
        ex = paper_example(name)
        try:
            outcomes = classify_example(ex)
            report = run_convergence(ex.scenario, threads=max(1, args.threads))
        except _NUMERICAL as exc:
            print(f"numerical failure in scenario {name}: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        sub = out / name
        sub.mkdir(parents=True, exist_ok=True)
        _write_csv(sub / "errors.csv", report)
        _write_report(sub / "report.md", report)
        cls_ok = all(o.matches for o in outcomes)
        verdict_ok = report.verdict is ex.expected_verdict
        if ex.expected_f_column is not None:
            verdict_ok &= _column_verdict(report, "F") is ex.expected_f_column
        if ex.expected_f0_column is not None:
            verdict_ok &= _column_verdict(report, "F0") is ex.expected_f0_column
        corollary_ok = (ex.expected_corollary is None
                        or report.corollary is ex.expected_corollary)
        ok = cls_ok and verdict_ok and corollary_ok
        all_match &= ok
        rows.append((name, ex.expected_verdict.value, report.verdict.value,
                     _yn(cls_ok), _yn(ok)))
        print(f"{name}: verdict={report.verdict.value} "
              f"classifications={'match' if cls_ok else 'MISMATCH'}")
    _write_summary(out / "summary.md", rows)
    return EXIT_OK if all_match else EXIT_NUMERICAL


def _column_verdict(report: ConvergenceReport, column: str) -> Verdict:
    verdicts = report.column_verdicts(column)
    if all(v is Verdict.CONVERGENCE_OBSERVED for v in verdicts):
        return Verdict.CONVERGENCE_OBSERVED
    if all(v is Verdict.NO_CONVERGENCE for v in verdicts):
        return Verdict.NO_CONVERGENCE
    return Verdict.INCONCLUSIVE


# ---------------------------------------------------------------------------
# writers (deterministic: repr for floats, '\n' endings, UTF-8)

def write_grid_function(path, nodes, values) -> None:
    """Serialize a grid function as two CSV columns (x, value)."""
    lines = ["x,value"]
    for x, v in zip(nodes, values):
        lines.append(f"{_csv_cell(float(x))},{_csv_cell(float(v))}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_csv(path: Path, report: ConvergenceReport) -> None:
    lines = [",".join(CSV_HEADER)]
    for row in report.csv_rows():
        lines.append(",".join(_csv_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_report(path: Path, report: ConvergenceReport) -> None:
    lines = [f"# Convergence report: {report.scenario}", ""]
    lines.append(f"- verdict: **{report.verdict.value}**")
    lines.append(f"- nesting check: {'passed' if report.nesting.ok else 'FAILED: ' + report.nesting.detail}")
    if report.corollary is not None:
        lines.append(f"- sufficient-condition check: {report.corollary.value}")
    lines.append(f"- grid: N={report.n_nodes}, R={repr(report.radius)}, "
                 f"merged cells={report.merged_cells}")
    lines.append(f"- tolerance: {repr(report.tolerance)}")
    lines.append("")
    lines.append("| alpha | test fn | column | final error | monotone tail | verdict |")
    lines.append("|---|---|---|---|---|---|")
    for s in report.series:
        lines.append(f"| {repr(s.alpha)} | {s.test_fn} | {s.column} | "
                     f"{repr(s.final_error)} | {_yn(s.monotone_tail)} | {s.verdict.value} |")
    lines.append("")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_summary(path: Path, rows) -> None:
    lines = ["# Packaged scenarios: expected vs observed", ""]
    lines.append("| scenario | expected verdict | observed verdict | classifications | all checks |")
    lines.append("|---|---|---|---|---|")
    for name, exp, obs, cls_ok, ok in rows:
        lines.append(f"| {name} | {exp} | {obs} | {cls_ok} | {ok} |")
    lines.append("")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


if __name__ == "__main__":
    sys.exit(main())
