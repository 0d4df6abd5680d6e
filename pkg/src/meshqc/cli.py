"""Command-line surface: metrics, compare, validate, replay, serve.

Exit codes are uniform across subcommands: 0 success / quality pass,
1 quality fail (or validation failure, or an out-of-order replay log),
2 usage, I/O, or parse errors.

Human output prints 6 significant digits; --json output carries full
precision with a fixed key set and order so other tools can diff it.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .compare import DEFAULT_THRESHOLD, ComparisonReport, compare_metrics
from .errors import (
    InvalidSceneError,
    InvalidThresholdError,
    MeshQcError,
    OutOfOrderEventError,
    SessionEndedError,
)
from .meshio import FORMATS, OBJ, detect_format, load_mesh, parse_mesh
from .mesh import validate_mesh
from .metrics import MacroMetrics, compute_macro_metrics
from .scene import load_scene_dir
from .session import read_session_log, replay, session_report_record

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_ERROR
    except (MeshQcError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshqc",
        description="Macro-level mesh QC and replayable virtual assembly sessions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="print the seven macro parameters of a mesh")
    p.add_argument("mesh", help="mesh file (binary/ASCII STL or OBJ)")
    p.add_argument("--format", default="auto", choices=("auto",) + FORMATS + ("stl", "obj"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("compare", help="compare reference vs scanned part")
    p.add_argument("bim", help="reference mesh file or metrics record (.json)")
    p.add_argument("scanned", help="scanned mesh file or metrics record (.json)")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("validate", help="check mesh invariants")
    p.add_argument("mesh")
    p.add_argument("--format", default="auto", choices=("auto",) + FORMATS + ("stl", "obj"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("replay", help="replay a session log against a scene")
    p.add_argument("scene_dir", help="scene directory (scene.json + assets/)")
    p.add_argument("log", help="session event log (one JSON event per line)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("serve", help="run the session service for a scene directory")
    p.add_argument("scene_dir")
    p.add_argument("--bind", default="127.0.0.1:8000", help="host:port (default %(default)s)")
    p.set_defaults(func=_cmd_serve)

    return parser


def _resolve_format(path: str, fmt: str) -> str:
    if fmt == "stl":
        return "auto-stl"
    if fmt == "obj":
        return OBJ
    return fmt


def _load(path: str, fmt: str):
    fmt = _resolve_format(path, fmt)
    if fmt == "auto-stl":
        # honor the user's claim that it is STL, sniff only the flavor
        data = Path(path).read_bytes()
        return parse_mesh(data, detect_format(data, "forced.stl"))
    return load_mesh(path, fmt)


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def _cmd_metrics(args) -> int:
    mesh = _load(args.mesh, args.format)
    metrics = compute_macro_metrics(mesh)
    if args.json:
        _print_json(metrics.to_record())
        return EXIT_OK
    label = mesh.name or args.mesh
    print(f"mesh: {label} ({mesh.face_count} faces, {mesh.vertex_count} vertices)")
    print(f"total surface   {metrics.total_surface_mm2:.6g} mm^2")
    for axis, value in zip("XYZ", metrics.dimension_mm):
        print(f"dimension {axis}     {value:.6g} mm")
    for axis, value in zip("XYZ", metrics.aggregated_normals):
        print(f"normals {axis}       {value:.6g}")
    return EXIT_OK


def _metrics_from_arg(path: str) -> MacroMetrics:
    """A .json file is a metrics record; anything else is a mesh file."""
    if Path(path).suffix.lower() == ".json":
        record = json.loads(Path(path).read_text("utf-8"))
        return MacroMetrics.from_record(record)
    return compute_macro_metrics(load_mesh(path))


def _cmd_compare(args) -> int:
    try:
        bim = _metrics_from_arg(args.bim)
        scanned = _metrics_from_arg(args.scanned)
        report = compare_metrics(bim, scanned, args.threshold)
    except InvalidThresholdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        _print_json(report.to_record())
    else:
        _print_report(report)
    return EXIT_OK if report.overall_pass else EXIT_FAIL


def _print_report(report: ComparisonReport) -> None:
    print(f"{'parameter':<15}{'bim':>14}{'scanned':>14}{'rel diff':>12}  verdict")
    for entry in report.parameters:
        verdict = "pass" if entry.passed else "FAIL"
        print(
            f"{entry.parameter:<15}{entry.bim_value:>14.6g}{entry.scanned_value:>14.6g}"
            f"{entry.relative_difference:>12.6g}  {verdict}"
        )
    print(f"threshold {report.threshold:.6g}")
    print(f"max difference {report.max_difference:.6g} at {report.worst_parameter}")
    print(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")


def _cmd_validate(args) -> int:
    mesh = _load(args.mesh, args.format)
    result = validate_mesh(mesh)
    if args.json:
        _print_json(result.to_record())
    else:
        print(f"vertices {result.vertex_count}, faces {result.face_count}")
        print(f"degenerate faces: {result.degenerate_faces}")
        print(f"out-of-range faces: {result.out_of_range_faces}")
        print(f"non-finite vertices: {result.non_finite_vertices}")
        print(f"result: {'ok' if result.ok else 'NOT OK'}")
    return EXIT_OK if result.ok else EXIT_FAIL


def _cmd_replay(args) -> int:
    loaded = load_scene_dir(args.scene_dir)
    events = read_session_log(args.log)
    try:
        session = replay(loaded.scene, events)
    except (OutOfOrderEventError, SessionEndedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report = session_report_record(session)
    if args.json:
        _print_json(report)
        return EXIT_OK
    print(f"scene {report['scene_id']}: {len(events)} events, status {report['status']}")
    for part in report["parts"]:
        mark = "resolved" if part["resolved_correctly"] else "unresolved"
        print(f"  {part['part_id']}: {part['state']} ({mark})")
    score = report["score"]
    if score is not None:
        print(
            f"accuracy {score['accuracy']:.6g}, elapsed {score['elapsed_ms']} ms "
            f"(par {score['par_time_ms']} ms), grade {score['grade']:.6g}"
        )
    return EXIT_OK


def _cmd_serve(args) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: --bind must be host:port, got {args.bind!r}", file=sys.stderr)
        return EXIT_ERROR
    try:
        from .service import serve
        serve(args.scene_dir, host, int(port_text))
    except InvalidSceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
