"""Command-line surface: validate, check-embed, min-dim, scan.

Exit codes: 0 positive result, 1 negative, 2 invalid input metric,
3 IO/parse error, 4 undetermined, 5 internal criterion disagreement
(the two determinant engines are cross-oracles and must agree).

Every JSON output embeds the run configuration including the seed;
identical configurations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .determinants import DEFAULT_TOL_DET
from .embeddability import (
    blumenthal_basis_search,
    menger_check,
    min_embedding_dimension,
    realize_coordinates,
    schoenberg_check,
)
from .errors import MetricViolationError
from .metric import load_space
from .pretangent import scale_ladder, transfer_check
from .spaces import marked_space_from_config

EXIT_YES = 0
EXIT_NO = 1
EXIT_INVALID_METRIC = 2
EXIT_IO = 3
EXIT_UNDETERMINED = 4
EXIT_DISAGREEMENT = 5


def _emit(payload: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(payload)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_text(payload: dict, indent: str = "") -> str:
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.append(_render_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, item in enumerate(value):
                lines.append(f"{indent}{key}[{i}]:")
                lines.append(_render_text(item, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(line for line in lines if line) + ("\n" if not indent else "")


def _parse_scales(text: str) -> list[float]:
    r0, q, count = text.split(":")
    return scale_ladder(float(r0), float(q), int(count))


def _load(path: str, tol: float | None):
    try:
        return load_space(path, tol=tol), None
    except MetricViolationError as exc:
        return None, (EXIT_INVALID_METRIC, f"invalid metric: {exc} (indices {exc.indices})")
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return None, (EXIT_IO, f"cannot read space: {exc}")


def cmd_validate(args) -> int:
    space, err = _load(args.input, args.tol_metric)
    if err:
        code, msg = err
        _emit({"command": "validate", "input": args.input, "ok": False, "error": msg,
               "exit_code": code}, args.format, args.out)
        return code
    _emit({"command": "validate", "input": args.input, "ok": True, "n_points": space.n_points,
           "tol": space.tol, "exit_code": EXIT_YES}, args.format, args.out)
    return EXIT_YES


def _run_criterion(space, criterion: str, n: int, tol_det: float, seed: int):
    if criterion == "menger":
        return menger_check(space, n, tol_det=tol_det, seed=seed)
    if criterion == "schoenberg":
        return schoenberg_check(space, n, tol_det=tol_det, seed=seed)
    raise ValueError(criterion)


def cmd_check_embed(args) -> int:
    space, err = _load(args.input, args.tol_metric)
    if err:
        code, msg = err
        _emit({"command": "check-embed", "error": msg, "exit_code": code}, args.format, args.out)
        return code
    config = _config_dict(args)

    if args.criterion == "blumenthal":
        basis = blumenthal_basis_search(space, args.dim, tol_det=args.tol_det)
        verdict = "yes" if basis is not None else "no"
        payload = {"command": "check-embed", "config": config,
                   "result": {"criterion": "blumenthal", "n": args.dim, "verdict": verdict,
                              "witness_tuple": list(basis) if basis else None,
                              "witness_value": None, "residual": None}}
        code = EXIT_YES if basis is not None else EXIT_NO
        payload["exit_code"] = code
        _emit(payload, args.format, args.out)
        return code

    criteria = ["menger", "schoenberg"] if args.criterion == "all" else [args.criterion]
    verdicts = {c: _run_criterion(space, c, args.dim, args.tol_det, args.seed) for c in criteria}
    if args.criterion == "all":
        answers = {v.embeddable for v in verdicts.values() if v.embeddable != "undetermined"}
        if len(answers) > 1:
            dump = {c: v.to_json_dict() for c, v in verdicts.items()}
            _emit({"command": "check-embed", "config": config, "error": "criterion disagreement",
                   "diagnostics": dump, "exit_code": EXIT_DISAGREEMENT}, args.format, args.out)
            return EXIT_DISAGREEMENT
    primary = verdicts[criteria[0]]
    for v in verdicts.values():
        if v.embeddable == "no":
            primary = v
            break
        if v.embeddable == "undetermined":
            primary = v
    result = primary.to_json_dict()
    if args.realize and primary.embeddable == "yes":
        real = realize_coordinates(space, args.dim)
        result["residual"] = real.max_residual
        result["coordinates"] = real.coords.tolist()
        result["achieved_dim"] = real.m
    code = {"yes": EXIT_YES, "no": EXIT_NO, "undetermined": EXIT_UNDETERMINED}[primary.embeddable]
    payload = {"command": "check-embed", "config": config, "result": result, "exit_code": code}
    _emit(payload, args.format, args.out)
    return code


def cmd_min_dim(args) -> int:
    space, err = _load(args.input, args.tol_metric)
    if err:
        code, msg = err
        _emit({"command": "min-dim", "error": msg, "exit_code": code}, args.format, args.out)
        return code
    res = min_embedding_dimension(space)
    result = {"feasible": res.feasible, "m": res.dim, "base_point": res.base,
              "psd": {"psd": res.psd.psd, "rank": res.psd.rank, "mode": res.psd.mode,
                      "witness_subset": list(res.psd.witness_subset) if res.psd.witness_subset else None,
                      "witness_value": res.psd.witness_value}}
    if args.realize and res.feasible and res.dim and res.dim >= 1:
        real = realize_coordinates(space, res.dim)
        result["coordinates"] = real.coords.tolist()
        result["residual"] = real.max_residual
    code = EXIT_YES if res.feasible else EXIT_NO
    payload = {"command": "min-dim", "config": _config_dict(args), "result": result, "exit_code": code}
    _emit(payload, args.format, args.out)
    return code


def cmd_scan(args) -> int:
    try:
        cfg = json.loads(Path(args.space).read_text(encoding="utf-8"))
        space = marked_space_from_config(cfg)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _emit({"command": "scan", "error": f"cannot build space: {exc}", "exit_code": EXIT_IO},
              args.format, args.out)
        return EXIT_IO
    scales = _parse_scales(args.scales)
    report = transfer_check(space, args.dim, budget=args.samples * len(scales) * 2 * (args.dim + 2),
                            scales=scales, seed=args.seed, tol_det=args.tol_det)
    code = {"consistent-with-embeddable": EXIT_YES, "refuted": EXIT_NO,
            "inconclusive": EXIT_UNDETERMINED}[report.verdict]
    payload = {"command": "scan", "config": _config_dict(args, space=cfg),
               "result": report.to_json_dict(space.point_repr), "exit_code": code}
    if args.out and Path(args.out).suffix == "":
        # a directory: one JSON file per scan plus the aggregate
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        for scan in report.scans:
            name = f"scan_k{scan.k}_{scan.mode}.json"
            (outdir / name).write_text(
                json.dumps(scan.to_json_dict(space.point_repr), sort_keys=True, indent=2) + "\n",
                encoding="utf-8")
        ext = "json" if args.format == "json" else "txt"
        _emit(payload, args.format, str(outdir / f"transfer.{ext}"))
        return code
    _emit(payload, args.format, args.out)
    return code


def _config_dict(args, space=None) -> dict:
    cfg = {
        "command": args.command,
        "n": getattr(args, "dim", None),
        "criterion": getattr(args, "criterion", None),
        "tol_det": getattr(args, "tol_det", None),
        "tol_metric": getattr(args, "tol_metric", None),
        "scales": getattr(args, "scales", None),
        "samples": getattr(args, "samples", None),
        "depth": getattr(args, "depth", None),
        "seed": getattr(args, "seed", None),
        "format": args.format,
        "version": __version__,
    }
    if space is not None:
        cfg["space"] = space
    inp = getattr(args, "input", None) or getattr(args, "space", None)
    if inp:
        cfg["input"] = inp
    return cfg


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricembed",
                                     description="Euclidean embeddability of metric spaces "
                                                 "and infinitesimal embeddability scans")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scan=False):
        p.add_argument("--format", choices=["text", "json"], default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--tol-det", dest="tol_det", type=_positive_float, default=DEFAULT_TOL_DET)
        p.add_argument("--tol-metric", dest="tol_metric", type=_positive_float, default=None)
        p.add_argument("--seed", type=int, default=0)
        if scan:
            p.add_argument("--scales", default="0.5:0.5:12", help="ladder as r0:q:count")
            p.add_argument("--samples", type=int, default=128, help="samples per scale rung")
            p.add_argument("--depth", type=int, default=64)

    p = sub.add_parser("validate", help="validate a distance matrix file")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check-embed", help="decide isometric embeddability into E^n")
    p.add_argument("input")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--criterion", choices=["menger", "schoenberg", "blumenthal", "all"], default="all")
    p.add_argument("--realize", action="store_true", help="emit coordinates on a yes verdict")
    common(p)
    p.set_defaults(func=cmd_check_embed)

    p = sub.add_parser("min-dim", help="minimal embedding dimension via PSD rank")
    p.add_argument("input")
    p.add_argument("--realize", action="store_true")
    common(p)
    p.set_defaults(func=cmd_min_dim)

    p = sub.add_parser("scan", help="transfer-principle scans on a configured marked space")
    p.add_argument("space", help="space config JSON file")
    p.add_argument("--dim", type=int, required=True)
    common(p, scan=True)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
