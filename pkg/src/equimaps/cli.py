"""Command-line front end.

Exit codes: 0 success (any verdict), 1 invalid input or refused synthesis,
2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import cycle
from pathlib import Path
from typing import Any

from .bounds import decide_map_existence, infinite_witness, refined_bounds
from .exactalg import AlgebraInputError
from .reps import (
    P_TORUS,
    InputError,
    Representation,
    complex_dim,
    d,
    isotropy_subgroups,
    line_partition,
    parse_representation,
    real_dim,
    representation_from_doc,
    GroupDescriptor,
    subgroup_to_doc,
)
from .synth import MapRefused, SynthesizedMap, synthesize_equivariant, synthesize_partial
from .verify import FAIL, VerificationConfig, equivariance_residuals, verify_map

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def _load_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def _rep_summary(R: Representation) -> dict[str, Any]:
    return {
        "real_dim": real_dim(R),
        "complex_dim": None if R.group.is_real else complex_dim(R),
        "d": d(R),
        "weights": R.to_dict()["weights"],
    }


def analyze_doc(V: Representation, W: Representation):
    group = V.group
    report = refined_bounds(V, W)
    doc: dict[str, Any] = {
        "group": group.to_dict(),
        "V": _rep_summary(V),
        "W": _rep_summary(W),
    }
    if group.kind == P_TORUS:
        doc["lines"] = [
            {"line": list(ln.alpha), "slots": list(ln.slots), "real_dim": ln.real_dim}
            for ln in line_partition(V).lines
        ]
    doc["isotropy_subgroups"] = [subgroup_to_doc(H) for H in isotropy_subgroups(V)]
    doc["bounds"] = report.to_dict()
    notes = []
    if report.parity_refined:
        notes.append(f"dim V > dim W with complex structure: bound {report.global_bound} is odd and >= 1")
    if report.global_bound >= 0:
        notes.append("Z_f nonempty for every equivariant f: no map S(V) -> S(W)")
    for e in report.per_subgroup:
        if e.bound >= 0 and e.subgroup.rank > 0:
            notes.append(f"Z_f meets S(V^H) for H = {e.subgroup.to_list()} (bound {e.bound})")
    doc["notes"] = notes
    return doc, report


# --- output formatting ------------------------------------------------------


def _table(rows: list[dict[str, Any]], cols: list[str]) -> str:
    cells = [[str(r.get(c, "")) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(x[i]) for x in cells]) for i, c in enumerate(cols)]
    line = lambda vals: "  ".join(v.ljust(w) for v, w in zip(vals, widths))
    return "\n".join([line(cols), line(["-" * w for w in widths])] + [line(x) for x in cells])


def _csv(rows: list[dict[str, Any]], cols: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in cols})
    return buf.getvalue()


def _bound_rows(doc) -> list[dict[str, Any]]:
    return [
        {
            "subgroup": json.dumps(e["subgroup"].get("basis", e["subgroup"].get("cocharacters"))),
            "dim_R_VH": e["dim_R_VH"],
            "dim_R_WH": e["dim_R_WH"],
            "bound": e["bound"],
        }
        for e in doc["bounds"]["per_subgroup"]
    ]


def _ledger_rows(doc) -> list[dict[str, Any]]:
    return [
        {"line": json.dumps(r["line"]), "dim_R_VH": r["dim_R_VH"], "dim_R_WH": r["dim_R_WH"],
         "satisfied": r["satisfied"]}
        for r in doc["ledger"]
    ]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(kind: str, doc: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if kind == "analyze":
        rows, cols = _bound_rows(doc), ["subgroup", "dim_R_VH", "dim_R_WH", "bound"]
        if fmt == "csv":
            return _csv(rows, cols)
        head = (
            f"dim_R V = {doc['V']['real_dim']}, dim_R W = {doc['W']['real_dim']}\n"
            f"global bound = {doc['bounds']['global_bound']}, best bound = {doc['bounds']['best_bound']}\n"
        )
        notes = "".join(f"* {n}\n" for n in doc["notes"])
        return head + _table(rows, cols) + "\n" + notes
    if kind == "decide":
        rows, cols = _ledger_rows(doc), ["line", "dim_R_VH", "dim_R_WH", "satisfied"]
        if fmt == "csv":
            return _csv(rows, cols)
        return f"verdict: {doc['verdict']}\n" + (_table(rows, cols) + "\n" if rows else "")
    if kind == "verify":
        flat = {
            "status": doc["status"],
            "residual": doc["equivariance_residual"],
            "norm_deviation": doc["norm_deviation"],
            "bound": doc["bound"]["bound"],
            "analytic_dim": doc["bound"]["analytic_zero_set_dim"],
            "numerical_dim": (doc["bound"]["numerical"] or {}).get("estimated_dim"),
            "zero_samples": (doc["bound"]["numerical"] or {}).get("n_zero_samples"),
        }
        cols = list(flat)
        return _csv([flat], cols) if fmt == "csv" else _table([flat], cols) + "\n"
    if kind == "witness":
        rows, cols = doc["witnesses"], ["target_dim", "real_dim", "slots", "bound"]
        return _csv(rows, cols) if fmt == "csv" else _table(rows, cols) + "\n"
    raise ValueError(kind)


# --- subcommands -------------------------------------------------------------


def cmd_analyze(args) -> int:
    _, V, W = parse_representation(_load_json(args.problem))
    doc, report = analyze_doc(V, W)
    _emit(_render("analyze", doc, args.format), args.output)
    if args.figures:
        from .plots import plot_bounds

        Path(args.figures).mkdir(parents=True, exist_ok=True)
        plot_bounds(report, Path(args.figures) / "bounds.png")
    return EXIT_OK


def cmd_decide(args) -> int:
    _, V, W = parse_representation(_load_json(args.problem))
    doc = decide_map_existence(V, W).to_dict()
    _emit(_render("decide", doc, args.format), args.output)
    return EXIT_OK


def cmd_synthesize(args) -> int:
    _, V, W = parse_representation(_load_json(args.problem))
    f = synthesize_partial(V, W) if args.partial else synthesize_equivariant(V, W)
    _emit(f.dumps(), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    _, V, W = parse_representation(_load_json(args.problem))
    f = SynthesizedMap.from_dict(_load_json(args.map))
    if f.source != V or f.target != W:
        raise InputError("map source/target do not match the problem file")
    cfg = VerificationConfig(trials=args.trials, seed=args.seed, zero_starts=args.zero_starts,
                             workers=args.workers)
    report = verify_map(V, W, f, cfg)
    doc = report.to_dict()
    _emit(_render("verify", doc, args.format), args.output)
    if args.figures:
        from .plots import plot_verification

        Path(args.figures).mkdir(parents=True, exist_ok=True)
        spectra = report.bound.estimate.singular_values if report.bound.estimate else []
        plot_verification(equivariance_residuals(f, cfg), spectra,
                          Path(args.figures) / "verification.png", tol=cfg.equiv_tol)
    return EXIT_VERIFY if report.status == FAIL else EXIT_OK


def load_stream(doc: dict[str, Any]):
    """``(W, weight iterator)`` from a stream document.

    ``repeat`` is ``"cycle"`` (the block repeats forever) or ``"none"``.
    """
    try:
        group = GroupDescriptor.from_dict(doc["group"])
        W = representation_from_doc(group, doc["W"], "W")
        block = [group.normalize_weight(w) for w in doc["stream"]["block"]]
        rule = doc["stream"].get("repeat", "cycle")
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed stream document: {e}") from None
    if not block:
        raise InputError("stream block is empty")
    if rule == "cycle":
        return W, cycle(block)
    if rule == "none":
        return W, iter(block)
    raise InputError(f"unknown repetition rule {rule!r}")


def cmd_witness(args) -> int:
    doc = _load_json(args.stream)
    rows = []
    for t in args.target_dim:
        W, stream = load_stream(doc)
        Vd, bound = infinite_witness(stream, W, t)
        rows.append({"target_dim": t, "real_dim": real_dim(Vd), "slots": Vd.n_slots,
                     "bound": bound, "V": Vd.to_dict()})
    out = {"group": doc["group"], "dim_R_W": real_dim(W), "witnesses": rows}
    _emit(_render("witness", out, args.format), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equimaps",
        description="Existence, synthesis and zero-set bounds for equivariant maps of representation spheres.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "table", "csv")):
        p.add_argument("--format", choices=formats, default="json")
        p.add_argument("-o", "--output", help="write the document here instead of stdout")

    p = sub.add_parser("analyze", help="dimensions, lines, isotropy subgroups and bounds")
    p.add_argument("problem")
    common(p)
    p.add_argument("--figures", metavar="DIR", help="also write bounds.png into DIR")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decide", help="decide whether S(V) -> S(W) exists")
    p.add_argument("problem")
    common(p)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("synthesize", help="write an explicit equivariant map")
    p.add_argument("problem")
    p.add_argument("-o", "--output")
    p.add_argument("--partial", action="store_true",
                   help="build the join map with zero blocks even when no map to S(W) exists")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="numerically verify a map document")
    p.add_argument("problem")
    p.add_argument("map")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--zero-starts", type=int, default=20000)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.add_argument("--figures", metavar="DIR", help="also write verification.png into DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="finite sub-representations of a weight stream")
    p.add_argument("stream")
    p.add_argument("--target-dim", type=int, nargs="+", required=True)
    common(p)
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MapRefused as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, AlgebraInputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
