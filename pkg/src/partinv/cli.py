"""Command line front end: classification reports, model files, verification.

Subcommands
    classify              characteristics and types of one subalgebra
    hierarchy             two-step reduction structure over a family
    invariants            degree-bounded invariant basis of a subalgebra
    verify-shallow-water  numeric end-to-end check of the reduced submodel
    export-model          dump a builtin model as a model file

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 tolerance
failure.  Output is deterministic byte-for-byte for fixed inputs, seed and
version; machine format is JSON with sorted keys and a schema_version.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .classify import (
    ClassifyError,
    build_hierarchy,
    classify_subalgebra,
)
from .exactlinalg import DEFAULT_SEED
from .expr import ExpressionError
from .invariants import invariant_basis
from .liealg import LieAlgebraError, parse_span
from .models import MODEL_NAMES, builtin_model, catalog, catalog_keys
from .swsubmodel import SubmodelError, preset_names, verify
from .vfield import ModelError, SymmetryModel, VarSpace, VectorField

__all__ = [
    "main",
    "load_model_file",
    "model_to_dict",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_TOLERANCE = 3

_INPUT_ERRORS = (
    ExpressionError,
    ModelError,
    LieAlgebraError,
    ClassifyError,
    SubmodelError,
    OSError,
    json.JSONDecodeError,
)


# -- model files ----------------------------------------------------------


def model_to_dict(model: SymmetryModel) -> dict:
    gens = []
    for X in model.basis:
        gens.append(
            {
                "name": X.name,
                "xi": {v: str(e) for v, e in X.xi.items()},
                "eta": {v: str(e) for v, e in X.eta.items()},
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "name": model.name,
        "independent": list(model.space.independent),
        "dependent": list(model.space.dependent),
        "generators": gens,
    }


def model_from_dict(doc: dict, name: str = "") -> SymmetryModel:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ModelError(f"unsupported model schema_version {version!r}")
    for key in ("independent", "dependent", "generators"):
        if key not in doc:
            raise ModelError(f"model file missing key {key!r}")
    space = VarSpace(tuple(doc["independent"]), tuple(doc["dependent"]))
    fields = []
    for g in doc["generators"]:
        if "name" not in g:
            raise ModelError("every generator entry needs a name")
        fields.append(
            VectorField.from_strings(
                space, g["name"], g.get("xi", {}), g.get("eta", {})
            )
        )
    return SymmetryModel(
        doc["independent"], doc["dependent"], fields, name=doc.get("name") or name
    )


def load_model_file(path: str) -> SymmetryModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return model_from_dict(doc, name=Path(path).stem)


def resolve_model(spec: str) -> SymmetryModel:
    if spec in MODEL_NAMES:
        return builtin_model(spec)
    if Path(spec).exists():
        return load_model_file(spec)
    raise ModelError(
        f"unknown model {spec!r}: not a builtin ({', '.join(MODEL_NAMES)}) "
        "and no such file"
    )


# -- report plumbing ------------------------------------------------------


def _parse_param_flags(pairs) -> dict:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ModelError(f"--param expects name=value, got {item!r}")
        try:
            out[name] = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"--param {name}: {value!r} is not a rational") from None
    return out


def _envelope(command: str, args, result: dict, bounds: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "partinv", "version": __version__},
        "command": command,
        "seed": getattr(args, "seed", DEFAULT_SEED),
        "result": result,
    }
    if getattr(args, "model", None):
        doc["model"] = args.model
    if bounds:
        doc["bounds"] = bounds
    params = _parse_param_flags(getattr(args, "param", None))
    if params:
        doc["params"] = {k: str(v) for k, v in sorted(params.items())}
    return doc


def _print_machine(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _type_str(t: dict) -> str:
    tag = " regular" if t["regular"] else ""
    return f"(rho={t['rho']}, delta={t['delta']}){tag}"


def _print_classification(rep: dict, indent: str = "") -> None:
    ch = rep["characteristics"]
    w = sys.stdout.write
    w(f"{indent}subalgebra: {rep['span']}\n")
    w(
        f"{indent}  dim={ch['dim']} rank_xi={ch['rank_xi']} "
        f"rank_xieta={ch['rank_xieta']}\n"
    )
    w(
        f"{indent}  invariants t={ch['invariants']} sigma={ch['sigma']} "
        f"mu={ch['mu']}\n"
    )
    if rep["admits_invariant"]:
        if rep["types"]:
            w(f"{indent}  admits invariant solution (rank criterion)\n")
        else:
            w(f"{indent}  admits invariant solution; no PIS types\n")
    else:
        w(f"{indent}  does not admit invariant solutions (rank criterion)\n")
    for t in rep["types"]:
        w(f"{indent}  type {_type_str(t)}\n")
    dec = rep.get("decomposition")
    if dec:
        if dec["found"]:
            w(f"{indent}  decomposition: {dec['verdict']} via ideal {dec['ideal']}\n")
        else:
            w(f"{indent}  decomposition: {dec['verdict']}\n")
        w(
            f"{indent}    candidates checked: {dec['candidates_checked']} "
            f"(coeff_bound {dec['coeff_bound']})\n"
        )
    for note in rep.get("notes", ()):
        w(f"{indent}  note: {note}\n")


# -- subcommands ----------------------------------------------------------


def cmd_classify(args) -> int:
    model = resolve_model(args.model)
    sub = parse_span(model, args.sub)
    report = classify_subalgebra(sub, seed=args.seed, witness_bound=args.coeff_bound)
    doc = _envelope(
        "classify", args, report.as_dict(), bounds={"coeff_bound": args.coeff_bound}
    )
    if args.format == "machine":
        _print_machine(doc)
    else:
        sys.stdout.write(f"model: {model.name} (dim {model.dim})\n")
        _print_classification(doc["result"])
    return EXIT_OK


def _load_spans(args, model: SymmetryModel | None):
    """Subalgebra list from a catalog key or a span-per-line text file."""
    source = args.subs_file
    if source in catalog_keys():
        entry = catalog(source, params=_parse_param_flags(args.param) or None)
        return entry.model, list(entry.subalgebras), entry.note
    if model is None:
        raise ModelError("--model is required when --subs-file is a file path")
    path = Path(source)
    if not path.exists():
        raise ModelError(
            f"{source!r} is neither a catalog key ({', '.join(catalog_keys())}) "
            "nor a file"
        )
    subs = []
    with open(path, encoding="utf-8") as fh:
        for k, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            subs.append(parse_span(model, line, name=f"line{k}"))
    return model, subs, ""


def cmd_hierarchy(args) -> int:
    model = resolve_model(args.model) if args.model else None
    model, subs, note = _load_spans(args, model)
    hier = build_hierarchy(subs, coeff_bound=args.coeff_bound, seed=args.seed)
    result = hier.as_dict()
    if note:
        result["note"] = note
    doc = _envelope(
        "hierarchy", args, result, bounds={"coeff_bound": args.coeff_bound}
    )
    if args.format == "machine":
        _print_machine(doc)
        return EXIT_OK
    sys.stdout.write(f"model: {model.name} (dim {model.dim})\n")
    sys.stdout.write(f"nodes: {len(subs)}\n")
    for i, rep in enumerate(result["nodes"]):
        sys.stdout.write(f"[{i}]\n")
        _print_classification(rep, indent="  ")
    if result["edges"]:
        sys.stdout.write("edges (reduction through an ideal):\n")
        for a, b in result["edges"]:
            sys.stdout.write(f"  [{a}] -> [{b}]\n")
    else:
        sys.stdout.write("edges: none\n")
    roots = ", ".join(f"[{i}]" for i in result["indecomposable"])
    sys.stdout.write(
        f"indecomposable within coeff_bound {args.coeff_bound}: {roots or 'none'}\n"
    )
    if note:
        sys.stdout.write(f"note: {note}\n")
    return EXIT_OK


def cmd_invariants(args) -> int:
    model = resolve_model(args.model)
    sub = parse_span(model, args.sub)
    basis = invariant_basis(
        sub, max_degree=args.max_degree, seed=args.seed, rational=args.rational
    )
    result = {
        "span": sub.describe(),
        "max_degree": args.max_degree,
        "rational": args.rational,
        "expected": basis.t,
        "found": len(basis.invariants),
        "complete": basis.complete,
        "invariants": [str(inv.expr) for inv in basis.invariants],
    }
    doc = _envelope(
        "invariants", args, result, bounds={"max_degree": args.max_degree}
    )
    if args.format == "machine":
        _print_machine(doc)
        return EXIT_OK
    sys.stdout.write(f"model: {model.name} (dim {model.dim})\n")
    sys.stdout.write(f"subalgebra: {result['span']}\n")
    sys.stdout.write(
        f"invariants found: {result['found']} of {result['expected']} "
        f"(degree bound {args.max_degree})\n"
    )
    for text in result["invariants"]:
        sys.stdout.write(f"  {text}\n")
    if not result["complete"]:
        sys.stdout.write(
            "incomplete basis within the degree bound; raise --max-degree\n"
        )
    return EXIT_OK


def cmd_verify_shallow_water(args) -> int:
    report = verify(args.preset, h_fd=args.h_fd)
    doc = _envelope("verify-shallow-water", args, report.as_dict())
    if args.format == "machine":
        _print_machine(doc)
    else:
        w = sys.stdout.write
        w(f"preset: {args.preset}\n")
        traj = report.trajectory
        w(
            f"trajectory: {traj.nodes} nodes, mu in "
            f"[{traj.mu[0]:.6f}, {traj.mu[-1]:.6f}], lam in "
            f"[{traj.lam[0]:.6f}, {traj.lam[-1]:.6f}]\n"
        )
        w(f"step-halving agreement: {report.step_halving_error:.3e}\n")
        for name, chk in report.checks.items():
            tol = chk["tolerance"]
            if isinstance(tol, list):
                bound = f"in [{tol[0]}, {tol[1]}]"
            else:
                bound = f"<= {tol}"
            status = "PASS" if chk["passed"] else "FAIL"
            w(f"{status} {name}: {chk['value']:.6e} (required {bound})\n")
        w("ok\n" if report.ok else "verification failed\n")
    return EXIT_OK if report.ok else EXIT_TOLERANCE


def cmd_export_model(args) -> int:
    model = builtin_model(args.model)
    doc = model_to_dict(model)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        sys.stdout.write(f"wrote {args.out}\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def _add_common(sp, model=True):
    if model:
        sp.add_argument(
            "--model",
            required=False,
            help=f"builtin name ({', '.join(MODEL_NAMES)}) or model file path",
        )
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="rank sampling seed")
    sp.add_argument(
        "--format",
        choices=("human", "machine"),
        default="human",
        help="human text or deterministic JSON",
    )
    sp.add_argument(
        "--param",
        action="append",
        metavar="NAME=VALUE",
        help="rational parameter for catalog families (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="partinv",
        description=(
            "Classification of invariant and partially invariant solutions "
            "of PDE symmetry algebras, plus numeric verification of the "
            "reduced shallow-water submodel."
        ),
    )
    p.add_argument("--version", action="version", version=f"partinv {__version__}")
    subs = p.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("classify", help="classify one subalgebra")
    _add_common(sp)
    sp.add_argument("--sub", required=True, help='span string, e.g. "X1, X4"')
    sp.add_argument(
        "--coeff-bound",
        type=int,
        default=2,
        help="integer coefficient bound for the decomposition witness search",
    )
    sp.set_defaults(func=cmd_classify)

    sp = subs.add_parser("hierarchy", help="two-step structure over a family")
    _add_common(sp)
    sp.add_argument(
        "--subs-file",
        required=True,
        help="catalog key or file with one span per line",
    )
    sp.add_argument("--coeff-bound", type=int, default=2)
    sp.set_defaults(func=cmd_hierarchy)

    sp = subs.add_parser("invariants", help="degree-bounded invariant basis")
    _add_common(sp)
    sp.add_argument("--sub", required=True)
    sp.add_argument("--max-degree", type=int, default=2)
    sp.add_argument(
        "--rational",
        action="store_true",
        help="also search rational invariants with denominators from the field",
    )
    sp.set_defaults(func=cmd_invariants)

    sp = subs.add_parser(
        "verify-shallow-water", help="numeric verification of the reduced submodel"
    )
    _add_common(sp, model=False)
    sp.add_argument("--preset", choices=preset_names(), default="default")
    sp.add_argument(
        "--h-fd", type=float, default=1e-4, help="finite-difference spacing"
    )
    sp.set_defaults(func=cmd_verify_shallow_water)

    sp = subs.add_parser("export-model", help="write a builtin model file")
    sp.add_argument("--model", required=True, choices=MODEL_NAMES)
    sp.add_argument("--out", help="output path (stdout when omitted)")
    sp.set_defaults(func=cmd_export_model)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "model", None) is None and args.command in (
        "classify",
        "invariants",
    ):
        parser.error(f"{args.command} requires --model")
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - the CLI boundary
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
