"""Command-line front end.

Exit status: 0 valid / found / constructed, 1 validation failed or search
exhausted, 2 malformed input, refused input or cap exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable

from . import core, io
from .actions import semidirect_product, validate_derived_action
from .core import validate_omega_group
from .errors import InternalTheoremViolation, XmodkitError
from .homotopy import (are_homotopic, concat_derivations, enumerate_derivations,
                       invert_derivation, target_maps, validate_derivation)
from .instances import FUNCTORS, specialized_derivation_check, transport_homotopy
from .report import ValidationReport
from .simplicial import (moore_complex, validate_simplicial, validate_simplicial_homotopy,
                         validate_simplicial_map)
from .transfer import nerve, x1_object, zeta
from .xmod import validate_crossed_module, validate_xmod_morphism

VERBS = ("check", "semidirect", "homotopy-find", "homotopy-compose", "enumerate-derivations",
         "x1", "nerve", "transfer", "moore", "instance-transport")

# derivation laws as printed for groups, which are written multiplicatively
MULTIPLICATIVE = {
    "additive law": "s(gh) = (f0(h^-1).s(g)) s(h)",
    "s(0) = 0": "s(1) = 1",
    "s(-g) = f0(g).(-s(g))": "s(g^-1) = f0(g).(s(g)^-1)",
    "s(g+h-g) formula": "s(g h g^-1) formula",
    "group derivation formula": "s(gh) = (f0(h^-1).s(g)) s(h)",
}


class Outcome:
    def __init__(self, command: str, inputs: list[str]):
        self.command = command
        self.inputs = inputs
        self.report = ValidationReport()
        self.outputs: list = []
        self.found = True
        self.error: str | None = None
        self.multiplicative = False

    @property
    def ok(self) -> bool:
        return self.error is None and self.found and self.report.ok

    def document(self) -> dict:
        doc = {"command": self.command, "inputs": self.inputs, "ok": self.ok,
               "checks": list(self.report.checks),
               "violations": [v.to_dict() for v in self.report.violations],
               "not_checked": list(self.report.not_checked),
               "outputs": self.outputs}
        if self.error is not None:
            doc["error"] = self.error
        return doc

    def exit_code(self) -> int:
        if self.error is not None:
            return 2
        return 0 if self.ok else 1


def _law(name: str, multiplicative: bool) -> str:
    return MULTIPLICATIVE.get(name, name) if multiplicative else name


def report_render(doc: dict, multiplicative: bool = False) -> str:
    """One PASS/FAIL line per check (first witness on failures), a summary
    line, then one line per output or ``NO OUTPUT``."""
    lines = [f"command: {doc['command']} {' '.join(doc['inputs'])}".rstrip()]
    if multiplicative:
        lines.append("notation: multiplicative (gh for g + h, g^-1 for -g)")
    first = {}
    for v in doc["violations"]:
        first.setdefault(v["law"], v)
    for law in doc["checks"]:
        name = _law(law, multiplicative)
        if law in first:
            v = first[law]
            wit = ", ".join(f"{k}={val}" for k, val in v["assignment"].items())
            lines.append(f"FAIL {name}: ({wit}) lhs={v['lhs']} rhs={v['rhs']}")
        else:
            lines.append(f"PASS {name}")
    for item in doc.get("not_checked", []):
        lines.append(f"N/A  {item}")
    if doc.get("error"):
        lines.append(f"ERROR {doc['error']}")
    elif not doc["violations"]:
        lines.append(f"ALL CHECKS PASS ({len(doc['checks'])} checks)")
    else:
        lines.append(f"FAILED ({len(first)} of {len(doc['checks'])} checks)")
    if doc["outputs"]:
        for out in doc["outputs"]:
            lines.append("OUTPUT " + ", ".join(f"{k}={v}" for k, v in out.items()))
    else:
        lines.append("NO OUTPUT")
    return "\n".join(lines) + "\n"


def _is_group(obj) -> bool:
    for attr in ("f", "source", "E"):
        obj = getattr(obj, attr, obj)
    sig = getattr(obj, "signature", None)
    return sig is not None and sig.kind == "group"


def _write(args, obj, out: Outcome) -> None:
    if args.out:
        io.save(obj, args.out)
        out.outputs.append({"written": args.out, "kind": io.to_dict(obj)["kind"]})


def _derivation_summary(d) -> dict:
    g1, g0 = target_maps(d)
    return {"s": d.s.tolist(), "target_f1": g1.tolist(), "target_f0": g0.tolist()}


# ---------------------------------------------------------------------------
# verbs

def cmd_check(args, out: Outcome) -> None:
    doc = io.load_document(args.inputs[0])
    obj = io.from_dict(doc)
    kind = doc["kind"]
    out.multiplicative = _is_group(obj)
    validators: dict[str, Callable] = {
        "omega-group": validate_omega_group,
        "action": validate_derived_action,
        "xmod": validate_crossed_module,
        "xmod-morphism": validate_xmod_morphism,
        "derivation": validate_derivation,
        "simplicial": validate_simplicial,
        "simplicial-map": validate_simplicial_map,
        "simplicial-homotopy": validate_simplicial_homotopy,
    }
    if kind not in validators:
        raise XmodkitError(f"nothing to check in a {kind!r} document")
    out.report = validators[kind](obj)
    if kind == "derivation" and obj.f.source.signature.kind != "generic":
        out.report.extend(specialized_derivation_check(obj.f.source.signature.kind, obj),
                          "specialized: ")


def cmd_semidirect(args, out: Outcome) -> None:
    act = io.action_from_dict(io.load_document(args.inputs[0]))
    P = semidirect_product(act)
    out.report.extend(validate_omega_group(P))
    out.outputs.append({"size": P.size})
    _write(args, P, out)


def cmd_homotopy_find(args, out: Outcome) -> None:
    f = io.morphism_from_dict(io.load_document(args.source))
    g = io.morphism_from_dict(io.load_document(args.target))
    out.multiplicative = _is_group(f)
    d = are_homotopic(f, g, args.brute_cap)
    if d is None:
        out.found = False
        return
    out.report.extend(validate_derivation(d))
    out.outputs.append(_derivation_summary(d))
    _write(args, d, out)


def cmd_homotopy_compose(args, out: Outcome) -> None:
    d1 = io.derivation_from_dict(io.load_document(args.inputs[0]))
    out.multiplicative = _is_group(d1)
    if args.invert:
        d = invert_derivation(d1)
    else:
        if len(args.inputs) != 2:
            raise XmodkitError("homotopy-compose needs two derivation files (or --invert)")
        d2 = io.derivation_from_dict(io.load_document(args.inputs[1]))
        d = concat_derivations(d1, d2)
    out.report.extend(validate_derivation(d))
    out.outputs.append(_derivation_summary(d))
    _write(args, d, out)


def cmd_enumerate(args, out: Outcome) -> None:
    f = io.morphism_from_dict(io.load_document(args.inputs[0]))
    out.multiplicative = _is_group(f)
    ds = enumerate_derivations(f, args.strategy, args.brute_cap)
    out.outputs.extend(_derivation_summary(d) for d in ds)
    out.found = bool(ds)
    if args.out:
        io.save({"kind": "derivation-list", "derivations": [io.to_dict(d) for d in ds]}, args.out)


def cmd_x1(args, out: Outcome) -> None:
    S = io.simplicial_from_dict(io.load_document(args.inputs[0]))
    X = x1_object(S)
    out.report.extend(validate_crossed_module(X))
    out.outputs.append({"E": X.E.size, "R": X.R.size, "boundary": X.boundary.tolist()})
    _write(args, X, out)


def cmd_nerve(args, out: Outcome) -> None:
    X = io.xmod_from_dict(io.load_document(args.inputs[0]))
    S = nerve(X, args.level)
    out.report.extend(validate_simplicial(S))
    out.outputs.append({"levels": [A.size for A in S.levels]})
    _write(args, S, out)


def cmd_transfer(args, out: Outcome) -> None:
    H = io.simplicial_homotopy_from_dict(io.load_document(args.inputs[0]))
    T = zeta(H)
    out.report.extend(T.report)
    out.outputs.append({"image_in_kernel": T.image_in_kernel, "g_matches": T.g_matches,
                        "s": None if T.derivation is None else T.derivation.s.tolist()})
    if T.derivation is not None:
        _write(args, T.derivation, out)


def cmd_moore(args, out: Outcome) -> None:
    S = io.simplicial_from_dict(io.load_document(args.inputs[0]))
    out.report.extend(validate_simplicial(S))
    M = moore_complex(S)
    out.report.extend(M.report)
    for n, (H, emb) in enumerate(M.groups):
        out.outputs.append({"n": n, "size": H.size, "elements": emb.tolist()})


def cmd_instance_transport(args, out: Outcome) -> None:
    d = io.derivation_from_dict(io.load_document(args.inputs[0]))
    F = FUNCTORS[args.functor]
    t = transport_homotopy(F, d)
    out.report.extend(validate_derivation(t))
    out.report.extend(specialized_derivation_check(t.f.source.signature.kind, t), "specialized: ")
    out.outputs.append(_derivation_summary(t))
    _write(args, t, out)


HANDLERS = {
    "check": cmd_check,
    "semidirect": cmd_semidirect,
    "homotopy-find": cmd_homotopy_find,
    "homotopy-compose": cmd_homotopy_compose,
    "enumerate-derivations": cmd_enumerate,
    "x1": cmd_x1,
    "nerve": cmd_nerve,
    "transfer": cmd_transfer,
    "moore": cmd_moore,
    "instance-transport": cmd_instance_transport,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--enum-cap", type=int, default=None,
                        help="largest carrier enumerated (default 4096 or $XMODKIT_CAP)")
    common.add_argument("--brute-cap", type=int, default=core.BRUTE_CAP,
                        help="largest candidate count for searches (default 65536)")
    common.add_argument("--out", help="write the constructed structure here")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--in", dest="in_files", action="append", default=[],
                        help="input file (alternative to the positional form)")

    parser = argparse.ArgumentParser(prog="xmodkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb in VERBS:
        p = sub.add_parser(verb, parents=[common])
        if verb == "homotopy-find":
            p.add_argument("--from", dest="source", required=True)
            p.add_argument("--to", dest="target", required=True)
        else:
            p.add_argument("inputs", nargs="*")
        if verb == "homotopy-compose":
            p.add_argument("--invert", action="store_true")
        if verb == "enumerate-derivations":
            p.add_argument("--strategy", default="auto",
                           choices=("auto", "brute", "generators", "linear"))
        if verb == "nerve":
            p.add_argument("--level", type=int, default=2)
        if verb == "instance-transport":
            p.add_argument("--functor", required=True, choices=sorted(FUNCTORS))
    return parser


def run(argv: list[str] | None = None) -> tuple[int, dict, str]:
    """Parse and execute; returns (exit status, report document, rendered text)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verb == "homotopy-find":
        args.inputs = [args.source, args.target]
    else:
        args.inputs = list(args.inputs) + list(args.in_files)
        if not args.inputs:
            parser.error(f"{args.verb}: an input file is required")
    out = Outcome(args.verb, args.inputs)
    saved = core.ENUM_CAP
    if args.enum_cap is not None:
        core.ENUM_CAP = args.enum_cap
    try:
        HANDLERS[args.verb](args, out)
    except InternalTheoremViolation as exc:
        out.report.fail("theorem check", {}, str(exc), "")
    except XmodkitError as exc:
        out.error = f"{type(exc).__name__}: {exc}"
    except (OSError, KeyError, ValueError, TypeError, IndexError) as exc:
        # malformed documents that slip past the schema checks
        out.error = f"{type(exc).__name__}: {exc}"
    finally:
        core.ENUM_CAP = saved
    doc = out.document()
    if args.format == "structured":
        text = io.dumps(doc)
    else:
        text = report_render(doc, out.multiplicative)
    return out.exit_code(), doc, text


def main(argv: list[str] | None = None) -> int:
    code, _, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
