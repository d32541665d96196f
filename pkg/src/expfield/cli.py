"""Command line interface: ``expfield COMMAND FILE ARGS... [--bound N] [--format json|text]``.

Exit status: 0 verdict computed, 1 verdict differs from ``--assert``,
2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import differentials as dif
from . import khovanskii as kh
from . import schanuel as sch
from .errors import ExpFieldError, InputError, NoExtensionError, ResourceLimitError
from .presentation import delta, ldim_q, td, validate
from .syntax import parse_file, parse_tuple, to_element

COMMANDS = {
    "validate": "check the presentation invariants of one or all fields",
    "td": "transcendence degree of a tuple",
    "ldim": "Q-linear dimension of a tuple of A-elements",
    "delta": "predimension of a tuple",
    "xi-dim": "dimension of the module Ξ(F/C)",
    "cl-member": "is an element in the closure cl(C)?",
    "exchange": "exchange property for a, b over C",
    "khovanskii-verify": "verify a Khovanskii certificate",
    "ecl-cl-check": "verified certificate entries lie in cl(C)",
    "strong": "bounded search for a strongness witness",
    "extend-derivation": "extend the basis E-derivations of F1 to F2",
    "ax-check": "Ax inequality δ(x/C) >= dim(x/C)",
    "dim": "pregeometry dimension via minimal predimension",
    "chain": "decompose a strong extension into finite steps",
    "essential": "essential-counterexample classification of a tuple",
}

# positional arguments after FILE
_POSITIONAL = {
    "validate": ["fields*"],
    "td": ["field", "tuple"],
    "ldim": ["field", "tuple"],
    "delta": ["field", "tuple"],
    "xi-dim": ["field"],
    "cl-member": ["field", "element"],
    "exchange": ["field", "a", "b"],
    "khovanskii-verify": ["cert"],
    "ecl-cl-check": ["cert"],
    "strong": ["base", "ext"],
    "extend-derivation": ["base", "ext"],
    "ax-check": ["field", "tuple"],
    "dim": ["field", "tuple"],
    "chain": ["base", "ext"],
    "essential": ["field", "tuple"],
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="expfield", description="Exact computations with finitely "
                                 "presented partial exponential fields.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, helptext in COMMANDS.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file", help="presentation document (.efd)")
        for arg in _POSITIONAL[name]:
            if arg.endswith("*"):
                p.add_argument(arg[:-1], nargs="*")
            else:
                p.add_argument(arg)
        p.add_argument("--bound", type=int, default=3, help="height bound for searches (default 3)")
        p.add_argument("--over", default=None,
                       help="base: 'base', 'Q' (empty), or a generator set such as '{r,s}'")
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--assert", dest="expect", default=None,
                       help="expected verdict; exit 1 when the computed verdict differs")
        p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    return ap


def _over(spec, F, default="Q"):
    spec = default if spec is None else spec.strip()
    if spec == "base":
        return tuple(F.base_gens)
    if spec in ("Q", "{}", "empty", ""):
        return ()
    if spec.startswith("{") and spec.endswith("}"):
        names = tuple(x.strip() for x in spec[1:-1].split(",") if x.strip())
        for g in names:
            if g not in F.ring.index:
                raise InputError("unknown generator %r in --over" % g)
        return names
    raise InputError("cannot read --over %r (use base, Q or {g1,g2})" % spec)


def _tuple(doc, text, F):
    if text in doc.tuples:
        return doc.tuple_elements(text, F)
    return [to_element(e, F) for e in parse_tuple(text)]


def _element(doc, text, F):
    items = _tuple(doc, text, F)
    if len(items) != 1:
        raise InputError("expected a single element, got %d" % len(items))
    return items[0]


def _delta_dict(rep):
    return {"tuple": list(rep.tuple), "over": list(rep.over), "td": rep.td_value,
            "ldim": rep.ldim_value, "delta": rep.delta}


def _strength_dict(rep):
    out = {"pair": list(rep.pair), "bound": rep.bound, "verdict": rep.verdict,
           "new_basis": list(rep.new_basis), "spans_checked": rep.checked, "witness": None}
    if rep.witness_delta is not None:
        out["witness"] = _delta_dict(rep.witness_delta)
    return out


def run(command, args) -> dict:
    """Execute one command; returns ``(result, verdict)`` pieces of the report."""
    doc = parse_file(args.file)
    bound = args.bound
    if bound < 0:
        raise InputError("--bound must be non-negative")

    if command == "validate":
        names = args.fields or list(doc.fields)
        result = {}
        for n in names:
            rep = validate(doc.presentation(n))
            result[n] = {"valid": rep.valid, "failures": [f.as_dict() for f in rep.failures]}
        ok = all(r["valid"] for r in result.values())
        return {"fields": result}, "valid" if ok else "invalid"

    if command in ("td", "ldim", "delta", "ax-check", "dim", "essential"):
        F = doc.presentation(args.field)
        tup = _tuple(doc, args.tuple, F)
        if command == "td":
            over = _over(args.over, F)
            v = td(F, tup, over)
            return {"field": F.name, "over": list(over), "td": v}, v
        if command == "ldim":
            over = _over(args.over, F)
            v = ldim_q(F, tup, over)
            return {"field": F.name, "over": list(over), "ldim": v}, v
        if command == "delta":
            rep = delta(F, tup, _over(args.over, F))
            return dict(field=F.name, **_delta_dict(rep)), rep.delta
        if command == "ax-check":
            rep = sch.ax_inequality_check(F, _over(args.over, F), tup)
            return {"field": F.name, "tuple": list(rep.tuple), "over": list(rep.over),
                    "closure": list(rep.closure), "over_was_closed": rep.was_closed,
                    "delta": rep.delta, "dim": rep.dim, "holds": rep.holds}, _b(rep.holds)
        if command == "dim":
            v = sch.dim_via_min_delta(F, tup, bound)
            cl0 = [x if isinstance(x, str) else F.format_vector(x) for x in dif.closure_over(F, ())]
            return {"field": F.name, "bound": bound, "closure_of_empty": cl0, "dim": v}, v
        over = _over(args.over, F, default="base")
        rep = sch.essential_check(F, tup, bound, over)
        return {"field": F.name, "tuple": list(rep.tuple), "over": list(rep.over),
                "bound": bound, "delta": rep.delta_a, "verdict": rep.verdict,
                "counterexample": rep.is_counterexample,
                "counter": None if rep.counter is None else {"tuple": list(rep.counter),
                                                             "delta": rep.counter_delta},
                "in_cl_over": rep.in_cl_over, "in_cl_empty": rep.in_cl_empty}, \
            "essential" if rep.essential else "not_essential"

    if command in ("xi-dim", "cl-member", "exchange"):
        F = doc.presentation(args.field)
        over = _over(args.over, F)
        if command == "xi-dim":
            M = dif.xi_presentation(F, over)
            return {"field": F.name, "over": list(over), "symbols": list(M.basis_symbols),
                    "relations": len(M.relation_matrix), "rank": M.rank, "xi_dim": M.dim}, M.dim
        if command == "cl-member":
            h = _element(doc, args.element, F)
            v = dif.cl_member(F, over, h)
            return {"field": F.name, "over": list(over), "element": str(h), "member": v}, _b(v)
        a, b = _element(doc, args.a, F), _element(doc, args.b, F)
        v = dif.exchange_check(F, over, a, b)
        return {"field": F.name, "over": list(over), "a": str(a), "b": str(b), "holds": v}, _b(v)

    if command in ("khovanskii-verify", "ecl-cl-check"):
        F, cert = doc.certificate(args.cert)
        ok = kh.verify_witness(F, cert)
        res = {"certificate": cert.name, "field": F.name, "n": cert.n,
               "coeffs": list(cert.coeff_gens), "verified": ok,
               "jacobian_det": None if cert.jacobian_det is None else str(cert.jacobian_det)}
        if command == "khovanskii-verify":
            return res, _b(ok)
        over = _over(args.over, F, default="{%s}" % ",".join(cert.coeff_gens))
        v = kh.ecl_implies_cl_check(F, over, cert)
        res.update(over=list(over), all_in_cl=v)
        return res, _b(v)

    F1, F2 = doc.presentation(args.base), doc.presentation(args.ext)
    if command == "strong":
        rep = sch.is_strong(F1, F2, bound)
        return _strength_dict(rep), "strong" if rep.strong else "not_strong"
    if command == "extend-derivation":
        out = []
        extends = True
        for i, d in enumerate(dif.derivation_basis(F1)):
            entry = {"index": i, "values": {k: str(v) for k, v in sorted(d.values.items())}}
            try:
                D = dif.extend_derivation(F1, F2, d)
                entry["extension"] = {k: str(v) for k, v in sorted(D.values.items())}
                entry["violations"] = dif.verify_derivation(D)
            except NoExtensionError as exc:
                entry["extension"] = None
                entry["error"] = str(exc)
                extends = False
            out.append(entry)
        return {"base": F1.name, "ext": F2.name, "derivations": out}, \
            "extends" if extends else "no_extension"
    steps = sch.decompose_chain(F1, F2, bound)
    trans = sch.chain_transitivity(F1, F2, steps, bound)
    return {"base": F1.name, "ext": F2.name, "bound": bound,
            "steps": [{"index": s.index, "added": list(s.added), "delta": s.delta, "td": s.td,
                       "strong": s.strong.verdict} for s in steps],
            "transitivity": trans}, len(steps)


def _b(v: bool) -> str:
    return "true" if v else "false"


def _matches(verdict, expected) -> bool:
    v = str(verdict)
    return v == expected or v == expected + "_up_to_bound"


def _text(report: dict, indent="") -> str:
    lines = []
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append("%s%s:" % (indent, k))
            lines.append(_text(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append("%s%s:" % (indent, k))
            for item in v:
                lines.append(_text(item, indent + "  - "))
        else:
            lines.append("%s%s: %s" % (indent, k, v if not isinstance(v, list) else
                                       ", ".join(str(x) for x in v)))
    return "\n".join(x for x in lines if x)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    report = {"command": args.command, "file": args.file,
              "args": {k: v for k, v in sorted(vars(args).items())
                       if k not in ("command", "file", "format", "timing")}}
    start = time.perf_counter()
    try:
        result, verdict = run(args.command, args)
        status = 0
        if args.expect is not None and not _matches(verdict, args.expect):
            status = 1
        report.update(result=result, verdict=verdict)
    except ResourceLimitError as exc:
        status = 3
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    except (ExpFieldError, OSError) as exc:
        status = 2
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    report["exit_status"] = status
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(_text(report) + "\n")
    if "error" in report:
        sys.stderr.write("expfield: %s\n" % report["error"]["message"])
    return status


if __name__ == "__main__":
    sys.exit(main())
