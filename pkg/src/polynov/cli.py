"""Command line front end; every subcommand emits one JSON report."""

import argparse
import json
import sys
import time

from . import advisor, complexes, sigma
from .errors import PrecisionExhausted, ToolError
from .groupring import format_ring
from .novikov import DEFAULT_PRECISION
from .pcgroup import (
    iter_statements,
    parse_char_values,
    parse_word,
    presentation_from_statements,
)
from .pcgroup import _split_head

_PRES_HEADS = ("gens", "order", "rel", "char")


def _load_pres(path):
    """Presentation from a file, ignoring any complex data it carries."""
    stmts = [(n, s) for (n, s) in iter_statements(_read(path))
             if _split_head(s)[0] in _PRES_HEADS]
    pres, _ = presentation_from_statements(stmts)
    return pres

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    top = Parser(prog="polynov", description=__doc__)
    sub = top.add_subparsers(dest="command", metavar="command")

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--timing", action="store_true")
        return p

    p = add("collect", help="normal form of a word")
    p.add_argument("--pres", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--char")

    p = add("consistency", help="overlap identities of a presentation")
    p.add_argument("--pres", required=True)

    p = add("hirsch", help="Hirsch number and torsion status")
    p.add_argument("--pres", required=True)

    p = add("char", help="validate a character against the relations")
    p.add_argument("--pres", required=True)
    p.add_argument("--char", required=True)

    p = add("fox", help="free derivative of a word")
    p.add_argument("--pres", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--gen", required=True)

    p = add("complex-check", help="parse a complex and verify d.d = 0")
    p.add_argument("--complex", required=True)

    p = add("homology", help="reduce over the completion and report a verdict")
    p.add_argument("--complex", required=True)
    p.add_argument("--char")
    p.add_argument("--prec", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--strategy", choices=("lowheight", "random"),
                   default="lowheight")

    p = add("fingerprint", help="betti numbers over F_p(t)")
    p.add_argument("--complex", required=True)
    p.add_argument("--char")
    p.add_argument("--prime", type=int, action="append")

    p = add("duality", help="two-direction vanishing comparison")
    p.add_argument("--complex", required=True)
    p.add_argument("--char")
    p.add_argument("--prec", type=int, default=DEFAULT_PRECISION)

    p = add("product", help="tensor a complex with a two-cell sphere")
    p.add_argument("--complex", required=True)
    p.add_argument("--sphere", type=int, required=True)

    p = add("mapping-torus", help="complex of a torus bundle over the circle")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--phi", required=True,
                   help="integer matrix, e.g. [[2,1],[1,1]]")
    p.add_argument("--names", help="comma separated, circle generator first")

    p = add("sigma-verify", help="check a finiteness witness")
    p.add_argument("--resolution", required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--char")

    p = add("finish", help="tensored acyclicity certificate from a witness")
    p.add_argument("--resolution", required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--char")
    p.add_argument("--prec", type=int, default=DEFAULT_PRECISION)

    p = add("advise", help="finite-generation verdict from group data")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--cw", action="store_true")
    group.add_argument("--manifold", action="store_true")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--pres", required=True)
    p.add_argument("--torsion", action="store_true")
    p.add_argument("--chi", type=int)
    p.add_argument("--kernel-finite", action="store_true")

    p = add("obstruction", help="fibration obstruction summary")
    p.add_argument("--complex", required=True)
    p.add_argument("--char")
    p.add_argument("--prec", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--prime", type=int, action="append")
    p.add_argument("--whitehead", action="store_true")
    p.add_argument("--kernel-fp", action="store_true")

    return top


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _need_char(pres, arg, default):
    if arg:
        return parse_char_values(pres, arg)
    if default is not None:
        return default
    raise UsageError("no character given (use --char or a char: line)")


def run(args):
    cmd = args.command
    if cmd == "collect":
        pres = _load_pres(args.pres)
        word = parse_word(pres.names, args.word)
        nf = pres.collect(word)
        report = {"normal_form": pres.format_element(nf),
                  "exponents": list(nf)}
        if args.char:
            u = parse_char_values(pres, args.char)
            report["height"] = u.evaluate(nf)
        return report, {"word": args.word}

    if cmd == "consistency":
        pres = _load_pres(args.pres)
        return pres.check_consistency(), {}

    if cmd == "hirsch":
        pres = _load_pres(args.pres)
        return {"hirsch": pres.hirsch_number(),
                "poly_Z": pres.is_poly_Z(),
                "torsion_status": pres.torsion_status()}, {}

    if cmd == "char":
        pres = _load_pres(args.pres)
        u = parse_char_values(pres, args.char)
        return {"accepted": True, "values": u.as_dict()}, {"char": args.char}

    if cmd == "fox":
        pres = _load_pres(args.pres)
        word = parse_word(pres.names, args.word)
        out = complexes.fox_derivative(pres, word, args.gen)
        return {"derivative": format_ring(out)}, \
            {"word": args.word, "gen": args.gen}

    if cmd == "complex-check":
        C = complexes.parse_complex(_read(args.complex))
        return {"ok": True, "ranks": C.ranks, "euler": C.euler()}, {}

    if cmd == "homology":
        C, default_char, _ = complexes.parse_complex_text(_read(args.complex))
        u = _need_char(C.pres, args.char, default_char)
        rep = complexes.homology_verdict(C, u, args.prec, args.strategy)
        return rep.as_dict(), {"char": u.as_dict(), "prec": args.prec}

    if cmd == "fingerprint":
        C, default_char, _ = complexes.parse_complex_text(_read(args.complex))
        u = _need_char(C.pres, args.char, default_char)
        primes = args.prime or [2, 3, 5]
        return {"betti": {str(p): complexes.fingerprint(C, u, p)
                          for p in primes}}, \
            {"char": u.as_dict(), "primes": primes}

    if cmd == "duality":
        C, default_char, _ = complexes.parse_complex_text(_read(args.complex))
        u = _need_char(C.pres, args.char, default_char)
        return complexes.duality_check(C, u, args.prec), \
            {"char": u.as_dict(), "prec": args.prec}

    if cmd == "product":
        C = complexes.parse_complex(_read(args.complex))
        out = complexes.product_with_sphere(C, args.sphere)
        return {"ranks": out.ranks, "complex": out.serialize()}, \
            {"sphere": args.sphere}

    if cmd == "mapping-torus":
        phi = json.loads(args.phi)
        names = args.names.split(",") if args.names else None
        out = complexes.mapping_torus(args.rank, phi, names)
        return {"ranks": out.ranks, "complex": out.serialize()}, \
            {"rank": args.rank, "phi": phi}

    if cmd == "sigma-verify":
        res, default_char = sigma.parse_resolution(_read(args.resolution))
        u = _need_char(res.pres, args.char, default_char)
        phi, s, rho = sigma.parse_witness(_read(args.witness), res.pres,
                                          res.complex.p)
        report = sigma.verify_sigma_witness(res, phi, u)
        if s:
            report["homotopy_ok"] = sigma.verify_homotopy(res, phi, s)
        return report, {"char": u.as_dict()}

    if cmd == "finish":
        res, default_char = sigma.parse_resolution(_read(args.resolution))
        u = _need_char(res.pres, args.char, default_char)
        phi, s, rho = sigma.parse_witness(_read(args.witness), res.pres,
                                          res.complex.p)
        rep = sigma.Representation(res.pres, rho) if rho else \
            sigma.Representation.trivial(res.pres)
        cert = sigma.finish_executor(res, phi, s, rep, u, args.prec)
        return cert, {"char": u.as_dict(), "prec": args.prec}

    if cmd == "advise":
        pres = _load_pres(args.pres)
        kind = "CW" if args.cw else "MANIFOLD"
        return advisor.advise(pres, kind, args.dim,
                              torsion_declared=args.torsion,
                              chi=args.chi,
                              kernel_finiteness=args.kernel_finite), \
            {"kind": kind, "dim": args.dim}

    if cmd == "obstruction":
        C, default_char, _ = complexes.parse_complex_text(_read(args.complex))
        u = _need_char(C.pres, args.char, default_char)
        primes = tuple(args.prime or (2, 3, 5))
        return advisor.obstruction_report(
            C, u, args.prec, primes,
            whitehead_declared=args.whitehead,
            kernel_fp_declared=args.kernel_fp), \
            {"char": u.as_dict(), "prec": args.prec}

    raise UsageError("no command given")


def _render_text(payload, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append("%s%s:" % (pad, key))
                lines.append(_render_text(value, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, key, value))
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(_render_text(value, indent))
            else:
                lines.append("%s- %s" % (pad, value))
    else:
        lines.append("%s%s" % (pad, payload))
    return "\n".join(lines)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print("usage error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    started = time.monotonic()
    try:
        report, echo = run(args)
    except UsageError as err:
        print("usage error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except PrecisionExhausted as err:
        _emit_error(args, "PRECISION_EXHAUSTED", str(err))
        return EXIT_PRECISION
    except ToolError as err:
        _emit_error(args, err.code, str(err))
        return EXIT_PRECONDITION
    except FileNotFoundError as err:
        print("usage error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    payload = {"command": args.command, "inputs_echo": echo, "report": report}
    if getattr(args, "prec", None) is not None:
        payload["precision"] = args.prec
    if args.timing:
        payload["timing_ms"] = int((time.monotonic() - started) * 1000)
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        if args.command in ("product", "mapping-torus"):
            print(report["complex"], end="")
        else:
            print(_render_text(payload))
    return EXIT_OK


def _emit_error(args, code, message):
    payload = {"command": args.command, "error": {"code": code,
                                                  "message": message}}
    print(json.dumps(payload, sort_keys=True, indent=2))


if __name__ == "__main__":
    sys.exit(main())
