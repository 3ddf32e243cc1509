"""Command-line interface: ``monozeta COMMAND [input] [options]``.

Every command writes one canonical JSON document (sorted keys, two-space
indent) to stdout or ``-o``; ``--pretty`` switches to a short human summary.
Exit codes: 0 success, 2 invalid input, 3 eigenvalue not realizable,
4 search radius exhausted.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .curvette import CurvetteError, check_theorems
from .exact import ExactArithmeticError, RootOfUnity, format_rational
from .factory import (
    FamilyParameterError,
    Fixture,
    ProgramError,
    build_from_program,
    corpus,
    family,
    family_params,
    fixture,
    parse_program,
    standard_form,
)
from .realizer import (
    CongruenceError,
    NotRealizable,
    RadiusExhausted,
    RealizationError,
    eigenvalue_turns,
    realize,
    verify_principle,
)
from .resolution import (
    FormSpec,
    ResolutionData,
    ResolutionFormatError,
    dumps,
    parse,
    parse_form,
    require_valid,
    to_doc,
)
from .zeta import ZetaError, apply_form, eigenvalue_report, topological_zeta

EXIT_OK, EXIT_INVALID, EXIT_NOT_REALIZABLE, EXIT_EXHAUSTED = 0, 2, 3, 4

_INPUT_ERRORS = (
    OSError,
    ResolutionFormatError,
    ProgramError,
    FamilyParameterError,
    ZetaError,
    CurvetteError,
    ExactArithmeticError,
    CongruenceError,
    RealizationError,
    ValueError,
)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# inputs


def _load(args: argparse.Namespace) -> tuple[ResolutionData, Optional[Fixture]]:
    chosen = [x for x in (args.input, args.family, args.fixture) if x]
    if len(chosen) != 1:
        raise UsageError("give exactly one of: an input file, --family, --fixture")
    if args.family:
        fx = family(args.family, **family_params(args.family, args.params or ""))
        return fx.rd, fx
    if args.fixture:
        fx = fixture(args.fixture)
        return fx.rd, fx
    text = Path(args.input).read_text(encoding="utf-8")
    if args.input.endswith(".blow"):
        return build_from_program(parse_program(text)), None
    return require_valid(parse(text)), None


def _expand(spec: str, fx: Optional[Fixture]) -> list[FormSpec]:
    """``omega_ij:i=1..5,j=1..3`` style specifications."""
    m = re.fullmatch(r"omega_([a-z]+):(.*)", spec.strip())
    if not m:
        raise UsageError(f"cannot parse form specification {spec!r}")
    if fx is None:
        raise UsageError("named forms need --family or --fixture")
    letters, ranges = m.group(1), {}
    for part in m.group(2).split(","):
        key, sep, rng = part.partition("=")
        lo, dots, hi = rng.partition("..")
        try:
            ranges[key.strip()] = range(int(lo), int(hi if dots else lo) + 1)
        except ValueError:
            raise UsageError(f"bad index range {part!r} in {spec!r}") from None
        if not sep:
            raise UsageError(f"bad index range {part!r} in {spec!r}")
    if set(ranges) != set(letters) or len(letters) != len(ranges):
        raise UsageError(f"indices {sorted(ranges)} do not match omega_{letters}")
    out = [[]]
    for letter in letters:
        out = [idx + [v] for idx in out for v in ranges[letter]]
    return [standard_form(fx, *idx) for idx in out]


def _forms(specs: Sequence[str], fx: Optional[Fixture]) -> list[FormSpec]:
    out: list[FormSpec] = []
    for spec in specs:
        if spec.startswith("omega_"):
            out.extend(_expand(spec, fx))
        else:
            w = parse_form(Path(spec).read_text(encoding="utf-8"))
            out.append(FormSpec(w.terms, label=Path(spec).stem))
    return out


# ---------------------------------------------------------------------------
# commands


def cmd_resolve(args, rd, fx) -> tuple[Any, str]:
    doc = to_doc(rd)
    text = f"{len(rd.exceptional)} exceptional, {len(rd.strict)} strict components"
    if rd.curvette_matrix:
        text += f"; curvette matrix {'ok' if check_theorems(rd.curvette_matrix, rd.ambient_dim).passed else 'FAILS checks'}"
    return doc, text


def cmd_zeta(args, rd, fx) -> tuple[Any, str]:
    forms = _forms(args.form, fx) or [FormSpec()]
    results = [(w, topological_zeta(apply_form(rd, None, w), local=not args.global_)) for w in forms]
    text = "\n".join(f"{w}: {z.display()}" for w, z in results)
    if len(results) == 1:
        return results[0][1].to_json(), text
    return [{"form": str(w), "zeta": z.to_json()} for w, z in results], text


def cmd_monodromy(args, rd, fx) -> tuple[Any, str]:
    rep = eigenvalue_report(rd)
    return rep.to_json(), f"zeta = {rep.zeta}; eigenvalue orders {list(rep.eigenvalue_orders)}"


def cmd_realize(args, rd, fx) -> tuple[Any, str]:
    if args.all:
        targets = [RootOfUnity(t) for t in eigenvalue_turns(eigenvalue_report(rd).eigenvalue_orders)]
    elif args.target:
        targets = [RootOfUnity.parse(args.target)]
    else:
        raise UsageError("realize needs --target u/d or --all")
    certs = [realize(rd, None, t, K=args.radius) for t in targets]
    text = "\n".join(
        f"{c.target}: {c.form} pole s0={format_rational(c.s0)} order {c.pole_order} "
        f"leading {format_rational(c.residue)}"
        for c in certs
    )
    if args.all:
        return [c.to_json() for c in certs], text
    return certs[0].to_json(), text


def cmd_verify(args, rd, fx) -> tuple[Any, str]:
    forms = _forms(args.form, fx)
    dropped = {str(w) for w in _forms(args.drop, fx)}
    forms = [w for w in forms if str(w) not in dropped]
    if not forms:
        raise UsageError("verify-principle needs at least one --form")
    rep = verify_principle(rd, None, forms)
    text = (
        f"poles are eigenvalues: {rep.poles_are_eigenvalues}; "
        f"eigenvalues are hit: {rep.eigenvalues_are_hit} ({len(forms)} forms)"
    )
    return rep.to_json(), text


def cmd_fixtures(args) -> tuple[Any, str]:
    fixtures = corpus()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for fx in fixtures:
            (out / f"{fx.name}.resdata").write_text(dumps(to_doc(fx.rd)), encoding="utf-8")
            if fx.program is not None:
                (out / f"{fx.name}.blow").write_text(dumps(fx.program.to_doc()), encoding="utf-8")
    names = [fx.name for fx in fixtures]
    return {"fixtures": names}, "\n".join(names)


# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="monozeta", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help=".resdata or .blow file")
    common.add_argument("--family", help="xn, xy, pq, cusp, ex28, fermat, morse")
    common.add_argument("--params", help="family parameters, '2,3' or 'p=2,q=3'")
    common.add_argument("--fixture", help="corpus name such as pq-2-5 or fermat-4")
    common.add_argument("-o", "--output", help="write the document here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-readable summary")

    sub.add_parser("resolve", parents=[common], help="build resolution data")

    p = sub.add_parser("zeta", parents=[common], help="topological zeta function")
    p.add_argument("--form", action="append", default=[], help=".form file or omega_... specification")
    scope = p.add_mutually_exclusive_group()
    scope.add_argument("--local", dest="global_", action="store_false", default=False)
    scope.add_argument("--global", dest="global_", action="store_true")

    sub.add_parser("monodromy", parents=[common], help="monodromy zeta function and eigenvalue orders")

    p = sub.add_parser("realize", parents=[common], help="realize an eigenvalue as a pole")
    p.add_argument("--target", help="eigenvalue as a fraction of a turn, e.g. 5/6")
    p.add_argument("--all", action="store_true", help="every monodromy eigenvalue")
    p.add_argument("--radius", type=int, default=4, help="lattice search radius K")

    p = sub.add_parser("verify-principle", parents=[common], help="check poles against eigenvalues")
    p.add_argument("--form", action="append", default=[])
    p.add_argument("--drop", action="append", default=[], help="forms to remove from the family")

    p = sub.add_parser("fixtures", help="list or write the fixture corpus")
    p.add_argument("--out", help="directory for .resdata/.blow files")
    p.add_argument("-o", "--output")
    p.add_argument("--pretty", action="store_true")
    return top


_COMMANDS = {
    "resolve": cmd_resolve,
    "zeta": cmd_zeta,
    "monodromy": cmd_monodromy,
    "realize": cmd_realize,
    "verify-principle": cmd_verify,
}


def _error(code: int, kind: str, msg: str, **extra: Any) -> int:
    sys.stderr.write(dumps({"error": {"kind": kind, "message": msg, **extra}}))
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "fixtures":
            doc, text = cmd_fixtures(args)
        else:
            rd, fx = _load(args)
            doc, text = _COMMANDS[args.command](args, rd, fx)
    except NotRealizable as e:
        return _error(EXIT_NOT_REALIZABLE, "not-realizable", str(e))
    except RadiusExhausted as e:
        return _error(EXIT_EXHAUSTED, "radius-exhausted", str(e), candidates=e.tried, radius=e.radius)
    except json.JSONDecodeError as e:
        return _error(EXIT_INVALID, "parse", f"{e.msg} at line {e.lineno} column {e.colno}")
    except _INPUT_ERRORS as e:
        return _error(EXIT_INVALID, type(e).__name__, str(e))
    out = text + "\n" if args.pretty else dumps(doc)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
