"""Command-line front end.

Exit codes: 0 when a verdict or result was reached, 1 when a lemma premise
(or a demo expectation) fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .abelianization import abelianize
from .fox import ModulePresentation, absolute_module, relative_module
from .groebner import groebner_basis
from .laurent import PolySyntaxError
from .modules import (ReductionScript, apply_reduction, auto_reduce, base_change_mod_p,
                      elementary_ideal, freeness_verdict, module_rank, torsion_verdict)
from .obstruction import CorankBounds, PremiseError, build_report, check_betti, combine_boundary_sum, r_of_g
from .pipeline import TRUST_MARKER, run_genus3, run_tripus, tower
from .words import (FreeQuotientCertificate, PresentationError, PresentationSyntaxError,
                    auto_simplify, parse_presentation, verify_free_quotient)


class InputError(Exception):
    pass


def _read(path):
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _read_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _presentation(path, trust_redundant=False):
    try:
        pres = parse_presentation(_read(path))
    except PresentationSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from None
    return pres.drop_redundant() if trust_redundant else pres


def _module(path) -> ModulePresentation:
    data = _read_json(path)
    try:
        return ModulePresentation.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a module presentation ({exc})") from None


def _certificate(path) -> FreeQuotientCertificate:
    try:
        return FreeQuotientCertificate.from_json(_read_json(path))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: malformed certificate ({exc})") from None


def _names(text):
    return [s for s in text.replace(",", " ").split() if s] if text else None


def _ints(text):
    try:
        return [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected a comma separated list of integers, got {text!r}") from None


def _bounds(text) -> CorankBounds:
    try:
        lo, hi = text.split(",")
        return CorankBounds(int(lo), None if hi.strip() in ("inf", "") else int(hi))
    except (ValueError, AssertionError) as exc:
        raise InputError(f"bad bounds {text!r}: expected LOWER,UPPER (UPPER may be inf): {exc}") from None


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# -- commands ---------------------------------------------------------------------


def cmd_parse(args):
    pres = _presentation(args.file)
    payload = pres.to_json()
    payload["redundant"] = sorted(pres.redundant)
    _emit(args, payload, f"{len(pres.generators)} generators, {len(pres.relators)} relators\n{pres}")
    return 0


def cmd_simplify(args):
    pres = _presentation(args.file, args.trust_redundant)
    out, trace = auto_simplify(pres, keep=_names(args.keep) or ())
    _emit(args, {"presentation": out.to_json(), "trace": trace},
          f"{len(out.generators)} generators, {len(out.relators)} relators\n{out.to_dsl()}".rstrip())
    return 0


def cmd_abelianize(args):
    pres = _presentation(args.file, args.trust_redundant)
    ab = abelianize(pres, _names(args.basis))
    lines = [f"H_1 = Z^{ab.rank}, basis {', '.join(ab.basis)}"]
    lines += [f"  {g} -> {list(v)}" for g, v in ab.images.items()]
    _emit(args, ab.to_json(), "\n".join(lines))
    return 0


def _build_module(args):
    pres = _presentation(args.file, args.trust_redundant)
    basis = _names(args.basis)
    ab = abelianize(pres, basis)
    if args.absolute:
        m = absolute_module(pres, ab, basis or ab.basis, normalize=args.normalize)
    else:
        m = relative_module(pres, ab)
    if args.trust_redundant:
        m = m.with_matrix(m.matrix, note=f"{TRUST_MARKER}: relators {sorted(_presentation(args.file).redundant)} dropped")
    return m


def cmd_alexander(args):
    m = _build_module(args)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(m.to_json(), fh, indent=2)
    _emit(args, m.to_json(), str(m))
    return 0


def cmd_reduce(args):
    m = _module(args.module)
    if args.auto:
        out, script = auto_reduce(m)
    else:
        script = ReductionScript.from_json(_read_json(args.script))
        out = apply_reduction(m, script)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(out.to_json(), fh, indent=2)
    _emit(args, {"module": out.to_json(), "script": script.to_json()},
          f"{out}\nscript: {len(script)} moves")
    return 0


def cmd_rank(args):
    cert = module_rank(_module(args.module))
    _emit(args, cert.to_json(),
          f"module rank {cert.module_rank} = {cert.module.ngens} generators - matrix rank {cert.matrix_rank}")
    return 0


def cmd_torsion(args):
    v = torsion_verdict(_module(args.module))
    text = v.kind
    if v.witness:
        text += f" (entries {v.witness[0]} and {v.witness[1]} are coprime)"
    if v.common_factor is not None:
        text += f" (common factor {v.common_factor})"
    _emit(args, v.to_json(), text)
    return 0


def cmd_freeness(args):
    m = _module(args.module)
    rank = args.rank if args.rank is not None else module_rank(m).module_rank
    v = freeness_verdict(m, rank, _ints(args.primes))
    text = v.kind if v.prime is None else f"{v.kind}: E_{rank} is proper mod {v.prime}"
    _emit(args, v.to_json(), text)
    return 0


def cmd_ideal(args):
    m = _module(args.module)
    if args.mod:
        m = base_change_mod_p(m, args.mod)
    ideal = elementary_ideal(m, args.index)
    payload = {"index": args.index, "ring": m.ring, "generators": [str(g) for g in ideal.generators]}
    lines = [f"E_{args.index} over {m.ring}: {len(ideal.generators)} generators"]
    lines += [f"  {g}" for g in ideal.generators]
    if args.proper:
        basis = groebner_basis(ideal, saturate=True)
        payload["groebner_basis"] = basis.to_json()
        payload["proper"] = not basis.is_whole_ring()
        lines.append(f"1 in ideal: {basis.is_whole_ring()} (Laurent ideal {'proper' if payload['proper'] else 'is the whole ring'})")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_certify(args):
    pres = _presentation(args.file, args.trust_redundant)
    cert = _certificate(args.cert)
    v = verify_free_quotient(pres, cert)
    _emit(args, {"valid": v.valid, "reason": v.reason, "target_rank": cert.target_rank},
          f"valid epimorphism onto F({cert.target_rank})" if v else f"invalid: {v.reason}")
    return 0 if v else 1


def cmd_obstruct(args):
    pres = _presentation(args.file, args.trust_redundant)
    basis = _names(args.basis)
    ab = abelianize(pres, basis)
    notes = []
    if args.trust_redundant:
        notes.append(f"{TRUST_MARKER}: relators {sorted(_presentation(args.file).redundant)} "
                     "dropped as derivable from the others (taken on trust, not verified)")
    # fail fast: the module computations below can be expensive
    check_betti(ab.rank, 2 if args.summand else args.relative)
    if args.summand:
        m = absolute_module(pres, ab, basis or ab.basis)
        lemma, n = "summand", None
    else:
        m = relative_module(pres, ab)
        lemma, n = "relative", args.relative
    rank = module_rank(m)
    if args.script:
        script = ReductionScript.from_json(_read_json(args.script))
        reduced = apply_reduction(m, script)
    else:
        reduced, script = auto_reduce(m)
    if reduced.nrels != 1:
        raise PremiseError(f"reduction left {reduced.nrels} relations; torsion test needs one")
    torsion = torsion_verdict(reduced)
    freeness = freeness_verdict(m, rank.module_rank, _ints(args.primes))
    cert = _certificate(args.cert) if args.cert else None
    report = build_report(args.file, ab.rank, lemma, n=n, rank=rank, torsion=torsion,
                          freeness=freeness, certificate=cert, presentation=pres,
                          scripts={"reduction": script.to_json()}, notes=notes)
    _emit(args, report.to_json(), report.text())
    return 0


def cmd_rg(args):
    value = r_of_g(args.g)
    _emit(args, {"g": args.g, "r": value}, str(value))
    return 0


def cmd_combine(args):
    bounds = [_bounds(b) for b in args.bounds]
    out = bounds[0]
    for b in bounds[1:]:
        out = combine_boundary_sum(out, b)
    _emit(args, {"lower": out.lower, "upper": out.upper}, str(out))
    return 0


def cmd_demo(args):
    if args.name == "tower":
        if args.g is None:
            raise InputError("demo tower needs G")
        rows = tower(args.g)
        ok = all(b.lower == b.upper == r for _, b, r in rows)
        payload = {"ok": ok, "tower": [{"g": g, "lower": b.lower, "upper": b.upper, "r": r} for g, b, r in rows]}
        text = "\n".join(f"c(Y_{g}) = {b.lower}   r({g}) = {r}   [{'ok' if b.lower == b.upper == r else 'FAIL'}]"
                         for g, b, r in rows)
        _emit(args, payload, text)
        return 0 if ok else 1
    res = run_tripus(not args.no_trust) if args.name == "tripus" else run_genus3()
    _emit(args, res.to_json(), "\n".join([c.line() for c in res.checks] + ["", res.report.text()]))
    return 0 if res.ok else 1


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    pres_opts = argparse.ArgumentParser(add_help=False)
    pres_opts.add_argument("file", help="presentation file in the gens:/rels: DSL ('-' for stdin)")
    pres_opts.add_argument("--trust-redundant", action="store_true",
                           help="drop the relators flagged 'redundant:' in the file")
    mod_opts = argparse.ArgumentParser(add_help=False)
    mod_opts.add_argument("module", help="module presentation JSON")

    p = argparse.ArgumentParser(prog="corank", description="Certified co-rank bounds from Alexander-type modules.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and echo a presentation")
    s.add_argument("file")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("simplify", parents=[common, pres_opts], help="Tietze-simplify a presentation")
    s.add_argument("--keep", help="comma separated generators never eliminated")
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("abelianize", parents=[common, pres_opts], help="compute H_1 and a basis")
    s.add_argument("--basis", help="comma separated generators to use as basis")
    s.set_defaults(func=cmd_abelianize)

    s = sub.add_parser("alexander", parents=[common, pres_opts], help="Alexander module presentation")
    kind = s.add_mutually_exclusive_group(required=True)
    kind.add_argument("--relative", action="store_true", help="Fox Jacobian (relative module)")
    kind.add_argument("--absolute", action="store_true", help="absolute module (g = 1 or 2)")
    s.add_argument("--basis", help="comma separated basis generators")
    s.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True,
                   help="rewrite non-basis generators to null ones (absolute module)")
    s.add_argument("-o", "--output", help="also write the module JSON here")
    s.set_defaults(func=cmd_alexander)

    s = sub.add_parser("reduce", parents=[common, mod_opts], help="apply module reduction moves")
    how = s.add_mutually_exclusive_group(required=True)
    how.add_argument("--script", help="reduction script JSON")
    how.add_argument("--auto", action="store_true", help="greedy automatic reduction")
    s.add_argument("-o", "--output", help="write the reduced module JSON here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("rank", parents=[common, mod_opts], help="module rank")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("torsion", parents=[common, mod_opts], help="torsion test for one-relation modules")
    s.set_defaults(func=cmd_torsion)

    s = sub.add_parser("freeness", parents=[common, mod_opts], help="non-freeness via elementary ideals mod p")
    s.add_argument("--primes", default="2,3")
    s.add_argument("--rank", type=int, help="rank to test (default: module rank)")
    s.set_defaults(func=cmd_freeness)

    s = sub.add_parser("ideal", parents=[common, mod_opts], help="elementary ideal E_k")
    s.add_argument("--index", type=int, required=True)
    s.add_argument("--mod", type=int, default=0, help="reduce coefficients mod this prime first")
    s.add_argument("--proper", action="store_true", help="decide properness in the Laurent ring")
    s.set_defaults(func=cmd_ideal)

    s = sub.add_parser("certify-quotient", parents=[common, pres_opts], help="check a free-quotient certificate")
    s.add_argument("--cert", required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("obstruct", parents=[common, pres_opts], help="full co-rank report")
    lemma = s.add_mutually_exclusive_group(required=True)
    lemma.add_argument("--summand", action="store_true", help="absolute module of the Z^2 cover")
    lemma.add_argument("--relative", type=int, metavar="N", help="no epimorphism onto F(N)")
    s.add_argument("--basis")
    s.add_argument("--script", help="reduction script (default: automatic reduction)")
    s.add_argument("--cert", help="free-quotient certificate for the lower bound")
    s.add_argument("--primes", default="2,3")
    s.set_defaults(func=cmd_obstruct)

    s = sub.add_parser("rg", parents=[common], help="r(g)")
    s.add_argument("g", type=int)
    s.set_defaults(func=cmd_rg)

    s = sub.add_parser("combine", parents=[common], help="bounds of a boundary connected sum")
    s.add_argument("bounds", nargs="+", help="LOWER,UPPER pairs (UPPER may be inf)")
    s.set_defaults(func=cmd_combine)

    s = sub.add_parser("demo", parents=[common], help="bundled pipelines")
    s.add_argument("name", choices=["tripus", "genus3", "tower"])
    s.add_argument("g", type=int, nargs="?", help="top genus for 'tower'")
    s.add_argument("--no-trust", action="store_true", help="tripus: keep the redundant relator")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except PremiseError as exc:
        print(f"premise failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, PresentationError, PolySyntaxError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
