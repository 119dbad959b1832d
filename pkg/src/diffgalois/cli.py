"""Command line driver: ``diffgalois <subcommand> ...``.

Exit status 0 on success, 2 on malformed input, 3 when an ideal falls
outside the supported class, 4 when an algebraic extension of Q is needed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import DiffGaloisError, ParseError, StageError
from .groebner import GREVLEX, LEX, PolyIdeal, Ring
from .hyper_elements import hyper_elements
from .lattice import sigma_quotient_lattice
from .pipeline import compute_galois_group, stabilizer, stabilizer_components, theoretical_bound
from .relations import RelationsIdealRequest, relations_ideal
from .scalar import parse_ratfunc
from .structure import associated_primes, sigma_period
from .system import DifferenceSystem, variable_names

ORDERS = {"grevlex": GREVLEX, "lex": LEX}


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(str(exc)) from exc


def load_system(path: str):
    """System plus optional (rho, Z_rho) from the JSON input file."""
    data = _read_json(path)
    if not isinstance(data, dict) or "A" not in data:
        raise ParseError(f"{path}: expected an object with key 'A'")
    rows = data["A"]
    n = data.get("n", len(rows))
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"{path}: 'A' is not a {n} x {n} matrix")
    try:
        S = DifferenceSystem.parse(rows)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    Z = data.get("Z_rho")
    if Z is not None:
        Z = tuple(tuple(Fraction(str(v)) for v in row) for row in Z)
    return S, data.get("rho"), Z


def load_ideal(path: str, ring: Ring) -> PolyIdeal:
    """Generators from a JSON list (or {"generators": [...]}) or one per line."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if isinstance(data, dict):
        data = data.get("generators", [])
    if not isinstance(data, list):
        raise ParseError(f"{path}: expected a list of generators")
    return PolyIdeal(ring, [ring.parse(str(g)) for g in data])


def _in_order(ideal: PolyIdeal, name: str) -> PolyIdeal:
    order = ORDERS[name]
    if ideal.ring.order == order:
        return ideal
    ring = Ring(ideal.ring.names, order, ideal.ring.field)
    return PolyIdeal(ring, [g.to_ring(ring) for g in ideal.groebner()])


def _coeff_degree(text: str):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a non-negative integer or 'auto'")
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer or 'auto'")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(args, text_lines, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _ideal_lines(ideal: PolyIdeal, indent="  "):
    lines = ideal.canonical_lines()
    return [indent + line for line in lines] if lines else [indent + "(zero ideal)"]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _relations(args, S, rho, Z):
    return relations_ideal(RelationsIdealRequest(S, args.degree, args.coeff_degree, rho, Z))


def cmd_relations(args):
    S, rho, Z = load_system(args.input)
    res = _relations(args, S, rho, Z)
    ideal = _in_order(res.ideal, args.order)
    lines = [f"# relations of degree <= {res.d}, x-degree <= {res.ell} "
             f"(operator order {res.operator_order}, kappa {res.kappa})"]
    lines += ideal.canonical_lines()
    payload = {"d": res.d, "ell": res.ell, "rho": res.rho, "kappa": res.kappa,
               "operator_order": res.operator_order, "generators": ideal.canonical_lines()}
    _emit(args, lines, payload)


def _system_ideal(args, S, rho, Z):
    if args.ideal:
        return load_ideal(args.ideal, S.ring())
    return _relations(args, S, rho, Z).ideal


def cmd_decompose(args):
    S, rho, Z = load_system(args.input)
    ideal = _system_ideal(args, S, rho, Z)
    primes = associated_primes(ideal, S.det_poly(ideal.ring))
    delta = sigma_period(primes[0].ideal, S, max(len(primes), 1)) if primes else None
    lines = [f"# {len(primes)} components; delta = {delta} for the first"]
    for k, c in enumerate(primes, 1):
        lines.append(f"[{k}] {c.certified_class}")
        lines += _ideal_lines(_in_order(c.ideal, args.order))
    payload = {"delta": delta, "components": [
        {"class": c.certified_class, "generators": _in_order(c.ideal, args.order).canonical_lines()} for c in primes]}
    _emit(args, lines, payload)


def cmd_hyper(args):
    S, rho, Z = load_system(args.input)
    ring = S.ring()
    if args.ideal:
        I_irr = load_ideal(args.ideal, ring)
    else:
        primes = associated_primes(_relations(args, S, rho, Z).ideal, S.det_poly(ring))
        if not primes:
            raise DiffGaloisError("no component meets GL_n")
        I_irr = primes[0].ideal
    delta = args.delta or sigma_period(I_irr, S)
    elems = hyper_elements(I_irr, S, delta, args.char_degree)
    lines = [f"# delta = {delta}"] + [f"{h.P}\t{h.b}" for h in elems]
    _emit(args, lines, {"delta": delta, "elements": [h.to_json() for h in elems]})


def cmd_lattice(args):
    try:
        certs = [parse_ratfunc(c) for c in args.certificates]
    except ZeroDivisionError as exc:
        raise ParseError(str(exc)) from exc
    lat = sigma_quotient_lattice(certs, args.delta)
    lines = [f"# rank {lat.rank}, step {lat.step}"]
    lines += [f"({', '.join(map(str, z))})\t{f}" for z, f in zip(lat.basis, lat.witnesses)]
    _emit(args, lines, lat.to_json())


def cmd_stab(args):
    if args.input:
        S, _, _ = load_system(args.input)
        ring = S.ring()
    elif args.n:
        ring = Ring(variable_names(args.n))
    else:
        raise ParseError("stab needs --input or --n to fix the matrix size")
    ideal = load_ideal(args.ideal, ring)
    stab = stabilizer(ideal)
    comps = stabilizer_components(stab) if args.components else None
    lines = ["# stabilizer ideal (det g != 0)"] + _ideal_lines(stab)
    if comps is not None:
        for k, c in enumerate(comps, 1):
            lines.append(f"[{k}] {c.certified_class}")
            lines += _ideal_lines(c.ideal)
    payload = {"generators": stab.canonical_lines()}
    if comps is not None:
        payload["components"] = [c.ideal.canonical_lines() for c in comps]
    _emit(args, lines, payload)


def cmd_bound(args):
    res = theoretical_bound(args.n)
    summary = res.summary()
    if args.full:
        if res.value is None:
            raise DiffGaloisError(f"the bound for n = {args.n} has about 2^{res.log2_log2_value:.1f} bits")
        print(res.value)
        return
    lines = [f"{k} = {v}" for k, v in summary.items()]
    _emit(args, lines, summary)


def cmd_compute(args):
    S, rho, Z = load_system(args.input)
    if rho is not None or Z is not None:
        raise ParseError("compute uses the default germ; rho and Z_rho are accepted by 'relations' only")
    try:
        out = compute_galois_group(S, args.degree, args.coeff_degree, args.char_degree)
    except StageError as exc:
        if args.transcript:
            _write_transcript(args.transcript, S, exc.transcript, error=str(exc))
        raise
    if args.transcript:
        _write_transcript(args.transcript, S, out.transcript)
    I = _in_order(out.maximal_sigma_ideal, args.order)
    lines = []
    for rec in out.transcript:
        if rec["step"] in ("bound", "stabilizer"):
            continue
        lines.append(f"== {rec['step']}")
        res = rec["result"]
        if rec["step"] == "decompose":
            lines.append(f"delta = {rec['delta']}")
            for k, comp in enumerate(res, 1):
                lines.append(f"[{k}] " + ", ".join(comp))
        elif rec["step"] == "hyper":
            lines += [f"  {h['element']}\t{h['certificate']}" for h in res] or ["  (none)"]
        elif rec["step"] == "lattice":
            lines += [f"  ({', '.join(map(str, z))})\t{f}" for z, f in zip(res["basis"], res["witnesses"])] or ["  {0}"]
        elif rec["step"] == "maximal":
            lines += _ideal_lines(I)
        else:
            lines += ["  " + g for g in res] or ["  (zero ideal)"]
    lines.append("== stabilizer (det g != 0)")
    lines += _ideal_lines(out.stabilizer_ideal)
    for k, c in enumerate(out.components or [], 1):
        lines.append(f"[{k}] " + ", ".join(c.ideal.canonical_lines()))
    lines.append("caveat: " + out.caveat)
    payload = {
        "maximal_sigma_ideal": I.canonical_lines(),
        "stabilizer": out.stabilizer_ideal.canonical_lines(),
        "components": [c.ideal.canonical_lines() for c in out.components or []],
        "caveat": out.caveat,
        "transcript": _strip_timing(out.transcript),
    }
    _emit(args, lines, payload)


def _strip_timing(transcript):
    return [{k: v for k, v in rec.items() if k != "seconds"} for rec in transcript]


def _write_transcript(path, S, transcript, error=None):
    doc = {"system": S.to_json(), "steps": _strip_timing(transcript)}
    if error:
        doc["error"] = error
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffgalois", description="Galois groups of sigma(Y) = A Y over Q(x).")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, system=True, degrees=True):
        if system:
            p.add_argument("--input", required=True, help="JSON file with the matrix A")
        if degrees:
            p.add_argument("--degree", type=_positive, default=2, help="degree bound d for relations")
            p.add_argument("--coeff-degree", type=_coeff_degree, default=0,
                           help="x-degree bound for relation coefficients, or 'auto'")
        p.add_argument("--order", choices=sorted(ORDERS), default="grevlex")
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("compute", help="run every stage and print the Galois group")
    common(p)
    p.add_argument("--char-degree", type=_positive, default=1, help="degree of hypergeometric elements")
    p.add_argument("--transcript", help="write the per-step transcript to this JSON file")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("relations", help="algebraic relations of bounded degree")
    common(p)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("decompose", help="prime components and the shift period")
    common(p)
    p.add_argument("--ideal", help="ideal to decompose instead of the relation ideal")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hyper", help="hypergeometric elements modulo a prime component")
    common(p)
    p.add_argument("--ideal", help="prime component (default: first component of the relation ideal)")
    p.add_argument("--delta", type=_positive, help="shift step (default: period of the component)")
    p.add_argument("--char-degree", type=_positive, default=1)
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("lattice", help="exponent lattice of certificates")
    common(p, system=False, degrees=False)
    p.add_argument("certificates", nargs="+", help="rational functions in x")
    p.add_argument("--delta", type=_positive, default=1)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("stab", help="stabilizer of an ideal in GL_n")
    common(p, system=False, degrees=False)
    p.add_argument("--ideal", required=True, help="generators, JSON list or one per line")
    p.add_argument("--input", help="system file fixing n")
    p.add_argument("--n", type=_positive, help="matrix size when no system is given")
    p.add_argument("--no-components", dest="components", action="store_false",
                   help="skip the decomposition of the stabilizer")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("bound", help="the proven degree bound for n x n systems")
    common(p, system=False, degrees=False)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--full", action="store_true", help="print every decimal digit")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except DiffGaloisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0
