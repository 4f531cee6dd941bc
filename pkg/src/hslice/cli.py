"""Command line interface: ``hslice check|scan|dv|bf|upper|invariants``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence

from .catalog import (
    CacheFormatError,
    CuratedInvariantStore,
    KnotEntry,
    UnknownKnotError,
    parse_bundle,
    resolve_knot,
)
from .knots import BraidError, alexander_polynomial
from .manifolds import (
    ClassData,
    ManifoldError,
    class_geometry,
    load_manifold_file,
    parse_manifold,
    zero_class,
)
from .obstructions import (
    DEFAULT_MODULUS,
    RULE_ORDER,
    DiskCertificate,
    ObstructionReport,
    SpinFilling,
    SurfaceProblem,
    TwistData,
    WhiteheadData,
    curated_disk_certificates,
    evaluate_all,
    evaluate_rule,
    knot_key,
    upper_bound_rules,
    whitehead_certificates,
)
from .report import render_certificates, render_report, render_scan
from .scan import ScanConfig, ScanTooLarge, slice_scan

EXIT_OK = 0
EXIT_INPUT = 2


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def load_knot(args, M: Optional[int] = None) -> tuple[KnotEntry, list[str]]:
    """Knot from ``--knot``/``--knot-name`` plus optional cache and bundle overlays.

    An explicit bundle always wins over computed or cached values; every
    disagreement becomes a warning.
    """
    text = args.knot or args.knot_name
    bundle = getattr(args, "bundle", None)
    warnings: list[str] = []
    entry: Optional[KnotEntry] = None
    if text:
        entry = resolve_knot(text, M)
        cache = os.environ.get("HSLICE_CACHE")
        if cache:
            stored = CuratedInvariantStore(cache).get(knot_key(entry))
            if stored is not None:
                merged, conflicts = entry.invariants.merged(replace(stored, name=entry.name))
                warnings += [f"cache overrides {c}" for c in conflicts]
                entry = replace(entry, invariants=merged)
    if bundle:
        with open(bundle, encoding="utf-8") as fh:
            inv = parse_bundle(fh.read(), name=os.path.basename(bundle))
        if entry is None:
            entry = KnotEntry(inv)
        else:
            merged, conflicts = entry.invariants.merged(replace(inv, name=entry.name))
            warnings += [f"bundle overrides {c}" for c in conflicts]
            entry = replace(entry, invariants=merged)
    if entry is None:
        raise InputError("a knot is required: --knot, --knot-name or --bundle")
    return entry, warnings


def load_manifold(args, attr: str = "manifold"):
    path = getattr(args, f"{attr}_file", None)
    if path:
        return load_manifold_file(path)
    text = getattr(args, attr)
    if not text:
        raise InputError(f"--{attr.replace('_', '-')} is required")
    return parse_manifold(text)


def load_class(args, X) -> ClassData:
    if args.square is not None:
        div = args.divisibility if args.divisibility is not None else (0 if args.square == 0 else 1)
        pairings = tuple(_int_list(args.pairings)) if args.pairings else tuple(0 for _ in X.basic_classes)
        return ClassData(args.square, div, bool(args.characteristic), pairings, None, None)
    coords = _int_list(args.cls)
    if coords == [0]:
        return zero_class(X)
    return class_geometry(X, coords)


def _filling(args) -> Optional[SpinFilling]:
    if args.b2w is None and args.sigmaw is None:
        return None
    if args.b2w is None or args.sigmaw is None:
        raise InputError("--b2w and --sigmaw go together")
    return SpinFilling(args.b2w, args.sigmaw, not args.not_handlebody)


def _rules(args) -> Optional[list[str]]:
    if not args.rules:
        return None
    names = [r.strip() for r in args.rules.split(",") if r.strip()]
    bad = [r for r in names if r not in RULE_ORDER]
    if bad:
        raise InputError(f"unknown rules: {', '.join(bad)}; known: {', '.join(RULE_ORDER)}")
    return names


def _add_knot_args(p):
    p.add_argument("--knot", help="braid word 'braid(n; ...)' or a catalogue name")
    p.add_argument("--knot-name", help="catalogue name (unknot, RHT, LHT, 4_1, T(p,q), K_DV)")
    p.add_argument("--bundle", help="JSON invariant bundle; overrides computed values")


def _add_problem_args(p):
    _add_knot_args(p)
    p.add_argument("--manifold", help="library name or sum such as '3CP2#20mCP2'")
    p.add_argument("--manifold-file", help="JSON manifold definition")
    p.add_argument("--class", dest="cls", default="0", help="coordinates 'a,b,...' or 0")
    p.add_argument("--square", type=int, help="abstract class: square")
    p.add_argument("--divisibility", type=int, help="abstract class: divisibility")
    p.add_argument("--characteristic", action="store_true", help="abstract class: characteristic")
    p.add_argument("--pairings", help="abstract class: pairings with the basic classes")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--topological", action="store_true", help="suppress smooth-category rules")
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    p.add_argument("--format", choices=("text", "records"), default="text")


def _add_filling_args(p):
    p.add_argument("--b2w", type=int, help="b2 of a spin filling W of 0-surgery")
    p.add_argument("--sigmaw", type=int, help="signature of W")
    p.add_argument("--not-handlebody", action="store_true", help="W is not a 2-handlebody")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hslice", description="Obstructions to slice surfaces in closed 4-manifolds.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run every rule on one problem")
    _add_problem_args(p)
    _add_filling_args(p)
    p.add_argument("--rules", help="comma-separated subset of rules")
    p.add_argument("--constructions", action="store_true", help="also match known constructions")

    p = sub.add_parser("scan", help="scan every class in a coordinate box")
    _add_knot_args(p)
    p.add_argument("--manifold")
    p.add_argument("--manifold-file")
    p.add_argument("--box", type=int, default=3)
    p.add_argument("--gmax", type=int, default=0)
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    p.add_argument("--rules")
    p.add_argument("--cap", type=int, default=100_000)
    p.add_argument("--topological", action="store_true")
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("dv", help="spin filling obstruction for H-sliceness")
    _add_knot_args(p)
    p.add_argument("--manifold", default="K3")
    p.add_argument("--manifold-file")
    _add_filling_args(p)
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("bf", help="Bauer-Furuta obstruction for H-sliceness")
    _add_knot_args(p)
    p.add_argument("--manifold", help="target manifold")
    p.add_argument("--manifold-file")
    p.add_argument("--cert-host", help="manifold where the mirror bounds a disk (default: curated)")
    p.add_argument("--cert-square", type=int, default=0)
    p.add_argument("--cert-zero-class", action="store_true", help="the certified disk is null-homologous")
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("upper", help="list constructions bounding the genus from above")
    _add_knot_args(p)
    p.add_argument("--twist", help="'k1,k2,g4' for two negative full twists turning K0 into K")
    p.add_argument("--whitehead", help="'companion,twist[,sign]': K is a twisted Whitehead double")
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("invariants", help="print knot invariants")
    _add_knot_args(p)
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    p.add_argument("--save", action="store_true", help="append the invariants to the HSLICE_CACHE store")
    return ap


def _cmd_check(args, out) -> int:
    entry, warnings = load_knot(args)
    X = load_manifold(args)
    P = SurfaceProblem(entry, X, load_class(args, X), args.genus, not args.topological)
    rep = evaluate_all(
        P, W=_filling(args), certs=curated_disk_certificates(entry), M=args.modulus,
        rules=_rules(args), upper=upper_bound_rules(entry) if args.constructions else (),
    )
    rep = replace(rep, warnings=tuple(warnings) + rep.warnings)
    out.write(render_report(rep, args.format))
    return EXIT_OK


def _cmd_scan(args, out) -> int:
    entry, _ = load_knot(args)
    X = load_manifold(args)
    rules = _rules(args)
    cfg = ScanConfig(args.box, args.gmax, args.modulus, None if rules is None else tuple(rules),
                     args.format, args.cap, not args.topological)
    ledger = slice_scan(entry, X, cfg, certs=curated_disk_certificates(entry))
    out.write(render_scan(ledger, args.format))
    return EXIT_OK


def _single_rule(rule_id, P, W=None, certs=()):
    o = evaluate_rule(rule_id, P, W=W, certs=certs)
    rep = ObstructionReport(P, (o,))
    if o.obstructed:
        head = f"OBSTRUCTED ({o.rule_id}: {o.witness})"
    elif o.applicable:
        head = f"CONSISTENT ({o.rule_id}: {o.witness})"
    else:
        head = f"NOT APPLICABLE ({o.rule_id}: {o.reason})"
    return rep, head


def _cmd_dv(args, out) -> int:
    entry, warnings = load_knot(args)
    X = load_manifold(args)
    W = _filling(args)
    if W is None:
        raise InputError("dv needs --b2w and --sigmaw")
    rep, head = _single_rule("donald_vafaee", SurfaceProblem(entry, X, zero_class(X)), W=W)
    rep = replace(rep, warnings=tuple(warnings))
    out.write(render_report(rep, args.format, headline=head))
    return EXIT_OK


def _cmd_bf(args, out) -> int:
    entry, warnings = load_knot(args)
    X = load_manifold(args)
    if args.cert_host:
        certs = [DiskCertificate(parse_manifold(args.cert_host), args.cert_square,
                                 not args.cert_zero_class, True, source="command line")]
    else:
        certs = curated_disk_certificates(entry)
    rep, head = _single_rule("bauer_furuta", SurfaceProblem(entry, X, zero_class(X)), certs=certs)
    rep = replace(rep, warnings=tuple(warnings))
    out.write(render_report(rep, args.format, headline=head))
    return EXIT_OK


def _cmd_upper(args, out) -> int:
    twist = whitehead = None
    if args.twist:
        vals = _int_list(args.twist)
        if len(vals) != 3:
            raise InputError("--twist takes 'k1,k2,g4'")
        twist = TwistData(*vals)
    if args.whitehead:
        parts = [s.strip() for s in args.whitehead.split(",")]
        if len(parts) not in (2, 3):
            raise InputError("--whitehead takes 'companion,twist[,sign]'")
        companion = knot_key(resolve_knot(parts[0]))
        try:
            tw = int(parts[1])
        except ValueError as exc:
            raise InputError(f"bad twist {parts[1]!r}") from exc
        whitehead = WhiteheadData(companion, tw, parts[2] if len(parts) == 3 else "+")
    if whitehead is not None and not (args.knot or args.knot_name or args.bundle):
        certs = whitehead_certificates(whitehead)
        name = f"Wh{whitehead.sign}_{whitehead.twist}({whitehead.companion})"
    else:
        entry, _ = load_knot(args)
        certs = upper_bound_rules(entry, twist, whitehead)
        name = entry.name
    out.write(render_certificates(name, certs, args.format))
    return EXIT_OK


def _cmd_invariants(args, out) -> int:
    entry, warnings = load_knot(args, args.modulus)
    inv = entry.invariants
    lines = [f"knot: {inv.name}"]
    if entry.braid is not None:
        lines.append(f"braid: {entry.braid}")
    if entry.seifert is not None:
        lines.append(f"seifert size: {entry.seifert.size}")
        lines.append(f"alexander: {alexander_polynomial(entry.seifert)}")
    for f in ("determinant", "arf", "signature", "genus4_lower", "genus4_upper", "nu_plus",
              "nu_plus_mirror", "tau", "sl_bar", "v_sequence", "v_sequence_mirror", "unknotting_number"):
        v = getattr(inv, f)
        lines.append(f"{f}: {'unknown' if v is None else v}")
    if entry.profile is not None:
        lines.append(f"signatures (m <= {entry.profile.max_modulus}):")
        for w, s in entry.profile.items():
            lines.append(f"  {w}: {s}")
    for note in inv.provenance:
        lines.append(f"provenance {note[0]}: {note[1]}")
    lines += [f"warning: {w}" for w in warnings]
    if args.save:
        cache = os.environ.get("HSLICE_CACHE")
        if not cache:
            raise InputError("--save needs HSLICE_CACHE")
        CuratedInvariantStore(cache).put(knot_key(entry), inv)
        lines.append(f"saved to {cache}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


COMMANDS = {
    "check": _cmd_check,
    "scan": _cmd_scan,
    "dv": _cmd_dv,
    "bf": _cmd_bf,
    "upper": _cmd_upper,
    "invariants": _cmd_invariants,
}

_INPUT_ERRORS = (
    InputError, ManifoldError, BraidError, UnknownKnotError, CacheFormatError, ScanTooLarge,
    ValueError, KeyError, OSError,
)


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return COMMANDS[args.command](args, out)
    except _INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"hslice: error: {msg}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
