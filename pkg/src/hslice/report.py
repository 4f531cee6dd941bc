"""Deterministic text and JSON-lines renderings of reports and scan ledgers."""

from __future__ import annotations

import json
from dataclasses import fields
from fractions import Fraction
from typing import Optional

from .manifolds import ClassData, FourManifold
from .obstructions import ObstructionReport, RuleOutcome, UpperBoundCertificate, fmt
from .scan import ScanLedger


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    return x


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=True, separators=(", ", ": "))


def outcome_record(o: RuleOutcome) -> dict:
    rec = {"record": "rule"}
    for f in fields(RuleOutcome):
        rec[f.name] = _jsonable(getattr(o, f.name))
    return rec


def certificate_record(c: UpperBoundCertificate) -> dict:
    rec = {"record": "certificate"}
    for f in fields(UpperBoundCertificate):
        rec[f.name] = _jsonable(getattr(c, f.name))
    rec["claim"] = c.claim()
    return rec


def manifold_text(X: FourManifold) -> str:
    flags = [n for n in ("spin", "symplectic", "simple_type", "bf_hypothesis") if getattr(X, n)]
    return (f"{X.name} (b2+={X.b2_plus}, b2-={X.b2_minus}, sigma={X.signature}"
            + (", " + ", ".join(flags) if flags else "") + ")")


def class_text(xi: ClassData) -> str:
    where = "0" if xi.is_zero else ("abstract" if xi.vector is None else ",".join(map(str, xi.vector)))
    return (f"{where} (square {xi.square}, divisibility {xi.divisibility}, "
            f"characteristic {'yes' if xi.characteristic else 'no'})")


def _problem_fields(report: ObstructionReport) -> dict:
    P = report.problem
    return {
        "knot": P.knot.name,
        "manifold": P.manifold.name,
        "class": None if P.xi.vector is None else list(P.xi.vector),
        "square": P.xi.square,
        "divisibility": P.xi.divisibility,
        "characteristic": P.xi.characteristic,
        "genus": P.genus,
        "smooth_category": P.smooth_category,
    }


def render_text(report: ObstructionReport, headline: Optional[str] = None) -> str:
    P = report.problem
    lines = [
        headline or report.summary_line(),
        f"knot: {P.knot.name}",
        f"manifold: {manifold_text(P.manifold)}",
        f"class: {class_text(P.xi)}",
        f"genus: {P.genus}",
        f"category: {'smooth' if P.smooth_category else 'topological'}",
        f"summary: {report.summary}",
        "rules:",
    ]
    for o in report.outcomes:
        if o.applicable:
            lines.append(f"  {o.rule_id} [{o.category}] {o.verdict}: {o.witness}")
        else:
            lines.append(f"  {o.rule_id} [{o.category}] not applicable: {o.reason}")
        lines.append(f"    cite: {o.citation}")
    if report.certificates:
        lines.append("certificates:")
        for c in report.certificates:
            mark = " (matches)" if c in report.matching_certificates else ""
            lines.append(f"  {c.rule_id}: {c.claim()}{mark}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def render_records(report: ObstructionReport) -> str:
    rows = [{"record": "problem", **_problem_fields(report)}]
    rows += [outcome_record(o) for o in report.outcomes]
    rows += [certificate_record(c) for c in report.certificates]
    rows += [{"record": "warning", "message": w} for w in report.warnings]
    rows.append({"record": "summary", "summary": report.summary, "primary_rule": report.primary_rule})
    return "".join(_dump(r) + "\n" for r in rows)


def render_report(report: ObstructionReport, output: str = "text", headline: Optional[str] = None) -> str:
    if output == "records":
        return render_records(report)
    return render_text(report, headline)


def _entry_line(e) -> str:
    rep = e.report
    cls = ",".join(map(str, e.vector))
    if rep.obstructing:
        o = rep.obstructing[0]
        return f"  [{cls}] g={e.genus}: obstructed by {o.rule_id}: {o.witness}"
    return f"  [{cls}] g={e.genus}: {rep.summary}"


def render_scan_text(ledger: ScanLedger) -> str:
    cfg = ledger.config
    lines = [
        ledger.summary_line(),
        f"knot: {ledger.knot}",
        f"manifold: {ledger.manifold}",
        f"box: {cfg.box}  genus: 0..{cfg.g_max}  modulus: {cfg.modulus}",
        f"status: {ledger.status}",
        f"completeness: {ledger.completeness_note}",
        "classes:",
    ]
    lines += [_entry_line(e) for e in ledger.entries]
    if ledger.tail:
        lines.append("classes beyond the box:")
        lines += [_entry_line(e) for e in ledger.tail]
    return "\n".join(lines) + "\n"


def _scan_entry_record(e, beyond: bool) -> dict:
    rep = e.report
    return {
        "record": "class",
        "vector": list(e.vector),
        "genus": e.genus,
        "beyond_box": beyond,
        "summary": rep.summary,
        "obstructing": [o.rule_id for o in rep.obstructing],
        "witness": rep.obstructing[0].witness if rep.obstructing else "",
    }


def render_scan_records(ledger: ScanLedger) -> str:
    cfg = ledger.config
    rows = [{
        "record": "scan",
        "knot": ledger.knot,
        "manifold": ledger.manifold,
        "box": cfg.box,
        "g_max": cfg.g_max,
        "modulus": cfg.modulus,
    }]
    rows += [_scan_entry_record(e, False) for e in ledger.entries]
    rows += [_scan_entry_record(e, True) for e in ledger.tail]
    rows.append({
        "record": "summary",
        "all_obstructed": ledger.all_obstructed,
        "complete": ledger.complete,
        "status": ledger.status,
        "note": ledger.completeness_note,
    })
    return "".join(_dump(r) + "\n" for r in rows)


def render_scan(ledger: ScanLedger, output: str = "text") -> str:
    return render_scan_records(ledger) if output == "records" else render_scan_text(ledger)


def render_certificates(name: str, certs: list[UpperBoundCertificate], output: str = "text") -> str:
    if output == "records":
        return "".join(_dump(certificate_record(c)) + "\n" for c in certs)
    lines = [f"{len(certs)} construction(s) for {name}"]
    for c in certs:
        extra = " (existential)" if c.existential else ""
        lines.append(f"  {c.rule_id}: {c.claim()}{extra}")
        lines.append(f"    cite: {c.citation}")
    return "\n".join(lines) + "\n"
