"""Named knots, torus-knot tables and the curated invariant store."""

from __future__ import annotations

import json
import math
import os
import re
from dataclasses import dataclass, fields, replace
from typing import Optional

from .floer import VSequence, l_space_v_sequence
from .knots import (
    BraidError,
    BraidWord,
    KnotInvariants,
    SeifertMatrix,
    alexander_polynomial,
    arf_from_determinant,
    classical_signature,
    determinant_and_arf,
    parse_braid,
    seifert_matrix_from_braid,
)
from .knots import mirror as mirror_seifert
from .signatures import PrimePowerRoot, SignatureProfile, all_roots, signature_profile


class UnknownKnotError(ValueError):
    pass


@dataclass(frozen=True)
class KnotEntry:
    """A knot as the engine sees it: invariants plus whatever produced them."""

    invariants: KnotInvariants
    braid: Optional[BraidWord] = None
    seifert: Optional[SeifertMatrix] = None
    profile: Optional[SignatureProfile] = None

    @property
    def name(self) -> str:
        return self.invariants.name

    def with_profile(self, M: int) -> "KnotEntry":
        """Attach a signature profile up to modulus ``M`` (computed if needed)."""
        if self.profile is not None and self.profile.max_modulus >= M:
            return self
        if self.seifert is None:
            return self
        return replace(self, profile=signature_profile(self.seifert, M))

    def mirror(self) -> "KnotEntry":
        return KnotEntry(
            invariants=self.invariants.mirror(),
            braid=None if self.braid is None else self.braid.mirror(),
            seifert=None if self.seifert is None else mirror_seifert(self.seifert),
            profile=None if self.profile is None else self.profile.negated(),
        )


def _torus_braid(p: int, q: int) -> BraidWord:
    """``(sigma_1 ... sigma_(p-1))^|q|`` with the sign of ``q``."""
    s = 1 if q > 0 else -1
    return BraidWord(p, tuple(s * i for _ in range(abs(q)) for i in range(1, p)))


def torus_knot_table(q: int, p: int = 2) -> KnotInvariants:
    """Invariants of the torus knot ``T(p, q)``; ``q < 0`` gives the mirror of ``T(p, |q|)``.

    Positive torus knots are L-space knots, so ``nu+ = tau = g4 = (p-1)(q-1)/2``
    and the V-sequence follows from the Alexander polynomial; the mirror has
    ``nu+ = 0``.  ``s-bar-l`` of a positive torus knot is ``2 g - 1``; for
    the negative ``T(2, -(2k+1))`` it is ``-2k-1``.
    """
    if p < 2 or q == 0 or math.gcd(p, abs(q)) != 1:
        raise ValueError(f"T({p},{q}) is not a nontrivial torus knot")
    if abs(q) == 1:
        raise ValueError(f"T({p},{q}) is the unknot")
    a = abs(q)
    g = (p - 1) * (a - 1) // 2
    if p == 2:
        k = (a - 1) // 2
        D = a
        sigma = -2 * k
    else:
        A = seifert_matrix_from_braid(_torus_braid(p, a))
        D, _ = determinant_and_arf(A)
        sigma = classical_signature(A)
    V = _torus_v_sequence(p, a)
    inv = KnotInvariants(
        name=f"T({p},{a})",
        determinant=D,
        arf=arf_from_determinant(D),
        signature=sigma,
        genus4_lower=g,
        genus4_upper=g,
        nu_plus=g,
        nu_plus_mirror=0,
        tau=g,
        sl_bar=2 * g - 1,
        v_sequence=V,
        v_sequence_mirror=VSequence(()),
        unknotting_number=g,
        provenance=(
            ("g4", "Milnor conjecture (Kronheimer-Mrowka)"),
            ("nu+", "positive torus knots are L-space knots: nu+ = g4"),
            ("nu+(mK)", "nu+ of a negative torus knot vanishes"),
            ("sl_bar", "quasipositive braid closure: sl = 2g - 1"),
            ("tau", "tau = g4 for positive torus knots"),
            ("unknotting", "u = g4 for torus knots (Kronheimer-Mrowka)"),
            ("v_sequence", "L-space knot torsion coefficients"),
        ),
    )
    if q > 0:
        return inv
    neg = inv.mirror()
    neg = replace(neg, name=f"T({p},{q})")
    if p == 2:
        neg = replace(
            neg,
            sl_bar=-a,
            provenance=neg.provenance + (("sl_bar(mirror)", "s-bar-l(T(2,-(2k+1))) = -2k-1"),),
        )
    return neg


def _torus_v_sequence(p: int, q: int) -> VSequence:
    A = seifert_matrix_from_braid(_torus_braid(p, q))
    return l_space_v_sequence(alexander_polynomial(A).as_dict())


_UNKNOT = KnotInvariants(
    name="unknot",
    determinant=1,
    arf=0,
    signature=0,
    genus4_lower=0,
    genus4_upper=0,
    nu_plus=0,
    nu_plus_mirror=0,
    tau=0,
    sl_bar=-1,
    v_sequence=VSequence(()),
    v_sequence_mirror=VSequence(()),
    unknotting_number=0,
    provenance=(("sl_bar", "Bennequin bound is sharp for the unknot"),),
)

_FIGURE_EIGHT = KnotInvariants(
    name="4_1",
    determinant=5,
    arf=1,
    signature=0,
    genus4_lower=1,
    genus4_upper=1,
    nu_plus=0,
    nu_plus_mirror=0,
    tau=0,
    v_sequence=VSequence(()),
    v_sequence_mirror=VSequence(()),
    unknotting_number=1,
    provenance=(
        ("nu+", "figure-eight is amphichiral with nu+ = 0"),
        ("g4", "Arf = 1 forces g4 >= 1; genus-one Seifert surface"),
    ),
)

_K_DV = KnotInvariants(
    name="K_DV",
    determinant=None,
    arf=0,
    signature=0,
    genus4_lower=1,
    provenance=(
        ("arf", "topologically slice"),
        ("signature", "topologically slice: Levine-Tristram signatures vanish on S^1_!"),
        ("g4", "not smoothly slice (Donald-Vafaee)"),
        ("filling", "S^3_0(K_DV) bounds a spin 2-handlebody with b2 = 21, sigma = 16 (Donald-Vafaee)"),
    ),
)

K_DV_FILLING = (21, 16)

_BRAIDS = {
    "unknot": BraidWord(1, ()),
    "4_1": BraidWord(3, (1, -2, 1, -2)),
}

_ALIASES = {
    "u": "unknot",
    "unknot": "unknot",
    "o": "unknot",
    "rht": "T(2,3)",
    "3_1": "T(2,3)",
    "trefoil": "T(2,3)",
    "lht": "T(2,-3)",
    "4_1": "4_1",
    "figure8": "4_1",
    "figure-eight": "4_1",
    "fig8": "4_1",
    "k_dv": "K_DV",
    "kdv": "K_DV",
}

_TORUS_RE = re.compile(r"^T\(\s*(\d+)\s*,\s*(-?\d+)\s*\)$", re.IGNORECASE)


def named_knot(name: str, M: Optional[int] = None) -> KnotEntry:
    """Catalogue entry for a named knot (``unknot``, ``RHT``, ``LHT``, ``4_1``, ``T(p,q)``, ``K_DV``).

    With ``M`` a signature profile up to that modulus is attached.
    """
    raw = name.strip()
    key = _ALIASES.get(raw.lower(), raw)
    if key not in ("unknot", "4_1", "K_DV") and not _TORUS_RE.match(key):
        if key.startswith("m") and len(key) > 1:
            inner = named_knot(key[1:], M)
            return replace(inner.mirror(), invariants=replace(inner.mirror().invariants, name=raw))
        raise UnknownKnotError(f"unknown knot name {name!r}")
    if key == "K_DV":
        prof = SignatureProfile(M, {w: 0 for w in all_roots(M)}) if M else None
        return KnotEntry(_K_DV, profile=prof)
    if key == "unknot":
        inv, braid = _UNKNOT, _BRAIDS["unknot"]
    elif key == "4_1":
        inv, braid = _FIGURE_EIGHT, _BRAIDS["4_1"]
    else:
        m = _TORUS_RE.match(key)
        p, q = int(m.group(1)), int(m.group(2))
        if abs(q) == 1 or p == 1:
            inv, braid = replace(_UNKNOT, name=key), _BRAIDS["unknot"]
        else:
            inv = torus_knot_table(q, p)
            braid = _torus_braid(p, q)
    if raw.lower() in ("rht", "lht"):
        inv = replace(inv, name=raw.upper())
    entry = KnotEntry(inv, braid, seifert_matrix_from_braid(braid))
    return entry.with_profile(M) if M else entry


def knot_from_braid(text: str, M: Optional[int] = None) -> KnotEntry:
    """Invariants computable from a braid; Floer-type fields stay empty."""
    braid = parse_braid(text)
    A = seifert_matrix_from_braid(braid)
    prof = signature_profile(A, M) if M else None
    D, arf = determinant_and_arf(A)
    sigma = classical_signature(A)
    lows = [abs(sigma) // 2, arf]
    if prof is not None:
        lows.append(prof.max_abs() // 2)
    inv = KnotInvariants(
        name=str(braid),
        determinant=D,
        arf=arf,
        signature=sigma,
        genus4_lower=max(lows),
        genus4_upper=A.size // 2,
        provenance=(("classical", "computed from braid"),),
    )
    return KnotEntry(inv, braid, A, prof)


def resolve_knot(text: str, M: Optional[int] = None) -> KnotEntry:
    """A braid word ``braid(n; ...)`` or a catalogue name."""
    if text.strip().lower().startswith("braid"):
        return knot_from_braid(text, M)
    return named_knot(text, M)


# --- curated store -------------------------------------------------------

class CacheFormatError(ValueError):
    pass


_FIELDS = [f.name for f in fields(KnotInvariants) if f.name not in ("name", "provenance")]


def _encode(value):
    if isinstance(value, VSequence):
        return list(value.values)
    return value


def _decode(field_name: str, value):
    if field_name in ("v_sequence", "v_sequence_mirror"):
        return None if value is None else VSequence(tuple(value))
    return value


class CuratedInvariantStore:
    """Append-only JSON-lines file of ``{key, invariant, value, provenance}`` records.

    Later records win, so updating an entry is another append.  One writer at
    a time; readers load a snapshot.
    """

    def __init__(self, path: str):
        self.path = path
        self._records: dict[str, dict[str, tuple[object, str]]] = {}
        if os.path.exists(path):
            self._load()

    @classmethod
    def default(cls) -> "CuratedInvariantStore":
        return cls(os.environ.get("HSLICE_CACHE", os.path.join(os.getcwd(), ".hslice-cache.jsonl")))

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CacheFormatError(f"{self.path}:{lineno}: {exc.msg}") from exc
                if not isinstance(rec, dict) or list(rec) != ["key", "invariant", "value", "provenance"]:
                    raise CacheFormatError(
                        f"{self.path}:{lineno}: expected fields key, invariant, value, provenance"
                    )
                self._records.setdefault(rec["key"], {})[rec["invariant"]] = (
                    rec["value"],
                    rec["provenance"],
                )

    def _append(self, rows: list[dict]) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, sort_keys=False, separators=(",", ":")) + "\n")

    def put(self, key: str, inv: KnotInvariants, provenance: str = "computed") -> None:
        prov = dict(inv.provenance)
        rows = []
        for f in _FIELDS:
            value = getattr(inv, f)
            if value is None:
                continue
            rows.append(
                {"key": key, "invariant": f, "value": _encode(value), "provenance": prov.get(f, provenance)}
            )
        self._append(rows)
        for row in rows:
            self._records.setdefault(key, {})[row["invariant"]] = (row["value"], row["provenance"])

    def get(self, key: str) -> Optional[KnotInvariants]:
        rec = self._records.get(key)
        if rec is None:
            return None
        kwargs = {f: _decode(f, rec[f][0]) for f in _FIELDS if f in rec}
        try:
            return KnotInvariants(
                name=key,
                provenance=tuple(sorted((f, rec[f][1]) for f in rec if f in _FIELDS)),
                **kwargs,
            )
        except TypeError as exc:
            raise CacheFormatError(f"{self.path}: incomplete record for {key!r}: {exc}") from exc

    def put_profile(self, key: str, profile: SignatureProfile, provenance: str = "computed") -> None:
        value = {str(w): s for w, s in profile.items()}
        row = {"key": key, "invariant": f"signature_profile:{profile.max_modulus}", "value": value,
               "provenance": provenance}
        self._append([row])
        self._records.setdefault(key, {})[row["invariant"]] = (value, provenance)

    def get_profile(self, key: str, M: int) -> Optional[SignatureProfile]:
        rec = self._records.get(key, {}).get(f"signature_profile:{M}")
        if rec is None:
            return None
        values = {}
        for label, s in rec[0].items():
            r, m = label.split("/")
            values[PrimePowerRoot(int(m), int(r))] = int(s)
        return SignatureProfile(M, values)

    def keys(self) -> list[str]:
        return sorted(self._records)


def parse_bundle(text: str, name: str = "bundle") -> KnotInvariants:
    """Invariant bundle from JSON with ``KnotInvariants`` field names."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bundle line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ValueError("bundle must be a JSON object")
    unknown = set(data) - set(_FIELDS) - {"name", "provenance"}
    if unknown:
        raise ValueError(f"unknown bundle fields: {', '.join(sorted(unknown))}")
    kwargs = {f: _decode(f, data[f]) for f in _FIELDS if f in data}
    kwargs.setdefault("determinant", None)
    for req in ("arf", "signature"):
        if req not in kwargs:
            raise ValueError(f"bundle is missing {req!r}")
    prov = data.get("provenance", {})
    return KnotInvariants(
        name=str(data.get("name", name)),
        provenance=tuple(sorted((str(k), str(v)) for k, v in prov.items())) or (("bundle", "user supplied"),),
        **kwargs,
    )


__all__ = [
    "BraidError",
    "CacheFormatError",
    "CuratedInvariantStore",
    "K_DV_FILLING",
    "KnotEntry",
    "UnknownKnotError",
    "knot_from_braid",
    "named_knot",
    "parse_bundle",
    "resolve_knot",
    "torus_knot_table",
]
