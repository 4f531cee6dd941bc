"""Braid presentations, Seifert matrices and classical knot invariants.

Convention: a positive crossing band contributes ``-1`` to the diagonal of the
Seifert matrix, so the right-handed trefoil ``braid(2; 1 1 1)`` has signature
``-2``.  Mirrors are realised by ``A -> -A^T``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .floer import VSequence, nu_plus
from .linalg import int_det, symmetric_signature


class BraidError(ValueError):
    pass


@dataclass(frozen=True)
class BraidWord:
    """A braid on ``strands`` strands; letter ``e`` is ``sigma_|e|^sign(e)``."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(e) for e in self.letters)
        object.__setattr__(self, "letters", letters)
        n = self.strands
        if n < 1:
            raise BraidError("a braid needs at least one strand")
        for e in letters:
            if e == 0 or abs(e) >= n:
                raise BraidError(f"letter {e} out of range for {n} strands")
        perm = self.permutation()
        x, length = perm[0], 1
        while x != 0:
            x, length = perm[x], length + 1
        if length != n:
            raise BraidError(
                f"closure of {self} is a link, not a knot "
                f"(permutation {perm} is not an {n}-cycle)"
            )

    def permutation(self) -> list[int]:
        perm = list(range(self.strands))
        for e in self.letters:
            i = abs(e) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        return perm

    def mirror(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-e for e in self.letters))

    def __str__(self) -> str:
        return f"braid({self.strands}; {' '.join(map(str, self.letters))})".replace(
            "; )", ";)"
        )


_BRAID_RE = re.compile(r"^\s*braid\s*\(\s*(\d+)\s*;\s*([-+\d\s]*)\)\s*$")


def parse_braid(text: str) -> BraidWord:
    """Parse ``braid(n; e1 e2 ... ek)``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise BraidError(f"malformed braid: {text!r} (expected 'braid(n; e1 e2 ...)')")
    try:
        letters = tuple(int(tok) for tok in m.group(2).split())
    except ValueError as exc:
        raise BraidError(f"malformed braid letter in {text!r}") from exc
    return BraidWord(int(m.group(1)), letters)


@dataclass(frozen=True)
class SeifertMatrix:
    entries: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Seifert matrix must be square")
        if n % 2:
            raise ValueError("Seifert matrix must have even size")
        skew = [[rows[i][j] - rows[j][i] for j in range(n)] for i in range(n)]
        if int_det(skew) != 1:
            raise ValueError("A - A^T must be unimodular for a knot Seifert matrix")

    @property
    def size(self) -> int:
        return len(self.entries)

    def transpose(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.entries)) if self.entries else ()

    def symmetrized(self) -> list[list[int]]:
        A = self.entries
        n = len(A)
        return [[A[i][j] + A[j][i] for j in range(n)] for i in range(n)]


def seifert_matrix_from_braid(b: BraidWord) -> SeifertMatrix:
    """Seifert's algorithm on the braid closure.

    The surface is ``strands`` stacked disks joined by one half-twisted band
    per letter.  H_1 is generated by loops through consecutive bands on the
    same generator, giving ``len(letters) - strands + 1`` basis curves.
    """
    word = b.letters
    times: dict[int, list[int]] = {}
    for t, e in enumerate(word):
        times.setdefault(abs(e), []).append(t)
    loops = [(gen, a, c) for gen in sorted(times) for a, c in zip(times[gen], times[gen][1:])]
    sign = [1 if e > 0 else -1 for e in word]
    N = len(loops)
    V = [[0] * N for _ in range(N)]
    for p, (gen, a, c) in enumerate(loops):
        V[p][p] = -(sign[a] + sign[c]) // 2
        for q, (gen2, a2, c2) in enumerate(loops):
            if gen2 == gen and a2 == c:
                # consecutive loops sharing the band at time c
                if sign[c] > 0:
                    V[p][q] = 1
                else:
                    V[q][p] = -1
            elif gen2 == gen + 1:
                if a < a2 < c < c2:
                    V[p][q] = -1
                elif a2 < a < c2 < c:
                    V[p][q] = 1
    if N != len(word) - b.strands + 1:
        raise BraidError(f"closure of {b} has a disconnected Seifert surface")
    return SeifertMatrix(tuple(tuple(r) for r in V))


def mirror(A: SeifertMatrix) -> SeifertMatrix:
    return SeifertMatrix(tuple(tuple(-x for x in row) for row in A.transpose()))


def seifert_genus_bound(b: BraidWord) -> int:
    return (len(b.letters) - b.strands + 1) // 2


@dataclass(frozen=True)
class LaurentPolynomial:
    """Integer Laurent polynomial ``sum coeffs[k] * t^(low + k)``."""

    low: int
    coeffs: tuple[int, ...]

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPolynomial":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls(0, ())
        lo, hi = min(terms), max(terms)
        return cls(lo, tuple(terms.get(e, 0) for e in range(lo, hi + 1)))

    def as_dict(self) -> dict[int, int]:
        return {self.low + k: c for k, c in enumerate(self.coeffs) if c}

    def __call__(self, t):
        if not self.coeffs:
            return 0
        if isinstance(t, int):
            t = Fraction(t)
        return sum(c * t ** (self.low + k) for k, c in enumerate(self.coeffs))

    def is_symmetric(self) -> bool:
        d = self.as_dict()
        return all(d.get(-e, 0) == c for e, c in d.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.as_dict().items(), reverse=True):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sgn = "-" if c < 0 else "+"
            parts.append((sgn, body))
        first_sgn, first = parts[0]
        out = ("-" if first_sgn == "-" else "") + first
        for sgn, body in parts[1:]:
            out += f" {sgn} {body}"
        return out


def _interpolate(points: Sequence[int], values: Sequence[int]) -> list[int]:
    """Exact coefficients (low to high) of the polynomial through the points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(points, values)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += yi * c / denom
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("interpolation produced a non-integer coefficient")
        out.append(int(c))
    return out


def alexander_polynomial(A: SeifertMatrix) -> LaurentPolynomial:
    """``det(A - t A^T)`` normalised so that ``D(t) = D(1/t)`` and ``D(1) = 1``."""
    n = A.size
    if n == 0:
        return LaurentPolynomial(0, (1,))
    M, MT = A.entries, A.transpose()
    pts = list(range(n + 1))
    vals = [int_det([[M[i][j] - t * MT[i][j] for j in range(n)] for i in range(n)]) for t in pts]
    coeffs = _interpolate(pts, vals)
    # det(A - tA^T) = t^n det(A - t^-1 A^T) up to sign, so centre at t^(n/2)
    poly = {e - n // 2: c for e, c in enumerate(coeffs) if c}
    value_at_one = sum(poly.values())
    if value_at_one not in (1, -1):
        raise ArithmeticError("Alexander polynomial must satisfy |D(1)| = 1")
    if value_at_one == -1:
        poly = {e: -c for e, c in poly.items()}
    return LaurentPolynomial.from_dict(poly)


def determinant_and_arf(A: SeifertMatrix) -> tuple[int, int]:
    """Knot determinant ``|D(-1)|`` and the Arf invariant read off mod 8."""
    D = abs(int(alexander_polynomial(A)(-1)))
    return D, arf_from_determinant(D)


def arf_from_determinant(D: int) -> int:
    return 0 if D % 8 in (1, 7) else 1


def classical_signature(A: SeifertMatrix) -> int:
    """Signature of ``A + A^T`` (the Levine-Tristram value at ``-1``)."""
    return symmetric_signature(A.symmetrized())


@dataclass(frozen=True)
class KnotInvariants:
    """Invariant bundle for a knot ``K``.

    ``determinant`` may be ``None`` for knots known only through a curated
    bundle.  ``nu_plus_mirror`` is ``nu+(mK)`` and ``v_sequence_mirror`` the V-sequence
    of ``mK``, which is what the relative adjunction and surgery formulas
    consume.  Optional fields are ``None`` when unknown.
    """

    name: str
    determinant: Optional[int]
    arf: int
    signature: int
    genus4_lower: int = 0
    genus4_upper: Optional[int] = None
    nu_plus: Optional[int] = None
    nu_plus_mirror: Optional[int] = None
    tau: Optional[int] = None
    sl_bar: Optional[int] = None
    v_sequence: Optional[VSequence] = None
    v_sequence_mirror: Optional[VSequence] = None
    unknotting_number: Optional[int] = None
    provenance: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.arf not in (0, 1):
            raise ValueError(f"{self.name}: Arf invariant is a bit")
        D = self.determinant
        if D is not None:
            if D <= 0 or D % 2 == 0:
                raise ValueError(f"{self.name}: knot determinant must be odd and positive")
            if arf_from_determinant(D) != self.arf:
                raise ValueError(f"{self.name}: Arf {self.arf} contradicts determinant {D}")
        if self.signature % 2:
            raise ValueError(f"{self.name}: knot signature must be even")
        if self.genus4_lower < 0:
            raise ValueError(f"{self.name}: negative slice genus bound")
        up = self.genus4_upper
        if up is not None and self.genus4_lower > up:
            raise ValueError(f"{self.name}: g4 lower bound {self.genus4_lower} exceeds upper {up}")
        for label, nu, V in (
            ("nu+(K)", self.nu_plus, self.v_sequence),
            ("nu+(mK)", self.nu_plus_mirror, self.v_sequence_mirror),
        ):
            if nu is not None and nu < 0:
                raise ValueError(f"{self.name}: {label} must be non-negative")
            if nu is not None and V is not None and nu_plus(V) != nu:
                raise ValueError(f"{self.name}: {label}={nu} disagrees with V-sequence {V}")
            # Hom-Wu: 0 <= nu+ <= g4, and g4(mK) = g4(K)
            if nu is not None and up is not None and nu > up:
                raise ValueError(f"{self.name}: {label}={nu} exceeds g4 upper bound {up}")

    def resolved_nu_plus_mirror(self) -> Optional[int]:
        if self.nu_plus_mirror is not None:
            return self.nu_plus_mirror
        if self.v_sequence_mirror is not None:
            return nu_plus(self.v_sequence_mirror)
        return None

    def mirror(self) -> "KnotInvariants":
        name = self.name[1:] if self.name.startswith("m") and self.name[1:] else "m" + self.name
        return replace(
            self,
            name=name,
            signature=-self.signature,
            nu_plus=self.nu_plus_mirror,
            nu_plus_mirror=self.nu_plus,
            tau=None if self.tau is None else -self.tau,
            sl_bar=None,
            v_sequence=self.v_sequence_mirror,
            v_sequence_mirror=self.v_sequence,
        )

    def merged(self, override: "KnotInvariants") -> tuple["KnotInvariants", list[str]]:
        """Overlay the non-empty fields of ``override``; report conflicting fields."""
        conflicts = []
        changes = {}
        for f in (
            "determinant", "arf", "signature", "genus4_lower", "genus4_upper", "nu_plus",
            "nu_plus_mirror", "tau", "sl_bar", "v_sequence", "v_sequence_mirror",
            "unknotting_number",
        ):
            new = getattr(override, f)
            old = getattr(self, f)
            if new is None:
                continue
            if old is not None and old != new:
                conflicts.append(f"{f}: computed {old}, bundle {new}")
            changes[f] = new
        prov = dict(self.provenance)
        prov.update(dict(override.provenance))
        changes["provenance"] = tuple(sorted(prov.items()))
        return replace(self, **changes), conflicts


def invariants_from_braid(
    b: BraidWord, name: Optional[str] = None, profile_signatures: Iterable[int] = ()
) -> tuple[KnotInvariants, SeifertMatrix]:
    """Classical invariants computable from the braid alone.

    ``profile_signatures`` may carry Levine-Tristram values, whose halves are
    lower bounds for the slice genus; Arf(K) = 1 also forces ``g4 >= 1``.
    """
    A = seifert_matrix_from_braid(b)
    D, arf = determinant_and_arf(A)
    sigma = classical_signature(A)
    lower = max([abs(sigma) // 2, arf] + [abs(s) // 2 for s in profile_signatures])
    inv = KnotInvariants(
        name=name or str(b),
        determinant=D,
        arf=arf,
        signature=sigma,
        genus4_lower=lower,
        genus4_upper=seifert_genus_bound(b),
        provenance=(("classical", "computed from braid"),),
    )
    return inv, A
