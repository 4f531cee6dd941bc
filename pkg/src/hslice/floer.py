"""Heegaard Floer input data and the negative-surgery d-invariant formulas.

V-sequences are never computed from knot Floer complexes here; they arrive as
curated or user-supplied inputs.  The functions below only evaluate the closed
formulas that consume them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class VSequence:
    """Finite list ``V_0, ..., V_N`` with ``V_s = 0`` for every ``s > N``.

    The stored values must be non-negative and non-increasing.  A trailing
    zero is appended when missing, so ``VSequence(())`` is the all-zero
    sequence of the unknot.
    """

    values: tuple[int, ...] = ()

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError(f"V-sequence must be non-negative: {vals}")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"V-sequence must be non-increasing: {vals}")
        if not vals or vals[-1] != 0:
            vals = vals + (0,)
        object.__setattr__(self, "values", vals)

    @classmethod
    def of(cls, values: Iterable[int]) -> "VSequence":
        return cls(tuple(values))

    def __getitem__(self, s: int) -> int:
        if s < 0:
            raise IndexError("V_s is only stored for s >= 0")
        return self.values[s] if s < len(self.values) else 0

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)

    @classmethod
    def parse(cls, text: str) -> "VSequence":
        text = text.strip().strip("()[]")
        if not text:
            return cls(())
        return cls(tuple(int(x) for x in text.replace(",", " ").split()))


def nu_plus(V: VSequence) -> int:
    """Least ``s >= 0`` with ``V_s = 0``."""
    return next(s for s, v in enumerate(V.values) if v == 0)


def _residue(n: int, i: int) -> int:
    # representative of -i mod n in {0, ..., n-1}
    return (-i) % n


def d_negative_surgery(n: int, i: int, V_mirror: VSequence) -> Fraction:
    """d-invariant of ``S^3_{-n}(K)`` in the spin^c structure ``t_{-i}``.

    ``V_mirror`` is the V-sequence of the mirror ``mK``.  With ``j`` the
    residue of ``-i`` mod ``n``::

        d = (n - (n - 2j)^2) / (4n) + max(V_j(mK), V_{n-j}(mK))
    """
    if n <= 0:
        raise ValueError("negative surgery coefficient needs n > 0")
    j = _residue(n, i)
    return Fraction(n - (n - 2 * j) ** 2, 4 * n) + max(V_mirror[j], V_mirror[n - j])


def grading_shift(n: int, i: int) -> Fraction:
    """Grading shift of the (-n)-trace map in the spin^c structure ``s_{-i}``."""
    if n <= 0:
        raise ValueError("negative surgery coefficient needs n > 0")
    return Fraction(n - (n - 2 * i) ** 2, 4 * n)


def bottom_class_nontrivial(n: int, i: int, V_mirror: VSequence) -> bool:
    """Whether the trace map sends the bottom class of ``HF^+(S^3)`` nontrivially.

    This happens exactly when the grading shift ``(n - (n-2i)^2)/(4n)`` equals
    the d-invariant of the target.  For ``i < 0`` or ``i > n`` the shift is
    strictly too small; for ``0 <= i <= n`` the condition collapses to
    ``V_{min(i, n-i)}(mK) = 0``.
    """
    return grading_shift(n, i) == d_negative_surgery(n, i, V_mirror)


def nu_plus_consistency(n: int, V_mirror: VSequence) -> bool:
    """Cross-check: some ``i`` works iff ``nu+(mK) <= n/2``."""
    if n <= 0:
        raise ValueError("n must be positive")
    some_i = any(bottom_class_nontrivial(n, i, V_mirror) for i in range(-n, 2 * n + 1))
    return some_i == (2 * nu_plus(V_mirror) <= n)


def l_space_v_sequence(alexander_coeffs: dict[int, int]) -> VSequence:
    """V-sequence of an L-space knot from its symmetric Alexander polynomial.

    Uses the torsion coefficients ``V_s = sum_{j >= 1} j * a_{s+j}``; only
    valid for L-space knots such as positive torus knots.
    """
    top = max((e for e, c in alexander_coeffs.items() if c), default=0)
    vals = []
    for s in range(top + 1):
        vals.append(sum(j * alexander_coeffs.get(s + j, 0) for j in range(1, top - s + 1)))
    return VSequence(tuple(vals))
