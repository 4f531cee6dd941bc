"""Levine-Tristram signatures at prime-power roots of unity, computed exactly."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Mapping

from .cyclotomic import field, inertia_from_minors, integral_hermitian_minors, prime_power, prime_powers_up_to
from .knots import SeifertMatrix


@dataclass(frozen=True, order=True)
class PrimePowerRoot:
    """``omega = exp(2 pi i r / m)`` with ``m`` a prime power and ``0 < r < m``."""

    m: int
    r: int

    def __post_init__(self):
        if prime_power(self.m) is None:
            raise ValueError(f"{self.m} is not a prime power")
        if not 1 <= self.r < self.m:
            raise ValueError(f"need 1 <= r < m, got r={self.r}, m={self.m}")

    def reduced(self) -> tuple[int, int]:
        """``(order, exponent)`` after cancelling ``gcd(m, r)``."""
        g = math.gcd(self.m, self.r)
        return self.m // g, self.r // g

    def conjugate(self) -> "PrimePowerRoot":
        return PrimePowerRoot(self.m, self.m - self.r)

    def __str__(self) -> str:
        return f"{self.r}/{self.m}"


def hermitian_matrix_vectors(A: SeifertMatrix, order: int, exponent: int):
    """Integer-kernel entries of ``(1 - w) A + (1 - conj w) A^T`` with ``w = zeta^exponent``."""
    F = field(order)
    one = F.const(1)
    u = F.sub(one, F.zeta_power(exponent))
    ub = F.conj(u)
    n = A.size
    E = A.entries
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(F.add(F.scale(u, E[i][j]), F.scale(ub, E[j][i])))
        rows.append(row)
    return F, rows


def levine_tristram(A: SeifertMatrix, omega: PrimePowerRoot) -> int:
    """Signature of ``(1 - w) A + (1 - conj w) A^T`` at ``w = omega``.

    Nondegeneracy is guaranteed since ``D(1) = 1`` keeps prime-power roots of
    unity away from the zeros of the Alexander polynomial; a singular matrix
    raises ``ArithmeticError``.
    """
    if A.size == 0:
        return 0
    order, exponent = omega.reduced()
    return _signature_from_minors(order, exponent, _minors(A, order))


def _minors(A: SeifertMatrix, order: int):
    # the matrix at zeta itself; other primitive roots are Galois conjugates
    F, rows = hermitian_matrix_vectors(A, order, 1)
    minors, nullity = integral_hermitian_minors(F, rows)
    return F, minors, nullity


def _signature_from_minors(order, exponent, data) -> int:
    F, minors, nullity = data
    if nullity:
        raise ArithmeticError(
            f"Levine-Tristram form is degenerate at {exponent}/{order} (nullity {nullity})"
        )
    pos, neg = inertia_from_minors(F, minors, exponent)
    return pos - neg


@dataclass(frozen=True)
class SignatureProfile:
    """Map ``PrimePowerRoot -> signature`` over all prime powers ``m <= max_modulus``."""

    max_modulus: int
    values: Mapping[PrimePowerRoot, int] = dc_field(default_factory=dict)

    def __post_init__(self):
        for w, s in self.values.items():
            if s % 2:
                raise ValueError(f"odd signature {s} at {w}")
            c = w.conjugate()
            if c in self.values and self.values[c] != s:
                raise ValueError(f"profile breaks conjugation symmetry at {w}")

    def __getitem__(self, omega: PrimePowerRoot) -> int:
        return self.values[omega]

    def get(self, m: int, r: int) -> int:
        return self.values[PrimePowerRoot(m, r)]

    def __iter__(self) -> Iterator[PrimePowerRoot]:
        return iter(sorted(self.values))

    def items(self):
        return sorted(self.values.items())

    def __len__(self) -> int:
        return len(self.values)

    def negated(self) -> "SignatureProfile":
        return SignatureProfile(self.max_modulus, {w: -s for w, s in self.values.items()})

    def max_abs(self) -> int:
        return max((abs(s) for s in self.values.values()), default=0)


def all_roots(M: int) -> list[PrimePowerRoot]:
    return [PrimePowerRoot(m, r) for m in prime_powers_up_to(M) for r in range(1, m)]


def signature_profile(A: SeifertMatrix, M: int) -> SignatureProfile:
    """All ``sigma(m, r)`` for prime powers ``m <= M`` and ``1 <= r < m``.

    One elimination per root order: all primitive roots of that order are
    Galois conjugates, so their signatures come from the same minors.
    """
    if M < 2:
        raise ValueError("modulus bound must be at least 2")
    minors: dict[int, tuple] = {}
    cache: dict[tuple[int, int], int] = {}
    values = {}
    for w in all_roots(M):
        if A.size == 0:
            values[w] = 0
            continue
        order, exponent = w.reduced()
        key = (order, min(exponent, order - exponent))
        if key not in cache:
            if order not in minors:
                minors[order] = _minors(A, order)
            cache[key] = _signature_from_minors(order, key[1], minors[order])
        values[w] = cache[key]
    return SignatureProfile(M, values)
