"""Exact arithmetic in prime-power cyclotomic fields ``Q(zeta_m)``.

Elements are coefficient vectors over the power basis ``1, zeta, ...,
zeta^(phi-1)`` with ``zeta = exp(2 pi i / m)``.  The integer kernel
(``CyclotomicField``) works on tuples of Python ints; ``CyclotomicNumber``
wraps it with rational coefficients for the public API.

Signs of real elements are certified: an exact zero test, then interval
enclosures of the cosines at increasing binary precision.  For a nonzero
algebraic integer ``x`` with coefficient 1-norm ``B`` every Galois conjugate
is bounded by ``B`` and ``|Norm(x)| >= 1``, so ``|x| >= B^-(phi-1)``; that
bounds the precision ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

IntVec = tuple[int, ...]


def prime_power(m: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``m = p^k``, or ``None`` if ``m`` is not a prime power."""
    if m < 2:
        return None
    p = next(d for d in range(2, m + 1) if m % d == 0)
    k, rest = 0, m
    while rest % p == 0:
        rest //= p
        k += 1
    return (p, k) if rest == 1 else None


def prime_powers_up_to(M: int) -> list[int]:
    return [m for m in range(2, M + 1) if prime_power(m)]


class CyclotomicField:
    """Integer kernel for ``Z[zeta_m]``, ``m`` a prime power."""

    def __init__(self, m: int):
        pk = prime_power(m)
        if pk is None:
            raise ValueError(f"{m} is not a prime power")
        self.m = m
        self.p, self.k = pk
        self.q = m // self.p
        self.phi = (self.p - 1) * self.q
        self._cos_float = [math.cos(2 * math.pi * j / m) for j in range(self.phi)]
        self._cos_fixed: dict[int, list[tuple[int, int]]] = {}
        self.units = [a for a in range(2, m) if a % self.p]

    # basic vectors

    def zero(self) -> IntVec:
        return (0,) * self.phi

    def const(self, c: int) -> IntVec:
        return (c,) + (0,) * (self.phi - 1)

    def zeta_power(self, e: int) -> IntVec:
        buf = [0] * self.m
        buf[e % self.m] = 1
        return self._reduce(buf)

    def _reduce(self, buf: list[int]) -> IntVec:
        """Reduce a coefficient list of any length below ``phi`` (in place)."""
        phi, q, p = self.phi, self.q, self.p
        m = self.m
        if len(buf) > m:
            # zeta^m = 1 folds everything into [0, m)
            folded = [0] * m
            for e, c in enumerate(buf):
                folded[e % m] += c
            buf = folded
        for e in range(len(buf) - 1, phi - 1, -1):
            c = buf[e]
            if c:
                s = e - phi
                for j in range(p - 1):
                    buf[s + j * q] -= c
        return tuple(buf[:phi]) if len(buf) >= phi else tuple(buf) + (0,) * (phi - len(buf))

    # ring operations

    def add(self, a: IntVec, b: IntVec) -> IntVec:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: IntVec, b: IntVec) -> IntVec:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: IntVec) -> IntVec:
        return tuple(-x for x in a)

    def scale(self, a: IntVec, c: int) -> IntVec:
        return tuple(c * x for x in a)

    def mul(self, a: IntVec, b: IntVec) -> IntVec:
        # Kronecker substitution: pack both vectors into one big integer each
        ma = max(map(abs, a))
        mb = max(map(abs, b))
        if not ma or not mb:
            return (0,) * self.phi
        bits = ma.bit_length() + mb.bit_length() + self.phi.bit_length() + 2
        prod = _pack(a, bits) * _pack(b, bits)
        return self._reduce(_unpack(prod, bits, 2 * self.phi - 1))

    def galois(self, a: IntVec, t: int) -> IntVec:
        """Image under ``zeta -> zeta^t`` (``t`` a unit mod ``m``)."""
        buf = [0] * self.m
        for j, x in enumerate(a):
            if x:
                buf[(j * t) % self.m] += x
        return self._reduce(buf)

    def conj(self, a: IntVec) -> IntVec:
        return self.galois(a, self.m - 1)

    def norm_cofactor(self, a: IntVec) -> tuple[IntVec, int]:
        """Return ``(c, N)`` with ``a * c = N`` the (integer) field norm of ``a``."""
        c = self.const(1)
        for t in self.units:
            c = self.mul(c, self.galois(a, t))
        n = self.mul(a, c)
        if any(n[1:]):
            raise ArithmeticError("norm computation did not land in Q")
        return c, n[0]

    def exact_div(self, a: IntVec, cofactor: IntVec, norm: int) -> IntVec:
        """``a / d`` where ``d * cofactor = norm``; the quotient must be integral."""
        prod = self.mul(a, cofactor)
        out = []
        for x in prod:
            quo, rem = divmod(x, norm)
            if rem:
                raise ArithmeticError("inexact division in Z[zeta]")
            out.append(quo)
        return tuple(out)

    # numerics

    def real_float(self, a: IntVec) -> float:
        return math.fsum(x * c for x, c in zip(a, self._cos_float))

    def _fixed_cos(self, prec: int) -> list[tuple[int, int]]:
        table = self._cos_fixed.get(prec)
        if table is None:
            table = _cos_bounds(self.m, self.phi, prec)
            self._cos_fixed[prec] = table
        return table

    def sign_real(self, a: IntVec) -> int:
        """Certified sign of a real element of ``Z[zeta]``."""
        if not any(a):
            return 0
        bound = sum(abs(x) for x in a)
        needed = self.phi * max(1, bound.bit_length()) + 4
        prec = 64
        while True:
            lo = hi = 0
            for x, (cl, ch) in zip(a, self._fixed_cos(prec)):
                if x > 0:
                    lo += x * cl
                    hi += x * ch
                elif x < 0:
                    lo += x * ch
                    hi += x * cl
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if prec > needed:
                raise ArithmeticError("sign undecided beyond the separation bound; element is not real")
            prec *= 2


def _pack(vec: IntVec, bits: int) -> int:
    x = 0
    for c in reversed(vec):
        x = (x << bits) + c
    return x


def _unpack(x: int, bits: int, length: int) -> list[int]:
    """Signed base-``2^bits`` digits of ``x``; digits must lie in ``(-2^(bits-1), 2^(bits-1))``."""
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    full = 1 << bits
    out = []
    for _ in range(length):
        d = x & mask
        if d >= half:
            d -= full
        out.append(d)
        x = (x - d) >> bits
    return out


@lru_cache(maxsize=None)
def _cos_bounds(m: int, phi: int, prec: int) -> list[tuple[int, int]]:
    """Integer enclosures ``[L, U]`` of ``2^prec * cos(2 pi j / m)``."""
    iv = mpmath.iv
    saved = iv.prec
    out = []
    try:
        iv.prec = prec + 16
        two_pi = 2 * iv.pi
        for j in range(phi):
            lo, hi = iv.cos(two_pi * j / m)._mpi_
            out.append((_floor_scaled(lo, prec), -_floor_scaled(mpmath.libmp.mpf_neg(hi), prec)))
    finally:
        iv.prec = saved
    return out


def _floor_scaled(raw, prec: int) -> int:
    """``floor(x * 2^prec)`` for a raw mpmath float tuple."""
    sign, man, exp, _ = raw
    if sign:
        man = -man
    exp += prec
    return man << exp if exp >= 0 else man >> -exp


@lru_cache(maxsize=None)
def field(m: int) -> CyclotomicField:
    return CyclotomicField(m)


@dataclass(frozen=True)
class CyclotomicNumber:
    """Element of ``Q(zeta_m)`` with rational coefficients over the power basis."""

    m: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        F = field(self.m)
        cs = tuple(Fraction(c) for c in self.coeffs)
        if len(cs) != F.phi:
            raise ValueError(f"expected {F.phi} coefficients for m={self.m}, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_int(cls, m: int, c) -> "CyclotomicNumber":
        F = field(m)
        return cls(m, (Fraction(c),) + (Fraction(0),) * (F.phi - 1))

    @classmethod
    def zeta(cls, m: int, e: int = 1) -> "CyclotomicNumber":
        return cls(m, field(m).zeta_power(e))

    @property
    def field(self) -> CyclotomicField:
        return field(self.m)

    def integral_parts(self) -> tuple[IntVec, int]:
        """``(vector, den)`` with ``self = vector / den`` and ``den > 0``."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(int(c * den) for c in self.coeffs), den

    @classmethod
    def _from_int_vec(cls, m: int, vec: Iterable[int], den: int = 1) -> "CyclotomicNumber":
        return cls(m, tuple(Fraction(x, den) for x in vec))

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.m != self.m:
                raise ValueError("cannot mix different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_int(self.m, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.m, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        F = self.field
        a, da = self.integral_parts()
        b, db = o.integral_parts()
        return CyclotomicNumber._from_int_vec(self.m, F.mul(a, b), da * db)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicNumber":
        a, d = self.integral_parts()
        return CyclotomicNumber._from_int_vec(self.m, self.field.conj(a), d)

    def inverse(self) -> "CyclotomicNumber":
        a, d = self.integral_parts()
        if not any(a):
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        c, n = self.field.norm_cofactor(a)
        return CyclotomicNumber._from_int_vec(self.m, (x * d for x in c), n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def sign(self) -> int:
        """Certified sign; only defined for real elements."""
        if not self.is_real():
            raise ValueError("sign of a non-real cyclotomic number")
        a, _ = self.integral_parts()
        return self.field.sign_real(a)

    def __complex__(self) -> complex:
        return sum(
            (float(c) * complex(math.cos(2 * math.pi * j / self.m), math.sin(2 * math.pi * j / self.m))
             for j, c in enumerate(self.coeffs)),
            complex(0),
        )


def hermitian_signature(H: Sequence[Sequence[CyclotomicNumber]]) -> int:
    """Signature of a Hermitian matrix over ``Q(zeta_m)``; raises on singular input."""
    pos, neg, nullity = hermitian_inertia(H)
    if nullity:
        raise ArithmeticError(f"Hermitian matrix is degenerate (nullity {nullity})")
    return pos - neg


def hermitian_inertia(H: Sequence[Sequence[CyclotomicNumber]]) -> tuple[int, int, int]:
    n = len(H)
    if n == 0:
        return 0, 0, 0
    m = H[0][0].m
    for i in range(n):
        if len(H[i]) != n:
            raise ValueError("Hermitian matrix must be square")
        for j in range(i, n):
            if H[i][j].m != m or H[j][i].m != m:
                raise ValueError("entries from different cyclotomic fields")
            if H[i][j] != H[j][i].conjugate():
                raise ValueError(f"matrix is not Hermitian at ({i}, {j})")
    # a positive common denominator does not change inertia
    den = 1
    for row in H:
        for x in row:
            for c in x.coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
    M = [[tuple(int(c * den) for c in x.coeffs) for x in row] for row in H]
    return integral_hermitian_inertia(field(m), M)


def integral_hermitian_inertia(
    F: CyclotomicField, M: list[list[IntVec]], t: int = 1
) -> tuple[int, int, int]:
    """Inertia of a Hermitian matrix over ``Z[zeta]``, embedded by ``zeta -> e^(2 pi i t/m)``."""
    minors, nullity = integral_hermitian_minors(F, M)
    pos, neg = inertia_from_minors(F, minors, t)
    return pos, neg, nullity


def inertia_from_minors(F: CyclotomicField, minors: Sequence[IntVec], t: int = 1) -> tuple[int, int]:
    """``(n_plus, n_minus)`` from nested principal minors ``d_1, d_2, ...``.

    The ``k``-th pivot of an LDL* factorisation is ``d_k / d_(k-1)``; ``t``
    selects the complex embedding, i.e. the Galois conjugate whose signs count.
    """
    pos = neg = 0
    prev_sign = 1
    for d in minors:
        s = F.sign_real(d if t == 1 else F.galois(d, t))
        if s == 0:
            raise ArithmeticError("vanishing principal minor")
        if s * prev_sign > 0:
            pos += 1
        else:
            neg += 1
        prev_sign = s
    return pos, neg


def integral_hermitian_minors(F: CyclotomicField, M: list[list[IntVec]]) -> tuple[list[IntVec], int]:
    """Nested nonzero principal minors of a Hermitian matrix over ``Z[zeta]``, and its nullity.

    Fraction-free symmetric (Bareiss) elimination: after ``k`` pivots the
    remaining block holds ``d_k`` times the Schur complement, where ``d_k`` is
    the principal minor on the pivots chosen so far.  When every remaining
    diagonal entry vanishes a unimodular congruence ``e_i += c e_j`` with ``c``
    in ``{1, zeta}`` creates a nonzero diagonal.  Every choice depends only on
    which entries are exactly zero, so the elimination commutes with the
    Galois action and one run serves all embeddings.
    """
    M = [list(row) for row in M]
    active = list(range(len(M)))
    minors: list[IntVec] = []
    prev_cof, prev_norm = None, 1
    while active:
        k = max(active, key=lambda i: abs(F.real_float(M[i][i])) if any(M[i][i]) else -1.0)
        if not any(M[k][k]):
            pair = next(((i, j) for i in active for j in active if i < j and any(M[i][j])), None)
            if pair is None:
                return minors, len(active)
            i, j = pair
            _congruence_add(F, M, active, i, j)
            k = i
        p = M[k][k]
        if not any(p):
            raise ArithmeticError("zero pivot after congruence step")
        minors.append(p)
        active.remove(k)
        row_k = M[k]
        for a_idx, i in enumerate(active):
            v_i = M[i][k]
            for j in active[a_idx:]:
                val = F.sub(F.mul(p, M[i][j]), F.mul(v_i, row_k[j]))
                if prev_cof is not None:
                    val = F.exact_div(val, prev_cof, prev_norm)
                M[i][j] = val
                if j != i:
                    M[j][i] = F.conj(val)
        if active:
            prev_cof, prev_norm = F.norm_cofactor(p)
    return minors, 0


def _congruence_add(F: CyclotomicField, M, active, i, j):
    """Apply ``row_i += c row_j``, ``col_i += conj(c) col_j`` to make ``M[i][i]`` nonzero."""
    for c in (F.const(1), F.zeta_power(1)):
        cb = F.conj(c)
        new_diag = F.add(F.mul(c, M[j][i]), F.mul(cb, M[i][j]))
        if any(new_diag):
            break
    else:
        raise ArithmeticError("no congruence makes the diagonal nonzero")
    for t in active:
        if t == i:
            continue
        M[i][t] = F.add(M[i][t], F.mul(c, M[j][t]))
        M[t][i] = F.conj(M[i][t])
    # M[i][i] picks up c M[j][i] + conj(c) M[i][j] + |c|^2 M[j][j], with M[j][j] = 0
    M[i][i] = new_diag
