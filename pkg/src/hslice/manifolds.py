"""Closed oriented 4-manifolds through their intersection forms and gauge-theoretic flags."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .linalg import bilinear, block_sum, int_det, is_symmetric, mat_vec, symmetric_inertia

Form = tuple[tuple[int, ...], ...]


class ManifoldError(ValueError):
    pass


@dataclass(frozen=True)
class BasicClass:
    """Poincare dual ``k`` of ``c1(s)`` in the basis of ``Q``.

    ``phi_nonzero`` marks a class whose mixed invariant is known not to
    vanish; ``relative_sw_nonzero`` marks nonvanishing Seiberg-Witten
    invariant relative to the standard contact structure on the boundary
    sphere.  Both are trusted inputs.
    """

    k_vector: tuple[int, ...]
    phi_nonzero: bool = True
    relative_sw_nonzero: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k_vector", tuple(int(x) for x in self.k_vector))

    def negated(self) -> "BasicClass":
        return replace(self, k_vector=tuple(-x for x in self.k_vector))


@dataclass(frozen=True)
class FourManifold:
    name: str
    b2_plus: int
    b2_minus: int
    form: Optional[Form] = None
    h1_zero: bool = True
    spin: bool = False
    symplectic: bool = False
    simple_type: bool = False
    bf_hypothesis: bool = False
    euler: Optional[int] = None
    basic_classes: tuple[BasicClass, ...] = ()
    # the manifold this one is the orientation reversal of, so that -(-X) == X
    origin: Optional["FourManifold"] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.b2_plus < 0 or self.b2_minus < 0:
            raise ManifoldError(f"{self.name}: Betti numbers must be non-negative")
        if self.euler is None:
            object.__setattr__(self, "euler", 2 + self.b2)
        if self.form is not None:
            Q = tuple(tuple(int(x) for x in row) for row in self.form)
            object.__setattr__(self, "form", Q)
            if not is_symmetric(Q) or len(Q) != self.b2:
                raise ManifoldError(f"{self.name}: form must be symmetric of rank b2={self.b2}")
            pos, neg, null = symmetric_inertia(Q)
            if null or (pos, neg) != (self.b2_plus, self.b2_minus):
                raise ManifoldError(
                    f"{self.name}: form has inertia ({pos}, {neg}, {null}), "
                    f"expected ({self.b2_plus}, {self.b2_minus}, 0)"
                )
            if abs(int_det(Q)) != 1:
                raise ManifoldError(f"{self.name}: intersection form is not unimodular")
            if self.spin and any(Q[i][i] % 2 for i in range(len(Q))):
                raise ManifoldError(f"{self.name}: spin manifold needs an even form")
        if self.spin and self.signature % 16:
            raise ManifoldError(f"{self.name}: spin forces signature = 0 mod 16 (Rokhlin)")
        bcs = tuple(self.basic_classes)
        object.__setattr__(self, "basic_classes", bcs)
        for bc in bcs:
            if len(bc.k_vector) != self.b2:
                raise ManifoldError(f"{self.name}: basic class has wrong length")
            if self.form is not None and not is_characteristic(self.form, bc.k_vector):
                raise ManifoldError(f"{self.name}: basic class {bc.k_vector} is not characteristic")
        vecs = {bc.k_vector for bc in bcs}
        if any(tuple(-x for x in v) not in vecs for v in vecs):
            raise ManifoldError(f"{self.name}: basic classes must be closed under k -> -k")

    @property
    def b2(self) -> int:
        return self.b2_plus + self.b2_minus

    @property
    def signature(self) -> int:
        return self.b2_plus - self.b2_minus

    def is_negative_definite_diagonal(self) -> bool:
        """Whether the form is ``-I`` (so ``#n(-CP2)`` or ``S4``)."""
        if self.b2_plus or self.form is None:
            return False
        n = self.b2
        return all(self.form[i][j] == (-1 if i == j else 0) for i in range(n) for j in range(n))

    def __str__(self) -> str:
        return self.name


def is_characteristic(Q: Form, k: Sequence[int]) -> bool:
    Qk = mat_vec(Q, k)
    return all((Qk[i] - Q[i][i]) % 2 == 0 for i in range(len(Q)))


def e8_form() -> Form:
    """Positive definite E8 lattice (Cartan matrix, Bourbaki labelling)."""
    edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
    Q = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        Q[i][j] = Q[j][i] = -1
    return tuple(tuple(r) for r in Q)


HYPERBOLIC: Form = ((0, 1), (1, 0))


def _neg(Q: Form) -> Form:
    return tuple(tuple(-x for x in row) for row in Q)


def _sum_forms(*forms: Form) -> Form:
    out: Form = ()
    for f in forms:
        out = block_sum(out, f)
    return out


def _k3() -> FourManifold:
    form = _sum_forms(_neg(e8_form()), _neg(e8_form()), HYPERBOLIC, HYPERBOLIC, HYPERBOLIC)
    return FourManifold(
        name="K3",
        b2_plus=3,
        b2_minus=19,
        form=form,
        spin=True,
        symplectic=True,
        simple_type=True,
        bf_hypothesis=True,
        basic_classes=(BasicClass((0,) * 22, phi_nonzero=True),),
    )


@lru_cache(maxsize=None)
def _library() -> dict[str, FourManifold]:
    return {
        "S4": FourManifold("S4", 0, 0, form=(), spin=True),
        "CP2": FourManifold("CP2", 1, 0, form=((1,),), symplectic=True),
        "mCP2": FourManifold("mCP2", 0, 1, form=((-1,),)),
        "S2xS2": FourManifold("S2xS2", 1, 1, form=HYPERBOLIC, spin=True, symplectic=True),
        "K3": _k3(),
    }


LIBRARY_NAMES = ("S4", "CP2", "mCP2", "S2xS2", "K3")
_ALIASES = {"-CP2": "mCP2", "CP2bar": "mCP2", "S^4": "S4", "S2×S2": "S2xS2", "k3": "K3"}


def standard(name: str) -> FourManifold:
    lib = _library()
    key = _ALIASES.get(name, name)
    if key not in lib:
        raise ManifoldError(f"unknown manifold {name!r}; library: {', '.join(LIBRARY_NAMES)}")
    return lib[key]


def _is_blowup_summand(Y: FourManifold) -> bool:
    return Y.is_negative_definite_diagonal() and Y.b2 > 0


def connected_sum(X: FourManifold, Y: FourManifold) -> FourManifold:
    """Block sum of forms; flags survive only where the literature guarantees it.

    Symplectic, simple-type and Bauer-Furuta flags (and basic classes) are
    kept when one summand is ``S4`` or a blow-up ``#n(-CP2)``; a blow-up
    turns each basic class ``k`` into the classes ``k + (+-1, ..., +-1)``.
    Other sums lose them, since the Seiberg-Witten invariants of a sum of two
    manifolds with ``b2+ > 0`` vanish.
    """
    if Y.b2 == 0 and Y.euler == 2 and Y.h1_zero:
        return replace(X, origin=None)
    if X.b2 == 0 and X.euler == 2 and X.h1_zero:
        return replace(Y, origin=None)
    form = None
    if X.form is not None and Y.form is not None:
        form = block_sum(X.form, Y.form)
    name = f"{X.name}#{Y.name}"
    common = dict(
        name=name,
        b2_plus=X.b2_plus + Y.b2_plus,
        b2_minus=X.b2_minus + Y.b2_minus,
        form=form,
        h1_zero=X.h1_zero and Y.h1_zero,
        spin=X.spin and Y.spin,
        euler=X.euler + Y.euler - 2,
    )
    for base, blow, first in ((X, Y, True), (Y, X, False)):
        if _is_blowup_summand(blow) and not _is_blowup_summand(base):
            n = blow.b2
            classes = []
            if n <= 10:
                for signs in _sign_vectors(n):
                    for bc in base.basic_classes:
                        k = bc.k_vector + signs if first else signs + bc.k_vector
                        classes.append(replace(bc, k_vector=k))
            return FourManifold(
                **common,
                symplectic=base.symplectic,
                simple_type=base.simple_type,
                bf_hypothesis=base.bf_hypothesis and n <= 10 and bool(base.basic_classes),
                basic_classes=tuple(classes),
            )
    return FourManifold(**common)


def _sign_vectors(n: int) -> list[tuple[int, ...]]:
    out = [()]
    for _ in range(n):
        out = [v + (s,) for v in out for s in (1, -1)]
    return out


_REVERSED_NAMES = {"CP2": "mCP2", "mCP2": "CP2"}


def reverse_orientation(X: FourManifold) -> FourManifold:
    """``-X``: swaps ``b2+`` and ``b2-`` and negates the form.

    Gauge-theoretic flags do not transfer to ``-X`` and are dropped, except
    that reversing twice returns the original manifold.
    """
    if X.origin is not None:
        return X.origin
    name = _REVERSED_NAMES.get(X.name) or (X.name[1:] if X.name.startswith("-") else f"-{X.name}")
    return FourManifold(
        name=name,
        b2_plus=X.b2_minus,
        b2_minus=X.b2_plus,
        form=None if X.form is None else _neg(X.form),
        h1_zero=X.h1_zero,
        spin=X.spin,
        euler=X.euler,
        origin=X,
    )


_TERM_RE = re.compile(r"^(\d*)\s*(-?)\s*([A-Za-z0-9]+)$")


def parse_manifold(text: str) -> FourManifold:
    """Parse ``K3``, ``-K3``, ``3CP2#20mCP2``, ``K3#mCP2`` and similar sums."""
    text = text.strip()
    if not text:
        raise ManifoldError("empty manifold description")
    result: Optional[FourManifold] = None
    for term in text.split("#"):
        m = _TERM_RE.match(term.strip())
        if not m:
            raise ManifoldError(f"cannot parse manifold term {term!r}")
        count = int(m.group(1)) if m.group(1) else 1
        if count < 1:
            raise ManifoldError(f"bad multiplicity in {term!r}")
        piece = standard(m.group(3))
        if m.group(2):
            piece = reverse_orientation(piece)
        for _ in range(count):
            result = piece if result is None else connected_sum(result, piece)
    assert result is not None
    if "#" in text or (m and m.group(1)):
        result = replace(result, name=text, origin=result.origin)
    return result


def load_manifold_file(path: str) -> FourManifold:
    """Read a JSON manifold definition with the dataclass field names."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ManifoldError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    try:
        classes = tuple(
            BasicClass(
                tuple(bc["k_vector"]),
                bool(bc.get("phi_nonzero", True)),
                bool(bc.get("relative_sw_nonzero", False)),
            )
            for bc in data.get("basic_classes", ())
        )
        form = data.get("form")
        return FourManifold(
            name=str(data["name"]),
            b2_plus=int(data["b2_plus"]),
            b2_minus=int(data["b2_minus"]),
            form=None if form is None else tuple(tuple(r) for r in form),
            h1_zero=bool(data.get("h1_zero", True)),
            spin=bool(data.get("spin", False)),
            symplectic=bool(data.get("symplectic", False)),
            simple_type=bool(data.get("simple_type", False)),
            bf_hypothesis=bool(data.get("bf_hypothesis", False)),
            euler=data.get("euler"),
            basic_classes=classes,
        )
    except (KeyError, TypeError) as exc:
        raise ManifoldError(f"{path}: missing or malformed field: {exc}") from exc


@dataclass(frozen=True)
class ClassData:
    """Everything the rules need to know about ``[Sigma]``.

    ``vector`` is ``None`` for abstract class data supplied without a basis
    (for instance a square-1 class in an even form, which no integral vector
    realises but which the adjunction examples still use).
    """

    square: int
    divisibility: int
    characteristic: bool
    pairings: tuple[int, ...] = ()
    l1_norm: Optional[int] = None
    vector: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.divisibility < 0:
            raise ValueError("divisibility is a non-negative gcd")
        if self.divisibility == 0 and self.square != 0:
            raise ValueError("only the zero class has divisibility 0")

    @property
    def is_zero(self) -> bool:
        return self.divisibility == 0

    def divisible_by(self, m: int) -> bool:
        return self.divisibility % m == 0

    def negated_form(self) -> "ClassData":
        """The same class viewed in ``-X``: square and pairings change sign."""
        return replace(self, square=-self.square, pairings=tuple(-x for x in self.pairings))

    def negated(self) -> "ClassData":
        """The class ``-xi`` in the same manifold."""
        return replace(
            self,
            pairings=tuple(-x for x in self.pairings),
            vector=None if self.vector is None else tuple(-x for x in self.vector),
        )


def zero_class(X: FourManifold) -> ClassData:
    if X.form is not None:
        return class_geometry(X, (0,) * X.b2)
    return ClassData(0, 0, X.spin, tuple(0 for _ in X.basic_classes), 0, None)


def class_geometry(X: FourManifold, xi: Sequence[int]) -> ClassData:
    if X.form is None:
        raise ManifoldError(f"{X.name}: class geometry needs an intersection form")
    xi = tuple(int(x) for x in xi)
    if len(xi) != X.b2:
        raise ManifoldError(f"{X.name}: class has {len(xi)} coordinates, b2 = {X.b2}")
    Q = X.form
    div = 0
    for x in xi:
        div = math.gcd(div, x)
    return ClassData(
        square=bilinear(Q, xi, xi),
        divisibility=div,
        characteristic=is_characteristic(Q, xi),
        pairings=tuple(bilinear(Q, bc.k_vector, xi) for bc in X.basic_classes),
        l1_norm=sum(abs(x) for x in xi),
        vector=xi,
    )


def expected_dimension(X: FourManifold, k_vector: Sequence[int]) -> Fraction:
    """``(k.k - 2 chi - 3 sigma) / 4`` for the spin^c structure with ``c1`` dual to ``k``."""
    if X.form is None:
        raise ManifoldError(f"{X.name}: expected dimension needs an intersection form")
    k = tuple(k_vector)
    return Fraction(bilinear(X.form, k, k) - 2 * X.euler - 3 * X.signature, 4)
