"""Obstruction and construction rules for surfaces bounded by a knot in a punctured 4-manifold.

Each rule looks at a ``SurfaceProblem`` (knot ``K``, closed manifold ``X``,
class ``[Sigma]`` and genus ``g``) and reports whether its hypotheses are
certifiably met and, if so, whether the surface is ruled out.  Nothing here
ever claims existence from the absence of an obstruction; existence only
comes from the explicit constructions in ``upper_bound_rules``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .catalog import KnotEntry
from .cyclotomic import prime_powers_up_to
from .manifolds import ClassData, FourManifold, class_geometry, reverse_orientation, standard
from .signatures import PrimePowerRoot

OBSTRUCTED = "obstructed"
CONSISTENT = "consistent"
TOPOLOGICAL = "topological"
SMOOTH = "smooth"
DEFAULT_MODULUS = 16


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass(frozen=True)
class SurfaceProblem:
    """Does ``K`` bound a surface of genus ``genus`` in class ``xi`` inside ``X`` minus a ball?"""

    knot: KnotEntry
    manifold: FourManifold
    xi: ClassData
    genus: int = 0
    smooth_category: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        X, xi = self.manifold, self.xi
        if xi.vector is not None and X.form is not None:
            expected = class_geometry(X, xi.vector)
            if expected != xi:
                raise ValueError(f"class data {xi} disagrees with the form of {X.name}")
        if len(xi.pairings) != len(X.basic_classes) and X.basic_classes:
            raise ValueError("one pairing per basic class is required")

    @property
    def is_h_slice_question(self) -> bool:
        return self.xi.is_zero and self.genus == 0


@dataclass(frozen=True)
class RuleOutcome:
    rule_id: str
    applicable: bool
    verdict: Optional[str]
    witness: str
    citation: str
    category: str
    bound: Optional[Fraction] = None
    reason: str = ""

    def __post_init__(self):
        if self.applicable != (self.verdict is not None):
            raise ValueError("verdict is present exactly when the rule applies")

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED


@dataclass(frozen=True)
class SpinFilling:
    """Spin ``W`` with boundary ``S^3_0(K)``."""

    b2_w: int
    sigma_w: int
    two_handlebody: bool = True

    def mirror(self) -> "SpinFilling":
        # S^3_0(mK) = -S^3_0(K) is filled by -W
        return replace(self, sigma_w=-self.sigma_w)


@dataclass(frozen=True)
class DiskCertificate:
    """The mirror ``mK`` (if ``knot_is_mirror``) bounds a disk of square ``square`` in ``host``."""

    host: FourManifold
    square: int
    nonzero_class: bool
    knot_is_mirror: bool = True
    source: str = ""

    def mirror(self) -> "DiskCertificate":
        return replace(self, host=reverse_orientation(self.host), square=-self.square)


@dataclass(frozen=True)
class UpperBoundCertificate:
    """A construction: ``knot`` bounds a surface of genus ``<= genus`` in ``manifold``.

    ``class_kind`` is ``"zero"`` (null-homologous), ``"vector"`` (the class
    ``class_vector``), ``"square"`` (unknown class of square ``square``) or
    ``"any"`` (class unspecified).  ``existential`` marks statements such as
    "for some n".
    """

    rule_id: str
    knot: str
    manifold: str
    genus: int
    class_kind: str
    citation: str
    square: Optional[int] = None
    class_vector: Optional[tuple[int, ...]] = None
    existential: bool = False

    def claim(self) -> str:
        what = "disk" if self.genus == 0 else f"surface of genus <= {self.genus}"
        if self.class_kind == "zero":
            body = f"a null-homologous {what} in {self.manifold}"
        elif self.class_kind == "vector":
            body = f"a {what} in class {self.class_vector} of {self.manifold}"
        elif self.class_kind == "square":
            body = f"a {what} of square {self.square} in {self.manifold}"
        else:
            body = f"a {what} in {self.manifold}"
        return f"{self.knot} bounds {body}"


@dataclass(frozen=True)
class ObstructionReport:
    problem: SurfaceProblem
    outcomes: tuple[RuleOutcome, ...]
    certificates: tuple[UpperBoundCertificate, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def obstructing(self) -> list[RuleOutcome]:
        return [o for o in self.outcomes if o.obstructed]

    @property
    def matching_certificates(self) -> list[UpperBoundCertificate]:
        return [c for c in self.certificates if certificate_matches(c, self.problem)]

    @property
    def summary(self) -> str:
        if self.obstructing:
            return "obstructed"
        if self.matching_certificates:
            return "certified sliceable"
        return "consistent (no obstruction found)"

    @property
    def primary_rule(self) -> Optional[str]:
        obs = self.obstructing
        return obs[0].rule_id if obs else None

    def summary_line(self) -> str:
        obs = self.obstructing
        if obs:
            return f"OBSTRUCTED ({obs[0].rule_id})"
        certs = self.matching_certificates
        if certs:
            return f"CERTIFIED SLICEABLE ({certs[0].rule_id})"
        return "CONSISTENT"


def _outcome(rule_id, citation, category, *, applicable=True, obstructed=False, witness="",
             bound=None, reason="") -> RuleOutcome:
    if not applicable:
        return RuleOutcome(rule_id, False, None, "", citation, category, None, reason)
    return RuleOutcome(
        rule_id, True, OBSTRUCTED if obstructed else CONSISTENT, witness, citation, category, bound, ""
    )


def _not_smooth(rule_id, citation) -> RuleOutcome:
    return _outcome(rule_id, citation, SMOOTH, applicable=False,
                    reason="smooth-category rule suppressed in the topological category")


# --- topological rules ---------------------------------------------------

CITE_ARF_SPIN = "Robertello: Arf(K) = 0 for knots topologically H-slice in a smooth spin 4-manifold"
CITE_ARF_CHAR = "Kirby-Taylor/Rokhlin: (sigma(X) - [S]^2)/8 = Arf(K) + Arf(X,S) mod 2 for characteristic S"
CITE_WINDOW = "Conway-Nagel: |sigma_K(w) + sigma(X)| <= b2(X) + 2g on S^1_!"
CITE_ROKHLIN = "Rokhlin/Gilmer/Viro: |sigma_K(w) + sigma(X) - 2r(m-r)[S]^2/m^2| <= b2(X) + 2g for m | [S]"


def rule_arf_spin(P: SurfaceProblem) -> RuleOutcome:
    X = P.manifold
    if not (X.spin and P.xi.is_zero and P.genus == 0):
        return _outcome("arf_spin", CITE_ARF_SPIN, TOPOLOGICAL, applicable=False,
                        reason="needs spin X, [S] = 0 and a disk")
    arf = P.knot.invariants.arf
    rel = "!=" if arf else "="
    return _outcome("arf_spin", CITE_ARF_SPIN, TOPOLOGICAL, obstructed=arf == 1,
                    witness=f"Arf(K) = {arf} {rel} 0")


def rule_arf_characteristic_disk(P: SurfaceProblem) -> RuleOutcome:
    X, xi = P.manifold, P.xi
    if not (P.genus == 0 and xi.characteristic and X.h1_zero):
        return _outcome("arf_characteristic_disk", CITE_ARF_CHAR, TOPOLOGICAL, applicable=False,
                        reason="needs a characteristic disk and H1(X) = 0")
    diff = X.signature - xi.square
    arf = P.knot.invariants.arf
    if diff % 8:
        return _outcome("arf_characteristic_disk", CITE_ARF_CHAR, TOPOLOGICAL, obstructed=True,
                        witness=f"sigma(X) - [S]^2 = {diff} is not divisible by 8")
    lhs = (diff // 8) % 2
    rel = "=" if lhs == arf else "!="
    return _outcome(
        "arf_characteristic_disk", CITE_ARF_CHAR, TOPOLOGICAL, obstructed=lhs != arf,
        witness=f"({X.signature} - {xi.square})/8 = {diff // 8} = {lhs} mod 2 {rel} Arf(K) = {arf}",
    )


def signature_values(knot: KnotEntry, M: int) -> tuple[dict[PrimePowerRoot, int], str]:
    """Levine-Tristram values available for ``m <= M``, plus a note on their source."""
    if knot.profile is not None and knot.profile.max_modulus >= M:
        return {w: s for w, s in knot.profile.items() if w.m <= M}, ""
    if knot.seifert is not None:
        prof = knot.with_profile(M).profile
        return {w: s for w, s in prof.items() if w.m <= M}, ""
    if knot.profile is not None:
        return dict(knot.profile.items()), f"profile only up to m = {knot.profile.max_modulus}"
    return {PrimePowerRoot(2, 1): knot.invariants.signature}, "only sigma(K) = sigma_K(-1) available"


def window(X: FourManifold, genus: int) -> tuple[int, int]:
    """Allowed range ``[-2 b2+ - 2g, 2 b2- + 2g]`` for ``sigma_K(w)`` of a null-homologous surface."""
    return -2 * X.b2_plus - 2 * genus, 2 * X.b2_minus + 2 * genus


def rule_signature_window(P: SurfaceProblem, M: int = DEFAULT_MODULUS) -> RuleOutcome:
    X = P.manifold
    if not (P.xi.is_zero and X.h1_zero):
        return _outcome("signature_window", CITE_WINDOW, TOPOLOGICAL, applicable=False,
                        reason="needs [S] = 0 and H1(X) = 0")
    values, note = signature_values(P.knot, M)
    lo, hi = window(X, P.genus)
    suffix = f" ({note})" if note else ""
    for w in sorted(values):
        s = values[w]
        if not lo <= s <= hi:
            return _outcome("signature_window", CITE_WINDOW, TOPOLOGICAL, obstructed=True,
                            witness=f"sigma_K({w}) = {s} not in [{lo}, {hi}]{suffix}")
    smin, smax = min(values.values()), max(values.values())
    return _outcome("signature_window", CITE_WINDOW, TOPOLOGICAL,
                    witness=f"sigma_K in [{smin}, {smax}] within [{lo}, {hi}] over {len(values)} roots{suffix}")


def rokhlin_roots(xi: ClassData, M: int) -> list[int]:
    return [m for m in prime_powers_up_to(M) if xi.divisible_by(m)]


def rule_rokhlin_divisible(P: SurfaceProblem, M: int = DEFAULT_MODULUS) -> RuleOutcome:
    X, xi = P.manifold, P.xi
    moduli = rokhlin_roots(xi, M)
    if not (X.h1_zero and moduli):
        return _outcome("rokhlin_divisible", CITE_ROKHLIN, TOPOLOGICAL, applicable=False,
                        reason=f"needs H1(X) = 0 and [S] divisible by a prime power <= {M}")
    values, note = signature_values(P.knot, M)
    limit = X.b2 + 2 * P.genus
    checked = 0
    suffix = f" ({note})" if note else ""
    for w in sorted(values, key=lambda w: (w.m, w.r)):
        if w.m not in moduli:
            continue
        checked += 1
        term = Fraction(2 * w.r * (w.m - w.r) * xi.square, w.m * w.m)
        val = values[w] + X.signature - term
        if abs(val) > limit:
            return _outcome(
                "rokhlin_divisible", CITE_ROKHLIN, TOPOLOGICAL, obstructed=True,
                witness=(f"m={w.m}, r={w.r}: |{values[w]} + {X.signature} - {fmt(term)}| = "
                         f"{fmt(abs(val))} > {limit}{suffix}"),
            )
    if not checked:
        return _outcome("rokhlin_divisible", CITE_ROKHLIN, TOPOLOGICAL, applicable=False,
                        reason=f"no signature values for admissible moduli{suffix}")
    return _outcome("rokhlin_divisible", CITE_ROKHLIN, TOPOLOGICAL,
                    witness=f"all {checked} roots with m in {moduli} satisfy the bound {limit}{suffix}")


# --- smooth rules --------------------------------------------------------

CITE_G4 = "adjunction inequality capped off by a minimal-genus surface in B^4"
CITE_NU = "relative adjunction inequality with nu+(mK) (Hom-Wu invariant)"
CITE_TAU = "Ozsvath-Szabo: 2 tau(K) + |[S]|_L1 + [S]^2 <= 2g in negative definite X"
CITE_MR = "Mrowka-Rollin contact adjunction bound with s-bar-l(K)"
CITE_DV = "Donald-Vafaee obstruction via the 10/8+4 theorem (Hopkins-Lin-Shi-Xu)"
CITE_BF = "Bauer-Furuta adjunction for symplectic manifolds with b2+ = 3 mod 4"


def _phi_classes(P: SurfaceProblem) -> list[tuple[int, int]]:
    """``(index, pairing)`` for basic classes with nonzero mixed invariant."""
    X = P.manifold
    return [(i, P.xi.pairings[i]) for i, bc in enumerate(X.basic_classes) if bc.phi_nonzero]


def rule_adjunction_g4(P: SurfaceProblem) -> RuleOutcome:
    rid = "adjunction_g4"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_G4)
    X, xi, g = P.manifold, P.xi, P.genus
    inv = P.knot.invariants
    classes = _phi_classes(P)
    if X.b2_plus <= 1:
        return _outcome(rid, CITE_G4, SMOOTH, applicable=False, reason="needs b2+(X) > 1")
    if not classes:
        return _outcome(rid, CITE_G4, SMOOTH, applicable=False, reason="no basic class with nonzero mixed invariant")
    if inv.genus4_upper is None:
        return _outcome(rid, CITE_G4, SMOOTH, applicable=False, reason="missing input: upper bound for g4(K)")
    if g + inv.genus4_lower <= 0:
        return _outcome(rid, CITE_G4, SMOOTH, applicable=False, reason="needs g + g4(K) > 0")
    if xi.square < 0 and not X.simple_type:
        return _outcome(rid, CITE_G4, SMOOTH, applicable=False, reason="needs [S]^2 >= 0 or simple type")
    g4 = inv.genus4_upper
    rhs = 2 * g - 2 + 2 * g4
    return _adjunction_verdict(rid, CITE_G4, classes, xi.square, rhs, f"2*{g} - 2 + 2*g4(K)[{g4}]")


def _adjunction_verdict(rid, cite, classes, square, rhs, rhs_text) -> RuleOutcome:
    for idx, pairing in classes:
        lhs = pairing + square
        if lhs > rhs:
            return _outcome(rid, cite, SMOOTH, obstructed=True, bound=Fraction(rhs),
                            witness=f"k{idx}: {pairing} + {square} = {lhs} > {rhs_text} = {rhs}")
    worst = max(p for _, p in classes) + square
    return _outcome(rid, cite, SMOOTH, bound=Fraction(rhs),
                    witness=f"max <k,S> + [S]^2 = {worst} <= {rhs_text} = {rhs}")


def rule_adjunction_nu(P: SurfaceProblem) -> RuleOutcome:
    rid = "adjunction_nu"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_NU)
    X, xi, g = P.manifold, P.xi, P.genus
    nu = P.knot.invariants.resolved_nu_plus_mirror()
    classes = _phi_classes(P)
    if X.b2_plus <= 1:
        return _outcome(rid, CITE_NU, SMOOTH, applicable=False, reason="needs b2+(X) > 1")
    if g <= 0:
        return _outcome(rid, CITE_NU, SMOOTH, applicable=False, reason="needs g > 0")
    if not classes:
        return _outcome(rid, CITE_NU, SMOOTH, applicable=False, reason="no basic class with nonzero mixed invariant")
    if nu is None:
        return _outcome(rid, CITE_NU, SMOOTH, applicable=False, reason="missing input: nu+(mK)")
    if xi.square < 2 * nu and not X.simple_type:
        return _outcome(rid, CITE_NU, SMOOTH, applicable=False, reason="needs [S]^2 >= 2 nu+(mK) or simple type")
    rhs = 2 * g - 2 + 2 * nu
    return _adjunction_verdict(rid, CITE_NU, classes, xi.square, rhs, f"2*{g} - 2 + 2*nu+(mK)[{nu}]")


def rule_tau_definite(P: SurfaceProblem) -> RuleOutcome:
    rid = "tau_definite"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_TAU)
    X, xi = P.manifold, P.xi
    tau = P.knot.invariants.tau
    if not X.is_negative_definite_diagonal():
        return _outcome(rid, CITE_TAU, SMOOTH, applicable=False, reason="needs X = #n(-CP2) with diagonal form")
    if tau is None:
        return _outcome(rid, CITE_TAU, SMOOTH, applicable=False, reason="missing input: tau(K)")
    if xi.l1_norm is None:
        return _outcome(rid, CITE_TAU, SMOOTH, applicable=False, reason="needs class coordinates")
    lhs = 2 * tau + xi.l1_norm + xi.square
    rhs = 2 * P.genus
    rel = ">" if lhs > rhs else "<="
    return _outcome(rid, CITE_TAU, SMOOTH, obstructed=lhs > rhs, bound=Fraction(rhs),
                    witness=f"2*{tau} + {xi.l1_norm} + {xi.square} = {lhs} {rel} {rhs}")


def rule_mrowka_rollin(P: SurfaceProblem) -> RuleOutcome:
    rid = "mrowka_rollin"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_MR)
    X, xi, g = P.manifold, P.xi, P.genus
    sl = P.knot.invariants.sl_bar
    classes = [(i, xi.pairings[i]) for i, bc in enumerate(X.basic_classes) if bc.relative_sw_nonzero]
    if sl is None:
        return _outcome(rid, CITE_MR, SMOOTH, applicable=False, reason="missing input: s-bar-l(K)")
    if not classes:
        return _outcome(rid, CITE_MR, SMOOTH, applicable=False,
                        reason="no class with nonzero relative Seiberg-Witten invariant")
    rhs = 2 * g - 1 - sl
    return _adjunction_verdict(rid, CITE_MR, classes, xi.square, rhs, f"2*{g} - 1 - sl({sl})")


DV_EXEMPT = (1, 3, 23)


def rule_donald_vafaee(P: SurfaceProblem, W: Optional[SpinFilling]) -> RuleOutcome:
    rid = "donald_vafaee"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_DV)
    X = P.manifold
    if W is None:
        return _outcome(rid, CITE_DV, SMOOTH, applicable=False, reason="missing input: spin filling of S^3_0(K)")
    if not (X.spin and P.xi.is_zero and P.genus == 0):
        return _outcome(rid, CITE_DV, SMOOTH, applicable=False, reason="needs spin X, [S] = 0 and a disk")
    total = X.b2 + W.b2_w
    if W.two_handlebody and total in DV_EXEMPT:
        return _outcome(rid, CITE_DV, SMOOTH, applicable=False,
                        reason=f"b2(X) + b2(W) = {total} is exempt")
    const = 5 if W.two_handlebody else 4
    rhs = Fraction(10, 8) * abs(X.signature - W.sigma_w) + const
    ok = total >= rhs
    return _outcome(rid, CITE_DV, SMOOTH, obstructed=not ok, bound=rhs,
                    witness=f"{total} {'>=' if ok else '<'} {fmt(rhs)}")


def _bf_capable(X: FourManifold) -> bool:
    return (X.symplectic or X.bf_hypothesis) and X.b2_plus % 4 == 3


def rule_bauer_furuta(P: SurfaceProblem, certs: Sequence[DiskCertificate] = ()) -> RuleOutcome:
    rid = "bauer_furuta"
    if not P.smooth_category:
        return _not_smooth(rid, CITE_BF)
    X = P.manifold
    if not P.is_h_slice_question:
        return _outcome(rid, CITE_BF, SMOOTH, applicable=False, reason="decides H-sliceness only ([S] = 0, disk)")
    if not _bf_capable(X):
        return _outcome(rid, CITE_BF, SMOOTH, applicable=False,
                        reason="target needs (symplectic or BF hypothesis) and b2+ = 3 mod 4")
    for c in certs:
        if c.knot_is_mirror and c.square >= 0 and c.nonzero_class and _bf_capable(c.host):
            return _outcome(
                rid, CITE_BF, SMOOTH, obstructed=True,
                witness=(f"mK bounds a disk of square {c.square}, nonzero class, in {c.host.name} "
                         f"(b2+ = {c.host.b2_plus}); b2+({X.name}) = {X.b2_plus} = 3 mod 4"),
            )
    return _outcome(rid, CITE_BF, SMOOTH, applicable=False,
                    reason="missing input: disk certificate for mK in a suitable manifold")


# --- orchestration -------------------------------------------------------

RULE_ORDER = (
    "arf_spin",
    "arf_characteristic_disk",
    "signature_window",
    "rokhlin_divisible",
    "adjunction_g4",
    "adjunction_nu",
    "tau_definite",
    "mrowka_rollin",
    "donald_vafaee",
    "bauer_furuta",
)

# these rules are one-sided in orientation: each is also run on the equivalent
# mirror problem (mK in -X) and an obstruction from either side counts
_REVERSIBLE = {"adjunction_g4", "adjunction_nu", "tau_definite", "mrowka_rollin", "bauer_furuta"}


def mirror_problem(P: SurfaceProblem) -> SurfaceProblem:
    """``mK`` in ``-X`` with the same class: equivalent to ``P``."""
    Y = reverse_orientation(P.manifold)
    xi = P.xi.negated_form()
    if P.xi.vector is not None and Y.form is not None:
        xi = class_geometry(Y, P.xi.vector)
    return SurfaceProblem(
        knot=P.knot.mirror(),
        manifold=Y,
        xi=xi,
        genus=P.genus,
        smooth_category=P.smooth_category,
    )


def _run_rule(rule_id: str, P: SurfaceProblem, M: int, W, certs) -> RuleOutcome:
    if rule_id == "arf_spin":
        return rule_arf_spin(P)
    if rule_id == "arf_characteristic_disk":
        return rule_arf_characteristic_disk(P)
    if rule_id == "signature_window":
        return rule_signature_window(P, M)
    if rule_id == "rokhlin_divisible":
        return rule_rokhlin_divisible(P, M)
    if rule_id == "adjunction_g4":
        return rule_adjunction_g4(P)
    if rule_id == "adjunction_nu":
        return rule_adjunction_nu(P)
    if rule_id == "tau_definite":
        return rule_tau_definite(P)
    if rule_id == "mrowka_rollin":
        return rule_mrowka_rollin(P)
    if rule_id == "donald_vafaee":
        return rule_donald_vafaee(P, W)
    if rule_id == "bauer_furuta":
        return rule_bauer_furuta(P, certs)
    raise KeyError(f"unknown rule {rule_id!r}")


def evaluate_rule(rule_id: str, P: SurfaceProblem, M: int = DEFAULT_MODULUS,
                  W: Optional[SpinFilling] = None, certs: Sequence[DiskCertificate] = ()) -> RuleOutcome:
    out = _run_rule(rule_id, P, M, W, certs)
    if rule_id not in _REVERSIBLE or out.obstructed:
        return out
    if P.xi.vector is None and len(P.xi.pairings) != len(P.manifold.basic_classes):
        # abstract class data cannot be carried to the reversed manifold
        return out
    Q = mirror_problem(P)
    back = _run_rule(rule_id, Q, M, None if W is None else W.mirror(), [c.mirror() for c in certs])
    if back.obstructed or (back.applicable and not out.applicable):
        return replace(back, witness=f"{back.witness} [mirror knot in {Q.manifold.name}]")
    return out


def evaluate_all(
    P: SurfaceProblem,
    W: Optional[SpinFilling] = None,
    certs: Sequence[DiskCertificate] = (),
    M: int = DEFAULT_MODULUS,
    rules: Optional[Sequence[str]] = None,
    upper: Sequence[UpperBoundCertificate] = (),
) -> ObstructionReport:
    """Run every enabled rule in the fixed order and collect the ledger."""
    enabled = RULE_ORDER if rules is None else tuple(r for r in RULE_ORDER if r in set(rules))
    unknown = set(rules or ()) - set(RULE_ORDER)
    if unknown:
        raise KeyError(f"unknown rules: {', '.join(sorted(unknown))}")
    if P.knot.seifert is not None and (P.knot.profile is None or P.knot.profile.max_modulus < M):
        if any(r in enabled for r in ("signature_window", "rokhlin_divisible")):
            P = replace(P, knot=P.knot.with_profile(M))
    outcomes = tuple(evaluate_rule(r, P, M, W, certs) for r in enabled)
    report = ObstructionReport(P, outcomes, tuple(upper))
    if report.obstructing and report.matching_certificates:
        report = replace(report, warnings=(
            "inputs conflict: a construction certificate matches an obstructed problem",))
    return report


# --- constructions -------------------------------------------------------

CITE_NS = "Norman, Suzuki: every knot is slice in CP2#mCP2 and S2xS2"
CITE_SCH = "Schneiderman: Arf(K) = 0 implies H-slice in #n(S2xS2) for some n"
CITE_U2 = "two negative full twists on <= 5 strands in K3: u(K) <= 2 implies slice in K3"
CITE_TWIST = "negative full twists along <= 5 strands are absorbed by two T(5,-5) sublinks of K3"
CITE_WH = "Whitehead double of a genus-g surface: null-homologous surface of genus 2g"
CITE_CURATED = "explicit handle-diagram construction"


@dataclass(frozen=True)
class CuratedSurface:
    knot: str
    manifold: str
    genus: int
    class_kind: str
    square: int
    class_vector: Optional[tuple[int, ...]] = None
    nonzero: bool = False
    note: str = ""


# known constructions, keyed by canonical knot names (T(2,3) = RHT, T(2,-3) = LHT)
CURATED_SURFACES = (
    CuratedSurface("T(2,3)", "CP2", 0, "zero", 0, (0,), note="RHT is H-slice in CP2"),
    CuratedSurface("T(2,-3)", "CP2", 0, "vector", 4, (2,), nonzero=True,
                   note="LHT bounds a disk in class 2H of CP2"),
    CuratedSurface("T(2,-3)", "K3", 0, "square", 0, None, nonzero=True,
                   note="LHT bounds a disk of square 0 and nonzero class in K3 (trefoil 2-handle core)"),
)

_MIRROR_NAMES = {"CP2": "mCP2", "mCP2": "CP2", "K3": "-K3", "-K3": "K3", "S4": "S4", "S2xS2": "S2xS2"}


def _mirror_knot_key(key: str) -> str:
    if key.startswith("T(") and "," in key:
        p, q = key[2:-1].split(",")
        return f"T({p},{-int(q)})"
    if key in ("unknot", "4_1"):
        return key
    return key[1:] if key.startswith("m") else "m" + key


def curated_surfaces(key: str) -> list[CuratedSurface]:
    out = [s for s in CURATED_SURFACES if s.knot == key]
    for s in CURATED_SURFACES:
        if _mirror_knot_key(s.knot) == key:
            out.append(replace(
                s, knot=key, manifold=_MIRROR_NAMES[s.manifold], square=-s.square,
                note=f"{s.note}; mirrored into the reversed manifold",
            ))
    return out


def knot_key(entry: KnotEntry) -> str:
    """Canonical catalogue name: ``T(p,q)`` for torus knots and 2-strand braids, else the name."""
    b = entry.braid
    if b is not None and b.strands == 2 and b.letters and len(set(b.letters)) == 1:
        n = len(b.letters) * b.letters[0]
        if abs(n) == 1:
            return "unknot"
        return f"T(2,{n})"
    if b is not None and b.strands == 1:
        return "unknot"
    if b is not None and b.letters in ((1, -2, 1, -2), (-1, 2, -1, 2)) and b.strands == 3:
        return "4_1"
    name = entry.invariants.name
    return {"RHT": "T(2,3)", "LHT": "T(2,-3)", "mRHT": "T(2,-3)", "mLHT": "T(2,3)"}.get(name, name)


def curated_disk_certificates(entry: KnotEntry) -> list[DiskCertificate]:
    """Disks bounded by ``mK`` usable by the Bauer-Furuta rule."""
    certs = []
    for s in curated_surfaces(_mirror_knot_key(knot_key(entry))):
        if s.genus == 0 and s.nonzero and s.square >= 0:
            try:
                host = _manifold_by_name(s.manifold)
            except ValueError:
                continue
            certs.append(DiskCertificate(host, s.square, True, True, source=s.note))
    return certs


def _manifold_by_name(name: str) -> FourManifold:
    if name.startswith("-"):
        return reverse_orientation(standard(name[1:]))
    return standard(name)


@dataclass(frozen=True)
class TwistData:
    """``K = K_2`` arises from ``K_0`` by two negative full twists on ``k1``, ``k2`` strands."""

    k1: int
    k2: int
    g4_k0: int


@dataclass(frozen=True)
class WhiteheadData:
    """``K`` is the ``twist``-twisted Whitehead double (sign ``sign``) of ``companion``."""

    companion: str
    twist: int
    sign: str = "+"


def upper_bound_rules(
    entry: KnotEntry,
    twist: Optional[TwistData] = None,
    whitehead: Optional[WhiteheadData] = None,
) -> list[UpperBoundCertificate]:
    """All constructions that apply to ``K`` with the given auxiliary data."""
    inv = entry.invariants
    name = inv.name
    key = knot_key(entry)
    certs = [
        UpperBoundCertificate("norman_suzuki", name, "CP2#mCP2", 0, "any", CITE_NS),
        UpperBoundCertificate("norman_suzuki", name, "S2xS2", 0, "any", CITE_NS),
    ]
    if inv.arf == 0:
        certs.append(UpperBoundCertificate("schneiderman", name, "#n(S2xS2)", 0, "zero", CITE_SCH,
                                           square=0, existential=True))
    if inv.unknotting_number is not None and inv.unknotting_number <= 2:
        certs.append(UpperBoundCertificate("unknotting_k3", name, "K3", 0, "any", CITE_U2))
    if twist is not None and twist.k1 <= 5 and twist.k2 <= 5:
        certs.append(UpperBoundCertificate("twist_k3", name, "K3", twist.g4_k0, "any", CITE_TWIST))
    for s in curated_surfaces(key):
        certs.append(UpperBoundCertificate(
            "curated_surface", name, s.manifold, s.genus, s.class_kind, f"{CITE_CURATED}: {s.note}",
            square=s.square, class_vector=s.class_vector,
        ))
    if key == "unknot":
        certs.append(UpperBoundCertificate("unknot", name, "*", 0, "zero", "the unknot bounds a disk in B^4",
                                           square=0))
    if whitehead is not None:
        certs += whitehead_certificates(whitehead)
    return certs


def whitehead_certificates(wh: WhiteheadData) -> list[UpperBoundCertificate]:
    """Null-homologous surfaces for ``Wh_t(J)`` from curated surfaces of ``J`` with square ``-t``."""
    name = f"Wh{wh.sign}_{wh.twist}({wh.companion})"
    return [
        UpperBoundCertificate(
            "whitehead_double", name, s.manifold, 2 * s.genus, "zero",
            f"{CITE_WH}; companion: {s.note}", square=0,
        )
        for s in curated_surfaces(wh.companion)
        if -s.square == wh.twist
    ]


def certificate_matches(c: UpperBoundCertificate, P: SurfaceProblem) -> bool:
    """Whether a construction answers exactly this problem (manifold, class and genus)."""
    if c.existential or P.genus < c.genus:
        return False
    if c.manifold != "*" and c.manifold != P.manifold.name:
        return False
    xi = P.xi
    if c.class_kind == "zero":
        return xi.is_zero
    if c.class_kind == "vector":
        v = xi.vector
        return v is not None and (v == c.class_vector or tuple(-x for x in v) == c.class_vector)
    return False
