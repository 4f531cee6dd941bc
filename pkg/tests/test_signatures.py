import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hslice.cyclotomic import integral_hermitian_inertia
from hslice.knots import BraidWord, SeifertMatrix, classical_signature, mirror, seifert_matrix_from_braid
from hslice.signatures import (
    PrimePowerRoot,
    SignatureProfile,
    all_roots,
    hermitian_matrix_vectors,
    levine_tristram,
    signature_profile,
)

from oracles import eigen_signature, litherland_torus_signature, random_knot_braid, random_seifert_entries


def torus(p, q):
    return seifert_matrix_from_braid(BraidWord(p, tuple(range(1, p)) * q))


def test_prime_power_root_validation():
    with pytest.raises(ValueError):
        PrimePowerRoot(6, 1)
    with pytest.raises(ValueError):
        PrimePowerRoot(5, 5)
    assert PrimePowerRoot(4, 2).reduced() == (2, 1)
    assert str(PrimePowerRoot(16, 3)) == "3/16"


def test_value_at_minus_one_is_classical_signature():
    rng = random.Random(1)
    for _ in range(30):
        n, letters = random_knot_braid(rng)
        A = seifert_matrix_from_braid(BraidWord(n, letters))
        assert levine_tristram(A, PrimePowerRoot(2, 1)) == classical_signature(A)


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (2, 15), (3, 4), (3, 5), (2, 9)])
def test_torus_knots_match_litherland_count(p, q):
    prof = signature_profile(torus(p, q), 16)
    for w, s in prof.items():
        assert s == litherland_torus_signature(p, q, w.m, w.r), (p, q, w)


def test_t_2_15_values():
    A = torus(2, 15)
    assert [levine_tristram(A, PrimePowerRoot(m, r)) for m, r in [(2, 1), (3, 1), (5, 1), (5, 2)]] == [-14, -10, -6, -12]


def test_profile_matches_direct_route():
    # the profile shares one elimination per order; the direct route eliminates per root
    rng = random.Random(8)
    for _ in range(15):
        n = 2 * rng.randint(1, 4)
        A = SeifertMatrix(tuple(map(tuple, random_seifert_entries(rng, n))))
        prof = signature_profile(A, 9)
        for w, s in prof.items():
            order, exponent = w.reduced()
            F, rows = hermitian_matrix_vectors(A, order, exponent)
            pos, neg, null = integral_hermitian_inertia(F, rows)
            assert null == 0 and s == pos - neg


def test_profile_symmetries():
    A = torus(3, 4)
    prof = signature_profile(A, 16)
    assert len(prof) == len(all_roots(16))
    for w, s in prof.items():
        assert prof[w.conjugate()] == s
    assert signature_profile(mirror(A), 16).values == prof.negated().values
    assert prof.max_abs() == 6


def test_profile_validation():
    with pytest.raises(ValueError):
        SignatureProfile(2, {PrimePowerRoot(2, 1): 1})
    with pytest.raises(ValueError):
        SignatureProfile(3, {PrimePowerRoot(3, 1): 2, PrimePowerRoot(3, 2): 0})
    with pytest.raises(ValueError):
        signature_profile(torus(2, 3), 1)


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16]))
def test_random_seifert_matrices_match_eigenvalues(seed, m):
    rng = random.Random(seed)
    n = 2 * rng.randint(1, 5)
    A = SeifertMatrix(tuple(map(tuple, random_seifert_entries(rng, n))))
    # det(A - A^T) = 1 keeps prime-power roots away from zeros of the Alexander polynomial
    for r in range(1, m):
        expected, gap = eigen_signature(A.entries, m, r)
        assert gap > 1e-9
        assert levine_tristram(A, PrimePowerRoot(m, r)) == expected
