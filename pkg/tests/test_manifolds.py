import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hslice.linalg import int_det, symmetric_inertia
from hslice.manifolds import (
    LIBRARY_NAMES,
    BasicClass,
    FourManifold,
    ManifoldError,
    class_geometry,
    connected_sum,
    e8_form,
    expected_dimension,
    load_manifold_file,
    parse_manifold,
    reverse_orientation,
    standard,
    zero_class,
)


def test_e8():
    Q = e8_form()
    assert int_det(Q) == 1
    assert symmetric_inertia(Q) == (8, 0, 0)
    assert all(Q[i][i] == 2 for i in range(8))


def test_k3():
    X = standard("K3")
    assert (X.b2_plus, X.b2_minus, X.signature, X.b2) == (3, 19, -16, 22)
    assert X.spin and X.simple_type and X.symplectic and X.bf_hypothesis
    assert X.euler == 24
    assert abs(int_det(X.form)) == 1
    assert expected_dimension(X, X.basic_classes[0].k_vector) == 0


def test_small_library():
    CP2 = standard("CP2")
    assert (CP2.b2_plus, CP2.b2_minus, CP2.signature, CP2.form) == (1, 0, 1, ((1,),))
    S4 = standard("S4")
    assert S4.b2 == 0 and S4.signature == 0 and S4.spin
    assert standard("-CP2") == standard("mCP2")
    with pytest.raises(ManifoldError):
        standard("T4")


def test_connected_sums():
    K3 = standard("K3")
    X = connected_sum(K3, standard("mCP2"))
    assert (X.b2_plus, X.b2_minus, X.signature) == (3, 20, -17)
    assert not X.spin
    assert X.symplectic and X.bf_hypothesis
    assert len(X.basic_classes) == 2
    assert connected_sum(K3, standard("S4")) == K3
    Y = parse_manifold("3CP2#20mCP2")
    assert (Y.b2_plus, Y.b2_minus, Y.signature) == (3, 20, -17)
    assert not (Y.symplectic or Y.bf_hypothesis or Y.basic_classes)
    assert parse_manifold("K3#mCP2").form == X.form


def test_reverse_orientation():
    CP2 = standard("CP2")
    R = reverse_orientation(CP2)
    assert R.name == "mCP2" and R.form == ((-1,),)
    assert reverse_orientation(R) is CP2
    mK3 = reverse_orientation(standard("K3"))
    assert mK3.signature == 16 and mK3.spin
    assert not mK3.symplectic and not mK3.basic_classes
    assert parse_manifold("-K3").signature == 16


def test_class_geometry():
    CP2 = standard("CP2")
    xi = class_geometry(CP2, (3,))
    assert (xi.square, xi.divisibility, xi.characteristic, xi.l1_norm) == (9, 3, True, 3)
    assert not class_geometry(CP2, (2,)).characteristic
    z = zero_class(standard("K3"))
    assert z.is_zero and z.characteristic and z.pairings == (0,)
    assert z.divisible_by(7)
    with pytest.raises(ManifoldError):
        class_geometry(CP2, (1, 2))


def test_expected_dimension():
    CP2 = standard("CP2")
    # chi = 3, sigma = 1: (9 - 6 - 3)/4
    assert expected_dimension(CP2, (3,)) == 0
    assert expected_dimension(CP2, (1,)) == Fraction(-2)


def test_validation():
    with pytest.raises(ManifoldError):
        FourManifold("bad", 1, 0, form=((2,),))
    with pytest.raises(ManifoldError):
        FourManifold("bad", 1, 1, form=((0, 1), (1, 0)), spin=True, basic_classes=(BasicClass((1, 0)),))
    with pytest.raises(ManifoldError):
        FourManifold("bad", 1, 0, form=((1,),), basic_classes=(BasicClass((1,)),))
    with pytest.raises(ManifoldError):
        FourManifold("bad", 1, 0, form=((1,),), spin=True)
    with pytest.raises(ManifoldError):
        parse_manifold("2 K3 #")


def test_manifold_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps({
        "name": "E(1)-like",
        "b2_plus": 1,
        "b2_minus": 1,
        "form": [[1, 0], [0, -1]],
        "symplectic": True,
        "basic_classes": [{"k_vector": [1, 1], "relative_sw_nonzero": True},
                          {"k_vector": [-1, -1], "relative_sw_nonzero": True}],
    }))
    X = load_manifold_file(str(path))
    assert X.signature == 0 and X.basic_classes[0].relative_sw_nonzero
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"name\": \n}")
    with pytest.raises(ManifoldError, match="line"):
        load_manifold_file(str(bad))
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"name": "x"}))
    with pytest.raises(ManifoldError):
        load_manifold_file(str(missing))


pieces = st.lists(st.sampled_from(LIBRARY_NAMES + ("-K3",)), min_size=1, max_size=4)


@given(pieces)
def test_connected_sum_is_additive(names):
    parts = [parse_manifold(n) for n in names]
    X = parse_manifold("#".join(names))
    assert X.b2_plus == sum(p.b2_plus for p in parts)
    assert X.b2_minus == sum(p.b2_minus for p in parts)
    assert X.signature == sum(p.signature for p in parts)
    assert X.spin == all(p.spin for p in parts)
    assert symmetric_inertia(X.form) == (X.b2_plus, X.b2_minus, 0)
    R = reverse_orientation(X)
    assert (R.b2_plus, R.b2_minus) == (X.b2_minus, X.b2_plus)
    assert reverse_orientation(R) == X
