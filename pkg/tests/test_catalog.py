import json

import pytest

from hslice.catalog import (
    CacheFormatError,
    CuratedInvariantStore,
    UnknownKnotError,
    knot_from_braid,
    named_knot,
    parse_bundle,
    resolve_knot,
    torus_knot_table,
)
from hslice.floer import VSequence, nu_plus
from hslice.knots import BraidError


def test_torus_table_trefoil():
    inv = torus_knot_table(3)
    assert (inv.genus4_upper, inv.nu_plus, inv.nu_plus_mirror, inv.determinant, inv.arf) == (1, 1, 0, 3, 1)
    assert inv.tau == 1 and inv.sl_bar == 1


def test_torus_table_t25_and_mirror():
    inv = torus_knot_table(5)
    assert inv.nu_plus == 2 and inv.sl_bar == 3
    neg = torus_knot_table(-5)
    assert neg.sl_bar == -5
    assert neg.nu_plus == 0 and neg.nu_plus_mirror == 2
    assert neg.genus4_upper == 2


def test_torus_table_arf_follows_determinant_mod_8():
    # D = 2k+1; Arf = 0 exactly for k = 0, 3 mod 4
    for k in range(1, 9):
        inv = torus_knot_table(2 * k + 1)
        assert inv.determinant == 2 * k + 1
        assert inv.arf == (0 if k % 4 in (0, 3) else 1)
    assert torus_knot_table(15).arf == 0


def test_t_2_minus_15():
    e = named_knot("T(2,-15)", 16)
    inv = e.invariants
    assert inv.signature == 14
    assert inv.nu_plus_mirror == 7
    assert inv.v_sequence_mirror == VSequence((4, 3, 3, 2, 2, 1, 1))
    assert e.profile.get(2, 1) == 14


def test_t34_v_sequence():
    inv = named_knot("T(3,4)").invariants
    assert inv.v_sequence == VSequence((1, 1, 1))
    assert nu_plus(inv.v_sequence) == 3 == inv.nu_plus
    assert inv.signature == -6 and inv.determinant == 3


def test_names_and_aliases():
    assert named_knot("RHT").invariants.signature == -2
    assert named_knot("LHT").invariants.signature == 2
    assert named_knot("trefoil").braid == named_knot("T(2,3)").braid
    assert named_knot("mRHT").invariants.signature == 2
    fig8 = named_knot("figure-eight").invariants
    assert (fig8.arf, fig8.nu_plus, fig8.nu_plus_mirror, fig8.genus4_lower) == (1, 0, 0, 1)
    kdv = named_knot("K_DV", 16)
    assert kdv.invariants.arf == 0 and kdv.profile.max_abs() == 0
    assert named_knot("unknot").invariants.determinant == 1
    with pytest.raises(UnknownKnotError):
        named_knot("5_2")


def test_knot_from_braid():
    e = knot_from_braid("braid(3; 1 -2 1 -2)", 8)
    assert e.invariants.determinant == 5 and e.invariants.arf == 1
    assert e.invariants.genus4_lower == 1
    assert e.profile.max_modulus == 8
    assert resolve_knot("braid(2; 1 1 1)").invariants.signature == -2
    with pytest.raises(BraidError):
        resolve_knot("braid(2; 1 1)")


def test_mirror_entry():
    e = named_knot("T(2,5)", 9)
    m = e.mirror()
    assert m.invariants.signature == 2 * 2
    assert m.profile.values == e.profile.negated().values
    assert m.mirror().invariants == e.invariants.mirror().mirror()


def test_store_round_trip(tmp_path):
    path = str(tmp_path / "cache.jsonl")
    store = CuratedInvariantStore(path)
    inv = torus_knot_table(5)
    store.put("T(2,5)", inv)
    assert store.get("T(2,5)") == inv
    assert store.get("T(2,7)") is None
    again = CuratedInvariantStore(path)
    assert again.get("T(2,5)") == inv
    prof = named_knot("T(2,5)", 5).profile
    again.put_profile("T(2,5)", prof)
    assert CuratedInvariantStore(path).get_profile("T(2,5)", 5) == prof
    assert again.keys() == ["T(2,5)"]
    first = json.loads(open(path).readline())
    assert list(first) == ["key", "invariant", "value", "provenance"]


def test_store_reports_bad_line(tmp_path):
    path = tmp_path / "cache.jsonl"
    store = CuratedInvariantStore(str(path))
    store.put("U", named_knot("unknot").invariants)
    with open(path, "a") as fh:
        fh.write("{not json\n")
    n = len(path.read_text().splitlines())
    with pytest.raises(CacheFormatError, match=f":{n}:"):
        CuratedInvariantStore(str(path))
    path.write_text(json.dumps({"invariant": "arf", "key": "x", "value": 0, "provenance": ""}) + "\n")
    with pytest.raises(CacheFormatError, match=":1:"):
        CuratedInvariantStore(str(path))


def test_bundle():
    inv = parse_bundle(json.dumps({"name": "K", "arf": 0, "signature": 0, "genus4_lower": 1,
                                   "v_sequence_mirror": [1, 0]}))
    assert inv.determinant is None and inv.resolved_nu_plus_mirror() == 1
    with pytest.raises(ValueError):
        parse_bundle(json.dumps({"arf": 0}))
    with pytest.raises(ValueError):
        parse_bundle(json.dumps({"arf": 0, "signature": 0, "colour": 3}))
    with pytest.raises(ValueError, match="line"):
        parse_bundle("{\n")
