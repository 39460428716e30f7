import json
from fractions import Fraction

import pytest

import surfpos as sp
from surfpos.errors import InvariantViolation, SchemaError, UnknownModel
from surfpos.infinitesimal import blow_up
from surfpos.models import (
    BUILTIN_NAMES,
    builtin,
    dumps_model,
    enumerate_minus_one_curves,
    load,
    model_from_dict,
    model_to_dict,
    save,
)

from conftest import MATRIX_MODELS

EXPECTED_COUNTS = {1: 1, 2: 3, 3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}


def test_minus_one_curve_counts():
    for r, n in EXPECTED_COUNTS.items():
        curves = enumerate_minus_one_curves(r)
        assert len(curves) == n, r
        assert len(set(curves)) == n


def test_minus_one_curves_are_minus_one():
    # independent arithmetic check on every class: self-intersection -1
    # and anticanonical degree 1 in the standard diagonal form
    for r in range(1, 9):
        for cls in enumerate_minus_one_curves(r):
            a, bs = cls[0], cls[1:]
            assert a * a - sum(b * b for b in bs) == -1
            assert 3 * a + sum(bs) == 1
            assert a >= 0
            if a == 0:
                assert sorted(bs) == [0] * (r - 1) + [1]
            else:
                assert all(b <= 0 for b in bs)


def test_enumeration_out_of_range():
    with pytest.raises(InvariantViolation):
        enumerate_minus_one_curves(0)
    with pytest.raises(InvariantViolation):
        enumerate_minus_one_curves(9)


def test_builtin_catalog_all_validate():
    for name in BUILTIN_NAMES:
        model = builtin(name)
        assert model.completeness_declared
        sp.lattice.validate_model(model)


def test_builtin_p2():
    p2 = builtin("p2")
    assert p2.rank == 1 and p2.gram == ((1,),)
    assert p2.effective_gens() == ((Fraction(1),),)
    assert p2.ample_ref == (Fraction(1),)


def test_builtin_example_interesting():
    ex = builtin("example-interesting")
    assert ex.rank == 3
    assert ex.gram == ((-1, 1, 1), (1, -2, 0), (1, 0, -1))
    assert {c.name for c in ex.curves} == {"E1", "E2", "E3"}


def test_builtin_bl3():
    b3 = builtin("bl3p2")
    negatives = [c for c in b3.curves if c.self_int == -1]
    assert len(negatives) == 6
    names = {c.name for c in negatives}
    assert {"E1", "E2", "E3", "L12", "L13", "L23"} == names


def test_unknown_model():
    with pytest.raises(UnknownModel):
        builtin("bl9p2")
    with pytest.raises(UnknownModel):
        builtin("nonsense")


def test_blow_up_compatibility_with_builtins():
    """Blowing up bl_r at a generic point reproduces bl_{r+1}: same Gram,
    same negative-curve classes, same effective cone, same ample class."""
    chain = ["p2"] + [f"bl{r}p2" for r in range(1, 8)]
    for r, name in enumerate(chain):
        base = builtin(name)
        bm, pb, exc = blow_up(base)
        target = builtin(f"bl{r + 1}p2")
        assert bm.gram == target.gram
        neg_bm = {c.cls for c in bm.curves if c.self_int < 0}
        neg_target = {c.cls for c in target.curves if c.self_int < 0}
        assert neg_bm == neg_target, name
        assert bm.ample_ref == target.ample_ref
        assert bm.canonical == target.canonical
        if r + 1 <= 4:
            # effective cones agree (LP feasibility is cheap at low rank;
            # for larger r the equal negative-class sets already pin the
            # cone, movable generators being sums of negatives)
            for g in target.effective_gens():
                assert sp.cone_contains(bm.effective_gens(), g)
            for g in bm.effective_gens():
                assert sp.cone_contains(target.effective_gens(), g)
        else:
            movable = [c.cls for c in bm.curves if c.self_int >= 0]
            for g in movable:
                assert sp.cone_contains([n for n in neg_target],
                                        tuple(map(Fraction, g)))


def test_round_trip_all_builtins(tmp_path):
    for name in BUILTIN_NAMES:
        model = builtin(name)
        path = tmp_path / f"{name}.json"
        save(model, path)
        loaded = load(path)
        assert loaded == model
        # bit-exact: save(load(save(m))) == save(m)
        path2 = tmp_path / f"{name}-2.json"
        save(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()


def test_load_rejects_asymmetric_gram(tmp_path):
    doc = model_to_dict(builtin("bl1p2"))
    doc["gram"][0][1] = "2"
    with pytest.raises(InvariantViolation) as e:
        model_from_dict(doc)
    assert "gram symmetric" in str(e.value)


def test_load_rejects_bad_signature(tmp_path):
    doc = model_to_dict(builtin("p2"))
    doc["gram"] = [["-1"]]
    doc["curves"] = []
    doc["ample"] = ["1"]
    with pytest.raises(InvariantViolation) as e:
        model_from_dict(doc)
    assert "Hodge signature" in str(e.value) or "ample" in str(e.value)


def test_load_rejects_wrong_schema_version():
    doc = model_to_dict(builtin("p2"))
    doc["schema_version"] = 99
    with pytest.raises(SchemaError):
        model_from_dict(doc)


def test_load_rejects_wrong_self_int():
    doc = model_to_dict(builtin("bl1p2"))
    for c in doc["curves"]:
        if c["name"] == "E":
            c["self_int"] = "-2"
    with pytest.raises(InvariantViolation) as e:
        model_from_dict(doc)
    assert "self-intersection" in str(e.value)


def test_dumps_deterministic():
    a = dumps_model(builtin("bl2p2"))
    b = dumps_model(builtin("bl2p2"))
    assert a == b
    assert json.loads(a)["rank"] == 3


def test_matrix_models_present():
    for name in MATRIX_MODELS:
        assert builtin(name) is not None
