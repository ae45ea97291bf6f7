from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hodgemicro.monodromic import Block, LocalSystemTerm, NormalForm, UnsupportedSpecialization
from hodgemicro.plumbing import (
    PlumbingObject,
    PlumbingShape,
    SlotObject,
    build_block_H,
    build_tower,
    chain_decompositions,
    check_compat,
    check_slot_restrictions,
    core_crosscheck,
    e_twist,
    endo_dim_core,
    endo_dim_relcore,
    endo_table,
    flip,
    restrict_tower,
    restrict_tower_object,
    s_size,
    saturation_sum_check,
    tower_layers,
    twist_table,
    unipotent_skyscraper_chain,
    w_value,
    wtilde_printed,
    wtilde_uniform,
)


def labels(obj):
    return [([b.label() for b in l.terms], [b.label() for b in r.terms]) for l, r in obj.slots]


# ---------------------------------------------------------------- twists

def test_twist_values():
    assert w_value(2, 1) == Fraction(1, 2)
    assert w_value(4, 2) == w_value(4, 3) == Fraction(1, 2)
    assert wtilde_printed(2, 1) == wtilde_uniform(2, 1) == Fraction(3, 2)
    assert wtilde_printed(3, 2) == 1
    assert wtilde_uniform(3, 2) == 2
    assert twist_table(1, 1).wtilde == 1
    with pytest.raises(IndexError):
        w_value(3, 4)


# ---------------------------------------------------------------- blocks

def test_block_n1():
    assert labels(build_block_H(1, 1)) == [(["TildeUndP_1"], ["TildeUndP_1"])]
    assert labels(build_block_H(1, 1, primed=True)) == [(["P_1"], ["P_1"])]


def test_block_n2():
    assert labels(build_block_H(2, 1)) == [
        (["UndP_1"], ["UndA_1"]), (["OveB_1(1/2)"], ["OveP_1(1/2)"])]
    assert build_block_H(2, 2) == flip(build_block_H(2, 1))


def test_block_n4_j2():
    assert labels(build_block_H(4, 2)) == [
        (["P_1(1/2)"], ["Q_2(1/2)"]),
        (["UndP_2"], ["UndA_2"]),
        (["OveB_2(1/2)"], ["OveP_2(1/2)"]),
        (["Q_2(1)"], ["P_1(1)"]),
    ]


def test_block_odd_middle():
    mid = build_block_H(3, 2)
    assert labels(mid)[1] == (["OveUndP_2"], ["OveUndP_2"])
    assert flip(mid) == mid


@pytest.mark.parametrize("n", range(1, 7))
def test_blocks_and_towers_compatible(n):
    for j in range(1, n + 1):
        for primed in (False, True):
            obj = build_block_H(n, j, primed)
            assert check_compat(obj)
            assert check_slot_restrictions(obj)
        for k in range(5):
            assert check_compat(build_tower(n, j, k))


def test_compat_detects_size_mismatch():
    shape = PlumbingShape(2)
    a2 = SlotObject((Block("A", 2),))
    b3 = SlotObject((Block("B", 3, 0, 1),))
    assert not check_compat(PlumbingObject(shape, ((a2, a2), (b3, b3))))


def test_compat_needs_specializable_junctions():
    shape = PlumbingShape(2)
    tilde = SlotObject((Block("TildeUndP"),))
    with pytest.raises(UnsupportedSpecialization):
        check_compat(PlumbingObject(shape, ((tilde, tilde), (tilde, tilde))))


def test_shape_rules():
    with pytest.raises(ValueError):
        PlumbingShape(0)
    sky = SlotObject((Block("Sky"),))
    with pytest.raises(ValueError):
        PlumbingObject(PlumbingShape(1, with_stops=False), ((sky, sky),))
    with pytest.raises(ValueError):
        PlumbingObject(PlumbingShape(1), ((sky, None),))
    assert PlumbingObject(PlumbingShape(1, "relcore"), ((sky, None),)).to_json()["slots"][0]["right"] is None


# ---------------------------------------------------------------- towers

def test_tower_layers():
    assert tower_layers(2, 1, 0) == [build_block_H(2, 1, primed=True)]
    layers = tower_layers(2, 1, 1)
    assert layers[1] == flip(build_block_H(2, 1)).shifted(1, 3)
    assert build_tower(2, 1, 0) == build_block_H(2, 1, primed=True)


@pytest.mark.parametrize("n", range(1, 6))
def test_restrict_tower_matches_objects(n):
    for j in range(1, n + 1):
        for k in range(4):
            obj = build_tower(n, j, k)
            for i in range(1, n + 1):
                formula = restrict_tower(n, j, k, i)
                direct = restrict_tower_object(obj, i)
                assert [t.plain() for t in formula] == [t.plain() for t in direct]
                assert all(t.size == s_size(n, j, i) for t in formula)


def test_restrict_tower_examples():
    assert restrict_tower(3, 2, 0, 2)[0].plain() == LocalSystemTerm(2, "plain", 0, 0)
    terms = restrict_tower(3, 2, 2, 1)
    assert [t.size for t in terms] == [1, 1, 1]
    assert [Fraction(t.twist_halves, 2) for t in terms] == [
        e_twist(3, 2, 1, u) for u in range(3)]
    assert e_twist(3, 2, 1, 0) == Fraction(1, 2)


# ---------------------------------------------------------------- endomorphisms

def test_endo_core_examples():
    for m in range(6):
        assert endo_dim_core(1, 1, 1, -m, -2 * m) == 1
    assert endo_dim_core(1, 1, 1, -1, -1) == 0
    assert endo_dim_core(2, 1, 1, 0, 0) == 1
    assert endo_dim_core(2, 1, 1, -1, -4) == 1
    assert endo_table(1, "core", 6, 12) == {(m, 2 * m): 1 for m in range(7)}


def test_endo_relcore_examples():
    for i in range(1, 5):
        assert endo_dim_relcore(4, i, i, 0, 0) == 1
        hits = [s for s in range(-12, 1) if endo_dim_relcore(4, i, i, 0, s)]
        assert hits == [-2 * m for m in range(i - 1, -1, -1)]
        assert all(endo_dim_relcore(4, i, i, k, -2) == 0 for k in (-1, 1, 2))


@pytest.mark.parametrize("n", range(1, 7))
def test_endo_core_vanishing_and_origin(n):
    table = endo_table(n, "core", 8, 8)
    assert table[(0, 0)] == n
    for (a, b), d in table.items():
        assert a >= 0 and b >= 0
        assert not (b == 0 and a > 0) and not (a == 0 and b > 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n), st.integers(1, n), st.integers(-6, 1), st.integers(-14, 1))))
def test_endo_core_flip_symmetry(args):
    n, i, j, k, s = args
    assert endo_dim_core(n, i, j, k, s) == endo_dim_core(n, n - i + 1, n - j + 1, k, s)


@pytest.mark.parametrize("n", range(1, 5))
def test_core_crosscheck_small(n):
    assert core_crosscheck(n, 8)[0]


def test_printed_twist_rule_diverges_from_ginzburg_at_n3():
    assert core_crosscheck(2, 8, rule="printed")[0]
    assert not core_crosscheck(3, 8, rule="printed")[0]


def test_saturation():
    assert saturation_sum_check(1, "core", 6)
    assert saturation_sum_check(3, "core", 4)
    assert not saturation_sum_check(3, "core", 4, perturb_halves=1)
    for n in range(1, 7):
        assert saturation_sum_check(n, "relcore", 2 * n)


# ---------------------------------------------------------------- y^N chain

def test_skyscraper_chain():
    c1 = unipotent_skyscraper_chain(1, 2, 1)
    assert [j.tuple.can.is_zero() for j in c1.junctions] == [True, False]
    c2 = unipotent_skyscraper_chain(2, 3, 1)
    assert [j.side for j in c2.junctions] == ["left", "right", "right"]
    assert c2.y.to_json() == [["0", "0"], ["1", "0"]]
    decs = chain_decompositions(c2)
    assert decs[0] == NormalForm.of(Block("B", 2))
    assert decs[1] == decs[2] == NormalForm.of(Block("A", 2))
    with pytest.raises(ValueError):
        unipotent_skyscraper_chain(0, 1, 0)
