"""Acceptance criteria 1-10, each printing one PASS/FAIL line with its timing.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""

import random
import sys
import time
from contextlib import contextmanager

import pytest

from hodgemicro import barhodge, monodromic, pathalg, plumbing
from hodgemicro.monodromic import Block, NormalForm, block_tuple, decompose, fourier

N_MAX = 6
_capture = None


def _emit(line):
    if _capture is not None:
        with _capture.disabled():
            print("\n" + line)
    else:
        print(line)


@contextmanager
def criterion(number, title, budget_s):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, f"took {elapsed:.2f}s, budget {budget_s}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        _emit(f"[{status}] criterion {number:2d}: {title} ({elapsed:.2f}s, budget {budget_s}s)")


@pytest.fixture(autouse=True)
def _printer(capsys):
    global _capture
    _capture = capsys
    yield
    _capture = None


def test_criterion_01_hom_tables():
    with criterion(1, "Hom/Ext fixtures between catalog blocks", 1):
        for s in range(1, N_MAX + 1):
            a = block_tuple("A", s)
            for t in range(1, s):
                assert monodromic.homext(a, block_tuple("A", t)) == (t, t)
            for t in range(1, s + 1):
                assert monodromic.homext(a, block_tuple("P", t)) == (t, t)
            assert monodromic.homext(block_tuple("Sky"), a) == (1, 1)


def test_criterion_02_fourier():
    with criterion(2, "Fourier involution and swap laws", 2):
        rng = random.Random(2)
        for _ in range(200):
            nf = monodromic.random_normal_form(rng, 12)
            twisted = NormalForm(tuple(b.shifted(rng.randint(-2, 2), rng.randint(-3, 3))
                                       for b in nf.blocks))
            assert fourier(fourier(twisted)) == twisted
            t = monodromic.random_tuple(rng, nf)
            once, _ = monodromic.fourier_tuple(t)
            twice, tw = monodromic.fourier_tuple(once, 1)
            assert decompose(once) == fourier(nf).untwisted()
            assert decompose(twice) == nf and tw == 2
        for s in range(1, N_MAX + 1):
            assert fourier(NormalForm.of(Block("A", s))) == NormalForm.of(Block("B", s, 0, 1))
        assert fourier(NormalForm.of(Block("Sky"))) == NormalForm.of(Block("P", 1, 0, 1))


def test_criterion_03_decomposition_roundtrip():
    with criterion(3, "decomposition round-trip on 500 multisets, dim <= 40", 10):
        rng = random.Random(3)
        for _ in range(500):
            nf = monodromic.random_normal_form(rng, 40)
            assert decompose(monodromic.random_tuple(rng, nf)) == nf


def test_criterion_04_gluing():
    with criterion(4, "gluing compatibility of blocks and towers, n <= 6", 2):
        for n in range(1, N_MAX + 1):
            for j in range(1, n + 1):
                assert plumbing.check_compat(plumbing.build_block_H(n, j))
                for k in range(5):
                    assert plumbing.check_compat(plumbing.build_tower(n, j, k))


def test_criterion_05_core_vs_ginzburg():
    with criterion(5, "endo_table(core) equals Ginzburg cohomology, n <= 6, cutoff 12", 20):
        for n in range(1, N_MAX + 1):
            match, formula, reference = plumbing.core_crosscheck(n, 12)
            assert match, sorted(set(formula.items()) ^ set(reference.items()))[:8]
        assert plumbing.endo_table(1, "core", 12, 12) == {(m, 2 * m): 1 for m in range(7)}


def test_criterion_06_relcore():
    with criterion(6, "relcore table in total degree 0, totals min(i,j) = L path counts", 2):
        for n in range(1, N_MAX + 1):
            table = plumbing.endo_table(n, "relcore", 12, 12)
            # k = a - b = 0 is the only contributing shift
            assert all(a == b for a, b in table)
            resolved = plumbing.endo_table_resolved(n, "relcore", 12, 12)
            counts = plumbing.relcore_path_counts(n) if n > 1 else {(1, 1): 1}
            for (i, j), cell in resolved.items():
                assert sum(cell.values()) == min(i, j) == counts[(i, j)]


def _by_step(table):
    out = {}
    for (p, _), d in table.items():
        out[p] = out.get(p, 0) + d
    return out


def test_criterion_07_koszul():
    with criterion(7, "Koszul suite for L, M and A against G, n <= 6", 20):
        for n in range(2, N_MAX + 1):
            L, M = pathalg.construct_LGamma(n), pathalg.construct_MGamma(n)
            cut = 2 * n
            assert pathalg.koszul_check(L, "classical", cut)
            for alg, dual in ((L, M), (M, L)):
                dims = {t: d for t, d in pathalg.quotient(dual, cut).degree_dims().items() if d}
                assert _by_step(pathalg.ext_kk_table(alg, cut)) == dims
            assert pathalg.verify_LGamma_resolution(n)
            for i in range(cut + 1):
                assert pathalg.graded_dim(L, i) == pathalg.L_dim_formula(n, i)
        for n in range(1, N_MAX + 1):
            ext = pathalg.ext_kk_table(pathalg.construct_AGamma(n), 12)
            assert ext == pathalg.dg_cohomology_table(pathalg.construct_Ginzburg(n), 12)


def test_criterion_08_vanishing_pattern():
    with criterion(8, "vanishing pattern and origin of endo_table(core)", 1):
        for n in range(1, N_MAX + 1):
            table = plumbing.endo_table(n, "core", 12, 12)
            assert table[(0, 0)] == n
            for a, b in table:
                assert a >= 0 and b >= 0
                assert not (b == 0 and a > 0) and not (a == 0 and b > 0)


def test_criterion_09_loop_hodge():
    with criterion(9, "bar cohomology of H*(P^n) matches the wrapping sequence", 5):
        for n in (1, 2, 3):
            cutoff = 4 * n + 1
            table = barhodge.bar_cohomology_table(barhodge.cohomology_ring_Pn(n), cutoff)
            expected = [p for p in barhodge.wrapping_weight_sequence(n, 4 * n + 4)
                        if p[0] <= cutoff]
            assert sorted(table) == expected
            assert set(table.values()) == {1}


def test_criterion_10_fixture_tables():
    with criterion(10, "A_Gamma diagonal/neighbour dims and M_Gamma degree-2 classes", 1):
        for n in range(2, N_MAX + 1):
            A, M = pathalg.construct_AGamma(n), pathalg.construct_MGamma(n)
            q = pathalg.quotient(A, 2)
            for i in range(1, n + 1):
                loops = [p for p in q.basis.get(2, ()) if p[0] == i and q.target_of(p) == i]
                assert [q.bidegree_of(p) for p in loops] == [(2, -2)]
                for j in range(1, n + 1):
                    if abs(i - j) == 1:
                        assert pathalg.path_count_table(A, i, j, 1) == 1
                    if abs(i - j) > 1:
                        assert pathalg.path_count_table(A, i, j, 1) == 0
                assert pathalg.path_count_table(M, i, i, 2) == int(i < n)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
