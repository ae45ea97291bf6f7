"""Reduced bar construction on weight-graded commutative algebras.

Applied to H*(P^n) = k[x]/x^{n+1} (x in degree 2, weight 2) it gives the
(degree, weight) table of the based loop space, which is compared with the
weight sequence produced by wrapping.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .corelin import sparse_rank


@dataclass(frozen=True)
class WeightedAlgebra:
    """Finite-dimensional graded algebra with a unit and structure constants.

    ``basis`` holds (name, cohdeg, weight); ``mult[(i, j)]`` is a sparse
    {k: coef} product of basis elements i and j.
    """

    basis: tuple
    unit: int
    mult: dict

    def product(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    @property
    def augmentation_ideal(self) -> list:
        return [i for i in range(len(self.basis)) if i != self.unit]

    def check(self) -> bool:
        """Unit laws, associativity and additivity of degree and weight."""
        n = len(self.basis)
        for i in range(n):
            if self.product(self.unit, i) != {i: 1} or self.product(i, self.unit) != {i: 1}:
                return False
        for i, j in product(range(n), repeat=2):
            for k in self.product(i, j):
                if self.basis[k][1:] != (self.basis[i][1] + self.basis[j][1],
                                         self.basis[i][2] + self.basis[j][2]):
                    return False
        for i, j, k in product(range(n), repeat=3):
            left, right = defaultdict(Fraction), defaultdict(Fraction)
            for m, c in self.product(i, j).items():
                for r, e in self.product(m, k).items():
                    left[r] += c * e
            for m, c in self.product(j, k).items():
                for r, e in self.product(i, m).items():
                    right[r] += c * e
            if {a: b for a, b in left.items() if b} != {a: b for a, b in right.items() if b}:
                return False
        return True


def cohomology_ring_Pn(n: int, x_weight: int = 2) -> WeightedAlgebra:
    """k[x]/x^{n+1} with deg x^k = 2k and weight x^k = k·x_weight."""
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = tuple((f"x^{k}" if k > 1 else ("x" if k else "1"), 2 * k, x_weight * k)
                  for k in range(n + 1))
    mult = {(i, j): {i + j: 1} for i in range(n + 1) for j in range(n + 1) if i + j <= n}
    return WeightedAlgebra(basis, 0, mult)


def _words(alg: WeightedAlgebra, degree_cutoff: int) -> dict:
    """Bar words grouped by (degree, weight); letters carry degree cohdeg − 1."""
    letters = [(i, alg.basis[i][1] - 1, alg.basis[i][2]) for i in alg.augmentation_ideal]
    if any(d < 1 for _, d, _ in letters):
        raise ValueError("augmentation ideal must sit in cohomological degree >= 2")
    out = defaultdict(list)
    out[(0, 0)].append(())
    frontier = [((), 0, 0)]
    while frontier:
        nxt = []
        for word, deg, wt in frontier:
            for i, d, w in letters:
                if deg + d <= degree_cutoff + 1:
                    item = (word + (i,), deg + d, wt + w)
                    out[(deg + d, wt + w)].append(item[0])
                    nxt.append(item)
        frontier = nxt
    return out


def bar_differential(alg: WeightedAlgebra, word: tuple) -> dict:
    """Σ_i (−1)^{ε_i} [a1|…|a_i a_{i+1}|…], ε_i the bar degree left of the merge."""
    out = defaultdict(Fraction)
    eps = 0
    for i in range(len(word) - 1):
        eps += alg.basis[word[i]][1] - 1
        for k, c in alg.product(word[i], word[i + 1]).items():
            if k == alg.unit:
                continue
            new = word[:i] + (k,) + word[i + 2:]
            out[new] += (-1) ** eps * c
    return {w: c for w, c in out.items() if c}


def bar_cohomology_table(alg: WeightedAlgebra, degree_cutoff: int) -> dict:
    """{(degree, weight): dim} of reduced bar cohomology for degree ≤ cutoff."""
    words = _words(alg, degree_cutoff)
    ranks = {}
    for (deg, wt), ws in words.items():
        target = words.get((deg + 1, wt))
        if not target:
            ranks[(deg, wt)] = 0
            continue
        index = {w: i for i, w in enumerate(target)}
        rows = [{index[x]: c for x, c in bar_differential(alg, w).items()} for w in ws]
        ranks[(deg, wt)] = sparse_rank(r for r in rows if r)
    table = {}
    for (deg, wt), ws in words.items():
        if deg > degree_cutoff:
            continue
        h = len(ws) - ranks[(deg, wt)] - ranks.get((deg - 1, wt), 0)
        if h:
            table[(deg, wt)] = h
    return dict(sorted(table.items()))


def check_bar_d_squared(alg: WeightedAlgebra, degree_cutoff: int) -> bool:
    for ws in _words(alg, degree_cutoff).values():
        for w in ws:
            total = defaultdict(Fraction)
            for x, c in bar_differential(alg, w).items():
                for y, e in bar_differential(alg, x).items():
                    total[y] += c * e
            if any(total.values()):
                return False
    return True


def wrapping_weight_sequence(n: int, count: int) -> list:
    """(2mn, 2mn + 2m) and (2mn + 1, 2mn + 2m + 2) for m = 0, 1, …, in degree order."""
    if n < 1 or count < 1:
        raise ValueError("need n >= 1 and count >= 1")
    out = []
    m = 0
    while len(out) < count:
        out.append((2 * m * n, 2 * m * n + 2 * m))
        out.append((2 * m * n + 1, 2 * m * n + 2 * m + 2))
        m += 1
    out = sorted(set(out))
    return out[:count]


def compare_loop_hodge(n: int, degree_cutoff: int, alg: WeightedAlgebra | None = None) -> bool:
    """Bar cohomology support (all dims 1) equals the wrapping sequence up to the cutoff."""
    alg = cohomology_ring_Pn(n) if alg is None else alg
    table = bar_cohomology_table(alg, degree_cutoff)
    expected = {p for p in wrapping_weight_sequence(n, 2 * (degree_cutoff + 2))
                if p[0] <= degree_cutoff}
    return set(table) == expected and all(d == 1 for d in table.values())
