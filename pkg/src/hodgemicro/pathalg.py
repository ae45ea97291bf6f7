"""Bigraded quiver algebras, the Ginzburg dga and Ext computations.

Paths are stored in travel order: a path is (source vertex, tuple of arrow
ids) and ``p * q`` means "p, then q".  Relations written in the usual
composition order (``g1 f1`` = first f1, then g1) are reversed on input; the
JSON format keeps composition order.  Modules over an algebra are right
modules in travel order (equivalently left modules in composition order), so
e_v A is spanned by the paths leaving v.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .corelin import EchelonSpace, rational_str, sparse_rank, to_rational


class InfinitePathSpace(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    src: int
    tgt: int
    deg: tuple  # (cohomological degree, Adams degree)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        vs = set(self.vertices)
        for a in self.arrows:
            if a.src not in vs or a.tgt not in vs:
                raise ValueError(f"arrow {a.id} has an endpoint outside the vertex set")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate arrow ids")

    @property
    def by_id(self) -> dict:
        return {a.id: a for a in self.arrows}

    def out_arrows(self, v) -> list:
        return [a for a in self.arrows if a.src == v]

    def path_target(self, src, arrows: tuple):
        by = self.by_id
        v = src
        for x in arrows:
            a = by[x]
            if a.src != v:
                raise ValueError(f"path {arrows} is not composable at {x}")
            v = a.tgt
        return v

    def path_degree(self, arrows: tuple) -> tuple:
        by = self.by_id
        return (sum(by[x].deg[0] for x in arrows), sum(by[x].deg[1] for x in arrows))


def composition_to_travel(path: Iterable[str]) -> tuple:
    return tuple(reversed(list(path)))


@dataclass(frozen=True)
class PresentedAlgebra:
    """Path algebra modulo relations; each relation maps travel-order paths to coefficients."""

    name: str
    quiver: Quiver
    relations: tuple

    def __post_init__(self):
        for rel in self.relations:
            ends = set()
            degs = set()
            for path, _ in rel:
                src = self.quiver.by_id[path[0]].src
                ends.add((src, self.quiver.path_target(src, path)))
                degs.add(self.quiver.path_degree(path))
            if len(ends) > 1 or len(degs) > 1:
                raise ValueError(f"relation {rel} is not homogeneous or not parallel")

    def to_json(self) -> dict:
        return {
            "vertices": list(self.quiver.vertices),
            "arrows": [{"id": a.id, "src": a.src, "tgt": a.tgt, "deg": list(a.deg)}
                       for a in self.quiver.arrows],
            "relations": [[{"path": list(reversed(p)), "coef": rational_str(c)} for p, c in rel]
                          for rel in self.relations],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "algebra") -> "PresentedAlgebra":
        arrows = tuple(Arrow(a["id"], a["src"], a["tgt"], tuple(a["deg"])) for a in data["arrows"])
        quiver = Quiver(tuple(data["vertices"]), arrows)
        rels = tuple(
            tuple((composition_to_travel(t["path"]), to_rational(t["coef"])) for t in rel)
            for rel in data["relations"]
        )
        return cls(name, quiver, rels)


def _rel(*terms) -> tuple:
    """Relation from (coef, composition-order arrow list) pairs."""
    return tuple((composition_to_travel(p), Fraction(c)) for c, p in terms)


# ---------------------------------------------------------------- constructors

def construct_AGamma(n: int) -> PresentedAlgebra:
    """Zigzag-type algebra: e_{v,w} of degree (1,−1), w_v of degree (2,−2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vertices = tuple(range(1, n + 1))
    arrows = []
    for v in vertices:
        for u in (v - 1, v + 1):
            if 1 <= u <= n:
                arrows.append(Arrow(f"e{v}{u}" if n < 10 else f"e{v}_{u}", v, u, (1, -1)))
    arrows += [Arrow(f"w{v}", v, v, (2, -2)) for v in vertices]
    quiver = Quiver(vertices, tuple(arrows))
    rels = []
    gens = list(quiver.arrows)
    for x in gens:
        for y in gens:
            if x.tgt != y.src:
                continue
            path = (x.id, y.id)  # travel order: x then y
            if x.id.startswith("e") and y.id.startswith("e") and y.tgt == x.src:
                rels.append(((path, Fraction(1)), ((f"w{x.src}",), Fraction(-1))))
            else:
                rels.append(((path, Fraction(1)),))
    return PresentedAlgebra(f"A_Gamma(n={n})", quiver, tuple(rels))


def _double_quiver_arrows(n: int, deg: tuple) -> list:
    arrows = []
    for i in range(1, n):
        arrows.append(Arrow(f"f{i}", i, i + 1, deg))
        arrows.append(Arrow(f"g{i}", i + 1, i, deg))
    return arrows


def construct_LGamma(n: int) -> PresentedAlgebra:
    """Relations g1 f1 and f_i g_i − g_{i+1} f_{i+1} (composition order)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    quiver = Quiver(tuple(range(1, n + 1)), tuple(_double_quiver_arrows(n, (1, 1))))
    rels = []
    if n >= 2:
        rels.append(_rel((1, ["g1", "f1"])))
    for i in range(1, n - 1):
        rels.append(_rel((1, [f"f{i}", f"g{i}"]), (-1, [f"g{i + 1}", f"f{i + 1}"])))
    return PresentedAlgebra(f"L_Gamma(n={n})", quiver, tuple(rels))


def construct_MGamma(n: int) -> PresentedAlgebra:
    """Relations f_{n−1} g_{n−1}, f_i g_i − g_{i+1} f_{i+1}, f_{i+1} f_i, g_i g_{i+1}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    quiver = Quiver(tuple(range(1, n + 1)), tuple(_double_quiver_arrows(n, (1, 1))))
    rels = []
    if n >= 2:
        rels.append(_rel((1, [f"f{n - 1}", f"g{n - 1}"])))
    for i in range(1, n - 1):
        rels.append(_rel((1, [f"f{i}", f"g{i}"]), (-1, [f"g{i + 1}", f"f{i + 1}"])))
        rels.append(_rel((1, [f"f{i + 1}", f"f{i}"])))
        rels.append(_rel((1, [f"g{i}", f"g{i + 1}"])))
    return PresentedAlgebra(f"M_Gamma(n={n})", quiver, tuple(rels))


def truncated_polynomial(power: int, deg: tuple = (1, 1)) -> PresentedAlgebra:
    """k[x]/x^power on one vertex (a small non-Koszul test case for power ≥ 3)."""
    quiver = Quiver((1,), (Arrow("x", 1, 1, deg),))
    return PresentedAlgebra(f"k[x]/x^{power}", quiver, (((("x",) * power, Fraction(1)),),))


# ---------------------------------------------------------------- quotient algebra

class QuotientAlgebra:
    """Graded pieces of a presented algebra up to a cohomological-degree cutoff.

    In each degree the relation ideal is the span of R_t together with
    I_{t−|a|}·a and a·I_{t−|a|}; a basis of the quotient is the set of paths
    that are not echelon pivots of the ideal.
    """

    def __init__(self, alg: PresentedAlgebra, cutoff: int):
        self.alg = alg
        self.quiver = alg.quiver
        self.cutoff = cutoff
        arrows = sorted(self.quiver.arrows, key=lambda a: a.id)
        if any(a.deg[0] < 1 for a in arrows):
            raise InfinitePathSpace("arrows of cohomological degree < 1 give infinite path spaces")
        self._arrows = arrows
        self._max_arrow = max((a.deg[0] for a in arrows), default=1)
        self.paths: dict = {}      # t -> list of (src, arrows)
        self.info: dict = {}       # (src, arrows) -> (tgt, bidegree)
        self.ideal: dict = {}      # t -> EchelonSpace over path tuples
        self.basis: dict = {}      # t -> list of normal paths
        self._index: dict = {}     # normal path -> position in its degree
        self._reduce_cache: dict = {}
        self._zero_from = None
        self._build()

    def _build(self) -> None:
        vertices = self.quiver.vertices
        for v in vertices:
            self.info[(v, ())] = (v, (0, 0))
        self.paths[0] = [(v, ()) for v in vertices]
        rels_by_deg = defaultdict(list)
        for rel in self.alg.relations:
            t = self.quiver.path_degree(rel[0][0])[0]
            src = self.quiver.by_id[rel[0][0][0]].src
            rels_by_deg[t].append({(src, p): c for p, c in rel})
        zero_run = 0
        for t in range(self.cutoff + 1):
            if t > 0:
                new = []
                for a in self._arrows:
                    for p in self.paths.get(t - a.deg[0], ()):
                        tgt, deg = self.info[p]
                        if tgt == a.src:
                            q = (p[0], p[1] + (a.id,))
                            self.info[q] = (a.tgt, (deg[0] + a.deg[0], deg[1] + a.deg[1]))
                            new.append(q)
                self.paths[t] = sorted(set(new), key=lambda p: (p[0], p[1]))
            order = {p: i for i, p in enumerate(self.paths[t])}
            space = _PathEchelon(order)
            for rel in rels_by_deg.get(t, ()):
                space.add(rel)
            for a in self._arrows:
                prev = self.ideal.get(t - a.deg[0])
                if prev is None:
                    continue
                for row in prev.rows():
                    space.add(self._times_arrow(row, a, right=True))
                    space.add(self._times_arrow(row, a, right=False))
            self.ideal[t] = space
            self.basis[t] = [p for p in self.paths[t] if not space.is_pivot(p)]
            for i, p in enumerate(self.basis[t]):
                self._index[p] = i
            zero_run = zero_run + 1 if (t > 0 and not self.basis[t]) else 0
            if zero_run >= self._max_arrow and self._zero_from is None:
                self._zero_from = t - self._max_arrow + 1
                for u in range(t + 1, self.cutoff + 1):
                    self.paths[u] = []
                    self.basis[u] = []
                break

    def _times_arrow(self, vec: dict, a: Arrow, right: bool) -> dict:
        out = {}
        for (src, arrows), c in vec.items():
            tgt, _ = self.info[(src, arrows)]
            if right and tgt == a.src:
                out[(src, arrows + (a.id,))] = c
            elif not right and src == a.tgt:
                out[(a.src, (a.id,) + arrows)] = c
        for p in out:
            if p not in self.info:
                self.info[p] = (self.quiver.path_target(p[0], p[1]) if p[1] else p[0],
                                self.quiver.path_degree(p[1]))
        return out

    def degree_of(self, p) -> int:
        return self.info[p][1][0]

    def bidegree_of(self, p) -> tuple:
        return self.info[p][1]

    def target_of(self, p):
        return self.info[p][0]

    def reduce(self, p) -> dict:
        """Normal-form expansion of a path as {basis path: coef}."""
        hit = self._reduce_cache.get(p)
        if hit is not None:
            return hit
        if p in self._index:
            out = {p: Fraction(1)}
        else:
            if p not in self.info:
                self.info[p] = (self.quiver.path_target(p[0], p[1]), self.quiver.path_degree(p[1]))
            t = self.degree_of(p)
            if t > self.cutoff:
                raise ValueError(f"degree {t} beyond the computed cutoff {self.cutoff}")
            space = self.ideal.get(t)
            out = space.reduce({p: Fraction(1)}) if space is not None else {}
        self._reduce_cache[p] = out
        return out

    def multiply(self, p, q) -> dict:
        """Product of two basis paths (p then q) in normal form."""
        if self.target_of(p) != q[0]:
            return {}
        if self.degree_of(p) + self.degree_of(q) > self.cutoff:
            raise ValueError("product beyond cutoff")
        return self.reduce((p[0], p[1] + q[1]))

    def dims(self) -> dict:
        """{(cohdeg, adams): dim} over the computed range."""
        out = defaultdict(int)
        for t, ps in self.basis.items():
            for p in ps:
                out[self.bidegree_of(p)] += 1
        return dict(out)

    def degree_dims(self) -> dict:
        return {t: len(ps) for t, ps in sorted(self.basis.items())}

    def basis_from(self, v, t: int) -> list:
        return [p for p in self.basis.get(t, ()) if p[0] == v]


class _PathEchelon:
    """EchelonSpace keyed by paths through a fixed ordering."""

    def __init__(self, order: dict):
        self.order = order
        self.paths = {i: p for p, i in order.items()}
        self.space = EchelonSpace()

    def _vec(self, d: dict) -> dict:
        return {self.order[p]: c for p, c in d.items() if c}

    def add(self, d: dict) -> bool:
        return self.space.add(self._vec(d)) if d else False

    def is_pivot(self, p) -> bool:
        return self.order[p] in self.space.pivots

    def reduce(self, d: dict) -> dict:
        return {self.paths[i]: c for i, c in self.space.reduce(self._vec(d)).items()}

    def rows(self):
        for row in self.space.pivots.values():
            yield {self.paths[i]: c for i, c in row.items()}


@lru_cache(maxsize=None)
def _quotient_cached(alg: PresentedAlgebra, cutoff: int) -> QuotientAlgebra:
    return QuotientAlgebra(alg, cutoff)


def quotient(alg: PresentedAlgebra, cutoff: int) -> QuotientAlgebra:
    return _quotient_cached(alg, cutoff)


def graded_dim(alg: PresentedAlgebra, bidegree) -> int:
    """dim of the quotient in a cohomological degree t, or in a bidegree (t, adams)."""
    if isinstance(bidegree, int):
        return len(quotient(alg, max(bidegree, 0)).basis.get(bidegree, ())) if bidegree >= 0 else 0
    t, adams = bidegree
    if t < 0:
        return 0
    q = quotient(alg, t)
    return sum(1 for p in q.basis.get(t, ()) if q.bidegree_of(p)[1] == adams)


def path_count_table(alg: PresentedAlgebra, i, j, degree: int) -> int:
    """dim e_j A^degree e_i: paths that start at i and end at j."""
    if degree < 0:
        return 0
    q = quotient(alg, degree)
    return sum(1 for p in q.basis.get(degree, ()) if p[0] == i and q.target_of(p) == j)


# ---------------------------------------------------------------- dg algebras

@dataclass(frozen=True)
class DGAlgebra:
    name: str
    quiver: Quiver
    differential: tuple  # ((arrow id, ((travel path, coef), ...)), ...)

    @property
    def d_of(self) -> dict:
        return {a: terms for a, terms in self.differential}


def construct_Ginzburg(n: int, orientation: str = "up") -> DGAlgebra:
    """Ginzburg dga of A_n: g, g* in bidegree (1,−1), loops h_v in (1,−2).

    ``orientation`` chooses g_i: i → i+1 ("up") or i+1 → i ("down").
    d(h_v) = Σ_{g* leaving v} g g* − Σ_{g leaving v} g* g in composition
    order, i.e. the loop at v through each neighbour.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if orientation not in ("up", "down"):
        raise ValueError("orientation is 'up' or 'down'")
    arrows = []
    for i in range(1, n):
        s, t = (i, i + 1) if orientation == "up" else (i + 1, i)
        arrows.append(Arrow(f"g{i}", s, t, (1, -1)))
        arrows.append(Arrow(f"g{i}*", t, s, (1, -1)))
    arrows += [Arrow(f"h{v}", v, v, (1, -2)) for v in range(1, n + 1)]
    quiver = Quiver(tuple(range(1, n + 1)), tuple(arrows))
    by = quiver.by_id
    diff = []
    for v in range(1, n + 1):
        terms = []
        for a in quiver.arrows:
            if a.id.startswith("h") or a.src != v:
                continue
            partner = a.id[:-1] if a.id.endswith("*") else a.id + "*"
            # composition g g*: first g* (leaving v), then g; composition g* g: first g, then g*
            sign = 1 if a.id.endswith("*") else -1
            terms.append(((a.id, by[partner].id), Fraction(sign)))
        diff.append((f"h{v}", tuple(terms)))
    dga = DGAlgebra(f"G_Gamma(n={n})", quiver, tuple(diff))
    check_d_squared(dga, 4)
    return dga


class _AdamsPaths:
    """Paths of a dga grouped by Adams weight b = −adams (every arrow has b ≥ 1)."""

    def __init__(self, dga: DGAlgebra, cutoff: int):
        self.quiver = dga.quiver
        if any(a.deg[1] > -1 for a in self.quiver.arrows):
            raise InfinitePathSpace("Adams degree does not bound the path space")
        self.by_weight = defaultdict(list)  # b -> list of (src, arrows)
        self.meta = {}
        arrows = sorted(self.quiver.arrows, key=lambda a: a.id)
        for v in self.quiver.vertices:
            self.meta[(v, ())] = (v, 0, 0)
            self.by_weight[0].append((v, ()))
        for b in range(1, cutoff + 1):
            for a in arrows:
                w = -a.deg[1]
                for p in self.by_weight.get(b - w, ()):
                    tgt, deg, _ = self.meta[p]
                    if tgt == a.src:
                        q = (p[0], p[1] + (a.id,))
                        self.meta[q] = (a.tgt, deg + a.deg[0], b)
                        self.by_weight[b].append(q)

    def blocks(self, b: int) -> dict:
        """(src, tgt, cohdeg) -> sorted list of paths at Adams weight b."""
        out = defaultdict(list)
        for p in self.by_weight.get(b, ()):
            tgt, deg, _ = self.meta[p]
            out[(p[0], tgt, deg)].append(p)
        for k in out:
            out[k].sort()
        return out


def _path_differential(dga: DGAlgebra, p, d_of: dict, by: dict) -> dict:
    """Leibniz rule with the Koszul sign of the cohomological degree."""
    src, arrows = p
    out = {}
    sign = 1
    for i, x in enumerate(arrows):
        for terms_path, c in d_of.get(x, ()):
            q = (src, arrows[:i] + terms_path + arrows[i + 1:])
            out[q] = out.get(q, 0) + sign * c
        if by[x].deg[0] % 2:
            sign = -sign
    return {q: c for q, c in out.items() if c}


def check_d_squared(dga: DGAlgebra, adams_cutoff: int) -> bool:
    paths = _AdamsPaths(dga, adams_cutoff)
    d_of, by = dga.d_of, dga.quiver.by_id
    for b in range(adams_cutoff + 1):
        for p in paths.by_weight.get(b, ()):
            first = _path_differential(dga, p, d_of, by)
            second = defaultdict(Fraction)
            for q, c in first.items():
                for r, e in _path_differential(dga, q, d_of, by).items():
                    second[r] += c * e
            if any(second.values()):
                raise ArithmeticError(f"d^2 != 0 on {p}")
    return True


@lru_cache(maxsize=None)
def dg_cohomology_table(dga: DGAlgebra, adams_cutoff: int) -> dict:
    """{(cohdeg a, adams): dim H} for all Adams weights 0..adams_cutoff."""
    paths = _AdamsPaths(dga, adams_cutoff)
    d_of, by = dga.d_of, dga.quiver.by_id
    table = {}
    for b in range(adams_cutoff + 1):
        blocks = paths.blocks(b)
        ranks = {}
        for key, ps in blocks.items():
            src, tgt, a = key
            target = blocks.get((src, tgt, a + 1))
            if not target:
                ranks[key] = 0
                continue
            index = {q: i for i, q in enumerate(target)}
            rows = []
            for p in ps:
                dp = _path_differential(dga, p, d_of, by)
                if dp:
                    rows.append({index[q]: c for q, c in dp.items()})
            ranks[key] = sparse_rank(rows)
        for key, ps in blocks.items():
            src, tgt, a = key
            h = len(ps) - ranks[key] - ranks.get((src, tgt, a - 1), 0)
            if h:
                table[(a, -b)] = table.get((a, -b), 0) + h
    return table


def dg_cohomology_dim(dga: DGAlgebra, bidegree: tuple) -> int:
    a, adams = bidegree
    if adams > 0:
        raise InfinitePathSpace("positive Adams degree is not bounded for this dga")
    return dg_cohomology_table(dga, -adams).get((a, adams), 0)


def dga_bar_tor_table(dga: DGAlgebra, adams_cutoff: int) -> dict:
    """Cohomology of the reduced bar complex of an Adams-graded dga over k = ⊕ k e_v.

    A word [p1|…|pr] of composable nonempty paths has total degree Σ(|p_i| − 1)
    and Adams weight Σ b(p_i).  The differential applies d inside each letter
    and multiplies neighbouring letters.  Returns {(total degree, adams): dim},
    whose linear dual is Ext over the dga.
    """
    paths = _AdamsPaths(dga, adams_cutoff)
    d_of, by = dga.d_of, dga.quiver.by_id
    table = {}
    for b in range(adams_cutoff + 1):
        words = defaultdict(list)  # (src, tgt, total degree) -> words
        for p in paths.by_weight.get(b, ()):
            src, arrows = p
            tgt = paths.meta[p][0]
            if not arrows:
                words[(src, tgt, 0)].append(())
                continue
            for cuts in range(1 << (len(arrows) - 1)):
                letters, start = [], 0
                for i in range(1, len(arrows)):
                    if cuts >> (i - 1) & 1:
                        letters.append(arrows[start:i])
                        start = i
                letters.append(arrows[start:])
                word = tuple((_start_of(src, arrows, sum(len(x) for x in letters[:k]), by), x)
                             for k, x in enumerate(letters))
                deg = sum(paths.quiver.path_degree(x)[0] - 1 for _, x in word)
                words[(src, tgt, deg)].append(word)
        ranks = {}
        for key, ws in words.items():
            src, tgt, deg = key
            target = words.get((src, tgt, deg + 1))
            if not target:
                ranks[key] = 0
                continue
            index = {w: i for i, w in enumerate(sorted(target))}
            rows = []
            for w in sorted(ws):
                dw = _bar_differential(w, d_of, by, paths.quiver)
                if dw:
                    rows.append({index[x]: c for x, c in dw.items()})
            ranks[key] = sparse_rank(rows)
        for key, ws in words.items():
            src, tgt, deg = key
            h = len(ws) - ranks[key] - ranks.get((src, tgt, deg - 1), 0)
            if h:
                table[(deg, b)] = table.get((deg, b), 0) + h
    return table


def _start_of(src, arrows, offset, by):
    return src if offset == 0 else by[arrows[offset - 1]].tgt


def _bar_differential(word: tuple, d_of: dict, by: dict, quiver: Quiver) -> dict:
    out = defaultdict(int)
    eps = 0  # Σ_{j<i} (|p_j| − 1), the suspended degree to the left
    for i, (src, letter) in enumerate(word):
        deg = quiver.path_degree(letter)[0]
        for q, c in _path_differential(None, (src, letter), d_of, by).items():
            new = word[:i] + (q,) + word[i + 1:]
            out[new] += -c if eps % 2 else c
        eps += deg - 1
        if i + 1 < len(word):
            merged = (src, letter + word[i + 1][1])
            new = word[:i] + (merged,) + word[i + 2:]
            out[new] += -1 if eps % 2 else 1
    return {w: c for w, c in out.items() if c}


# ---------------------------------------------------------------- resolutions

@dataclass
class ResolutionStep:
    """Generators of one free module, and their images in the previous one.

    ``generators`` holds (vertex, cohdeg, adams); ``images[g]`` is a sparse
    vector over the previous module's basis (gen index, basis path).
    """

    generators: list
    images: list = field(default_factory=list)


class _FreeModule:
    def __init__(self, q: QuotientAlgebra, generators: list):
        self.q = q
        self.generators = generators

    def basis(self, t: int) -> list:
        out = []
        for g, (v, tg, _) in enumerate(self.generators):
            if t - tg >= 0:
                out.extend((g, p) for p in self.q.basis_from(v, t - tg))
        return out

    def end_and_adams(self, elem) -> tuple:
        g, p = elem
        return self.q.target_of(p), self.generators[g][2] + self.q.bidegree_of(p)[1]


def _act(q: QuotientAlgebra, vec: dict, path) -> dict:
    """Right action of a basis path on a module vector."""
    out = defaultdict(Fraction)
    for (g, p), c in vec.items():
        for r, e in q.multiply(p, path).items():
            out[(g, r)] += c * e
    return {k: v for k, v in out.items() if v}


def _kernel(columns: list) -> list:
    """Sparse kernel of the map sending basis vector i to columns[i]."""
    pivots = {}  # column key -> (row vec, combination)
    kernel = []
    for i, col in enumerate(columns):
        vec = dict(col)
        comb = {i: Fraction(1)}
        while vec:
            key = min(vec)
            if key not in pivots:
                inv = 1 / vec[key]
                pivots[key] = ({k: v * inv for k, v in vec.items()},
                               {k: v * inv for k, v in comb.items()})
                break
            prow, pcomb = pivots[key]
            f = vec[key]
            for k, v in prow.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for k, v in pcomb.items():
                nv = comb.get(k, 0) - f * v
                if nv:
                    comb[k] = nv
                else:
                    comb.pop(k, None)
        else:
            kernel.append(comb)
    return kernel


def _map_images(q: QuotientAlgebra, source: _FreeModule, images: list, t: int) -> tuple:
    basis = source.basis(t)
    cols = []
    for g, p in basis:
        cols.append(_act(q, images[g], p) if images[g] else {})
    return basis, cols


def minimal_resolution(alg: PresentedAlgebra, steps: int, cutoff: int) -> list:
    """Minimal free resolution of k = A/A_+ truncated at internal cohdeg ≤ cutoff.

    Step p lists generators with their internal bidegrees.  Minimal generators
    in degree t are a complement of (kernel)·A_+ inside the kernel, chosen by
    echelon order so the output is reproducible.
    """
    q = quotient(alg, cutoff)
    vertices = alg.quiver.vertices
    first = ResolutionStep([(v, 0, 0) for v in vertices], [{} for _ in vertices])
    out = [first]
    module = _FreeModule(q, first.generators)
    # kernel of P0 -> k is the augmentation ideal: every basis element of positive degree
    kernel = {t: [{e: Fraction(1)} for e in module.basis(t)] for t in range(1, cutoff + 1)}
    for _ in range(1, steps + 1):
        gens, images = _minimal_generators(q, module, kernel, cutoff)
        step = ResolutionStep(gens, images)
        out.append(step)
        if not gens:
            break
        new_module = _FreeModule(q, gens)
        new_kernel = {}
        for t in range(1, cutoff + 1):
            basis, cols = _map_images(q, new_module, images, t)
            vecs = [{basis[i]: c for i, c in comb.items()} for comb in _kernel(cols)]
            new_kernel[t] = _homogeneous_parts(new_module, vecs)
        module, kernel = new_module, new_kernel
    return out


def _minimal_generators(q, module: _FreeModule, kernel: dict, cutoff: int) -> tuple:
    gens, images = [], []
    for t in range(1, cutoff + 1):
        # decomposables: kernel elements of lower degree times positive-degree paths
        spaces = defaultdict(EchelonSpace)
        keys = {}
        order = {e: i for i, e in enumerate(module.basis(t))}

        def vec_of(d):
            return {order[e]: c for e, c in d.items()}

        for t0 in range(1, t):
            for y in kernel.get(t0, ()):
                end = _block_key(module, y)[0]
                for path in q.basis_from(end, t - t0):
                    z = _act(q, y, path)
                    if z:
                        spaces[_block_key(module, z)].add(vec_of(z))
        for part in kernel.get(t, ()):
            key = _block_key(module, part)
            if spaces[key].add(vec_of(part)):
                keys.setdefault(key, []).append(part)
        for (w, adams), parts in sorted(keys.items()):
            for part in parts:
                gens.append((w, t, adams))
                images.append(part)
    return gens, images


def _block_key(module: _FreeModule, vec: dict) -> tuple:
    return module.end_and_adams(next(iter(vec)))


def _homogeneous_parts(module: _FreeModule, vecs: list) -> list:
    """Split vectors by (end vertex, adams); the parts stay in any submodule."""
    out = []
    for y in vecs:
        parts = defaultdict(dict)
        for e, c in y.items():
            parts[module.end_and_adams(e)][e] = c
        out.extend(part for _, part in sorted(parts.items()))
    return out


def ext_kk_table(alg: PresentedAlgebra, cutoff: int, steps: int | None = None,
                 grading: str = "adams") -> dict:
    """Bigraded dims of Ext(k, k): {(step p, internal degree): dim}.

    ``grading`` selects the internal degree reported: the Adams component
    ("adams") or the cohomological one ("cohdeg").  Entries with internal
    cohdeg above the cutoff are not computed.
    """
    res = minimal_resolution(alg, cutoff if steps is None else steps, cutoff)
    table = defaultdict(int)
    for p, step in enumerate(res):
        for _, t, adams in step.generators:
            table[(p, adams if grading == "adams" else t)] += 1
    return dict(table)


def ext_full_table(alg: PresentedAlgebra, cutoff: int) -> dict:
    """{(p, cohdeg, adams): dim} of Ext(k, k)."""
    res = minimal_resolution(alg, cutoff, cutoff)
    table = defaultdict(int)
    for p, step in enumerate(res):
        for _, t, adams in step.generators:
            table[(p, t, adams)] += 1
    return dict(table)


def koszul_check(alg, mode: str = "classical", cutoff: int = 8) -> bool:
    """Vanishing pattern of Ext(k, k) up to the cutoff.

    classical: Ext^p is generated in internal degree p (|Adams| = p).
    adams: He–Wu's condition Ext^{i,j} = 0 for i ≠ 0, with i the total degree.
    For a presented algebra the total degree of a step-p class generated in
    cohdeg c is p − c; for a dga it is read off the bar complex.
    """
    if mode not in ("classical", "adams"):
        raise ValueError("mode is 'classical' or 'adams'")
    if isinstance(alg, DGAlgebra):
        if mode != "adams":
            raise ValueError("dg algebras are checked in Adams mode only")
        return all(i == 0 for (i, _), d in dga_bar_tor_table(alg, cutoff).items() if d)
    table = ext_full_table(alg, cutoff)
    if mode == "classical":
        return all(p == abs(adams) for (p, _, adams), d in table.items() if d)
    return all(p - c == 0 for (p, c, _), d in table.items() if d)


# ---------------------------------------------------------------- L_Γ resolution

def L_dim_formula(n: int, i: int) -> int:
    """Closed form for dim L_Γ^i with p_ℓ = max(n − ℓ, 0)."""
    def p(l):
        return max(n - l, 0)

    if i < 0:
        return 0
    if i % 2 == 0:
        h = i // 2
        return p(h) + sum(2 * p(h + l) for l in range(1, h + 1))
    h = (i + 1) // 2
    return sum(2 * p(h + l) for l in range(0, (i - 1) // 2 + 1))


def L_basis_count(n: int, i: int, j: int, degree: int) -> int:
    """Count of the a/b basis paths from i to j in a given degree.

    The basis of e_j L e_i is indexed by the lowest vertex u ≤ min(i, j) the
    path dips to; its degree is |i − j| + 2(min(i, j) − u).
    """
    m = min(i, j)
    return sum(1 for u in range(1, m + 1) if abs(i - j) + 2 * (m - u) == degree)


def verify_LGamma_resolution(n: int, perturb: str | None = None) -> bool:
    """Exactness of 0 → L′(−2) → L′(−1) ⊕ L″(−1) → L → k → 0, degree by degree.

    L′ = ⊕_{j<n} e_j L and L″ = ⊕_{j>1} e_j L.  The middle map sends the L′
    generator at j to g_j and the L″ generator at j to −f_{j−1}; the left map
    sends the L′(−2) generator at j to v_j = (f_{j−1}, g_j).  The sign on the
    L″ part makes the composite vanish with these v_j.  ``perturb`` injects a
    fault for negative controls: "drop_v1" zeroes v₁, "flip_sign" drops the sign.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    alg = construct_LGamma(n)
    top = 2 * n + 1
    q = quotient(alg, top)

    def arrow_path(x):
        a = alg.quiver.by_id[x]
        return (a.src, (x,))

    one = Fraction(1)
    sign = one if perturb == "flip_sign" else -one
    p0 = _FreeModule(q, [(v, 0, 0) for v in alg.quiver.vertices])
    gens1, img1 = [], []
    for j in range(1, n):  # L′ generator at j ↦ g_j, sitting in e_{j+1} L
        gens1.append((j, 1, 1))
        img1.append({(j + 1 - 1, arrow_path(f"g{j}")): one})
    for j in range(2, n + 1):  # L″ generator at j ↦ ∓f_{j−1}, sitting in e_{j−1} L
        gens1.append((j, 1, 1))
        img1.append({(j - 1 - 1, arrow_path(f"f{j - 1}")): sign})
    p1 = _FreeModule(q, gens1)
    gens2, img2 = [], []
    for j in range(1, n):
        vec = {}
        if j >= 2:  # f_{j−1} in the L′ summand of vertex j−1
            vec[(j - 2, arrow_path(f"f{j - 1}"))] = one
        if j + 1 <= n:  # g_j in the L″ summand of vertex j+1
            vec[(n - 1 + (j + 1) - 2, arrow_path(f"g{j}"))] = one
        if perturb == "drop_v1" and j == 1:
            vec = {}
        gens2.append((j, 2, 2))
        img2.append(vec)
    p2 = _FreeModule(q, gens2)

    def rank_of(module, images, t):
        _, cols = _map_images(q, module, images, t)
        allkeys = sorted({k for c in cols for k in c}, key=repr)
        index = {k: i for i, k in enumerate(allkeys)}
        return sparse_rank({index[k]: v for k, v in c.items()} for c in cols)

    ok = True
    for t in range(0, top):
        dim0, dim1, dim2 = len(p0.basis(t)), len(p1.basis(t)), len(p2.basis(t))
        r1, r2 = rank_of(p1, img1, t), rank_of(p2, img2, t)
        aug = len(alg.quiver.vertices) if t == 0 else 0
        ok &= r1 == dim0 - aug          # exact at L
        ok &= r1 + r2 == dim1           # exact at L′(−1) ⊕ L″(−1)
        ok &= r2 == dim2                # injective on L′(−2)
        # composite vanishes on generators of P2
        for g, vec in enumerate(img2):
            if gens2[g][1] == t:
                img = defaultdict(Fraction)
                for (h, p), c in vec.items():
                    for e, d in _act(q, img1[h], p).items():
                        img[e] += c * d
                ok &= not any(img.values())
    # dim L′^i + dim L″^i − dim L^{i+1} = dim L′^{i−1}
    for i in range(0, top - 1):
        lp = len(_FreeModule(q, [(j, 0, 0) for j in range(1, n)]).basis(i))
        lpp = len(_FreeModule(q, [(j, 0, 0) for j in range(2, n + 1)]).basis(i))
        lprev = len(_FreeModule(q, [(j, 0, 0) for j in range(1, n)]).basis(i - 1)) if i else 0
        ok &= lp + lpp - len(q.basis.get(i + 1, ())) == lprev
    return bool(ok)
