"""Unipotent monodromic perverse sheaves on the complex line as can/var tuples.

A tuple (ψ, φ, can, var) has can: ψ → φ and var: φ → ψ with var·can nilpotent.
Indecomposables are the string modules of the two-vertex cyclic quiver, which
we name A_s, B_s, P_s, Q_s and Sky after the sheaves they model.  Twists are
counted in halves of a Tate twist; shifts are perverse-normalized (shift 0 is
the perverse object).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

from .corelin import (
    IntegerEchelon,
    Matrix,
    block_diag,
    compose,
    power,
    rational_str,
    sparse_rank,
)

PLAIN_KINDS = ("A", "B", "P", "Q", "Sky")
DECORATED_KINDS = ("OveA", "UndA", "OveUndA", "OveB", "OveP", "UndP", "OveUndP", "TildeUndP")
KIND_ORDER = {k: i for i, k in enumerate(PLAIN_KINDS + DECORATED_KINDS)}

# plain version of every kind, used by the nearby-cycle specialization
_PLAIN_OF = {
    "A": "A", "B": "B", "P": "P", "Q": "Q", "Sky": "Sky",
    "OveA": "A", "UndA": "A", "OveUndA": "A",
    "OveB": "B",
    "OveP": "P", "UndP": "P", "OveUndP": "P",
}

_DECORATION_OF = {
    "OveA": "ove", "OveB": "ove", "OveP": "ove",
    "UndA": "und", "UndP": "und",
    "OveUndA": "oveund", "OveUndP": "oveund",
    "TildeUndP": "tildeund",
}


class InvariantError(ValueError):
    """A tuple or block violates its structural invariants."""


class UnsupportedSpecialization(ValueError):
    pass


# ---------------------------------------------------------------- tuples

@dataclass(frozen=True)
class MonodromicTuple:
    psi: int
    phi: int
    can: Matrix
    var: Matrix

    def __post_init__(self):
        if (self.can.rows, self.can.cols) != (self.phi, self.psi):
            raise InvariantError(f"can must be {self.phi}x{self.psi}")
        if (self.var.rows, self.var.cols) != (self.psi, self.phi):
            raise InvariantError(f"var must be {self.psi}x{self.phi}")

    @property
    def monodromy_log(self) -> Matrix:
        """N = var·can on ψ."""
        return compose(self.var, self.can)

    def check_nilpotent(self) -> None:
        d = max(self.psi, self.phi)
        if not power(self.monodromy_log, d + 1).is_zero():
            raise InvariantError("var·can is not nilpotent")
        if not power(compose(self.can, self.var), d + 1).is_zero():
            raise InvariantError("can·var is not nilpotent")

    def to_json(self) -> dict:
        return {"psi": self.psi, "phi": self.phi,
                "can": self.can.to_json(), "var": self.var.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MonodromicTuple":
        psi, phi = int(data["psi"]), int(data["phi"])
        can = Matrix.from_rows(data.get("can") or [[0] * psi for _ in range(phi)], psi)
        var = Matrix.from_rows(data.get("var") or [[0] * phi for _ in range(psi)], phi)
        return cls(psi, phi, can, var)


def zero_tuple() -> MonodromicTuple:
    return MonodromicTuple(0, 0, Matrix.zeros(0, 0), Matrix.zeros(0, 0))


def direct_sum(tuples: Iterable[MonodromicTuple]) -> MonodromicTuple:
    tuples = list(tuples)
    if not tuples:
        return zero_tuple()
    return MonodromicTuple(
        sum(t.psi for t in tuples), sum(t.phi for t in tuples),
        block_diag(t.can for t in tuples), block_diag(t.var for t in tuples),
    )


def base_change(t: MonodromicTuple, f: Matrix, g: Matrix,
                f_inv: Matrix, g_inv: Matrix) -> MonodromicTuple:
    """Isomorphic tuple (g·can·f⁻¹, f·var·g⁻¹) for automorphisms f of ψ, g of φ."""
    return MonodromicTuple(t.psi, t.phi,
                           compose(compose(g, t.can), f_inv),
                           compose(compose(f, t.var), g_inv))


def jordan(s: int) -> Matrix:
    """Nilpotent Jordan block sending e_i to e_{i+1}."""
    return Matrix.from_rows([[int(i == j + 1) for j in range(s)] for i in range(s)], s)


def _drop_last(s: int) -> Matrix:
    return Matrix.from_rows([[int(i == j) for j in range(s)] for i in range(s - 1)], s)


def _prepend_zero(s: int) -> Matrix:
    return Matrix.from_rows([[int(i == j + 1) for j in range(s - 1)] for i in range(s)], s - 1)


def check_kind_size(kind: str, size: int) -> None:
    if kind not in KIND_ORDER:
        raise InvariantError(f"unknown block kind {kind!r}")
    if size < 1:
        raise InvariantError("block size must be >= 1")
    if kind in ("Q", "OveUndP") and size < 2:
        raise InvariantError(f"{kind} requires size >= 2")
    if kind in ("Sky", "TildeUndP") and size != 1:
        raise InvariantError(f"{kind} has size fixed to 1")


def block_tuple(kind: str, size: int = 1) -> MonodromicTuple:
    """Catalog can/var presentation of a plain block in perverse normalization."""
    check_kind_size(kind, size)
    s = size
    if kind == "A":
        return MonodromicTuple(s, s, Matrix.identity(s), jordan(s))
    if kind == "B":
        return MonodromicTuple(s, s, jordan(s), Matrix.identity(s))
    if kind == "P":
        return MonodromicTuple(s, s - 1, _drop_last(s), _prepend_zero(s))
    if kind == "Q":
        return MonodromicTuple(s - 1, s, _prepend_zero(s), _drop_last(s))
    if kind == "Sky":
        return MonodromicTuple(0, 1, Matrix.zeros(1, 0), Matrix.zeros(0, 1))
    raise InvariantError(f"decorated block {kind} has no tuple presentation")


# ---------------------------------------------------------------- blocks

@dataclass(frozen=True)
class Block:
    kind: str
    size: int = 1
    shift: int = 0
    twist_halves: int = 0

    def __post_init__(self):
        check_kind_size(self.kind, self.size)

    @property
    def decorated(self) -> bool:
        return self.kind in DECORATED_KINDS

    def sort_key(self):
        return (KIND_ORDER[self.kind], self.size, self.shift, self.twist_halves)

    def shifted(self, shift: int = 0, twist_halves: int = 0) -> "Block":
        return replace(self, shift=self.shift + shift,
                       twist_halves=self.twist_halves + twist_halves)

    def label(self) -> str:
        base = "Sky" if self.kind == "Sky" else f"{self.kind}_{self.size}"
        out = base + (f"[{self.shift}]" if self.shift else "")
        if self.twist_halves:
            t = Fraction(self.twist_halves, 2)
            out += f"({rational_str(t)})"
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "size": self.size, "shift": self.shift,
                "twist_halves": self.twist_halves}

    @classmethod
    def from_json(cls, d: dict) -> "Block":
        return cls(d["kind"], int(d.get("size", 1)), int(d.get("shift", 0)),
                   int(d.get("twist_halves", 0)))


@dataclass(frozen=True)
class NormalForm:
    blocks: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=Block.sort_key)))

    @classmethod
    def of(cls, *blocks: Block) -> "NormalForm":
        return cls(tuple(blocks))

    def __add__(self, other: "NormalForm") -> "NormalForm":
        return NormalForm(self.blocks + other.blocks)

    def untwisted(self) -> "NormalForm":
        return NormalForm(tuple(replace(b, twist_halves=0) for b in self.blocks))

    def to_json(self) -> dict:
        return {"blocks": [b.to_json() for b in self.blocks]}

    @classmethod
    def from_json(cls, d: dict) -> "NormalForm":
        return cls(tuple(Block.from_json(b) for b in d["blocks"]))

    def label(self) -> str:
        return "{" + ", ".join(b.label() for b in self.blocks) + "}"


def realize(nf: NormalForm) -> MonodromicTuple:
    """Direct sum of catalog tuples (shifts and twists are forgotten)."""
    return direct_sum(block_tuple(b.kind, b.size) for b in nf.blocks)


# ---------------------------------------------------------------- Fourier

_FL_FORWARD = {"A": "B", "P": "Q", "Sky": "P"}


def fourier_block(b: Block) -> Block:
    if b.decorated:
        raise InvariantError(f"no Fourier lookup for decorated block {b.kind}")
    if b.kind == "Sky":
        return Block("P", 1, b.shift, b.twist_halves + 1)
    if b.kind == "P" and b.size == 1:
        return Block("Sky", 1, b.shift, b.twist_halves - 1)
    if b.kind in _FL_FORWARD:
        return Block(_FL_FORWARD[b.kind], b.size, b.shift, b.twist_halves + 1)
    back = {"B": "A", "Q": "P"}[b.kind]
    return Block(back, b.size, b.shift, b.twist_halves - 1)


def fourier(nf: NormalForm) -> NormalForm:
    return NormalForm(tuple(fourier_block(b) for b in nf.blocks))


def fourier_tuple(t: MonodromicTuple, tw: int = 0) -> tuple[MonodromicTuple, int]:
    """(ψ, φ, can, var) ↦ (φ, ψ, −var, can), with the twist count raised by one half."""
    return MonodromicTuple(t.phi, t.psi, -t.var, t.can), tw + 1


@dataclass(frozen=True)
class MonodromicPart:
    alpha: Fraction
    dim: int
    N: Matrix
    tate: int = 0


@dataclass(frozen=True)
class GeneralMonodromicTuple:
    """Graded pieces C_α (α in (−1, 0]) with nilpotent N, plus C_{−1} and c, v.

    c maps the α = 0 piece to C_{−1}; v maps back.  Tate markers are kept per
    space so that iterating the transform shows where twists accumulate.
    """

    parts: tuple
    c: Matrix
    v: Matrix
    minus1_tate: int = 0

    def __post_init__(self):
        alphas = [p.alpha for p in self.parts]
        if len(set(alphas)) != len(alphas):
            raise InvariantError("repeated eigenvalue label")
        for p in self.parts:
            if not (-1 < p.alpha <= 0):
                raise InvariantError("alpha must lie in (-1, 0]")
            if (p.N.rows, p.N.cols) != (p.dim, p.dim):
                raise InvariantError("N has wrong shape")
            if not power(p.N, p.dim + 1).is_zero():
                raise InvariantError("N is not nilpotent")
        zero = self.zero_part()
        d0 = zero.dim if zero else 0
        if self.c.cols != d0 or self.v.rows != d0 or self.c.rows != self.v.cols:
            raise InvariantError("c, v shapes do not match the alpha=0 piece")
        if zero is not None:
            vc = compose(self.v, self.c)
            # the transform flips the sign of v·c relative to N, so both are allowed
            if vc != zero.N and vc != -zero.N:
                raise InvariantError("v·c differs from N on the alpha=0 piece")

    @property
    def minus1_dim(self) -> int:
        return self.c.rows

    def zero_part(self) -> MonodromicPart | None:
        return next((p for p in self.parts if p.alpha == 0), None)

    @classmethod
    def from_unipotent(cls, t: MonodromicTuple) -> "GeneralMonodromicTuple":
        part = MonodromicPart(Fraction(0), t.psi, t.monodromy_log)
        return cls((part,), t.can, t.var)

    def unipotent(self) -> MonodromicTuple:
        zero = self.zero_part()
        d0 = zero.dim if zero else 0
        return MonodromicTuple(d0, self.minus1_dim, self.c, self.v)


def fourier_general(t: GeneralMonodromicTuple) -> GeneralMonodromicTuple:
    zero = t.zero_part()
    new_zero = MonodromicPart(Fraction(0), t.minus1_dim, compose(t.c, t.v), t.minus1_tate)
    others = tuple(
        # inverting T_s sends the eigenvalue label α to −1 − α
        MonodromicPart(-1 - p.alpha, p.dim, p.N, p.tate)
        for p in t.parts if p.alpha != 0
    )
    parts = ((new_zero,) if new_zero.dim else ()) + others
    parts = tuple(sorted(parts, key=lambda p: p.alpha))
    return GeneralMonodromicTuple(
        parts,
        -t.v,
        t.c,
        minus1_tate=(zero.tate if zero else 0) + 1,
    )


# ---------------------------------------------------------------- decomposition

def _integer_columns(m: Matrix) -> list:
    """Sparse columns of m scaled to integers (ranks of words are unaffected)."""
    den = 1
    for v in m.entries:
        den = den * v.denominator // gcd(den, v.denominator)
    cols = [dict() for _ in range(m.cols)]
    for i in range(m.rows):
        for j in range(m.cols):
            v = m[i, j]
            if v:
                cols[j][i] = int(v * den)
    return cols


def _apply(cols: list, vec: dict) -> dict:
    out = {}
    for j, x in vec.items():
        for i, a in cols[j].items():
            out[i] = out.get(i, 0) + a * x
    return out


def _word_ranks(t: MonodromicTuple, start: str, max_len: int) -> list:
    """Ranks of alternating can/var words of lengths 0..max_len from a start space.

    The image of each word is kept as an integer echelon basis and pushed
    through the next map, so no matrix products are formed.
    """
    dim = t.psi if start == "psi" else t.phi
    maps = [_integer_columns(m) for m in ((t.can, t.var) if start == "psi" else (t.var, t.can))]
    ranks = [dim]
    image = [{i: 1} for i in range(dim)]
    for length in range(1, max_len + 1):
        space = IntegerEchelon()
        for vec in image:
            space.add(_apply(maps[(length - 1) % 2], vec))
        image = space.rows()
        ranks.append(len(image))
        if not image:
            ranks.extend([0] * (max_len - length))
            break
    return ranks


def rank_invariants(t: MonodromicTuple, max_len: int | None = None) -> dict:
    if max_len is None:
        max_len = 2 * max(t.psi, t.phi) + 1
    return {start: _word_ranks(t, start, max_len) for start in ("psi", "phi")}


@lru_cache(maxsize=None)
def _catalog_ranks(kind: str, size: int, max_len: int) -> dict:
    return rank_invariants(block_tuple(kind, size), max_len)


def _string_block(start: str, length: int) -> Block:
    """Indecomposable whose basis is a single can/var string of the given length."""
    half, odd = divmod(length, 2)
    if start == "psi":
        return Block("P", half + 1) if odd else Block("A", half)
    if length == 1:
        return Block("Sky")
    return Block("Q", half + 1) if odd else Block("B", half)


def decompose(t: MonodromicTuple) -> NormalForm:
    """Normal form of a tuple, read off from ranks of can/var words.

    Longest strings are peeled first: after subtracting the catalog rank
    vectors of everything already found, the residual rank of the longest
    word from a start space counts the strings of exactly that length.
    """
    max_len = 2 * max(t.psi, t.phi) + 1
    residual = rank_invariants(t, max_len)
    if residual["psi"][-1] or residual["phi"][-1]:
        raise InvariantError("var·can is not nilpotent")
    found = []
    for length in range(max_len + 1, 0, -1):
        for start in ("psi", "phi"):
            m = residual[start][length - 1]
            if m < 0:
                raise InvariantError("inconsistent rank invariants")
            if m == 0:
                continue
            blk = _string_block(start, length)
            cat = _catalog_ranks(blk.kind, blk.size, max_len)
            for s in residual:
                residual[s] = [r - m * c for r, c in zip(residual[s], cat[s])]
            found.extend([blk] * m)
    if any(any(r for r in v) for v in residual.values()):
        raise InvariantError("rank invariants not exhausted by catalog blocks")
    return NormalForm(tuple(found))


# ---------------------------------------------------------------- hom / ext

def euler_form(m: MonodromicTuple, n: MonodromicTuple) -> int:
    return m.psi * n.psi + m.phi * n.phi - m.psi * n.phi - m.phi * n.psi


def homext(m: MonodromicTuple, n: MonodromicTuple) -> tuple[int, int]:
    """(dim Hom, dim Ext¹) between two tuples.

    Hom is the solution space of g·can_m = can_n·f, f·var_m = var_n·g;
    Ext¹ follows from the Euler form of the hereditary two-vertex quiver.
    """
    def fi(a, b):  # f[a][b]: ψ_m[b] → ψ_n[a]
        return a * m.psi + b

    g_off = n.psi * m.psi

    def gi(a, b):  # g[a][b]: φ_m[b] → φ_n[a]
        return g_off + a * m.phi + b

    rows = []
    for a in range(n.phi):
        for b in range(m.psi):
            row = {}
            for c in range(m.phi):  # (g·can_m)[a,b]
                if m.can[c, b]:
                    row[gi(a, c)] = row.get(gi(a, c), 0) + m.can[c, b]
            for c in range(n.psi):  # (can_n·f)[a,b]
                if n.can[a, c]:
                    row[fi(c, b)] = row.get(fi(c, b), 0) - n.can[a, c]
            rows.append(row)
    for a in range(n.psi):
        for b in range(m.phi):
            row = {}
            for c in range(m.psi):  # (f·var_m)[a,b]
                if m.var[c, b]:
                    row[fi(a, c)] = row.get(fi(a, c), 0) + m.var[c, b]
            for c in range(n.phi):  # (var_n·g)[a,b]
                if n.var[a, c]:
                    row[gi(c, b)] = row.get(gi(c, b), 0) - n.var[a, c]
            rows.append(row)
    unknowns = n.psi * m.psi + n.phi * m.phi
    hom0 = unknowns - sparse_rank(rows)
    return hom0, hom0 - euler_form(m, n)


def derived_hom_dim(x: NormalForm, y: NormalForm, k: int, s_halves: int) -> int:
    """dim Hom(x, y[k](s)) summed blockwise; only shift offsets 0 and 1 contribute."""
    total = 0
    for bx in x.blocks:
        for by in y.blocks:
            if bx.decorated or by.decorated:
                raise InvariantError("derived homs need plain blocks")
            if by.twist_halves - bx.twist_halves != s_halves:
                continue
            d = by.shift + k - bx.shift
            if d not in (0, 1):
                continue
            h0, e1 = homext(block_tuple(bx.kind, bx.size), block_tuple(by.kind, by.size))
            total += h0 if d == 0 else e1
    return total


# ---------------------------------------------------------------- lookups

@dataclass(frozen=True)
class LocalSystemTerm:
    size: int
    decorated: str = "plain"
    shift: int = 0
    twist_halves: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise InvariantError("local system size must be >= 1")
        if self.decorated not in ("plain", "ove", "und", "oveund", "tildeund"):
            raise InvariantError(f"unknown decoration {self.decorated!r}")

    def plain(self) -> "LocalSystemTerm":
        return replace(self, decorated="plain")


def restrict_W(b: Block) -> LocalSystemTerm | None:
    """Restriction to the punctured line; None for the skyscraper."""
    if b.kind == "Sky":
        return None
    size = b.size - 1 if b.kind == "Q" else b.size
    return LocalSystemTerm(size, _DECORATION_OF.get(b.kind, "plain"), b.shift, b.twist_halves)


def specialize_nu0(b: Block) -> Block:
    if b.kind == "TildeUndP":
        raise UnsupportedSpecialization("no nearby-cycle lookup for TildeUndP")
    return replace(b, kind=_PLAIN_OF[b.kind])


_STALK0 = {"A": {}, "B": {0: 1, 1: 1}, "P": {0: 1}, "Q": {1: 1}, "Sky": {0: 1}}


def stalk0_dims(b: Block) -> dict:
    """Stalk cohomology at the origin, degree → dim.

    The table is that of the underlying sheaf; a block shift of σ moves
    degree d to d − σ.
    """
    if b.decorated:
        raise InvariantError("stalk lookup is only tabulated for plain blocks")
    return {d - b.shift: v for d, v in _STALK0[b.kind].items()}


def nilpotent_order(t: MonodromicTuple) -> int:
    n = t.monodromy_log
    e = 0
    current = Matrix.identity(t.psi)
    while not current.is_zero():
        current = compose(current, n)
        e += 1
        if e > t.psi + 1:
            raise InvariantError("var·can is not nilpotent")
    return e


def check_Ns(t: MonodromicTuple, s: int) -> bool:
    vc = power(t.monodromy_log, s)
    cv = power(compose(t.can, t.var), max(s - 1, 0))
    return vc.is_zero() and cv.is_zero()


# ---------------------------------------------------------------- sampling

def block_dim(b: Block) -> int:
    t = block_tuple(b.kind, b.size)
    return t.psi + t.phi


def random_normal_form(rng, max_dim: int, max_size: int = 6) -> NormalForm:
    """Random multiset of plain blocks with total ψ+φ dimension ≤ max_dim."""
    blocks, budget = [], max_dim
    while budget > 0 and rng.random() > 0.15:
        kind = rng.choice(PLAIN_KINDS)
        size = 1 if kind == "Sky" else rng.randint(2 if kind == "Q" else 1, max_size)
        b = Block(kind, size)
        if block_dim(b) > budget:
            continue
        blocks.append(b)
        budget -= block_dim(b)
    return NormalForm(tuple(blocks))


def random_tuple(rng, nf: NormalForm, ops_per_dim: int = 3) -> MonodromicTuple:
    """A generic-looking presentation of nf: the catalog sum under random moves.

    Each move is an elementary automorphism 1 + c·E_ij of ψ or φ, applied as
    can ↦ g·can·f⁻¹, var ↦ f·var·g⁻¹ without forming matrices.
    """
    t = realize(nf)
    can = [[int(x) for x in r] for r in t.can.to_rows()]
    var = [[int(x) for x in r] for r in t.var.to_rows()]
    for _ in range(ops_per_dim * (t.psi + t.phi)):
        on_psi = rng.random() < t.psi / max(t.psi + t.phi, 1)
        size = t.psi if on_psi else t.phi
        if size < 2:
            continue
        i, j = rng.sample(range(size), 2)
        c = rng.choice((-2, -1, 1, 2))
        # left factor adds c·row_j to row_i; the inverse on the right subtracts c·col_i from col_j
        left, right = (var, can) if on_psi else (can, var)
        left[i] = [a + c * b for a, b in zip(left[i], left[j])]
        for row in right:
            row[j] -= c * row[i]
    return MonodromicTuple(t.psi, t.phi, Matrix.from_rows(can, t.psi),
                           Matrix.from_rows(var, t.phi))
