"""Objects on the A_n plumbing of T*P^1, skyscraper towers and their endomorphisms.

An object is a list of slots (F^i, G^i), one per P^1 in the chain, each side
a list of blocks.  Neighbouring slots are glued by FL(ν(G^i)) ≅ ν(F^{i+1}).
Towers are kept as associated-graded block lists: layer u is the block object
or its flip, shifted by u and twisted by u·w̃.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .corelin import Matrix, compose
from .monodromic import (
    Block,
    LocalSystemTerm,
    MonodromicTuple,
    NormalForm,
    decompose,
    fourier,
    jordan,
    restrict_W,
    specialize_nu0,
)
from . import pathalg

# ---------------------------------------------------------------- twist tables


def w_value(n: int, j: int) -> Fraction:
    """w_j = (n − 2j + 1)/2 on the lower half, mirrored on the upper half."""
    _check_index(n, j)
    if 2 * j > n + 1:
        j = n - j + 1
    return Fraction(n - 2 * j + 1, 2)


def wtilde_printed(n: int, j: int) -> Fraction:
    """w_j + 1 off the middle, 1 at the odd middle (the table as printed)."""
    _check_index(n, j)
    if n % 2 == 1 and j == (n + 1) // 2:
        return Fraction(1)
    return w_value(n, j) + 1


def wtilde_uniform(n: int, j: int) -> Fraction:
    """(n + 1)/2 = w_j + j on the lower half; agrees with the Ginzburg side."""
    _check_index(n, j)
    return Fraction(n + 1, 2)


WTILDE_RULES = {"uniform": wtilde_uniform, "printed": wtilde_printed}
DEFAULT_RULE = "uniform"


def _rule(rule) -> Callable[[int, int], Fraction]:
    if callable(rule):
        return rule
    try:
        return WTILDE_RULES[rule]
    except KeyError:
        raise ValueError(f"unknown twist rule {rule!r}") from None


@dataclass(frozen=True)
class TwistTable:
    n: int
    j: int
    w: Fraction
    wtilde: Fraction


def twist_table(n: int, j: int, rule=DEFAULT_RULE) -> TwistTable:
    return TwistTable(n, j, w_value(n, j), _rule(rule)(n, j))


def _check_index(n: int, j: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= j <= n:
        raise IndexError(f"index {j} outside 1..{n}")


def _halves(x: Fraction) -> int:
    h = 2 * x
    if h.denominator != 1:
        raise ValueError(f"{x} is not a multiple of 1/2")
    return int(h)


# ---------------------------------------------------------------- objects

@dataclass(frozen=True)
class PlumbingShape:
    n: int
    variant: str = "core"
    with_stops: bool = True

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.variant not in ("core", "relcore"):
            raise ValueError("variant is 'core' or 'relcore'")


@dataclass(frozen=True)
class SlotObject:
    terms: tuple = ()

    def shifted(self, shift: int, twist_halves: int) -> "SlotObject":
        return SlotObject(tuple(b.shifted(shift, twist_halves) for b in self.terms))

    def __add__(self, other: "SlotObject") -> "SlotObject":
        return SlotObject(self.terms + other.terms)

    def to_json(self) -> list:
        return [b.to_json() for b in self.terms]


@dataclass(frozen=True)
class PlumbingObject:
    shape: PlumbingShape
    slots: tuple  # ((left SlotObject, right SlotObject | None), ...)

    def __post_init__(self):
        if len(self.slots) != self.shape.n:
            raise ValueError("slot count must equal n")
        for i, (left, right) in enumerate(self.slots):
            last = i == self.shape.n - 1
            if right is None and not (last and self.shape.variant == "relcore"):
                raise ValueError("only the last relcore slot may be single-sided")
            if not self.shape.with_stops:
                for side in (left, right):
                    if side and any(b.kind == "Sky" for b in side.terms):
                        raise ValueError("skyscraper terms need with_stops")

    def to_json(self) -> dict:
        return {
            "n": self.shape.n, "variant": self.shape.variant, "with_stops": self.shape.with_stops,
            "slots": [{"left": l.to_json(), "right": None if r is None else r.to_json()}
                      for l, r in self.slots],
        }

    def __add__(self, other: "PlumbingObject") -> "PlumbingObject":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        slots = tuple((l1 + l2, None if r1 is None else r1 + r2)
                      for (l1, r1), (l2, r2) in zip(self.slots, other.slots))
        return PlumbingObject(self.shape, slots)

    def shifted(self, shift: int, twist_halves: int) -> "PlumbingObject":
        return PlumbingObject(self.shape, tuple(
            (l.shifted(shift, twist_halves), None if r is None else r.shifted(shift, twist_halves))
            for l, r in self.slots))


def flip(obj: PlumbingObject) -> PlumbingObject:
    """((F¹,G¹),…,(Fⁿ,Gⁿ)) ↦ ((Gⁿ,Fⁿ),…,(G¹,F¹))."""
    if obj.shape.variant != "core":
        raise ValueError("flip is defined on the core shape")
    return PlumbingObject(obj.shape, tuple((r, l) for l, r in reversed(obj.slots)))


def _slot(left: Block, right: Block, twist: Fraction) -> tuple:
    h = _halves(twist)
    return SlotObject((left.shifted(0, h),)), SlotObject((right.shifted(0, h),))


def _und_pair(j: int, primed: bool) -> tuple:
    if primed:
        return Block("P", j), Block("A", j)
    return Block("UndP", j), Block("UndA", j)


def build_block_H(n: int, j: int, primed: bool = False) -> PlumbingObject:
    """The block object attached to the j-th sphere, with its Hodge twists.

    Slot i carries twist |i − j|/2; the upper half is obtained from the lower
    half by the flip.  ``primed`` uses P_j, A_j in place of the und-blocks.
    """
    _check_index(n, j)
    shape = PlumbingShape(n)
    if n == 1:
        b = Block("P", 1) if primed else Block("TildeUndP", 1)
        return PlumbingObject(shape, (_slot(b, b, Fraction(0)),))
    if 2 * j > n + 1:
        return flip(build_block_H(n, n - j + 1, primed))
    slots = []
    if n % 2 == 1 and j == (n + 1) // 2:
        for i in range(1, n + 1):
            tw = Fraction(abs(i - j), 2)
            if i < j:
                slots.append(_slot(Block("P", i), Block("Q", i + 1), tw))
            elif i == j:
                mid = Block("P", j) if primed else Block("OveUndP", j)
                slots.append(_slot(mid, mid, tw))
            else:
                slots.append(_slot(Block("Q", n - i + 2), Block("P", n - i + 1), tw))
        return PlumbingObject(shape, tuple(slots))
    far = n - j + 1
    for i in range(1, n + 1):
        tw = Fraction(i - j, 2) if i >= j else Fraction(j - i, 2)
        if i < j:
            slots.append(_slot(Block("P", i), Block("Q", i + 1), tw))
        elif i == j:
            slots.append(_slot(*_und_pair(j, primed), tw))
        elif i < far:
            slots.append(_slot(Block("B", j), Block("A", j), tw))
        elif i == far:
            slots.append(_slot(Block("OveB", j), Block("OveP", j), tw))
        else:
            slots.append(_slot(Block("Q", n - i + 2), Block("P", n - i + 1), tw))
    return PlumbingObject(shape, tuple(slots))


def _nu(slot: SlotObject) -> NormalForm:
    return NormalForm(tuple(specialize_nu0(b) for b in slot.terms))


def junction_report(obj: PlumbingObject) -> list:
    """Per junction: (index, FL(ν(G^i)), ν(F^{i+1}))."""
    out = []
    for i in range(len(obj.slots) - 1):
        right = obj.slots[i][1]
        left = obj.slots[i + 1][0]
        out.append((i + 1, fourier(_nu(right)), _nu(left)))
    return out


def check_compat(obj: PlumbingObject) -> bool:
    return all(a == b for _, a, b in junction_report(obj))


def check_slot_restrictions(obj: PlumbingObject) -> bool:
    """Both sides of every slot restrict to the same local systems on W."""
    for left, right in obj.slots:
        if right is None:
            continue
        lw = sorted(_restrict_slot(left), key=repr)
        rw = sorted(_restrict_slot(right), key=repr)
        if [t.plain() for t in lw] != [t.plain() for t in rw]:
            return False
    return True


def _restrict_slot(slot: SlotObject) -> list:
    return [t for t in (restrict_W(b) for b in slot.terms) if t is not None]


# ---------------------------------------------------------------- towers

def tower_layers(n: int, j: int, k: int, primed: bool = True, rule=DEFAULT_RULE) -> list:
    """Layers u = 0..k: block (u even) or its flip (u odd), shifted by u, twisted by u·w̃_j."""
    _check_index(n, j)
    if k < 0:
        raise ValueError("k must be >= 0")
    wt = _rule(rule)(n, j)
    layers = []
    for u in range(k + 1):
        if u % 2:
            base = flip(build_block_H(n, j))
        else:
            base = build_block_H(n, j, primed=primed and u == 0)
        layers.append(base.shifted(u, _halves(u * wt)))
    return layers


def build_tower(n: int, j: int, k: int, primed: bool = True, rule=DEFAULT_RULE) -> PlumbingObject:
    layers = tower_layers(n, j, k, primed, rule)
    out = layers[0]
    for layer in layers[1:]:
        out = out + layer
    return out


def s_size(n: int, j: int, i: int) -> int:
    return min(j, n - j + 1, i, n - i + 1)


def e_twist(n: int, j: int, i: int, u: int, rule=DEFAULT_RULE) -> Fraction:
    """e^{j,i}_u = u·w̃_j + d_u with d_u = |j−i|/2 (u even) or |n−j+1−i|/2 (u odd)."""
    d = Fraction(abs(j - i), 2) if u % 2 == 0 else Fraction(abs(n - j + 1 - i), 2)
    return u * _rule(rule)(n, j) + d


def restrict_tower(n: int, j: int, k: int, i: int, rule=DEFAULT_RULE,
                   primed: bool = True) -> list:
    """Restriction of the k-th tower to the i-th sphere minus its two nodes.

    Layers below the top are plain L_{s(j,i)}[u](e_u); the top layer keeps
    the decoration of the block sitting in slot i of that layer.
    """
    _check_index(n, i)
    _check_index(n, j)
    s = s_size(n, j, i)
    out = [LocalSystemTerm(s, "plain", u, _halves(e_twist(n, j, i, u, rule))) for u in range(k)]
    top = tower_layers(n, j, k, primed, rule)[k]
    terms = _restrict_slot(top.slots[i - 1][0])
    decoration = terms[0].decorated if terms else "plain"
    out.append(LocalSystemTerm(s, decoration, k, _halves(e_twist(n, j, i, k, rule))))
    return out


def restrict_tower_object(obj: PlumbingObject, i: int) -> list:
    """Slotwise restriction of a tower object, ordered by layer."""
    return sorted(_restrict_slot(obj.slots[i - 1][0]), key=lambda t: t.shift)


# ---------------------------------------------------------------- endomorphisms

def endo_dim_core(n: int, i: int, j: int, k: int, s: int, rule=DEFAULT_RULE) -> int:
    """dim of degree-(k, s/2) maps between the i-th and j-th wrapped towers (0 or 1)."""
    _check_index(n, i)
    _check_index(n, j)
    if k > 0 or s > 0:
        return 0
    total = _halves(e_twist(n, i, j, -k, rule)) + s  # 2·(e + s/2)
    if total % 2:
        return 0
    return int(0 <= -total // 2 <= s_size(n, i, j) - 1)


def endo_dim_relcore(n: int, i: int, j: int, k: int, s: int) -> int:
    _check_index(n, i)
    _check_index(n, j)
    if k != 0:
        return 0
    total = s + abs(j - i)  # 2·(s/2 + |j−i|/2)
    if total % 2:
        return 0
    return int(0 <= -total // 2 <= min(i, j) - 1)


def _endo(n, variant, rule):
    if variant == "core":
        return lambda i, j, k, s: endo_dim_core(n, i, j, k, s, rule)
    if variant == "relcore":
        return lambda i, j, k, s: endo_dim_relcore(n, i, j, k, s)
    raise ValueError("variant is 'core' or 'relcore'")


def endo_table_resolved(n: int, variant: str, a_cutoff: int, b_cutoff: int,
                        rule=DEFAULT_RULE) -> dict:
    """{(i, j): {(a, b): dim}} over the window |a| ≤ a_cutoff, |b| ≤ b_cutoff."""
    if a_cutoff < 0 or b_cutoff < 0:
        raise ValueError("cutoffs must be >= 0")
    f = _endo(n, variant, rule)
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cell = {}
            for a in range(-a_cutoff, a_cutoff + 1):
                for b in range(-b_cutoff, b_cutoff + 1):
                    d = f(i, j, a - b, -b)
                    if d:
                        cell[(a, b)] = d
            out[(i, j)] = cell
    return out


def endo_table(n: int, variant: str = "core", a_cutoff: int = 12, b_cutoff: int = 12,
               rule=DEFAULT_RULE) -> dict:
    """B^{a,b} = Σ_{i,j} endo_dim at k = a − b, s = −b."""
    table = {}
    for cell in endo_table_resolved(n, variant, a_cutoff, b_cutoff, rule).values():
        for key, d in cell.items():
            table[key] = table.get(key, 0) + d
    return dict(sorted(table.items()))


def ginzburg_table_ab(n: int, b_cutoff: int) -> dict:
    """Ginzburg cohomology re-indexed as (a, b) with b = −Adams."""
    g = pathalg.dg_cohomology_table(pathalg.construct_Ginzburg(n), b_cutoff)
    return dict(sorted(((a, -adams), d) for (a, adams), d in g.items()))


def core_crosscheck(n: int, cutoff: int = 12, rule=DEFAULT_RULE) -> tuple:
    """(match, formula table, Ginzburg table) for Adams weight ≤ cutoff."""
    formula = endo_table(n, "core", cutoff, cutoff, rule)
    reference = ginzburg_table_ab(n, cutoff)
    return formula == reference, formula, reference


def relcore_path_counts(n: int) -> dict:
    """{(i, j): total dim of paths from i to j in L_Γ}."""
    counts = {(i, j): 0 for i in range(1, n + 1) for j in range(1, n + 1)}
    if n == 1:
        counts[(1, 1)] = 1
        return counts
    q = pathalg.quotient(pathalg.construct_LGamma(n), 2 * n)
    for paths in q.basis.values():
        for p in paths:
            counts[(p[0], q.target_of(p))] += 1
    return counts


def saturation_sum_check(n: int, variant: str = "core", cutoff: int = 6,
                         rule=DEFAULT_RULE, perturb_halves: int = 0) -> bool:
    """Row sums Σ_b B^{a,b} against the reference algebra's degree-a dims, a ≤ cutoff.

    Core rows are compared with Ginzburg cohomology (which needs Adams weight
    up to 2·cutoff); relcore rows with dim L_Γ^a and with the (i, j) path
    counts.  ``perturb_halves`` shifts w̃ for negative controls.
    """
    base = _rule(rule)

    def shifted(m, j):
        return base(m, j) + Fraction(perturb_halves, 2)

    if variant == "core":
        table = endo_table(n, "core", cutoff, 2 * cutoff, shifted)
        reference = ginzburg_table_ab(n, 2 * cutoff)
        rows = {a: 0 for a in range(cutoff + 1)}
        ref_rows = dict(rows)
        for (a, _), d in table.items():
            if 0 <= a <= cutoff:
                rows[a] += d
        for (a, _), d in reference.items():
            if 0 <= a <= cutoff:
                ref_rows[a] += d
        return rows == ref_rows and all(a >= 0 for a, _ in table)
    if variant == "relcore":
        resolved = endo_table_resolved(n, "relcore", cutoff, cutoff)
        counts = relcore_path_counts(n)
        if any(sum(cell.values()) != counts[ij] for ij, cell in resolved.items()):
            return False
        q = pathalg.quotient(pathalg.construct_LGamma(n), cutoff)
        rows = {a: 0 for a in range(cutoff + 1)}
        for cell in resolved.values():
            for (a, _), d in cell.items():
                if 0 <= a <= cutoff:
                    rows[a] += d
        return all(rows[a] == len(q.basis.get(a, ())) for a in rows)
    raise ValueError("variant is 'core' or 'relcore'")


# ---------------------------------------------------------------- y^N chain

@dataclass(frozen=True)
class ChainJunction:
    position: int
    side: str  # "left" for (can, var) = (y, id), "right" for (id, y)
    tuple: MonodromicTuple


@dataclass(frozen=True)
class SkyscraperChain:
    N: int
    y: Matrix
    junctions: tuple

    def to_json(self) -> dict:
        return {"N": self.N, "y": self.y.to_json(),
                "junctions": [{"position": j.position, "side": j.side,
                               "tuple": j.tuple.to_json()} for j in self.junctions]}


def unipotent_skyscraper_chain(N: int, window: int, center: int) -> SkyscraperChain:
    """Chain of k[y]/y^N modules; junctions left of center use (y, id), the rest (id, y)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if window < 1 or not 0 <= center <= window:
        raise ValueError("need window >= 1 and 0 <= center <= window")
    y = jordan(N)  # multiplication by y in the basis 1, y, …, y^{N−1}
    one = Matrix.identity(N)
    junctions = []
    for pos in range(window):
        if pos < center:
            t = MonodromicTuple(N, N, y, one)
            side = "left"
        else:
            t = MonodromicTuple(N, N, one, y)
            side = "right"
        if compose(t.var, t.can) != y:
            raise ArithmeticError("var·can differs from y")
        junctions.append(ChainJunction(pos, side, t))
    return SkyscraperChain(N, y, tuple(junctions))


def chain_decompositions(chain: SkyscraperChain) -> list:
    return [decompose(j.tuple) for j in chain.junctions]
