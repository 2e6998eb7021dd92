"""Finite-model verification of G-sequential continuity and the set theorems.

On Z_n every set is finite and so is every function table, so closures,
open sets, interiors and continuity are all decidable. :func:`run_suite`
draws random sets, families and functions (seeded per check) and tests each
theorem statement against them; a violation is reported with a witness that
:func:`replay` can re-check.

Continuity is decided on the window graph. Take the nodes labelled with a
fixed kernel value u that lie on a cycle through such nodes; f is continuous
at u iff, within each strongly connected class of those nodes, the windows
mapped through f all carry one label whose value is f(u). A failing class
yields a periodic witness whose period is at most the number of nodes
(|X|^w), so the check is complete, not merely bounded.
:func:`is_continuous_bounded` keeps the plain enumeration of periodic
sequences as an independent cross-check.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, Optional

import networkx as nx

from .methods import (
    Kernel,
    Lim,
    Method,
    UnsupportedMethod,
    check_compatible,
    evaluate,
    format_method,
    is_regular,
    parse_method,
)
from .sequences import (
    RATIONALS,
    Element,
    EvPerSeq,
    GroupModel,
    format_sequence,
    parse_sequence,
)
from .topology import DEFAULT_INTERIOR_CAP, PointSet, closure, kernel_components, window_graph

VERIFIED = "Verified"
COUNTEREXAMPLE = "CounterexampleFound"
SKIPPED = "Skipped"

HOLDS = "holds"
FALSIFIABLE = "falsifiable"
OBSERVE = "observe"

DEFAULT_BUDGET = 250_000
FUNCTION_ENUMERATION_CAP = 4096
RATIONAL_GRID = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))


class BudgetExceeded(ValueError):
    """The requested enumeration is larger than the allowed budget."""


# --- functions --------------------------------------------------------------

@dataclass(frozen=True)
class TabulatedFunction:
    """A total function Z_n -> Z_n given by its value table."""

    model: GroupModel
    table: tuple

    def __post_init__(self) -> None:
        if not self.model.is_finite:
            raise UnsupportedMethod("tabulated functions need a finite universe")
        if len(self.table) != self.model.modulus:
            raise ValueError(f"table needs {self.model.modulus} entries, got {len(self.table)}")
        object.__setattr__(self, "table", tuple(self.model.coerce(v) for v in self.table))

    @classmethod
    def from_callable(cls, model: GroupModel, func: Callable) -> TabulatedFunction:
        return cls(model, tuple(func(a) for a in model.elements()))

    @classmethod
    def identity(cls, model: GroupModel) -> TabulatedFunction:
        return cls(model, model.elements())

    @classmethod
    def constant(cls, model: GroupModel, value) -> TabulatedFunction:
        return cls(model, (value,) * model.modulus)

    @classmethod
    def multiplication(cls, model: GroupModel, m: int) -> TabulatedFunction:
        return cls.from_callable(model, lambda a: m * a)

    @classmethod
    def translation(cls, model: GroupModel, a) -> TabulatedFunction:
        return cls.from_callable(model, lambda x: model.add(a, x))

    @classmethod
    def negation(cls, model: GroupModel) -> TabulatedFunction:
        return cls.from_callable(model, model.neg)

    def __call__(self, a) -> Element:
        return self.table[a]

    @cached_property
    def is_additive(self) -> bool:
        add = self.model.add
        elems = self.model.elements()
        return all(self(add(a, b)) == add(self(a), self(b)) for a in elems for b in elems)

    @property
    def is_bijective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def after(self, inner: TabulatedFunction) -> TabulatedFunction:
        """``self o inner``."""
        return TabulatedFunction(self.model, tuple(self.table[v] for v in inner.table))

    def __add__(self, other: TabulatedFunction) -> TabulatedFunction:
        add = self.model.add
        return TabulatedFunction(self.model, tuple(add(a, b) for a, b in zip(self.table, other.table)))

    def __neg__(self) -> TabulatedFunction:
        return TabulatedFunction(self.model, tuple(map(self.model.neg, self.table)))

    def image(self, A: Iterable) -> frozenset:
        return frozenset(self.table[a] for a in A)

    def preimage(self, A: Iterable) -> frozenset:
        target = set(A)
        return frozenset(a for a, v in enumerate(self.table) if v in target)

    def format(self) -> list[str]:
        return [self.model.format(v) for v in self.table]


def all_functions(model: GroupModel) -> Iterator[TabulatedFunction]:
    for table in product(model.elements(), repeat=model.modulus):
        yield TabulatedFunction(model, table)


# --- continuity -------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with an optional refuting witness."""

    holds: bool
    witness: object = None
    point: object = None
    verified_up_to_period: Optional[int] = None

    def __bool__(self) -> bool:
        return self.holds


def _alphabet(f: TabulatedFunction, within) -> PointSet:
    if within is None:
        return PointSet.universe(f.model)
    return within if isinstance(within, PointSet) else PointSet.of(f.model, within)


def is_continuous(G: Method, f: TabulatedFunction, *, at=None, within=None) -> Verdict:
    """Decide whether f is G-sequentially continuous (at ``at``, if given).

    ``within`` restricts the sequences to take values in that subset.
    """
    alphabet = _alphabet(f, within)
    check_compatible(G, f.model)
    if not alphabet.elements:
        return Verdict(True, verified_up_to_period=0)
    graph = window_graph(G, alphabet)
    bound = len(graph.nodes)
    for lab, comps in graph.recurrent_components().items():
        u = graph.value(lab)
        if at is not None and u != f.model.coerce(at):
            continue
        target = f(u)
        for comp in comps:
            nodes = sorted(comp)
            mapped = {node: graph.window_label(tuple(f(v) for v in node)) for node in nodes}
            bad = [node for node in nodes if graph.value(mapped[node]) != target]
            if bad:
                walk = graph.cycle_through(bad[0], within=comp)
            else:
                first = mapped[nodes[0]]
                other = [node for node in nodes if mapped[node] != first]
                if not other:
                    continue
                walk = graph.cycle_through(nodes[0], via=other[0], within=comp)
            return Verdict(False, graph.walk_to_sequence(walk), u, bound)
    return Verdict(True, verified_up_to_period=bound)


def lyndon_words(k: int, max_length: int) -> Iterator[tuple]:
    """Lyndon words over ``range(k)`` of length <= ``max_length`` (Duval's order)."""
    if k < 1 or max_length < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def is_continuous_bounded(G: Method, f: TabulatedFunction, period_bound: Optional[int] = None,
                          *, at=None, within=None, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Continuity by enumerating every periodic sequence up to ``period_bound``.

    Every eventually periodic sequence has the same G-value as the purely
    periodic sequence on its cycle, and rotating a cycle only shifts the
    sequence, so one Lyndon word per primitive cycle suffices. A refutation
    is always sound; a pass only covers periods up to the bound. The default
    bound is ``2 * |alphabet|^w``.
    """
    alphabet = _alphabet(f, within)
    check_compatible(G, f.model)
    width = max(len(c) for c in kernel_components(G))
    k = len(alphabet)
    if period_bound is None:
        period_bound = 2 * k ** width
    if period_bound < 1:
        raise ValueError("period_bound must be >= 1")
    estimate = sum(k ** L // L for L in range(1, period_bound + 1))
    if estimate > budget:
        raise BudgetExceeded(f"about {estimate} cycles up to period {period_bound} "
                             f"exceed the budget of {budget}")
    letters = alphabet.elements
    at = None if at is None else f.model.coerce(at)
    for word in lyndon_words(k, period_bound):
        x = EvPerSeq.periodic(f.model, [letters[i] for i in word])
        u = evaluate(G, x)
        if u is None or (at is not None and u != at):
            continue
        if evaluate(G, x.map(f)) != f(u):
            return Verdict(False, x, u, period_bound)
    return Verdict(True, verified_up_to_period=period_bound)


def is_open_map(G: Method, f: TabulatedFunction, cap: int = DEFAULT_INTERIOR_CAP) -> Verdict:
    space = Space(f.model, G, cap)
    for U in space.open_sets:
        if not space.is_open(f.image(U)):
            return Verdict(False, PointSet.of(f.model, U))
    return Verdict(True)


def is_closed_map(G: Method, f: TabulatedFunction, cap: int = DEFAULT_INTERIOR_CAP) -> Verdict:
    space = Space(f.model, G, cap)
    for K in space.closed_sets:
        if not space.is_closed(f.image(K)):
            return Verdict(False, PointSet.of(f.model, K))
    return Verdict(True)


def is_subsequential(G: Method, model: GroupModel) -> bool:
    """Whether every G-convergent sequence over Z_n takes its G-value infinitely often.

    In a discrete group a subsequence converges to l iff l recurs, so G fails
    exactly when some cycle of windows with value l avoids windows starting
    with l.
    """
    graph = window_graph(G, PointSet.universe(model))
    level = graph.level_graph()
    for lab, comps in graph.recurrent_components().items():
        u = graph.value(lab)
        for comp in comps:
            keep = [node for node in comp if node[0] != u]
            if keep and not nx.is_directed_acyclic_graph(level.subgraph(keep)):
                return False
    return True


# --- finite model context -----------------------------------------------------

class Space:
    """Cached closures, open sets and function pools for one (model, method).

    Sets are frozensets of elements. On the rational line only subsets of a
    small fixed grid are drawn.
    """

    def __init__(self, model: GroupModel, G: Method, cap: int = DEFAULT_INTERIOR_CAP):
        check_compatible(G, model)
        self.model = model
        self.G = G
        self.cap = cap
        self.regular = is_regular(G, model)
        self.finite = model.is_finite
        if self.finite and model.modulus > cap:
            raise ValueError(f"universe Z_{model.modulus} exceeds the enumeration cap {cap}")
        self.X = frozenset(model.elements()) if self.finite else None
        self._closures: dict[frozenset, frozenset] = {}
        self._interiors: dict[frozenset, frozenset] = {}
        self._continuity: dict[tuple, Verdict] = {}

    # sets
    def closure(self, A: frozenset) -> frozenset:
        A = frozenset(A)
        if A not in self._closures:
            self._closures[A] = frozenset(closure(self.G, PointSet.of(self.model, A)).elements)
        return self._closures[A]

    def is_closed(self, A: frozenset) -> bool:
        return self.closure(A) <= A

    def is_open(self, A: frozenset) -> bool:
        return self.is_closed(self.X - A)

    @cached_property
    def ground(self) -> tuple:
        return tuple(sorted(self.X)) if self.finite else RATIONAL_GRID

    @cached_property
    def subsets(self) -> list[frozenset]:
        items = self.ground
        return [frozenset(v for i, v in enumerate(items) if mask >> i & 1)
                for mask in range(1 << len(items))]

    @cached_property
    def closed_sets(self) -> list[frozenset]:
        return [A for A in self.subsets if self.is_closed(A)]

    @cached_property
    def open_sets(self) -> list[frozenset]:
        return [A for A in self.subsets if self.is_open(A)]

    def interior(self, A: frozenset) -> frozenset:
        A = frozenset(A)
        if A not in self._interiors:
            result = frozenset()
            for U in self.open_sets:
                if U <= A:
                    result |= U
            self._interiors[A] = result
        return self._interiors[A]

    def set_sum(self, A: frozenset, B: frozenset) -> frozenset:
        add = self.model.add
        return frozenset(add(a, b) for a in A for b in B)

    # functions
    def continuity(self, f: TabulatedFunction, at=None, within=None) -> Verdict:
        key = (f.table, at, None if within is None else frozenset(within))
        if key not in self._continuity:
            self._continuity[key] = is_continuous(self.G, f, at=at, within=within)
        return self._continuity[key]

    def continuous(self, f: TabulatedFunction) -> bool:
        return self.continuity(f).holds

    def open_map(self, f: TabulatedFunction) -> bool:
        return all(self.is_open(f.image(U)) for U in self.open_sets)

    def closed_map(self, f: TabulatedFunction) -> bool:
        return all(self.is_closed(f.image(K)) for K in self.closed_sets)

    @cached_property
    def structured_functions(self) -> list[TabulatedFunction]:
        m = self.model
        out = [TabulatedFunction.identity(m), TabulatedFunction.negation(m)]
        out += [TabulatedFunction.constant(m, a) for a in m.elements()]
        out += [TabulatedFunction.translation(m, a) for a in m.elements()]
        out += [TabulatedFunction.multiplication(m, k) for k in m.elements()]
        return list(dict.fromkeys(out))

    @cached_property
    def functions(self) -> list[TabulatedFunction]:
        if self.model.modulus ** self.model.modulus <= FUNCTION_ENUMERATION_CAP:
            return list(all_functions(self.model))
        rng = random.Random(f"functions:{self.model.name}")
        extra = [TabulatedFunction(self.model, tuple(rng.randrange(self.model.modulus)
                                                     for _ in range(self.model.modulus)))
                 for _ in range(FUNCTION_ENUMERATION_CAP)]
        return list(dict.fromkeys(self.structured_functions + extra))

    @cached_property
    def continuous_functions(self) -> list[TabulatedFunction]:
        return [f for f in self.functions if self.continuous(f)]

    @cached_property
    def open_maps(self) -> list[TabulatedFunction]:
        return [f for f in self.functions if self.open_map(f)]

    @cached_property
    def closed_maps(self) -> list[TabulatedFunction]:
        return [f for f in self.functions if self.closed_map(f)]

    @cached_property
    def bijections(self) -> list[TabulatedFunction]:
        return [f for f in self.functions if f.is_bijective]

    @cached_property
    def additive_functions(self) -> list[TabulatedFunction]:
        return [TabulatedFunction.multiplication(self.model, k) for k in self.model.elements()]

    @property
    def period_bound(self) -> int:
        width = max(len(c) for c in kernel_components(self.G))
        return len(self.X) ** width


# --- checks -------------------------------------------------------------------

def _sets(d: dict, *keys) -> list[frozenset]:
    return [frozenset(d[k]) for k in keys]


class Drawer:
    """Random draws for one check; trial 0 and 1 use the empty set and X."""

    def __init__(self, space: Space, rng: random.Random):
        self.space = space
        self.rng = rng

    def subset(self, trial: int = -1) -> frozenset:
        if trial == 0:
            return frozenset()
        if trial == 1 and self.space.finite:
            return self.space.X
        return self.rng.choice(self.space.subsets)

    def pick(self, pool: list):
        return self.rng.choice(pool) if pool else None

    def family(self, trial: int, pool: Optional[list] = None, max_size: int = 4) -> list[frozenset]:
        size = self.rng.randint(1, max_size)
        if pool is None:
            return [self.subset(trial if i == 0 else -1) for i in range(size)]
        return [self.rng.choice(pool) for _ in range(size)]

    def function(self, pool: Optional[list] = None) -> TabulatedFunction:
        pool = pool or self.space.functions
        if self.rng.random() < 0.25:
            return self.rng.choice(self.space.structured_functions)
        return self.rng.choice(pool)


@dataclass(frozen=True)
class Check:
    """One theorem statement tested on random candidates.

    ``draw`` builds a candidate (a JSON-ready dict); ``violated`` decides it.
    """

    name: str
    expect: str
    draw: Callable[[Drawer, int], dict]
    violated: Callable[[Space, dict], bool]
    needs_regular: bool = False
    finite_only: bool = True
    exhaustive: bool = False
    uses_continuity: bool = False


def _fn(space: Space, table) -> TabulatedFunction:
    return TabulatedFunction(space.model, tuple(table))


def _draw_sets(*names):
    def draw(d: Drawer, trial: int) -> dict:
        return {name: sorted(d.subset(trial if i == 0 else -1)) for i, name in enumerate(names)}
    return draw


# individual predicates

def _regular_containment(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    return not A <= s.closure(A)


def _empty_and_whole(s: Space, w: dict) -> bool:
    return bool(s.closure(frozenset())) or s.closure(s.X) != s.X


def _closure_monotone(s: Space, w: dict) -> bool:
    A, B = _sets(w, "A", "B")
    return not s.closure(A) <= s.closure(A | B)


def _draw_family(d: Drawer, trial: int) -> dict:
    max_size = 4 if d.space.finite else 2
    fam = d.family(trial, max_size=max_size)
    if not d.space.finite:
        fam = [frozenset(sorted(A)[:3]) for A in fam]
    return {"family": [sorted(A) for A in fam]}


def _closure_families(s: Space, w: dict) -> bool:
    fam = [frozenset(A) for A in w["family"]]
    union = frozenset().union(*fam)
    inter = frozenset.intersection(*fam)
    total = fam[0]
    cl_total = s.closure(fam[0])
    for A in fam[1:]:
        total = s.set_sum(total, A)
        cl_total = s.set_sum(cl_total, s.closure(A))
    cls = [s.closure(A) for A in fam]
    return not (frozenset().union(*cls) <= s.closure(union)
                and s.closure(inter) <= frozenset.intersection(*cls)
                and cl_total <= s.closure(total))


def _draw_closed_family(d: Drawer, trial: int) -> dict:
    return {"family": [sorted(A) for A in d.family(trial, d.space.closed_sets)]}


def _intersections_closed(s: Space, w: dict) -> bool:
    fam = [frozenset(A) for A in w["family"]]
    if not all(s.is_closed(A) for A in fam):
        return False
    return not s.is_closed(frozenset.intersection(*fam))


def _draw_open_family(d: Drawer, trial: int) -> dict:
    return {"family": [sorted(A) for A in d.family(trial, d.space.open_sets)]}


def _unions_open(s: Space, w: dict) -> bool:
    fam = [frozenset(A) for A in w["family"]]
    if not all(s.is_open(A) for A in fam):
        return False
    return not s.is_open(frozenset().union(*fam))


def _open_iff_neighborhoods(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    local = all(any(a in U and U <= A for U in s.open_sets) for a in A)
    return s.is_open(A) != local


def _interior_properties(s: Space, w: dict) -> bool:
    A, B = _sets(w, "A", "B")
    iA, iB = s.interior(A), s.interior(B)
    ok = (s.is_open(iA)
          and iA <= A
          and s.is_open(A) == (A == iA)
          and (not A <= B or iA <= iB)
          and s.interior(A & B) <= iA & iB
          and iA | iB <= s.interior(A | B))
    return not ok


def _interior_families(s: Space, w: dict) -> bool:
    fam = [frozenset(A) for A in w["family"]]
    ints = [s.interior(A) for A in fam]
    ok = (s.interior(frozenset.intersection(*fam)) <= frozenset.intersection(*ints)
          and frozenset().union(*ints) <= s.interior(frozenset().union(*fam)))
    return not ok


def _draw_function(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function().table)}


def _draw_continuous(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function(d.space.continuous_functions).table)}


def _closed_map_criterion(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    criterion = all(s.closure(f.image(A)) <= f.image(s.closure(A)) for A in s.subsets)
    return criterion and not s.closed_map(f)


def _open_map_iff(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    criterion = all(f.image(s.interior(A)) <= s.interior(f.image(A)) for A in s.subsets)
    return s.open_map(f) != criterion


def _closed_supersets(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    bound = s.X
    for K in s.closed_sets:
        if A <= K:
            bound = bound & K
    return not s.closure(A) <= bound


def _neighborhood_meets(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    for x in s.closure(A):
        for U in s.open_sets:
            if x in U and not A & U:
                return True
    return False


def _dense_meets_open(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    if s.closure(A) != s.X:
        return False
    return any(U and not A & U for U in s.open_sets)


def _complement_interior(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    return not s.closure(s.X - A) <= s.X - s.interior(A)


def _boundary_bound(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    bd = s.closure(A) & s.closure(s.X - A)
    return not bd <= s.closure(A) - s.interior(A)


def _draw_continuous_and_set(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function(d.space.continuous_functions).table), "A": sorted(d.subset(trial))}


def _continuous_closure_image(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    (A,) = _sets(w, "A")
    return s.continuous(f) and not f.image(s.closure(A)) <= s.closure(f.image(A))


def _draw_continuous_and_closed(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function(d.space.continuous_functions).table),
            "K": sorted(d.pick(d.space.closed_sets))}


def _inverse_image_closed(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    (K,) = _sets(w, "K")
    return s.continuous(f) and s.is_closed(K) and not s.is_closed(f.preimage(K))


def _draw_continuous_and_open(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function(d.space.continuous_functions).table),
            "U": sorted(d.pick(d.space.open_sets))}


def _inverse_image_open(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    (U,) = _sets(w, "U")
    return s.continuous(f) and s.is_open(U) and not s.is_open(f.preimage(U))


def _draw_continuous_bijection(d: Drawer, trial: int) -> dict:
    pool = [f for f in d.space.continuous_functions if f.is_bijective]
    return {"f": list(d.pick(pool).table), "A": sorted(d.subset(trial))}


def _bijection_interior(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    (A,) = _sets(w, "A")
    if not (f.is_bijective and s.continuous(f)):
        return False
    return not s.interior(f.image(A)) <= f.image(s.interior(A))


def _draw_additive(d: Drawer, trial: int) -> dict:
    return {"f": list(d.pick(d.space.additive_functions).table)}


def _origin_continuity(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    if not f.is_additive:
        return False
    return s.continuity(f, at=s.model.zero()).holds != s.continuous(f)


def _draw_set_and_open(d: Drawer, trial: int) -> dict:
    return {"A": sorted(d.subset(trial)), "B": sorted(d.pick(d.space.open_sets))}


def _sum_of_sets_open(s: Space, w: dict) -> bool:
    A, B = _sets(w, "A", "B")
    return s.is_open(B) and not s.is_open(s.set_sum(A, B))


def _draw_element(d: Drawer, trial: int) -> dict:
    return {"a": d.rng.choice(sorted(d.space.X))}


def _translation_maps(s: Space, w: dict) -> bool:
    f = TabulatedFunction.translation(s.model, w["a"])
    return not (s.continuous(f) and s.closed_map(f) and s.open_map(f))


def _draw_two(pool_name: str):
    def draw(d: Drawer, trial: int) -> dict:
        pool = getattr(d.space, pool_name)
        return {"f": list(d.function(pool).table), "g": list(d.function(pool).table)}
    return draw


def _two(s: Space, w: dict) -> tuple[TabulatedFunction, TabulatedFunction]:
    return _fn(s, w["f"]), _fn(s, w["g"])


def _composition_continuous(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    return s.continuous(f) and s.continuous(g) and not s.continuous(g.after(f))


def _composition_open_closed(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    if s.open_map(f) and s.open_map(g) and not s.open_map(g.after(f)):
        return True
    return s.closed_map(f) and s.closed_map(g) and not s.closed_map(g.after(f))


def _sum_continuous(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    return s.continuous(f) and s.continuous(g) and not s.continuous(f + g)


def _sum_open(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    return s.open_map(f) and s.open_map(g) and not s.open_map(f + g)


def _draw_open_maps_and_set(d: Drawer, trial: int) -> dict:
    pool = d.space.open_maps
    return {"f": list(d.function(pool).table), "g": list(d.function(pool).table),
            "A": sorted(d.pick(d.space.open_sets))}


def _set_sum_of_images(s: Space, w: dict) -> bool:
    # f(A) + g(A) is open for open maps f, g and open A
    f, g = _two(s, w)
    (A,) = _sets(w, "A")
    if not (s.open_map(f) and s.open_map(g) and s.is_open(A)):
        return False
    return not s.is_open(s.set_sum(f.image(A), g.image(A)))


def _cancel_onto(s: Space, w: dict, need_continuity: bool) -> bool:
    # gf open (closed) and f onto => g open (closed)
    f, g = _two(s, w)
    if not f.is_bijective or (need_continuity and not s.continuous(f)):
        return False
    gf = g.after(f)
    return ((s.open_map(gf) and not s.open_map(g))
            or (s.closed_map(gf) and not s.closed_map(g)))


def _cancel_injective(s: Space, w: dict, need_continuity: bool) -> bool:
    # gf open (closed) and g one-to-one => f open (closed)
    f, g = _two(s, w)
    if not g.is_bijective or (need_continuity and not s.continuous(g)):
        return False
    gf = g.after(f)
    return ((s.open_map(gf) and not s.open_map(f))
            or (s.closed_map(gf) and not s.closed_map(f)))


def _draw_bijection_pair(continuous_side: str):
    def draw(d: Drawer, trial: int) -> dict:
        bij = d.pick(d.space.bijections)
        other = d.function()
        f, g = (bij, other) if continuous_side == "f" else (other, bij)
        return {"f": list(f.table), "g": list(g.table)}
    return draw


def _draw_continuous_and_subset(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function(d.space.continuous_functions).table), "Z": sorted(d.subset(trial))}


def _restriction(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    return s.continuous(f) and not s.continuity(f, within=frozenset(w["Z"])).holds


def _identity_continuous(s: Space, w: dict) -> bool:
    return not s.continuous(TabulatedFunction.identity(s.model))


def _inclusion_continuous(s: Space, w: dict) -> bool:
    ident = TabulatedFunction.identity(s.model)
    return not s.continuity(ident, within=frozenset(w["Z"])).holds


def _constant_continuous(s: Space, w: dict) -> bool:
    return not s.continuous(TabulatedFunction.constant(s.model, w["a"]))


def _negative_continuous(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    return s.continuous(f) and not s.continuous(-f)


def _negation_continuous(s: Space, w: dict) -> bool:
    return not s.continuous(TabulatedFunction.negation(s.model))


def _negation_closed(s: Space, w: dict) -> bool:
    return not s.closed_map(TabulatedFunction.negation(s.model))


def _continuous_group(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    if not (s.continuous(f) and s.continuous(g)):
        return False
    zero = TabulatedFunction.constant(s.model, 0)
    return not (s.continuous(f + g) and s.continuous(-f) and s.continuous(zero))


def _kernel_closed(s: Space, w: dict) -> bool:
    f = _fn(s, w["f"])
    if not (f.is_additive and s.continuous(f)):
        return False
    return not s.is_closed(f.preimage({0}))


def _draw_additive_pair(d: Drawer, trial: int) -> dict:
    pool = d.space.additive_functions
    return {"f": list(d.pick(pool).table), "g": list(d.pick(pool).table)}


def _equalizer_closed(s: Space, w: dict) -> bool:
    f, g = _two(s, w)
    if not (f.is_additive and g.is_additive and s.continuous(f) and s.continuous(g)):
        return False
    return not s.is_closed(frozenset(a for a in s.X if f(a) == g(a)))


def _subsequential_closures(s: Space, w: dict) -> bool:
    all_fixed = all(s.closure(A) == A for A in s.subsets)
    return all_fixed != is_subsequential(s.G, s.model)


def _subsequential_interiors(s: Space, w: dict) -> bool:
    if not is_subsequential(s.G, s.model):
        return False
    return any(s.interior(A) != A for A in s.subsets)


def _draw_restriction_gap(d: Drawer, trial: int) -> dict:
    return {"f": list(d.function().table), "Z": sorted(d.subset(trial))}


def _restriction_gap(s: Space, w: dict) -> bool:
    # claim under observation: continuity on Z implies continuity on X
    f = _fn(s, w["f"])
    return s.continuity(f, within=frozenset(w["Z"])).holds and not s.continuous(f)


def _draw_closed_pair(d: Drawer, trial: int) -> dict:
    if not d.space.finite and trial == 0:
        return {"A": [Fraction(0)], "B": [Fraction(1)]}
    pool = d.space.closed_sets
    return {"A": sorted(d.pick(pool)), "B": sorted(d.pick(pool))}


def _union_of_closed(s: Space, w: dict) -> bool:
    A, B = _sets(w, "A", "B")
    return s.is_closed(A) and s.is_closed(B) and not s.is_closed(A | B)


def _draw_idempotence(d: Drawer, trial: int) -> dict:
    if not d.space.finite and trial == 0:
        return {"A": [Fraction(0), Fraction(1)]}
    return {"A": sorted(d.subset(trial))}


def _closure_idempotence(s: Space, w: dict) -> bool:
    (A,) = _sets(w, "A")
    once = s.closure(A)
    return s.closure(once) != once


def _draw_open_pair(d: Drawer, trial: int) -> dict:
    if d.rng.random() < 0.5:
        pool = d.space.open_sets
        return {"A": sorted(d.pick(pool)), "B": sorted(d.pick(pool))}
    return {"A": sorted(d.subset(trial)), "B": sorted(d.subset())}


def _interior_intersection(s: Space, w: dict) -> bool:
    A, B = _sets(w, "A", "B")
    return s.interior(A & B) != s.interior(A) & s.interior(B)


def _draw_nothing(d: Drawer, trial: int) -> dict:
    return {}


CHECKS: tuple[Check, ...] = (
    Check("regular-containment", HOLDS, _draw_sets("A"), _regular_containment,
          needs_regular=True, finite_only=False),
    Check("empty-and-whole", HOLDS, _draw_nothing, _empty_and_whole,
          needs_regular=True, exhaustive=True),
    Check("closure-monotone", HOLDS, _draw_sets("A", "B"), _closure_monotone, finite_only=False),
    Check("closure-families", HOLDS, _draw_family, _closure_families,
          needs_regular=True, finite_only=False),
    Check("intersections-closed", HOLDS, _draw_closed_family, _intersections_closed,
          finite_only=False),
    Check("unions-open", HOLDS, _draw_open_family, _unions_open),
    Check("open-iff-neighborhoods", HOLDS, _draw_sets("A"), _open_iff_neighborhoods),
    Check("interior-properties", HOLDS, _draw_sets("A", "B"), _interior_properties),
    Check("interior-of-families", HOLDS, _draw_family, _interior_families),
    Check("closed-map-criterion", HOLDS, _draw_function, _closed_map_criterion,
          needs_regular=True),
    Check("open-map-iff", HOLDS, _draw_function, _open_map_iff),
    Check("closure-vs-closed-supersets", HOLDS, _draw_sets("A"), _closed_supersets,
          needs_regular=True),
    Check("neighborhood-meets", HOLDS, _draw_sets("A"), _neighborhood_meets, needs_regular=True),
    Check("dense-meets-open", HOLDS, _draw_sets("A"), _dense_meets_open, needs_regular=True),
    Check("complement-interior", HOLDS, _draw_sets("A"), _complement_interior),
    Check("boundary-bound", HOLDS, _draw_sets("A"), _boundary_bound),
    Check("continuous-closure-image", HOLDS, _draw_continuous_and_set, _continuous_closure_image,
          needs_regular=True, uses_continuity=True),
    Check("inverse-image-closed", HOLDS, _draw_continuous_and_closed, _inverse_image_closed,
          needs_regular=True, uses_continuity=True),
    Check("inverse-image-open", HOLDS, _draw_continuous_and_open, _inverse_image_open,
          needs_regular=True, uses_continuity=True),
    Check("bijection-interior", HOLDS, _draw_continuous_bijection, _bijection_interior,
          needs_regular=True, uses_continuity=True),
    Check("origin-continuity", HOLDS, _draw_additive, _origin_continuity,
          needs_regular=True, uses_continuity=True),
    Check("sum-of-sets-open", HOLDS, _draw_set_and_open, _sum_of_sets_open, needs_regular=True),
    Check("translation-maps", HOLDS, _draw_element, _translation_maps,
          needs_regular=True, uses_continuity=True),
    Check("composition-and-sum-i", HOLDS, _draw_two("continuous_functions"),
          _composition_continuous, uses_continuity=True),
    Check("composition-and-sum-ii", HOLDS, _draw_two("open_maps"), _composition_open_closed),
    Check("composition-and-sum-iii", HOLDS, _draw_two("continuous_functions"), _sum_continuous,
          uses_continuity=True),
    Check("composition-and-sum-iv-as-stated", OBSERVE, _draw_two("open_maps"), _sum_open),
    Check("composition-and-sum-iv-set-sum", HOLDS, _draw_open_maps_and_set, _set_sum_of_images,
          needs_regular=True),
    Check("composition-and-sum-v-as-stated", OBSERVE, _draw_bijection_pair("f"),
          lambda s, w: _cancel_onto(s, w, False)),
    Check("composition-and-sum-v-with-continuity", HOLDS, _draw_bijection_pair("f"),
          lambda s, w: _cancel_onto(s, w, True), needs_regular=True, uses_continuity=True),
    Check("composition-and-sum-vi-as-stated", OBSERVE, _draw_bijection_pair("g"),
          lambda s, w: _cancel_injective(s, w, False)),
    Check("composition-and-sum-vi-with-continuity", HOLDS, _draw_bijection_pair("g"),
          lambda s, w: _cancel_injective(s, w, True), needs_regular=True, uses_continuity=True),
    Check("standard-maps-i", HOLDS, _draw_continuous_and_subset, _restriction,
          uses_continuity=True),
    Check("standard-maps-ii", HOLDS, _draw_nothing, _identity_continuous,
          exhaustive=True, uses_continuity=True),
    Check("standard-maps-iii", HOLDS, _draw_sets("Z"), _inclusion_continuous,
          uses_continuity=True),
    Check("standard-maps-iv", HOLDS, _draw_element, _constant_continuous,
          needs_regular=True, uses_continuity=True),
    Check("standard-maps-v", HOLDS, _draw_continuous, _negative_continuous, uses_continuity=True),
    Check("standard-maps-vi", HOLDS, _draw_nothing, _negation_continuous,
          exhaustive=True, uses_continuity=True),
    Check("standard-maps-vii", HOLDS, _draw_nothing, _negation_closed, exhaustive=True),
    Check("continuous-functions-group", HOLDS, _draw_two("continuous_functions"),
          _continuous_group, needs_regular=True, uses_continuity=True),
    Check("kernel-closed", HOLDS, _draw_additive, _kernel_closed,
          needs_regular=True, uses_continuity=True),
    Check("equalizer-closed", HOLDS, _draw_additive_pair, _equalizer_closed,
          needs_regular=True, uses_continuity=True),
    Check("subsequential-closures-match", HOLDS, _draw_nothing, _subsequential_closures,
          needs_regular=True, exhaustive=True),
    Check("subsequential-interiors-match", HOLDS, _draw_nothing, _subsequential_interiors,
          needs_regular=True, exhaustive=True),
    Check("restriction-gap", OBSERVE, _draw_restriction_gap, _restriction_gap,
          uses_continuity=True),
    Check("union-of-closed", FALSIFIABLE, _draw_closed_pair, _union_of_closed, finite_only=False),
    Check("closure-idempotence", FALSIFIABLE, _draw_idempotence, _closure_idempotence,
          finite_only=False),
    Check("interior-intersection-equality", FALSIFIABLE, _draw_open_pair,
          _interior_intersection),
)

CHECKS_BY_NAME = {c.name: c for c in CHECKS}


# --- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    check: str
    universe: str
    method: str
    expect: str
    mode: str
    status: str
    trials: int
    witness: Optional[dict] = None
    verified_up_to_period: Optional[int] = None
    reason: Optional[str] = None

    @property
    def failed(self) -> bool:
        """An asserted theorem was refuted."""
        return self.expect == HOLDS and self.mode == "assert" and self.status == COUNTEREXAMPLE

    def to_json(self) -> dict:
        doc = {"check": self.check, "universe": self.universe, "method": self.method,
               "expect": self.expect, "mode": self.mode, "status": self.status,
               "trials": self.trials}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.verified_up_to_period is not None:
            doc["verified_up_to_period"] = self.verified_up_to_period
        if self.reason is not None:
            doc["reason"] = self.reason
        return doc

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _encode_value(model: GroupModel, key: str, value):
    if isinstance(value, list):
        return [_encode_value(model, key, v) for v in value]
    return model.format(value)


def encode_witness(model: GroupModel, candidate: dict) -> dict:
    return {k: _encode_value(model, k, v) for k, v in sorted(candidate.items())}


def decode_witness(model: GroupModel, witness: dict) -> dict:
    def dec(v):
        if isinstance(v, list):
            return [dec(x) for x in v]
        return model.parse(v)
    return {k: (dec(v) if k != "x" else v) for k, v in witness.items()}


def _mode(check: Check, space: Space) -> str:
    if check.expect == OBSERVE or (check.needs_regular and not space.regular):
        return "observe"
    return "assert"


def run_check(check: Check, space: Space, trials: int, seed: int) -> VerificationReport:
    universe, method = space.model.name, format_method(space.G)
    mode = _mode(check, space)
    if check.finite_only and not space.finite:
        return VerificationReport(check.name, universe, method, check.expect, mode, SKIPPED, 0,
                                  reason="needs a finite universe (complements and function "
                                         "tables are infinite on the rational line)")
    rng = random.Random(f"{seed}:{check.name}:{universe}:{method}")
    drawer = Drawer(space, rng)
    runs = 1 if check.exhaustive else trials
    bound = space.period_bound if check.uses_continuity else None
    for trial in range(runs):
        candidate = check.draw(drawer, trial)
        if check.violated(space, candidate):
            return VerificationReport(check.name, universe, method, check.expect, mode,
                                      COUNTEREXAMPLE, trial + 1,
                                      witness=encode_witness(space.model, candidate),
                                      verified_up_to_period=bound)
    return VerificationReport(check.name, universe, method, check.expect, mode, VERIFIED, runs,
                              verified_up_to_period=bound)


def default_kernels(max_width: int = 2, lo: int = -2, hi: int = 2) -> list[Method]:
    """All integer kernels of width <= ``max_width`` with coefficients in [lo, hi]."""
    out = []
    for width in range(1, max_width + 1):
        for coeffs in product(range(lo, hi + 1), repeat=width):
            out.append(Kernel(coeffs))
    return out


def default_methods(model: GroupModel) -> list[Method]:
    if model.is_finite:
        return default_kernels()
    return [Kernel((Fraction(1, 2), Fraction(1, 2))), Lim()]


def run_suite(universe: GroupModel, methods: Optional[list[Method]] = None, trials: int = 100,
              seed: int = 7, cap: int = DEFAULT_INTERIOR_CAP,
              checks: Optional[Iterable[str]] = None) -> list[VerificationReport]:
    """Run every check for every method on ``universe``; deterministic in ``seed``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    methods = default_methods(universe) if methods is None else methods
    selected = CHECKS if checks is None else [CHECKS_BY_NAME[name] for name in checks]
    reports = []
    for G in methods:
        try:
            space = Space(universe, G, cap)
        except (UnsupportedMethod, ValueError) as exc:
            reports.extend(VerificationReport(c.name, universe.name, format_method(G), c.expect,
                                              "observe", SKIPPED, 0, reason=str(exc))
                           for c in selected)
            continue
        for check in selected:
            try:
                reports.append(run_check(check, space, trials, seed))
            except UnsupportedMethod as exc:
                reports.append(VerificationReport(check.name, universe.name, format_method(G),
                                                  check.expect, _mode(check, space), SKIPPED, 0,
                                                  reason=str(exc)))
    return reports


@dataclass
class SuiteSummary:
    failures: list = field(default_factory=list)
    unfalsified: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.unfalsified

    def to_json(self) -> dict:
        return {"passed": self.passed, "counts": self.counts,
                "failures": [r.to_json() for r in self.failures],
                "unfalsified": self.unfalsified, "findings": self.findings}


def summarize(reports: list[VerificationReport]) -> SuiteSummary:
    summary = SuiteSummary()
    falsified: dict[str, bool] = {}
    for r in reports:
        summary.counts[r.status] = summary.counts.get(r.status, 0) + 1
        if r.failed:
            summary.failures.append(r)
        if r.expect == OBSERVE and r.status == COUNTEREXAMPLE and r.check not in summary.findings:
            summary.findings.append(r.check)
        if r.expect == FALSIFIABLE and r.status != SKIPPED:
            falsified[r.check] = falsified.get(r.check, False) or r.status == COUNTEREXAMPLE
    summary.findings.sort()
    summary.unfalsified = sorted(name for name, hit in falsified.items() if not hit)
    return summary


def replay(record: dict, cap: int = DEFAULT_INTERIOR_CAP) -> bool:
    """Re-run the violated predicate on a reported witness; True if it still fails."""
    if record.get("status") != COUNTEREXAMPLE:
        raise ValueError("only CounterexampleFound records carry a witness")
    model = GroupModel.from_name(record["universe"])
    G = parse_method(record["method"])
    check = CHECKS_BY_NAME[record["check"]]
    space = Space(model, G, cap)
    return check.violated(space, decode_witness(model, record["witness"]))


def continuity_witness_holds(G: Method, f: TabulatedFunction, witness: str) -> bool:
    """True if the witness sequence really refutes continuity of f."""
    x = parse_sequence(witness, f.model)
    u = evaluate(G, x)
    return u is not None and evaluate(G, x.map(f)) != f(u)


__all__ = [
    "BudgetExceeded", "CHECKS", "Check", "Space", "SuiteSummary", "TabulatedFunction", "Verdict",
    "VerificationReport", "all_functions", "continuity_witness_holds", "default_kernels",
    "default_methods", "format_sequence", "is_closed_map", "is_continuous",
    "is_continuous_bounded", "is_open_map", "is_subsequential", "lyndon_words", "replay",
    "run_suite", "summarize", "RATIONALS",
]
