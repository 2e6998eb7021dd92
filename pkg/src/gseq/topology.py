"""G-sequential closures of finite sets and the derived set predicates.

The closure of a finite set A under a sliding-kernel method is decided on the
window graph: nodes are the w-tuples over A, an edge drops the first symbol
and appends a new one, and a node is labelled by the kernel value of its
window. A sequence valued in A is a walk, and its transformed sequence is the
walk's label sequence. So l is a G-value of some sequence in A exactly when
the nodes labelled l carry a directed cycle. Any such cycle has length at
most |A|^w, which bounds the period of a realizing witness.

Sums of kernel methods use vector labels (one component per summand); the
G-value of a vector label is the sum of its components.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import chain, combinations, combinations_with_replacement, product
from typing import Iterable, Iterator, Optional

import networkx as nx

from .methods import Cesaro, Kernel, Lim, Method, MethodSum, UnsupportedMethod, check_compatible
from .sequences import Element, EvPerSeq, GroupModel

DEFAULT_INTERIOR_CAP = 6
DEFAULT_CESARO_BOUND = 4


@dataclass(frozen=True)
class PointSet:
    """A finite subset of the model, kept sorted and deduplicated."""

    model: GroupModel
    elements: tuple = ()

    def __post_init__(self) -> None:
        coerce = self.model.coerce
        object.__setattr__(self, "elements",
                           tuple(sorted({coerce(v) for v in self.elements})))

    @classmethod
    def of(cls, model: GroupModel, values: Iterable = ()) -> PointSet:
        return cls(model, tuple(values))

    @classmethod
    def universe(cls, model: GroupModel) -> PointSet:
        return cls(model, model.elements())

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, value) -> bool:
        return self.model.coerce(value) in self.elements

    def _check(self, other: PointSet) -> None:
        if self.model != other.model:
            raise ValueError(f"sets over {self.model.name} and {other.model.name}")

    def __or__(self, other: PointSet) -> PointSet:
        self._check(other)
        return PointSet(self.model, self.elements + other.elements)

    def __and__(self, other: PointSet) -> PointSet:
        self._check(other)
        keep = set(other.elements)
        return PointSet(self.model, tuple(v for v in self.elements if v in keep))

    def __sub__(self, other: PointSet) -> PointSet:
        self._check(other)
        drop = set(other.elements)
        return PointSet(self.model, tuple(v for v in self.elements if v not in drop))

    def __le__(self, other: PointSet) -> bool:
        self._check(other)
        return set(self.elements) <= set(other.elements)

    def __lt__(self, other: PointSet) -> bool:
        return self <= other and len(self) < len(other)

    def complement(self) -> PointSet:
        return PointSet.universe(self.model) - self

    def plus(self, other: PointSet) -> PointSet:
        """Elementwise sum ``{a + b}``."""
        self._check(other)
        add = self.model.add
        return PointSet(self.model, tuple(add(a, b) for a in self for b in other))

    def negated(self) -> PointSet:
        return PointSet(self.model, tuple(map(self.model.neg, self.elements)))

    def translate(self, a) -> PointSet:
        a = self.model.coerce(a)
        return PointSet(self.model, tuple(self.model.add(a, v) for v in self))

    def format(self) -> list[str]:
        return [self.model.format(v) for v in self.elements]

    def __str__(self) -> str:
        return "{" + ", ".join(self.format()) + "}"


def subsets(points: PointSet) -> Iterator[PointSet]:
    """All subsets of ``points``, smallest first."""
    items = points.elements
    for subset in chain.from_iterable(combinations(items, r) for r in range(len(items) + 1)):
        yield PointSet(points.model, subset)


def kernel_components(G: Method) -> tuple[tuple, ...]:
    """The sliding kernels whose values sum to G; ``lim`` is ``kernel:1``."""
    if isinstance(G, Lim):
        return ((Fraction(1),),)
    if isinstance(G, Kernel):
        return (G.coefficients,)
    if isinstance(G, MethodSum):
        return kernel_components(G.left) + kernel_components(G.right)
    raise UnsupportedMethod(f"{G} has no window-graph form")


class WindowGraph:
    """Window graph over a finite alphabet for a (sum of) sliding kernel(s)."""

    def __init__(self, model: GroupModel, alphabet: Iterable, components: tuple[tuple, ...]):
        self.model = model
        self.alphabet = tuple(sorted({model.coerce(a) for a in alphabet}))
        self.components = components
        self.width = max(len(c) for c in components)
        self._labels: dict[tuple, tuple] = {}
        for node in product(self.alphabet, repeat=self.width):
            self._labels[node] = tuple(self._value(c, node) for c in components)
        self._realizable: Optional[dict[tuple, list[set]]] = None

    def _value(self, coefficients: tuple, window: tuple) -> Element:
        model = self.model
        return model.total(model.scale(c, t) for c, t in zip(coefficients, window))

    @property
    def nodes(self) -> list[tuple]:
        return list(self._labels)

    def label(self, node: tuple) -> tuple:
        return self._labels[node]

    def window_label(self, window: tuple) -> tuple:
        """Label of an arbitrary window, not necessarily over the alphabet."""
        return tuple(self._value(c, window) for c in self.components)

    def value(self, label: tuple) -> Element:
        return self.model.total(label)

    def successors(self, node: tuple) -> list[tuple]:
        return [node[1:] + (a,) for a in self.alphabet]

    def level_graph(self) -> nx.DiGraph:
        """Edges joining nodes with equal labels."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self._labels)
        for node, lab in self._labels.items():
            for nxt in self.successors(node):
                if self._labels[nxt] == lab:
                    graph.add_edge(node, nxt)
        return graph

    def recurrent_components(self) -> dict[tuple, list[set]]:
        """Label -> strongly connected node sets that carry a cycle."""
        if self._realizable is None:
            graph = self.level_graph()
            found: dict[tuple, list[set]] = {}
            for comp in nx.strongly_connected_components(graph):
                node = next(iter(comp))
                if len(comp) > 1 or graph.has_edge(node, node):
                    found.setdefault(self._labels[node], []).append(comp)
            self._realizable = {k: found[k] for k in sorted(found)}
        return self._realizable

    def realizable_values(self) -> set:
        return {self.value(lab) for lab in self.recurrent_components()}

    def cycle_through(self, node: tuple, via: Optional[tuple] = None,
                      within: Optional[set] = None) -> list[tuple]:
        """A closed walk starting at ``node`` (visiting ``via`` if given)."""
        graph = self.level_graph() if within is None else self.level_graph().subgraph(within)
        if via is None or via == node:
            if graph.has_edge(node, node):
                return [node]
            back = min((nx.shortest_path(graph, s, node) for s in graph.successors(node)),
                       key=len)
            return [node] + back[:-1]
        there = nx.shortest_path(graph, node, via)
        back = nx.shortest_path(graph, via, node)
        return there[:-1] + back[:-1]

    def walk_to_sequence(self, walk: list[tuple]) -> EvPerSeq:
        """The periodic sequence whose window walk repeats ``walk``."""
        return EvPerSeq.periodic(self.model, [node[0] for node in walk])


@lru_cache(maxsize=None)
def _window_graph(model: GroupModel, alphabet: tuple, components: tuple) -> WindowGraph:
    return WindowGraph(model, alphabet, components)


def window_graph(G: Method, A: PointSet) -> WindowGraph:
    check_compatible(G, A.model)
    return _window_graph(A.model, A.elements, kernel_components(G))


def cesaro_lower_closure(A: PointSet, bound: int = DEFAULT_CESARO_BOUND) -> PointSet:
    """Cycle means of all cycles of length <= ``bound`` valued in A."""
    means = set()
    for length in range(1, bound + 1):
        for combo in combinations_with_replacement(A.elements, length):
            means.add(sum(combo, Fraction(0)) / length)
    return PointSet(A.model, tuple(means))


def closure_is_complete(G: Method) -> bool:
    return not isinstance(G, Cesaro)


def closure(G: Method, A: PointSet, *, cesaro_bound: int = DEFAULT_CESARO_BOUND) -> PointSet:
    """The G-sequential closure of the finite set A.

    Exact for ``lim``, sliding kernels and sums of those. For the Cesaro
    method only a lower approximation is available (see
    :func:`closure_is_complete`).
    """
    check_compatible(G, A.model)
    if not A.elements:
        return A
    if isinstance(G, Cesaro):
        return cesaro_lower_closure(A, cesaro_bound)
    if isinstance(G, Lim):
        return A
    if isinstance(G, MethodSum) and any(isinstance(m, Cesaro) for m in _leaves(G)):
        raise UnsupportedMethod("closure of a sum involving the Cesaro method is not supported")
    graph = window_graph(G, A)
    return PointSet(A.model, tuple(graph.realizable_values()))


def _leaves(G: Method) -> list[Method]:
    if isinstance(G, MethodSum):
        return _leaves(G.left) + _leaves(G.right)
    return [G]


def realizing_sequence(G: Method, A: PointSet, ell) -> Optional[EvPerSeq]:
    """A periodic sequence valued in A with G-value ``ell``, if one exists."""
    ell = A.model.coerce(ell)
    if not A.elements:
        return None
    if isinstance(G, Lim):
        return EvPerSeq.constant(A.model, ell) if ell in A else None
    graph = window_graph(G, A)
    for lab, comps in graph.recurrent_components().items():
        if graph.value(lab) == ell:
            node = min(comps[0])
            return graph.walk_to_sequence(graph.cycle_through(node, within=comps[0]))
    return None


def is_closed(G: Method, A: PointSet) -> bool:
    return closure(G, A) <= A


def closure_iterate(G: Method, A: PointSet, k: int) -> list[PointSet]:
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    current = A
    for _ in range(k):
        current = closure(G, current)
        out.append(current)
    return out


def _require_finite(A: PointSet) -> None:
    if not A.model.is_finite:
        raise UnsupportedMethod(
            "open sets, interiors, boundaries and density need a finite universe; "
            "the complement of a finite subset of the rational line is infinite")


def is_open(G: Method, A: PointSet) -> bool:
    _require_finite(A)
    return is_closed(G, A.complement())


def open_sets(G: Method, universe: GroupModel, cap: int = DEFAULT_INTERIOR_CAP) -> list[PointSet]:
    """Every G-sequentially open subset of a finite universe."""
    X = PointSet.universe(universe)
    if len(X) > cap:
        raise ValueError(f"universe of size {len(X)} exceeds the enumeration cap {cap}")
    return [U for U in subsets(X) if is_open(G, U)]


def interior(G: Method, A: PointSet, cap: int = DEFAULT_INTERIOR_CAP) -> PointSet:
    """Union of the G-sequentially open subsets of A."""
    _require_finite(A)
    if A.model.modulus > cap:
        raise ValueError(f"universe of size {A.model.modulus} exceeds the enumeration cap {cap}")
    result = PointSet(A.model)
    for U in subsets(A):
        if is_open(G, U):
            result = result | U
    return result


def boundary(G: Method, A: PointSet) -> PointSet:
    _require_finite(A)
    return closure(G, A) & closure(G, A.complement())


def is_dense(G: Method, A: PointSet) -> bool:
    _require_finite(A)
    return closure(G, A) == PointSet.universe(A.model)


def is_neighborhood(G: Method, U: PointSet, a, cap: int = DEFAULT_INTERIOR_CAP) -> bool:
    """Whether U contains a G-sequentially open set containing ``a``."""
    return a in U and a in interior(G, U, cap)
