from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gseq.methods import AVERAGING, Cesaro, Kernel, Lim, MethodSum, UnsupportedMethod, evaluate
from gseq.sequences import RATIONALS, cyclic
from gseq.topology import (
    PointSet,
    WindowGraph,
    boundary,
    closure,
    closure_is_complete,
    closure_iterate,
    interior,
    is_closed,
    is_dense,
    is_neighborhood,
    is_open,
    kernel_components,
    realizing_sequence,
    subsets,
)

from .oracles import brute_closure

Q = RATIONALS
Z2, Z3, Z4 = cyclic(2), cyclic(3), cyclic(4)


def S(model, *values):
    return PointSet.of(model, [Fraction(v) if isinstance(v, str) else v for v in values])


def test_averaging_closure_and_second_iterate():
    A = S(Q, 0, 1)
    assert closure(AVERAGING, A) == S(Q, 0, "1/2", 1)
    assert closure(AVERAGING, S(Q, 0, "1/2", 1)) == S(Q, 0, "1/4", "1/2", "3/4", 1)


def test_lim_closure_is_identity():
    A = S(Q, -1, "2/3", 5)
    assert closure(Lim(), A) == A
    assert closure_iterate(Lim(), A, 3) == [A, A, A]


def test_window_graph_example_z2():
    assert closure(Kernel((1, 1)), S(Z2, 1)) == S(Z2, 0)


def test_window_graph_shape():
    g = WindowGraph(Z3, [0, 1, 2], ((2, -1),))
    assert len(g.nodes) == 9
    assert all(len(g.successors(v)) == 3 for v in g.nodes)
    assert g.label((1, 2)) == (0,)


def test_is_closed_examples():
    assert is_closed(AVERAGING, S(Q, 0))
    assert is_closed(AVERAGING, S(Q, 1))
    assert not is_closed(AVERAGING, S(Q, 0, 1))
    assert is_closed(Lim(), S(Q, 0, 1, 7))


def test_is_open_examples():
    assert is_open(Lim(), S(Z3, 0))
    assert not is_open(Kernel((1, 1)), S(Z2, 0))
    assert is_open(Kernel((1, 1)), S(Z2))
    with pytest.raises(UnsupportedMethod):
        is_open(AVERAGING, S(Q, 0))


def test_interior_examples():
    assert interior(Lim(), S(Z3, 0, 1)) == S(Z3, 0, 1)
    # {0} is not open: the closure of {1} is {1+1} = {0}
    assert interior(Kernel((1, 1)), S(Z2, 0)) == S(Z2)
    assert interior(Kernel((1, 1)), S(Z2, 0, 1)) == S(Z2, 0, 1)
    with pytest.raises(ValueError):
        interior(Lim(), S(cyclic(7), 0), cap=6)


def test_boundary_examples():
    for A in subsets(PointSet.universe(Z4)):
        assert boundary(Lim(), A) == S(Z4)
    assert boundary(Kernel((2, -1)), S(Z3)) == S(Z3)
    assert boundary(Kernel((1, 1)), S(Z2, 1)) == S(Z2, 0)


def test_dense_examples():
    X = PointSet.universe(Z3)
    assert is_dense(Kernel((2, -1)), X)
    assert not is_dense(Lim(), S(Z3, 0, 1))
    expected = brute_closure(Kernel((2, -1)), Z3, {0, 1}, 4) == {0, 1, 2}
    assert is_dense(Kernel((2, -1)), S(Z3, 0, 1)) is expected is True


def test_closure_iterate_examples():
    assert closure_iterate(AVERAGING, S(Q, 0, 1), 2) == [S(Q, 0, "1/2", 1),
                                                        S(Q, 0, "1/4", "1/2", "3/4", 1)]
    assert closure_iterate(AVERAGING, S(Q, 0), 2) == [S(Q, 0), S(Q, 0)]
    with pytest.raises(ValueError):
        closure_iterate(Lim(), S(Q, 0), 0)


def test_empty_set():
    for G in (Lim(), AVERAGING, Cesaro()):
        assert closure(G, S(Q)) == S(Q)


def test_cesaro_lower_approximation():
    A = S(Q, 0, 1)
    assert not closure_is_complete(Cesaro())
    got = closure(Cesaro(), A, cesaro_bound=3)
    assert got == S(Q, 0, "1/3", "1/2", "2/3", 1)
    for v in got:
        assert evaluate(Cesaro(), realizing_cesaro(v, 3)) == v


def realizing_cesaro(v, bound):
    from gseq.sequences import EvPerSeq
    for length in range(1, bound + 1):
        ones = v * length
        if ones.denominator == 1:
            k = int(ones)
            return EvPerSeq.periodic(Q, [1] * k + [0] * (length - k))
    raise AssertionError(v)


def test_sum_of_kernels_closure_matches_brute_force():
    G = MethodSum(Lim(), Kernel((1, 1)))
    for A in subsets(PointSet.of(Q, [0, 1, 2])):
        bound = max(len(A), 1) ** 2
        assert set(closure(G, A)) == brute_closure(G, Q, set(A), bound)
    with pytest.raises(UnsupportedMethod):
        closure(MethodSum(Cesaro(), Lim()), S(Q, 0))


def test_kernel_components():
    G = MethodSum(Lim(), MethodSum(AVERAGING, Kernel((3,))))
    assert kernel_components(G) == ((1,), (Fraction(1, 2), Fraction(1, 2)), (3,))


@pytest.mark.parametrize("G", [AVERAGING, Kernel((2, -1)), Kernel((1, 1)), Kernel((0, 1)),
                               Kernel((Fraction(1, 3), Fraction(2, 3)))])
def test_realizing_sequences(G):
    A = S(Q, 0, 1, 3)
    for v in closure(G, A):
        x = realizing_sequence(G, A, v)
        assert x.values() <= set(A)
        assert evaluate(G, x) == v
        assert x.period <= len(A) ** G.width


KERNELS = [Kernel(c) for c in [(1,), (2,), (Fraction(1, 2), Fraction(1, 2)), (1, 1), (2, -1),
                               (0, 1), (-1, 2), (1, -1)]]
values = st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(1), Fraction(-1), Fraction(3)])
finite_sets = st.frozensets(values, max_size=3).map(lambda s: PointSet.of(Q, s))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(KERNELS), finite_sets)
def test_window_graph_matches_brute_force(G, A):
    assert set(closure(G, A)) == brute_closure(G, Q, set(A), max(len(A), 1) ** G.width)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(KERNELS), finite_sets, finite_sets)
def test_monotone(G, A, B):
    assert closure(G, A) <= closure(G, A | B)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([k for k in KERNELS if sum(k.coefficients) == 1] + [Lim()]),
       st.lists(finite_sets, min_size=1, max_size=3))
def test_regular_closure_family_laws(G, family):
    for A in family:
        assert A <= closure(G, A)
    union = family[0]
    inter = family[0]
    for A in family[1:]:
        union, inter = union | A, inter & A
    cls = [closure(G, A) for A in family]
    joined, met = cls[0], cls[0]
    for c in cls[1:]:
        joined, met = joined | c, met & c
    assert joined <= closure(G, union)
    assert closure(G, inter) <= met
    if len(family) <= 2:
        total, cl_total = family[0], cls[0]
        for A, c in zip(family[1:], cls[1:]):
            total, cl_total = total.plus(A), cl_total.plus(c)
        assert cl_total <= closure(G, total)


Z_KERNELS = [Lim(), Kernel((1, 1)), Kernel((2, -1)), Kernel((2,)), Kernel((0, 1)), Kernel((-1, 2)),
             Kernel((1, 0, 1))]


@pytest.mark.parametrize("G", Z_KERNELS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_complement_interior_and_boundary(G, n):
    model = cyclic(n)
    X = PointSet.universe(model)
    for A in subsets(X):
        inside = interior(G, A)
        assert closure(G, X - A) <= X - inside
        assert boundary(G, A) <= closure(G, A) - inside
        assert is_neighborhood(G, A, next(iter(A))) == (next(iter(A)) in inside) if A else True


@pytest.mark.parametrize("G", [G for G in Z_KERNELS if max(map(len, kernel_components(G))) <= 2])
def test_cyclic_window_graph_matches_brute_force(G):
    model = Z3
    for A in subsets(PointSet.universe(model)):
        width = max(len(c) for c in kernel_components(G))
        assert set(closure(G, A)) == brute_closure(G, model, set(A), max(len(A), 1) ** width)
