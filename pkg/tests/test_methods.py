from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gseq.methods import (
    AVERAGING,
    Cesaro,
    Kernel,
    LacunaryScheme,
    Lim,
    MethodSum,
    UnsupportedMethod,
    evaluate,
    format_method,
    in_domain,
    is_regular,
    lacunary_density,
    method_from_json,
    parse_method,
    running_mean,
    statistical_density,
)
from gseq.sequences import RATIONALS, EvPerSeq, ModelMismatch, cyclic

from . import strategies

Q = RATIONALS
half = Fraction(1, 2)

KERNELS_Q = [Kernel((1,)), AVERAGING, Kernel((1, 1)), Kernel((2, -1)), Kernel((0, 1)),
             Kernel((Fraction(1, 3), Fraction(2, 3)))]
METHODS_Q = [Lim(), Cesaro(), *KERNELS_Q, MethodSum(Lim(), AVERAGING), MethodSum(Cesaro(), Lim())]
METHODS_Z = [Lim(), Kernel((1, 1)), Kernel((2, -1)), Kernel((1, 2, 3)), MethodSum(Lim(), Kernel((1, 1)))]


def squares_indicator(n):
    return [1 if isqrt(i) ** 2 == i else 0 for i in range(n)]


def squares_between(lo, hi):
    """Perfect squares among the integers lo..hi, by counting roots."""
    return isqrt(hi) - (isqrt(lo - 1) if lo > 0 else -1)


def test_evaluate_examples():
    assert evaluate(AVERAGING, EvPerSeq.periodic(Q, [0, 1])) == half
    assert evaluate(Lim(), EvPerSeq.constant(Q, Fraction(7, 3))) == Fraction(7, 3)
    assert evaluate(Cesaro(), EvPerSeq.periodic(Q, [0, 1])) == half
    assert evaluate(Kernel((1, 1)), EvPerSeq.constant(cyclic(2), 1)) == 0


def test_cesaro_against_partial_means():
    x = EvPerSeq.periodic(Q, [0, 1])
    total = Fraction(0)
    for n in range(1, 1001):
        total += x.term(n - 1)
        mean = total / n
        assert mean == Fraction(n // 2, n)
        assert abs(mean - half) <= Fraction(1, n)


def test_in_domain_examples():
    alt = EvPerSeq.periodic(Q, [0, 1])
    assert not in_domain(Lim(), alt)
    assert in_domain(AVERAGING, alt)
    assert not in_domain(MethodSum(Lim(), Cesaro()), alt)


def test_undefined_is_not_an_error():
    assert evaluate(Kernel((1, 1)), EvPerSeq.periodic(Q, [0, 1, 5])) is None


def test_model_mismatch():
    with pytest.raises(ModelMismatch):
        evaluate(AVERAGING, EvPerSeq.constant(cyclic(3), 1))
    with pytest.raises(UnsupportedMethod):
        evaluate(Cesaro(), EvPerSeq.constant(cyclic(3), 1))


@pytest.mark.parametrize("G, expected", [
    (AVERAGING, True), (Kernel((1,)), True), (Kernel((1, 1)), False), (Kernel((2, 2)), False),
    (Lim(), True), (Cesaro(), True), (Kernel((2, -1)), True),
    (MethodSum(Lim(), Lim()), False), (MethodSum(Lim(), Kernel((0,))), True),
])
def test_is_regular(G, expected):
    assert is_regular(G) is expected


def test_regular_modulo_n():
    assert is_regular(Kernel((3,)), cyclic(2))
    assert not is_regular(Kernel((3,)))
    assert not is_regular(Kernel((-1,)), cyclic(3))


@settings(max_examples=60)
@given(st.sampled_from(METHODS_Q + [None]), st.data())
def test_additivity(G, data):
    model = Q if G is not None else data.draw(strategies.moduli.map(cyclic))
    if G is None:
        G = data.draw(st.sampled_from(METHODS_Z))
    x = data.draw(strategies.sequences(model))
    y = data.draw(strategies.sequences(model))
    a, b = evaluate(G, x), evaluate(G, y)
    assume(a is not None and b is not None)
    assert evaluate(G, x + y) == model.add(a, b)
    assert evaluate(G, -x) == model.neg(a)


@settings(max_examples=60)
@given(st.sampled_from(METHODS_Q), strategies.sequences(Q), strategies.sequences(Q))
def test_domain_is_subgroup(G, x, y):
    if in_domain(G, x) and in_domain(G, y):
        assert in_domain(G, x + y)
        assert in_domain(G, -x)
    if not isinstance(G, MethodSum):
        assert in_domain(G, EvPerSeq.constant(Q, 0))


@pytest.mark.parametrize("G", [G for G in METHODS_Q if is_regular(G)])
def test_regular_methods_fix_convergent_sequences(G):
    import random
    rng = random.Random(11)
    for _ in range(200):
        pre = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, 4))]
        value = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        assert evaluate(G, EvPerSeq(Q, tuple(pre), (value,))) == value


@given(st.sampled_from(METHODS_Q), strategies.sequences(Q))
def test_sum_domain_is_intersection(G, x):
    H = MethodSum(G, AVERAGING)
    assert in_domain(H, x) == (in_domain(G, x) and in_domain(AVERAGING, x))
    if in_domain(H, x):
        assert evaluate(H, x) == evaluate(G, x) + evaluate(AVERAGING, x)


@given(st.sampled_from(KERNELS_Q + [Lim(), Cesaro()]), strategies.sequences(Q))
def test_value_depends_only_on_tail(G, x):
    assert evaluate(G, x.shift(1)) == evaluate(G, x)


def test_statistical_density_examples():
    prefix = squares_indicator(10_000)
    assert sum(prefix) == squares_between(0, 9_999) == 100
    assert statistical_density(prefix, 0, half, Q) == Fraction(1, 100)
    assert statistical_density([3, 3, 3], 3, Fraction(1, 10**6), Q) == 0
    assert statistical_density([0, 1, 0, 1], 0, half, Q) == half


def test_statistical_density_discrete():
    z3 = cyclic(3)
    assert statistical_density([0, 1, 2, 0], 0, None, z3) == half
    with pytest.raises(ModelMismatch):
        statistical_density([0], 0, half, z3)
    with pytest.raises(ValueError):
        statistical_density([], 0, half, Q)


def test_lacunary_density_examples():
    prefix = squares_indicator(1024)
    theta = LacunaryScheme.geometric(2, 10)
    assert theta.interval(10) == (512, 1024)
    # x_k = prefix[k-1] covers the integers k-1 = 512..1023
    assert squares_between(512, 1023) == 9
    assert lacunary_density(prefix, theta, 10, 0, half, Q) == Fraction(9, 512)
    for r in range(1, 11):
        assert lacunary_density([5] * 1024, theta, r, 5, half, Q) == 0
    assert lacunary_density([1, 1, 0, 0], LacunaryScheme((2, 4)), 2, 0, half, Q) == 0


def test_lacunary_range_errors():
    theta = LacunaryScheme((2, 4))
    with pytest.raises(IndexError):
        lacunary_density([0] * 4, theta, 3, 0, half, Q)
    with pytest.raises(IndexError):
        lacunary_density([0] * 3, theta, 2, 0, half, Q)
    with pytest.raises(ValueError):
        LacunaryScheme((4, 2))


@given(st.lists(strategies.small_rationals, min_size=1, max_size=40), strategies.small_rationals)
def test_density_in_unit_interval(prefix, ell):
    d = statistical_density(prefix, ell, half, Q)
    assert 0 <= d <= 1


@given(st.lists(st.integers(0, 1), max_size=10))
def test_density_envelope_decreases_for_eventually_ell(head):
    x = EvPerSeq(Q, tuple(head), (0,))
    densities = [statistical_density(x.prefix(2 ** k), 0, half, Q) for k in range(4, 11)]
    assert all(a >= b for a, b in zip(densities, densities[1:]))


def test_running_mean():
    x = EvPerSeq(Q, (4,), (1, 2))
    assert running_mean(x, 3) == Fraction(7, 3)


@pytest.mark.parametrize("text", ["lim", "cesaro", "kernel:1/2,1/2", "kernel:2,-1",
                                  "sum(lim;kernel:1,1)", "sum(sum(lim;cesaro);kernel:3)"])
def test_method_text_round_trip(text):
    G = parse_method(text)
    assert format_method(G) == text
    assert method_from_json(G.to_json()) == G


def test_method_json_documents():
    assert parse_method('{"kind":"kernel","coefficients":["1/2","1/2"]}') == AVERAGING
    doc = {"kind": "sum", "left": {"kind": "lim"}, "right": {"kind": "cesaro"}}
    assert method_from_json(doc) == MethodSum(Lim(), Cesaro())
    with pytest.raises(ValueError):
        parse_method("kernel:0.5")
    with pytest.raises(ValueError):
        parse_method('{"kind":"almost"}')
