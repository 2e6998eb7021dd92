"""Acceptance criteria; each test prints one PASS/FAIL line."""
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import isqrt

import pytest

from gseq import topology
from gseq.methods import (
    AVERAGING,
    Cesaro,
    Kernel,
    LacunaryScheme,
    evaluate,
    is_regular,
    lacunary_density,
    running_mean,
    statistical_density,
)
from gseq.sequences import RATIONALS, EvPerSeq, cyclic
from gseq.topology import PointSet, closure, closure_iterate, is_closed, subsets
from gseq.verifier import FALSIFIABLE, HOLDS, VERIFIED, replay, run_suite, summarize

from .oracles import brute_closure

Q = RATIONALS
F = Fraction


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail}")
        assert ok, detail
    return emit


def S(*values):
    return PointSet.of(Q, [F(v) for v in values])


def test_counterexample_closure_values(report):
    topology._window_graph.cache_clear()
    start = time.perf_counter()
    first, second = closure_iterate(AVERAGING, S(0, 1), 2)
    elapsed = time.perf_counter() - start
    ok = (first.elements == (F(0), F(1, 2), F(1))
          and second.elements == (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))
          and elapsed < 1.0)
    report("counterexample-closure", ok, f"closure {first}, second iterate {second}, "
                                          f"{elapsed * 1000:.1f} ms (< 1 s)")


def test_counterexample_union_of_closed(report):
    verdicts = (is_closed(AVERAGING, S(0)), is_closed(AVERAGING, S(1)),
                is_closed(AVERAGING, S(0, 1)))
    report("union-of-closed", verdicts == (True, True, False),
           f"{{0}} closed={verdicts[0]}, {{1}} closed={verdicts[1]}, {{0,1}} closed={verdicts[2]}")


ORACLE_KERNELS = [Kernel(c) for c in [
    (1,), (2,), (F(1, 2), F(1, 2)), (1, 1), (2, -1), (0, 1), (-1, 2), (1, -1),
    (F(1, 3), F(2, 3)), (F(3, 2), F(-1, 2))]]


def test_regularity(report):
    pinned = (is_regular(AVERAGING), is_regular(Kernel((1,))),
              is_regular(Kernel((1, 1))), is_regular(Kernel((2, 2))))
    rng = random.Random(2024)
    regular = [G for G in ORACLE_KERNELS if is_regular(G)]
    bad = 0
    for G in regular:
        for _ in range(200):
            value = F(rng.randint(-50, 50), rng.randint(1, 12))
            pre = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, 4))]
            x = EvPerSeq(Q, pre, [value] * rng.randint(1, 3))
            bad += evaluate(G, x) != value
    ok = pinned == (True, True, False, False) and bad == 0
    report("regularity", ok, f"verdicts {pinned}; {len(regular)} regular kernels x 200 "
                             f"constant-cycle sequences, {bad} mismatches")


def test_oracle_equivalence(report):
    mismatches, cases = 0, 0
    for G in ORACLE_KERNELS:
        for A in subsets(S(0, F(1, 2), 1)):
            bound = max(len(A), 1) ** G.width
            cases += 1
            mismatches += set(closure(G, A)) != brute_closure(G, Q, set(A), bound)
    report("oracle-equivalence", mismatches == 0,
           f"{cases} (kernel, subset) cases, {mismatches} mismatches")


def test_verification_suite(report):
    start = time.perf_counter()
    reports = []
    for n in (2, 3, 4):
        reports += run_suite(cyclic(n), trials=100, seed=7)
    elapsed = time.perf_counter() - start
    summary = summarize(reports)
    asserted = [r for r in reports if r.expect == HOLDS and r.mode == "assert"]
    unverified = [r for r in asserted if r.status != VERIFIED]
    witnesses = [r for r in reports if r.expect == FALSIFIABLE and r.status != VERIFIED]
    not_replayed = [r for r in witnesses if not replay(r.to_json())]
    ok = not unverified and not summary.unfalsified and not not_replayed and elapsed < 60
    report("verification-suite", ok,
           f"{len(asserted)} asserted checks verified ({len(unverified)} not), "
           f"{len(witnesses)} falsifiable witnesses replayed ({len(not_replayed)} not), "
           f"unfalsified {summary.unfalsified}, {elapsed:.1f} s (< 60 s)")


def test_density_formulas(report):
    n = 10_000
    prefix = [1 if isqrt(i) ** 2 == i else 0 for i in range(n)]
    # direct counts: squares below 10^4, and squares at indices 512..1023
    direct_stat = F(sum(1 for i in range(n) if isqrt(i) ** 2 == i), n)
    direct_lac = F(sum(1 for i in range(512, 1024) if isqrt(i) ** 2 == i), 512)
    stat = statistical_density(prefix, 0, F(1, 2), Q)
    lac = lacunary_density(prefix, LacunaryScheme.geometric(2, 10), 10, 0, F(1, 2), Q)
    ok = stat == direct_stat == F(1, 100) and lac == direct_lac == F(9, 512)
    report("density-formulas", ok, f"statistical {stat} (expected 1/100), "
                                   f"lacunary {lac} (expected 9/512)")


def test_cesaro_consistency(report):
    rng = random.Random(11)
    worst, bad = F(0), 0
    for _ in range(50):
        cycle = [F(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(rng.randint(1, 6))]
        x = EvPerSeq.periodic(Q, cycle)
        mean = evaluate(Cesaro(), x)
        assert mean == sum(cycle, F(0)) / len(cycle)
        # every length <= 6 divides 1200, so neighbouring n exercise the bound too
        for n in range(1195, 1206):
            gap = abs(running_mean(x, n) - mean)
            bound = len(cycle) * max(abs(t) for t in cycle) / n
            bad += gap > bound
            if bound:
                worst = max(worst, gap / bound)
    report("cesaro-consistency", bad == 0,
           f"50 cycles at n=1200 (and 1195..1205), {bad} outside the bound, "
           f"worst gap/bound {float(worst):.3f}")


def test_determinism(report):
    outputs = []
    for hashseed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        proc = subprocess.run([sys.executable, "-m", "gseq", "verify", "--seed", "7",
                               "--output", "json"], capture_output=True, env=env)
        outputs.append(proc.stdout)
    ok = outputs[0] == outputs[1] and outputs[0].count(b"\n") > 1
    report("determinism", ok, f"two verify runs, {len(outputs[0])} bytes each, "
                              f"byte-identical={outputs[0] == outputs[1]}")
