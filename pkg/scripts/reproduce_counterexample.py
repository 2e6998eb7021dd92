"""Reproduce the averaging-method counterexample with realizing sequences.

Under G = kernel 1/2,1/2 the sets {0} and {1} are closed, their union is
not, and closure is not idempotent.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gseq.methods import Kernel, evaluate
from gseq.sequences import RATIONALS
from gseq.topology import PointSet, closure_iterate, is_closed, realizing_sequence


@dataclass
class CounterexampleConfig:
    coefficients: tuple = (Fraction(1, 2), Fraction(1, 2))
    start: tuple = (Fraction(0), Fraction(1))
    iterates: int = 3


def main(cfg: CounterexampleConfig) -> None:
    G = Kernel(cfg.coefficients)
    A = PointSet.of(RATIONALS, cfg.start)
    for v in A:
        single = PointSet.of(RATIONALS, [v])
        print(f"{single} closed: {is_closed(G, single)}")
    print(f"{A} closed: {is_closed(G, A)}")
    previous = A
    for k, current in enumerate(closure_iterate(G, A, cfg.iterates), 1):
        print(f"closure^{k} = {current}")
        for v in current:
            if v not in previous:
                x = realizing_sequence(G, previous, v)
                print(f"  {RATIONALS.format(v)} <- x = {x}, G(x) = {RATIONALS.format(evaluate(G, x))}")
        previous = current


if __name__ == "__main__":
    main(CounterexampleConfig())
