"""Group models and eventually periodic sequences over them.

Two ambient groups are supported: the rationals under addition (usual order
topology) and the cyclic groups Z_n (discrete topology). Elements are plain
Python values: :class:`fractions.Fraction` on the rational line, ``int``
residues on Z_n. A :class:`GroupModel` supplies the arithmetic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Element = Union[Fraction, int]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_SEQ_RE = re.compile(r"^\s*pre\s*:\s*\[(.*?)\]\s*;\s*cyc\s*:\s*\[(.*?)\]\s*$")


class ModelMismatch(ValueError):
    """Operands live in different groups, or a scalar is illegal for the group."""


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` exactly. Decimal and float literals are rejected."""
    match = _RATIONAL_RE.match(str(text))
    if match is None:
        raise ValueError(f"not an exact rational: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class GroupModel:
    """The ambient abelian group X.

    ``kind`` is ``"rational"`` for the rational line or ``"cyclic"`` for Z_n,
    in which case ``modulus`` is n.
    """

    kind: str
    modulus: int = 0

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.modulus != 0:
                raise ValueError("the rational line takes no modulus")
        elif self.kind == "cyclic":
            if self.modulus < 2:
                raise ValueError(f"cyclic modulus must be >= 2, got {self.modulus}")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind == "cyclic"

    @property
    def name(self) -> str:
        return "q" if self.kind == "rational" else f"z{self.modulus}"

    @classmethod
    def from_name(cls, name: str) -> GroupModel:
        name = name.strip().lower()
        if name in ("q", "rational", "rationals"):
            return RATIONALS
        match = re.fullmatch(r"z_?(\d+)", name)
        if match is None:
            raise ValueError(f"unknown universe {name!r}; expected q or z<n>")
        return cyclic(int(match.group(1)))

    def elements(self) -> tuple[int, ...]:
        if not self.is_finite:
            raise ModelMismatch("the rational line has no finite element list")
        return tuple(range(self.modulus))

    def coerce(self, value) -> Element:
        if self.kind == "rational":
            if isinstance(value, float):
                raise TypeError("floating-point values are not accepted")
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise ModelMismatch(f"{value} is not a residue of Z_{self.modulus}")
            value = value.numerator
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"residue must be an integer, got {value!r}")
        return value % self.modulus

    def zero(self) -> Element:
        return Fraction(0) if self.kind == "rational" else 0

    def add(self, a: Element, b: Element) -> Element:
        if self.kind == "rational":
            return a + b
        return (a + b) % self.modulus

    def neg(self, a: Element) -> Element:
        if self.kind == "rational":
            return -a
        return (-a) % self.modulus

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def scalar(self, c) -> Fraction | int:
        """Validate a kernel coefficient for this group (integers only on Z_n)."""
        c = Fraction(c)
        if self.kind == "cyclic":
            if c.denominator != 1:
                raise ModelMismatch(f"coefficient {c} is not an integer; Z_{self.modulus} "
                                    "admits only integer multiples")
            return c.numerator
        return c

    def scale(self, c, a: Element) -> Element:
        c = self.scalar(c)
        if self.kind == "rational":
            return c * a
        return (c * a) % self.modulus

    def total(self, values: Iterable[Element]) -> Element:
        acc = self.zero()
        for v in values:
            acc = self.add(acc, v)
        return acc

    def parse(self, text: str) -> Element:
        value = parse_rational(text)
        if self.kind == "cyclic" and value.denominator != 1:
            raise ValueError(f"residue of Z_{self.modulus} must be an integer: {text!r}")
        return self.coerce(value)

    def format(self, value: Element) -> str:
        if self.kind == "rational":
            return format_rational(value)
        return str(value)


RATIONALS = GroupModel("rational")


def cyclic(n: int) -> GroupModel:
    return GroupModel("cyclic", n)


def _primitive_root(word: tuple) -> tuple:
    size = len(word)
    for p in range(1, size):
        if size % p == 0 and word[:p] * (size // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class EvPerSeq:
    """An eventually periodic sequence ``preamble + cycle + cycle + ...``.

    Instances are always stored in canonical form: the cycle is primitive and
    the preamble is as short as possible, so two sequences are equal iff they
    agree termwise.
    """

    model: GroupModel
    preamble: tuple
    cycle: tuple

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        pre = [self.model.coerce(v) for v in self.preamble]
        cyc = _primitive_root(tuple(self.model.coerce(v) for v in self.cycle))
        while pre and pre[-1] == cyc[-1]:
            pre.pop()
            cyc = cyc[-1:] + cyc[:-1]
        object.__setattr__(self, "preamble", tuple(pre))
        object.__setattr__(self, "cycle", cyc)

    @classmethod
    def constant(cls, model: GroupModel, value) -> EvPerSeq:
        return cls(model, (), (value,))

    @classmethod
    def periodic(cls, model: GroupModel, cycle: Sequence) -> EvPerSeq:
        return cls(model, (), tuple(cycle))

    def term(self, n: int) -> Element:
        if n < 0:
            raise IndexError(f"negative index {n}")
        k = len(self.preamble)
        if n < k:
            return self.preamble[n]
        return self.cycle[(n - k) % len(self.cycle)]

    def prefix(self, length: int) -> list[Element]:
        return [self.term(n) for n in range(length)]

    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def is_eventually_constant(self) -> bool:
        return len(self.cycle) == 1

    def values(self) -> frozenset:
        """Every value the sequence takes."""
        return frozenset(self.preamble) | frozenset(self.cycle)

    def _check(self, other: EvPerSeq) -> None:
        if self.model != other.model:
            raise ModelMismatch(f"cannot combine sequences over {self.model.name} "
                                f"and {other.model.name}")

    def __add__(self, other: EvPerSeq) -> EvPerSeq:
        self._check(other)
        k = max(len(self.preamble), len(other.preamble))
        p = lcm(len(self.cycle), len(other.cycle))
        add = self.model.add
        terms = [add(self.term(n), other.term(n)) for n in range(k + p)]
        return EvPerSeq(self.model, tuple(terms[:k]), tuple(terms[k:]))

    def __neg__(self) -> EvPerSeq:
        neg = self.model.neg
        return EvPerSeq(self.model, tuple(map(neg, self.preamble)),
                        tuple(map(neg, self.cycle)))

    def __sub__(self, other: EvPerSeq) -> EvPerSeq:
        return self + (-other)

    def map(self, func, model: GroupModel | None = None) -> EvPerSeq:
        """Apply ``func`` termwise (``f o x``)."""
        return EvPerSeq(model or self.model, tuple(func(v) for v in self.preamble),
                        tuple(func(v) for v in self.cycle))

    def shift(self, k: int = 1) -> EvPerSeq:
        """Drop the first ``k`` terms."""
        n = len(self.preamble)
        if k <= n:
            return EvPerSeq(self.model, self.preamble[k:], self.cycle)
        r = (k - n) % len(self.cycle)
        return EvPerSeq(self.model, (), self.cycle[r:] + self.cycle[:r])

    def __str__(self) -> str:
        return format_sequence(self)


def canonicalize(s: EvPerSeq) -> EvPerSeq:
    # construction already canonicalizes; kept as the named operation
    return EvPerSeq(s.model, s.preamble, s.cycle)


def term(s: EvPerSeq, n: int) -> Element:
    return s.term(n)


def add(s: EvPerSeq, t: EvPerSeq) -> EvPerSeq:
    return s + t


def negate(s: EvPerSeq) -> EvPerSeq:
    return -s


def format_sequence(s: EvPerSeq) -> str:
    fmt = s.model.format
    return (f"pre:[{','.join(map(fmt, s.preamble))}];"
            f"cyc:[{','.join(map(fmt, s.cycle))}]")


def parse_sequence(text: str, model: GroupModel) -> EvPerSeq:
    """Parse the textual form ``pre:[a,b];cyc:[c,d]``."""
    match = _SEQ_RE.match(text)
    if match is None:
        raise ValueError(f"malformed sequence {text!r}; expected pre:[...];cyc:[...]")
    pre, cyc = (tuple(model.parse(t) for t in part.split(",") if t.strip())
                for part in match.groups())
    if not cyc:
        raise ValueError("cycle must be nonempty")
    return EvPerSeq(model, pre, cyc)
