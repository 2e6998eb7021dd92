"""Methods of sequential convergence and the density estimators.

A method is an additive partial function from sequences to group elements.
:func:`evaluate` returns ``None`` when a sequence lies outside the method's
domain; that is an ordinary outcome, not an error.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .sequences import (
    Element,
    EvPerSeq,
    GroupModel,
    ModelMismatch,
    format_rational,
    parse_rational,
)


class UnsupportedMethod(ValueError):
    """The method cannot be used with the requested group or operation."""


class Method:
    """Base class of the method descriptors."""

    def to_json(self) -> dict:
        raise NotImplementedError

    def __str__(self) -> str:
        return format_method(self)


@dataclass(frozen=True)
class Lim(Method):
    def to_json(self) -> dict:
        return {"kind": "lim"}


@dataclass(frozen=True)
class Cesaro(Method):
    def to_json(self) -> dict:
        return {"kind": "cesaro"}


@dataclass(frozen=True)
class Kernel(Method):
    """Sliding kernel ``y_n = sum_j c_j x_{n+j}`` followed by the ordinary limit."""

    coefficients: tuple

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("kernel needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def width(self) -> int:
        return len(self.coefficients)

    def to_json(self) -> dict:
        return {"kind": "kernel",
                "coefficients": [format_rational(c) for c in self.coefficients]}


@dataclass(frozen=True)
class MethodSum(Method):
    left: Method
    right: Method

    def to_json(self) -> dict:
        return {"kind": "sum", "left": self.left.to_json(), "right": self.right.to_json()}


AVERAGING = Kernel((Fraction(1, 2), Fraction(1, 2)))


def _check_model(G: Method, model: GroupModel) -> None:
    if isinstance(G, Cesaro) and model.kind != "rational":
        raise UnsupportedMethod("the Cesaro method is only defined on the rational line")
    if isinstance(G, Kernel):
        for c in G.coefficients:
            model.scalar(c)
    if isinstance(G, MethodSum):
        _check_model(G.left, model)
        _check_model(G.right, model)


def apply_kernel(coefficients: Sequence, x: EvPerSeq) -> EvPerSeq:
    """The transformed sequence ``y_n = sum_j c_j x_{n+j}``."""
    model = x.model
    k, p = len(x.preamble), len(x.cycle)
    ys = []
    for n in range(k + p):
        acc = model.zero()
        for j, c in enumerate(coefficients):
            acc = model.add(acc, model.scale(c, x.term(n + j)))
        ys.append(acc)
    return EvPerSeq(model, tuple(ys[:k]), tuple(ys[k:]))


def _evaluate(G: Method, x: EvPerSeq) -> Optional[Element]:
    if isinstance(G, Lim):
        return x.cycle[0] if x.is_eventually_constant else None
    if isinstance(G, Kernel):
        y = apply_kernel(G.coefficients, x)
        return y.cycle[0] if y.is_eventually_constant else None
    if isinstance(G, Cesaro):
        return sum(x.cycle, Fraction(0)) / len(x.cycle)
    if isinstance(G, MethodSum):
        a = _evaluate(G.left, x)
        if a is None:
            return None
        b = _evaluate(G.right, x)
        if b is None:
            return None
        return x.model.add(a, b)
    raise TypeError(f"not a method: {G!r}")


def evaluate(G: Method, x: EvPerSeq) -> Optional[Element]:
    """G(x), or ``None`` when x is not G-convergent."""
    _check_model(G, x.model)
    return _evaluate(G, x)


def in_domain(G: Method, x: EvPerSeq) -> bool:
    return evaluate(G, x) is not None


def constant_gain(G: Method) -> Fraction:
    """The factor by which G scales a constant sequence.

    Every descriptor kind maps the constant sequence ``a`` to ``gain * a``,
    and constant sequences are always in the domain.
    """
    if isinstance(G, (Lim, Cesaro)):
        return Fraction(1)
    if isinstance(G, Kernel):
        return sum(G.coefficients, Fraction(0))
    if isinstance(G, MethodSum):
        return constant_gain(G.left) + constant_gain(G.right)
    raise TypeError(f"not a method: {G!r}")


def is_regular(G: Method, model: GroupModel | None = None) -> bool:
    """Whether G agrees with ``lim`` on every convergent sequence.

    A convergent eventually periodic sequence is eventually constant, and
    every descriptor kind acts on it through its tail, so regularity reduces
    to the gain on constants being one. For sliding kernels this is the unit
    row sum; the remaining Silverman-Toeplitz conditions hold automatically.
    Passing a cyclic ``model`` compares the gain modulo n instead, since e.g.
    ``kernel:3`` is the identity on Z_2.
    """
    gain = constant_gain(G)
    if model is not None and model.kind == "cyclic":
        _check_model(G, model)
        return gain.numerator % model.modulus == 1 % model.modulus
    return gain == 1


def running_mean(x: EvPerSeq, n: int) -> Fraction:
    """Mean of the first ``n`` terms."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(x.prefix(n), Fraction(0)) / n


# --- density estimators -------------------------------------------------

def _outside(model: GroupModel, value: Element, ell: Element,
             radius: Optional[Fraction]) -> bool:
    diff = model.sub(value, ell)
    if model.kind == "cyclic":
        if radius is not None:
            raise ModelMismatch("Z_n is discrete; pass radius=None (U = {0})")
        return diff != 0
    if radius is None or radius <= 0:
        raise ValueError("a positive radius is required on the rational line")
    return abs(diff) >= radius


def statistical_density(prefix: Sequence, ell, radius: Optional[Fraction],
                        model: GroupModel) -> Fraction:
    """``(1/n) |{k <= n : x_k - ell not in U}|`` with n = len(prefix).

    ``prefix[k-1]`` is the term x_k. U is the open ball of ``radius`` about 0
    on the rational line and ``{0}`` on Z_n (``radius=None``).
    """
    if not prefix:
        raise ValueError("prefix must be nonempty")
    ell = model.coerce(ell)
    bad = sum(1 for v in prefix if _outside(model, model.coerce(v), ell, radius))
    return Fraction(bad, len(prefix))


@dataclass(frozen=True)
class LacunaryScheme:
    """Breakpoints ``k_1 < k_2 < ...`` (``k_0 = 0`` implied)."""

    breakpoints: tuple

    def __post_init__(self) -> None:
        ks = tuple(int(k) for k in self.breakpoints)
        if not ks:
            raise ValueError("at least one breakpoint is required")
        if ks[0] <= 0 or any(a >= b for a, b in zip(ks, ks[1:])):
            raise ValueError("breakpoints must be strictly increasing positive integers")
        object.__setattr__(self, "breakpoints", ks)

    @classmethod
    def geometric(cls, ratio: int, count: int) -> LacunaryScheme:
        return cls(tuple(ratio ** r for r in range(1, count + 1)))

    def interval(self, r: int) -> tuple[int, int]:
        """``I_r = (k_{r-1}, k_r]`` as the pair ``(k_{r-1}, k_r)``."""
        if not 1 <= r <= len(self.breakpoints):
            raise IndexError(f"r={r} outside the covered range 1..{len(self.breakpoints)}")
        lo = self.breakpoints[r - 2] if r >= 2 else 0
        return lo, self.breakpoints[r - 1]

    def to_json(self) -> dict:
        return {"breakpoints": list(self.breakpoints)}


def lacunary_density(prefix: Sequence, theta: LacunaryScheme, r: int, ell,
                     radius: Optional[Fraction], model: GroupModel) -> Fraction:
    """``(1/h_r) |{k in I_r : x_k - ell not in U}|``, with ``prefix[k-1] = x_k``."""
    lo, hi = theta.interval(r)
    if hi > len(prefix):
        raise IndexError(f"k_{r}={hi} exceeds the prefix length {len(prefix)}")
    ell = model.coerce(ell)
    block = prefix[lo:hi]
    bad = sum(1 for v in block if _outside(model, model.coerce(v), ell, radius))
    return Fraction(bad, hi - lo)


# --- textual forms ------------------------------------------------------

def method_from_json(doc) -> Method:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError(f"malformed method document: {doc!r}")
    kind = doc["kind"]
    if kind == "lim":
        return Lim()
    if kind == "cesaro":
        return Cesaro()
    if kind == "kernel":
        coeffs = doc.get("coefficients")
        if not coeffs:
            raise ValueError("kernel requires a nonempty coefficient list")
        return Kernel(tuple(parse_rational(str(c)) for c in coeffs))
    if kind == "sum":
        return MethodSum(method_from_json(doc["left"]), method_from_json(doc["right"]))
    raise ValueError(f"unknown method kind {kind!r}")


def parse_method(text: str) -> Method:
    """Accept a JSON descriptor or the compact form.

    Compact forms: ``lim``, ``cesaro``, ``kernel:1/2,1/2`` and
    ``sum(<method>;<method>)``.
    """
    text = text.strip()
    if text.startswith("{"):
        return method_from_json(text)
    low = text.lower()
    if low == "lim":
        return Lim()
    if low == "cesaro":
        return Cesaro()
    if low.startswith("kernel:"):
        parts = [p for p in text.split(":", 1)[1].split(",")]
        if not parts or any(not p.strip() for p in parts):
            raise ValueError(f"malformed kernel {text!r}")
        return Kernel(tuple(parse_rational(p) for p in parts))
    if low.startswith("sum(") and low.endswith(")"):
        inner = text[4:-1]
        depth = 0
        for i, ch in enumerate(inner):
            depth += ch == "("
            depth -= ch == ")"
            if ch == ";" and depth == 0:
                return MethodSum(parse_method(inner[:i]), parse_method(inner[i + 1:]))
        raise ValueError(f"sum needs two methods separated by ';': {text!r}")
    raise ValueError(f"unknown method {text!r}")


def format_method(G: Method) -> str:
    if isinstance(G, Lim):
        return "lim"
    if isinstance(G, Cesaro):
        return "cesaro"
    if isinstance(G, Kernel):
        return "kernel:" + ",".join(format_rational(c) for c in G.coefficients)
    if isinstance(G, MethodSum):
        return f"sum({format_method(G.left)};{format_method(G.right)})"
    raise TypeError(f"not a method: {G!r}")


def check_compatible(G: Method, model: GroupModel) -> None:
    """Raise unless G can act on sequences over ``model``."""
    _check_model(G, model)
