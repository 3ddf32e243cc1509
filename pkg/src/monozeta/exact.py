"""Exact arithmetic: univariate polynomials and rational functions over Q,
roots of unity as fractions of a turn, and formal cyclotomic products.

Scalars are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]


class ExactArithmeticError(ValueError):
    pass


def as_fraction(x: Scalar | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def format_rational(x: Scalar) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ExactArithmeticError(f"malformed rational {text!r}") from exc


def frac_part(x: Fraction) -> Fraction:
    """Class of ``x`` in [0, 1)."""
    return x - math.floor(x)


# ---------------------------------------------------------------------------
# Polynomials


def _strip(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, init=False, repr=False)
class Poly:
    """Dense univariate polynomial, coefficients indexed by degree."""

    coeffs: tuple[Fraction, ...] = ()

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def linear(cls, c0: Scalar, c1: Scalar) -> "Poly":
        """The polynomial ``c0 + c1*s``."""
        return cls((c0, c1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Scalar) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return Poly(), self
        quot = [Fraction(0)] * dq
        lead = other.lead
        for k in range(dq - 1, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[: other.degree])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def scale(self, c: Scalar) -> "Poly":
        return self * Fraction(c)

    def deflate(self, root: Fraction) -> "Poly":
        """Quotient by ``(s - root)``; the remainder must vanish."""
        q, r = divmod(self, Poly((-root, 1)))
        if not r.is_zero():
            raise ExactArithmeticError(f"{format_rational(root)} is not a root")
        return q

    def root_multiplicity(self, root: Fraction) -> int:
        if self.is_zero():
            raise ExactArithmeticError("zero polynomial has every root")
        k, p = 0, self
        while p(root) == 0:
            p = p.deflate(root)
            k += 1
        return k

    def integer_primitive(self) -> tuple[int, ...]:
        """Coefficients scaled to coprime integers with positive leading term."""
        if self.is_zero():
            return ()
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return tuple(i // g for i in ints)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"


def _as_poly(x: "Poly | Scalar") -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def format_poly(p: Poly, var: str = "s") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mag = format_rational(abs(c))
        if k == 0:
            term = mag
        else:
            mono = var if k == 1 else f"{var}^{k}"
            term = mono if mag == "1" else f"{mag}{mono}"
        parts.append(("-" if c < 0 else "+", term))
    sign, first = parts[0]
    out = ("-" if sign == "-" else "") + first
    for sign, term in parts[1:]:
        out += f"{sign}{term}"
    return out


# ---------------------------------------------------------------------------
# Rational functions


@dataclass(frozen=True)
class RationalFunction:
    """Normalized quotient: coprime, denominator monic.

    Build instances through :func:`rf_normalize`; the constructor trusts its
    inputs.
    """

    num: Poly
    den: Poly

    @classmethod
    def const(cls, c: Scalar) -> "RationalFunction":
        return cls(Poly.const(c), Poly.const(1))

    def __call__(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {format_rational(x)}")
        return self.num(x) / d

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return rf_normalize(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return rf_normalize(self.num * other.num, self.den * other.den)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def to_json(self) -> dict:
        return {
            "num": [format_rational(c) for c in self.num.coeffs],
            "den": [format_rational(c) for c in self.den.coeffs],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "RationalFunction":
        num = Poly(parse_rational(str(c)) for c in doc["num"])
        den = Poly(parse_rational(str(c)) for c in doc["den"])
        return rf_normalize(num, den)


def rf_normalize(num: Poly, den: Poly) -> RationalFunction:
    if den.is_zero():
        raise ExactArithmeticError("division by zero polynomial")
    if num.is_zero():
        return RationalFunction(Poly(), Poly.const(1))
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = num // g, den // g
    lead = den.lead
    return RationalFunction(num * (1 / lead), den * (1 / lead))


def rational_roots(p: Poly) -> list[tuple[Fraction, int]]:
    """All rational roots of ``p`` with multiplicities, ascending.

    Whatever degree the returned multiplicities do not account for belongs to
    factors without rational roots.
    """
    if p.is_zero():
        raise ExactArithmeticError("zero polynomial has every root")
    found: dict[Fraction, int] = {}
    rest = p
    # numeric guesses first; each is confirmed exactly before use
    if rest.degree > 0:
        ints = rest.integer_primitive()
        lead = abs(ints[-1])
        for z in np.roots([float(c) for c in reversed(ints)]):
            if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
                continue
            cand = Fraction(float(z.real)).limit_denominator(lead)
            if cand not in found and rest(cand) == 0:
                k = rest.root_multiplicity(cand)
                for _ in range(k):
                    rest = rest.deflate(cand)
                found[cand] = k
    if rest.degree > 0:
        for cand in _rational_root_candidates(rest):
            if rest(cand) == 0:
                k = rest.root_multiplicity(cand)
                for _ in range(k):
                    rest = rest.deflate(cand)
                found[cand] = found.get(cand, 0) + k
            if rest.degree == 0:
                break
    return sorted(found.items())


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _rational_root_candidates(p: Poly) -> Iterable[Fraction]:
    ints = p.integer_primitive()
    if ints[0] == 0:
        yield Fraction(0)
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
        if len(ints) == 1:
            return
    seen = set()
    for q in _divisors(ints[-1]):
        for a in _divisors(ints[0]):
            for cand in (Fraction(a, q), Fraction(-a, q)):
                if cand not in seen:
                    seen.add(cand)
                    yield cand


def rf_poles(r: RationalFunction) -> list[tuple[Fraction, int]]:
    """Rational poles of a normalized rational function, ascending."""
    roots = rational_roots(r.den)
    if sum(k for _, k in roots) != r.den.degree:
        raise ExactArithmeticError("non-linear denominator factor")
    return roots


def rf_laurent_leading(r: RationalFunction, s0: Scalar, k: int) -> Fraction:
    """Coefficient of ``(s - s0)^(-k)`` at a pole of order exactly ``k``."""
    s0 = Fraction(s0)
    order = r.den.root_multiplicity(s0) if r.den(s0) == 0 else 0
    if order != k:
        raise ExactArithmeticError(
            f"pole order mismatch at {format_rational(s0)}: expected {k}, found {order}"
        )
    rest = r.den
    for _ in range(k):
        rest = rest.deflate(s0)
    return r.num(s0) / rest(s0)


# ---------------------------------------------------------------------------
# Roots of unity and cyclotomic products


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """``exp(2*pi*i*turns)`` with ``turns`` reduced into [0, 1)."""

    turns: Fraction

    def __post_init__(self):
        t = Fraction(self.turns)
        object.__setattr__(self, "turns", frac_part(t))

    @property
    def order(self) -> int:
        return self.turns.denominator

    @classmethod
    def from_exponent(cls, s0: Scalar) -> "RootOfUnity":
        """The root ``exp(2*pi*i*s0)``."""
        return cls(Fraction(s0))

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        return cls(parse_rational(text))

    def __str__(self) -> str:
        return format_rational(self.turns)


@dataclass(frozen=True)
class CyclotomicDivisor:
    """Formal product of ``(t^N - 1)^e`` over positive integers ``N``."""

    factors: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, e in sorted(self.factors.items()):
            if n < 1:
                raise ExactArithmeticError(f"cyclotomic factor needs N >= 1, got {n}")
            if e:
                clean[int(n)] = int(e)
        object.__setattr__(self, "factors", clean)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "CyclotomicDivisor":
        acc: dict[int, int] = {}
        for n, e in pairs:
            acc[n] = acc.get(n, 0) + e
        return cls(acc)

    def __mul__(self, other: "CyclotomicDivisor") -> "CyclotomicDivisor":
        acc = dict(self.factors)
        for n, e in other.factors.items():
            acc[n] = acc.get(n, 0) + e
        return CyclotomicDivisor(acc)

    def degree(self) -> int:
        return sum(n * e for n, e in self.factors.items())

    def to_json(self) -> list[list[int]]:
        return [[n, e] for n, e in self.factors.items()]

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "".join(
            f"(t^{n}-1)" + ("" if e == 1 else f"^{e}") for n, e in self.factors.items()
        )


def cyc_order_at(z: CyclotomicDivisor, d: int) -> int:
    """Order of vanishing at a primitive ``d``-th root of unity (negative = pole)."""
    return sum(e for n, e in z.factors.items() if n % d == 0)


def divisors(n: int) -> list[int]:
    return _divisors(n)
