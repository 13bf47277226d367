"""Valued base fields with exact arithmetic.

Two desk-scale fields are provided: the rationals with a p-adic
valuation, and rational functions Q(t) with the t-adic valuation.
p-adic elements are plain ``Fraction`` objects; t-adic elements are
:class:`RatFunc`, a reduced fraction of polynomials with monic
denominator, so equality is structural and values hash.

Both fields expose the same small surface: ``coerce``, ``val``,
``truncate`` (canonical expansion below a cut level), residue-field
helpers, and JSON round-tripping for scene files.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence, Union

from .errors import PreconditionError, SceneError
from .gamma import INF, Gamma, Rational

__all__ = ["PAdicField", "TAdicField", "RatFunc", "ValuedField", "field_from_json"]


def _poly_trim(c: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _poly_mul(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(tuple(out))


def _poly_divmod(
    a: tuple[Fraction, ...], b: tuple[Fraction, ...]
) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for top in range(len(a) - 1, len(b) - 2, -1):
        factor = rem[top] * inv_lead
        if factor:
            quot[top - len(b) + 1] = factor
            for j in range(len(b)):
                rem[top - len(b) + 1 + j] -= factor * b[j]
    return _poly_trim(tuple(quot)), _poly_trim(tuple(rem))


def _poly_gcd(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = tuple(x / lead for x in a)
    return a


class RatFunc:
    """A reduced rational function in t over Q with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[Rational] = (), den: Sequence[Rational] = (1,)):
        n = _poly_trim(tuple(Fraction(x) for x in num))
        d = _poly_trim(tuple(Fraction(x) for x in den))
        if not d:
            raise ZeroDivisionError("rational function with zero denominator")
        if not n:
            self.num, self.den = (), (Fraction(1),)
            return
        g = _poly_gcd(n, d)
        if len(g) > 1:
            n, _ = _poly_divmod(n, g)
            d, _ = _poly_divmod(d, g)
        lead = d[-1]
        self.num = tuple(x / lead for x in n)
        self.den = tuple(x / lead for x in d)

    @staticmethod
    def t() -> "RatFunc":
        return RatFunc((0, 1))

    @staticmethod
    def _coerce(x: "RatFunc | Rational") -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc((x,))
        return NotImplemented  # type: ignore[return-value]

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        o = RatFunc._coerce(other)  # type: ignore[arg-type]
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        left, right = _pad(_poly_mul(self.num, o.den), _poly_mul(o.num, self.den))
        num = tuple(x + y for x, y in zip(left, right))
        return RatFunc(num, _poly_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(tuple(-x for x in self.num), self.den)

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc(_poly_mul(self.num, o.num), _poly_mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(_poly_mul(self.num, o.den), _poly_mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return 1 / (self ** (-k))
        out = RatFunc((1,))
        for _ in range(k):
            out = out * self
        return out

    def order(self) -> "int | None":
        """t-adic order; None for the zero function."""
        if not self.num:
            return None
        n = next(i for i, c in enumerate(self.num) if c)
        d = next(i for i, c in enumerate(self.den) if c)
        return n - d

    def series(self, upto: int) -> dict[int, Fraction]:
        """Laurent coefficients a_i for all i < upto (finitely many nonzero)."""
        if not self.num:
            return {}
        k = next(i for i, c in enumerate(self.num) if c)
        l = next(i for i, c in enumerate(self.den) if c)
        n0 = self.num[k:]
        d0 = self.den[l:]
        shift = k - l
        count = upto - shift
        if count <= 0:
            return {}
        coeffs: list[Fraction] = []
        for j in range(count):
            acc = n0[j] if j < len(n0) else Fraction(0)
            for i in range(max(0, j - len(d0) + 1), j):
                acc -= coeffs[i] * d0[j - i]
            coeffs.append(acc / d0[0])
        return {j + shift: c for j, c in enumerate(coeffs) if c}

    def __repr__(self) -> str:
        def side(c: tuple[Fraction, ...]) -> str:
            if not c:
                return "0"
            parts = []
            for i, x in enumerate(c):
                if not x:
                    continue
                if i == 0:
                    parts.append(str(x))
                elif i == 1:
                    parts.append(f"{x}*t" if x != 1 else "t")
                else:
                    parts.append(f"{x}*t^{i}" if x != 1 else f"t^{i}")
            return " + ".join(parts)

        if self.den == (Fraction(1),):
            return f"RatFunc({side(self.num)})"
        return f"RatFunc(({side(self.num)})/({side(self.den)}))"


def _pad(a: tuple, b: tuple) -> tuple[tuple, tuple]:
    n = max(len(a), len(b))
    return (
        a + (Fraction(0),) * (n - len(a)),
        b + (Fraction(0),) * (n - len(b)),
    )


def _int_val(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero integer")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PAdicField:
    """Q with the p-adic valuation; value group Z inside Q."""

    kind = "padic"

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2:
            raise ValueError(f"p not prime: {p!r}")
        for d in range(2, int(p**0.5) + 1):
            if p % d == 0:
                raise ValueError(f"p not prime: {p}")
        self.p = p
        self.residue_char = p

    def __repr__(self) -> str:
        return f"PAdicField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PAdicField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("padic", self.p))

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise PreconditionError(f"not a p-adic field element: {x!r}")

    def val(self, a) -> Gamma:
        a = self.coerce(a)
        if a == 0:
            return INF
        return Gamma(_int_val(a.numerator, self.p) - _int_val(a.denominator, self.p))

    def uniformizer_pow(self, k: int) -> Fraction:
        return Fraction(self.p) ** k

    def residue(self, a) -> int:
        """Image in F_p of an element of nonnegative valuation, as 0..p-1."""
        a = self.coerce(a)
        if self.val(a) < 0:
            raise PreconditionError("residue of an element with negative valuation")
        num = a.numerator % self.p
        den = a.denominator % self.p
        return (num * pow(den, -1, self.p)) % self.p

    def truncate(self, a, level: "Gamma | Rational") -> Fraction:
        """Canonical digit expansion of ``a`` below ``level``.

        The result r is the unique finite digit sum with val(a - r) >= level,
        so centers of equal balls truncate identically.
        """
        a = self.coerce(a)
        level = level if isinstance(level, Gamma) else Gamma(level)
        if level.is_inf:
            return a
        out = Fraction(0)
        work = a
        while work != 0:
            i = _int_val(work.numerator, self.p) - _int_val(work.denominator, self.p)
            if i >= level.finite:
                break
            digit = self.residue(work / Fraction(self.p) ** i)
            term = Fraction(digit) * Fraction(self.p) ** i
            out += term
            work -= term
        return out

    def elem_to_json(self, a) -> str:
        return str(self.coerce(a))

    def elem_from_json(self, obj) -> Fraction:
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                return Fraction(obj)
            except (ValueError, ZeroDivisionError) as exc:
                raise SceneError(f"bad rational literal {obj!r}") from exc
        raise SceneError(f"bad p-adic element {obj!r}")

    def sort_key(self, a):
        a = self.coerce(a)
        return (a.numerator, a.denominator)

    def to_json(self) -> dict:
        return {"kind": "padic", "p": self.p}


class TAdicField:
    """Q(t) with the t-adic valuation; value group Z inside Q."""

    kind = "tadic"

    def __init__(self) -> None:
        self.residue_char = 0

    def __repr__(self) -> str:
        return "TAdicField()"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TAdicField)

    def __hash__(self) -> int:
        return hash("tadic")

    @property
    def zero(self) -> RatFunc:
        return RatFunc()

    @property
    def one(self) -> RatFunc:
        return RatFunc((1,))

    def coerce(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction)):
            return RatFunc((x,))
        raise PreconditionError(f"not a t-adic field element: {x!r}")

    def val(self, a) -> Gamma:
        a = self.coerce(a)
        o = a.order()
        return INF if o is None else Gamma(o)

    def uniformizer_pow(self, k: int) -> RatFunc:
        return RatFunc.t() ** k

    def residue(self, a) -> Fraction:
        """Value at t = 0 of an element of nonnegative valuation."""
        a = self.coerce(a)
        v = self.val(a)
        if v < 0:
            raise PreconditionError("residue of an element with negative valuation")
        if v > 0:
            return Fraction(0)
        return a.series(1)[0]

    def truncate(self, a, level: "Gamma | Rational") -> RatFunc:
        a = self.coerce(a)
        level = level if isinstance(level, Gamma) else Gamma(level)
        if level.is_inf:
            return a
        cut = math.ceil(level.finite)
        coeffs = a.series(cut)
        coeffs = {i: c for i, c in coeffs.items() if Fraction(i) < level.finite}
        if not coeffs:
            return RatFunc()
        low = min(coeffs)
        if low >= 0:
            num = [Fraction(0)] * (max(coeffs) + 1)
            for i, c in coeffs.items():
                num[i] = c
            return RatFunc(num)
        num = [Fraction(0)] * (max(coeffs) - low + 1)
        for i, c in coeffs.items():
            num[i - low] = c
        den = [Fraction(0)] * (-low) + [Fraction(1)]
        return RatFunc(num, den)

    def elem_to_json(self, a):
        a = self.coerce(a)
        if a.den == (Fraction(1),) and len(a.num) <= 1:
            return str(a.num[0]) if a.num else "0"
        return {
            "num": [str(c) for c in a.num],
            "den": [str(c) for c in a.den],
        }

    def elem_from_json(self, obj) -> RatFunc:
        if isinstance(obj, int):
            return RatFunc((obj,))
        if isinstance(obj, str):
            try:
                return RatFunc((Fraction(obj),))
            except (ValueError, ZeroDivisionError) as exc:
                raise SceneError(f"bad rational literal {obj!r}") from exc
        if isinstance(obj, dict) and set(obj) <= {"num", "den"}:
            try:
                num = [Fraction(c) for c in obj.get("num", [])]
                den = [Fraction(c) for c in obj.get("den", ["1"])]
                return RatFunc(num, den)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise SceneError(f"bad t-adic element {obj!r}") from exc
        raise SceneError(f"bad t-adic element {obj!r}")

    def sort_key(self, a):
        a = self.coerce(a)
        return (len(a.num), len(a.den), a.num, a.den)

    def to_json(self) -> dict:
        return {"kind": "tadic"}


ValuedField = Union[PAdicField, TAdicField]


def field_from_json(obj) -> ValuedField:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SceneError(f"bad field description {obj!r}")
    kind = obj["kind"]
    if kind == "padic":
        p = obj.get("p")
        if not isinstance(p, int):
            raise SceneError("padic field needs an integer p")
        try:
            return PAdicField(p)
        except ValueError as exc:
            raise SceneError(str(exc)) from exc
    if kind == "tadic":
        return TAdicField()
    raise SceneError(f"unknown field kind {kind!r}")
