"""
Rational functions of one variable in partial-fraction form.

f(t) = sum_p sum_k c_{p,k} (t - p)^{-k} + sum_n a_n t^n

Coefficients and points are Fractions (exact) or complex numbers (numeric);
mixing them promotes to complex. Arithmetic stays in partial-fraction form,
so Laurent data at any point is read off without factoring.
"""
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from gaudin_lab import exact

Coefficients = Tuple[Any, ...]


def _norm_point(point: Any) -> Any:
    if isinstance(point, (int, Fraction)) and not isinstance(point, bool):
        return Fraction(point)
    c = complex(point)
    return c


def _trim(coeffs: Sequence[Any]) -> Coefficients:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _add_seq(a: Sequence[Any], b: Sequence[Any], scale: Any = 1) -> List[Any]:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        x = a[k] if k < len(a) else 0
        y = b[k] if k < len(b) else 0
        out.append(x + scale * y)
    return out


def binom_negative(l: int, n: int) -> int:
    """binom(-l, n) = (-1)^n binom(l + n - 1, n)."""
    return (-1) ** n * comb(l + n - 1, n)


def _synthetic_division(poly: Sequence[Any], a: Any) -> Tuple[List[Any], Any]:
    """Divide sum poly[n] t^n by (t - a); return (quotient, remainder)."""
    if not poly:
        return [], 0
    n = len(poly) - 1
    quotient = [0] * n
    carry = 0
    for k in range(n, 0, -1):
        carry = poly[k] + carry * a if k < n else poly[k]
        quotient[k - 1] = carry
    remainder = poly[0] + (carry * a if n > 0 else 0)
    return quotient, remainder


class RationalFunction:
    """
    A rational function stored as principal parts plus a polynomial part.

    Args:
        poles: point -> (c_1, ..., c_k), c_k the coefficient of (t - p)^{-k}.
        poly: (a_0, a_1, ...) polynomial coefficients.
    """

    __slots__ = ("poles", "poly")

    def __init__(self, poles: Optional[Mapping[Any, Sequence[Any]]] = None,
                 poly: Sequence[Any] = ()):
        clean: Dict[Any, Coefficients] = {}
        for p, coeffs in (poles or {}).items():
            key = _norm_point(p)
            merged = _add_seq(clean.get(key, ()), coeffs)
            trimmed = _trim(merged)
            if trimmed:
                clean[key] = trimmed
            else:
                clean.pop(key, None)
        self.poles = clean
        self.poly = _trim(poly)

    # -- constructors ----------------------------------------------------------

    @classmethod
    def constant(cls, value: Any) -> "RationalFunction":
        return cls({}, (value,))

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls()

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls({}, (0, 1))

    @classmethod
    def pole(cls, point: Any, order: int = 1, coeff: Any = 1) -> "RationalFunction":
        """coeff * (t - point)^{-order}."""
        if order == 0:
            return cls.constant(coeff)
        return cls({point: (0,) * (order - 1) + (coeff,)})

    @classmethod
    def lift(cls, value: Any) -> "RationalFunction":
        return value if isinstance(value, RationalFunction) else cls.constant(value)

    # -- basic queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.poles and not self.poly

    @property
    def is_exact(self) -> bool:
        values = list(self.poly) + [c for cs in self.poles.values() for c in cs]
        values += list(self.poles)
        return all(exact.is_exact(v) for v in values)

    @property
    def points(self) -> Tuple[Any, ...]:
        return tuple(self.poles)

    def pole_order(self, point: Any, tol: float = 0.0) -> int:
        coeffs = self.poles.get(_norm_point(point), ())
        order = 0
        for k, c in enumerate(coeffs, start=1):
            if abs(complex(c)) > tol:
                order = k
        return order

    def principal_part(self, point: Any) -> Coefficients:
        return self.poles.get(_norm_point(point), ())

    @property
    def poly_degree(self) -> int:
        return len(self.poly) - 1

    def order_at_infinity(self) -> int:
        """Pole order at infinity (degree of the polynomial part, or 0)."""
        return max(self.poly_degree, 0)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: Any) -> "RationalFunction":
        other = RationalFunction.lift(other)
        poles: Dict[Any, List[Any]] = {p: list(c) for p, c in self.poles.items()}
        for p, c in other.poles.items():
            poles[p] = _add_seq(poles.get(p, ()), c)
        return RationalFunction(poles, _add_seq(self.poly, other.poly))

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return self.scale(-1)

    def __sub__(self, other: Any) -> "RationalFunction":
        return self + (-RationalFunction.lift(other))

    def __rsub__(self, other: Any) -> "RationalFunction":
        return RationalFunction.lift(other) - self

    def scale(self, value: Any) -> "RationalFunction":
        if value == 0:
            return RationalFunction()
        return RationalFunction({p: [value * c for c in cs] for p, cs in self.poles.items()},
                                [value * c for c in self.poly])

    def __mul__(self, other: Any) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction()
        total = RationalFunction({}, _poly_mul(self.poly, other.poly))
        for p, cs in self.poles.items():
            for k, c in enumerate(cs, start=1):
                if c == 0:
                    continue
                if other.poly:
                    total = total + _pole_times_poly(p, k, other.poly).scale(c)
                for q, ds in other.poles.items():
                    for l, d in enumerate(ds, start=1):
                        if d != 0:
                            total = total + _pole_times_pole(p, k, q, l).scale(c * d)
        for q, ds in other.poles.items():
            if not self.poly:
                break
            for l, d in enumerate(ds, start=1):
                if d != 0:
                    total = total + _pole_times_poly(q, l, self.poly).scale(d)
        return total

    def __rmul__(self, other: Any) -> "RationalFunction":
        return self.scale(other)

    def __truediv__(self, other: Any) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            raise TypeError("division by a rational function is not supported")
        if exact.is_exact(other) and self.is_exact:
            return self.scale(1 / exact.frac(other))
        return self.scale(1 / other)

    def __pow__(self, n: int) -> "RationalFunction":
        result = RationalFunction.constant(Fraction(1))
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (int, Fraction, complex, float)):
                other = RationalFunction.constant(other)
            else:
                return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def close_to(self, other: "RationalFunction", tol: float) -> bool:
        return (self - other).max_coefficient() <= tol

    def max_coefficient(self) -> float:
        values = list(self.poly) + [c for cs in self.poles.values() for c in cs]
        return max((abs(complex(v)) for v in values), default=0.0)

    def chop(self, tol: float) -> "RationalFunction":
        """Drop numerically negligible coefficients."""
        def keep(c: Any) -> Any:
            return 0 if abs(complex(c)) <= tol else c
        return RationalFunction({p: [keep(c) for c in cs] for p, cs in self.poles.items()},
                                [keep(c) for c in self.poly])

    # -- calculus ----------------------------------------------------------------

    def derivative(self) -> "RationalFunction":
        poles = {p: [0] + [-k * c for k, c in enumerate(cs, start=1)]
                 for p, cs in self.poles.items()}
        poly = [n * a for n, a in enumerate(self.poly)][1:]
        return RationalFunction(poles, poly)

    def __call__(self, t: Any) -> Any:
        value: Any = 0
        for n, a in enumerate(self.poly):
            value = value + a * t ** n
        for p, cs in self.poles.items():
            d = t - p
            for k, c in enumerate(cs, start=1):
                value = value + c / d ** k
        return value

    def regular_taylor(self, point: Any, n_terms: int) -> List[Any]:
        """Taylor coefficients at ``point`` of f minus its principal part there."""
        point = _norm_point(point)
        out: List[Any] = [0] * n_terms
        shifted = list(self.poly)
        for n in range(n_terms):
            if not shifted:
                break
            shifted, rem = _synthetic_division(shifted, point)
            out[n] = out[n] + rem
        for q, cs in self.poles.items():
            if q == point:
                continue
            diff = point - q
            for l, c in enumerate(cs, start=1):
                if c == 0:
                    continue
                for n in range(n_terms):
                    out[n] = out[n] + c * binom_negative(l, n) * _inv_power(diff, l + n)
        return out

    def laurent_coefficient(self, point: Any, order: int) -> Any:
        """Coefficient of (t - point)^order in the Laurent expansion."""
        if order < 0:
            cs = self.principal_part(point)
            return cs[-order - 1] if -order <= len(cs) else 0
        return self.regular_taylor(point, order + 1)[order]

    def compose_inverse(self) -> "RationalFunction":
        """g(s) = f(1/s)."""
        total = RationalFunction()
        for n, a in enumerate(self.poly):
            if a == 0:
                continue
            total = total + (RationalFunction.constant(a) if n == 0
                             else RationalFunction.pole(Fraction(0), n, a))
        for p, cs in self.poles.items():
            for k, c in enumerate(cs, start=1):
                if c == 0:
                    continue
                if p == 0:
                    total = total + RationalFunction({}, [0] * k + [c])
                else:
                    # (1/s - p)^-k = s^k (-p)^-k (s - 1/p)^-k
                    factor = c * _inv_power(-p, k)
                    total = total + _pole_times_poly(_reciprocal(p), k, [0] * k + [factor])
        return total

    def to_json(self) -> Dict[str, Any]:
        return {
            "poles": [[exact.scalar_json(p), k, exact.scalar_json(c)]
                      for p, cs in sorted(self.poles.items(), key=lambda pc: _sort_key(pc[0]))
                      for k, c in enumerate(cs, start=1) if c != 0],
            "polynomial": [exact.scalar_json(a) for a in self.poly],
        }

    def __repr__(self) -> str:
        parts = []
        for p, cs in self.poles.items():
            for k, c in enumerate(cs, start=1):
                if c != 0:
                    parts.append(f"{c}/(t-{p})^{k}")
        for n, a in enumerate(self.poly):
            if a != 0:
                parts.append(f"{a}*t^{n}")
        return "RationalFunction(" + (" + ".join(parts) or "0") + ")"


def _sort_key(point: Any) -> Tuple[float, float]:
    c = complex(point)
    return (c.real, c.imag)


def _reciprocal(value: Any) -> Any:
    if exact.is_exact(value):
        return 1 / exact.frac(value)
    return 1 / complex(value)


def _inv_power(value: Any, n: int) -> Any:
    return _reciprocal(value) ** n


def _poly_mul(a: Sequence[Any], b: Sequence[Any]) -> List[Any]:
    if not a or not b:
        return []
    out: List[Any] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _pole_times_poly(p: Any, k: int, poly: Sequence[Any]) -> RationalFunction:
    """(t - p)^{-k} * poly(t), by repeated synthetic division."""
    remainders = []
    current = list(poly)
    for _ in range(k):
        current, rem = _synthetic_division(current, p)
        remainders.append(rem)
    # poly = (t-p)^k current + sum_n r_n (t-p)^n
    principal = [0] * k
    for n, r in enumerate(remainders):
        principal[k - n - 1] = r
    return RationalFunction({p: principal}, current)


def _pole_times_pole(a: Any, k: int, b: Any, l: int) -> RationalFunction:
    """(t - a)^{-k} (t - b)^{-l} in partial fractions."""
    if a == b:
        return RationalFunction.pole(a, k + l, Fraction(1))
    at_a = [0] * k
    for n in range(k):
        at_a[k - n - 1] = binom_negative(l, n) * _inv_power(a - b, l + n)
    at_b = [0] * l
    for n in range(l):
        at_b[l - n - 1] = binom_negative(k, n) * _inv_power(b - a, k + n)
    return RationalFunction({a: at_a, b: at_b})


def as_rational(value: Any) -> RationalFunction:
    return RationalFunction.lift(value)
