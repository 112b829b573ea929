"""Exact coefficient functions on C^2 minus the origin.

A :class:`CoeffExpr` is ``N / r2**k`` where ``r2 = z1*zb1 + z2*zb2`` and ``N`` is
a polynomial in the four coordinate symbols ``z1, zb1, z2, zb2`` with
Gaussian-rational coefficients.  Opaque real constants (``pi``, ``lntau`` and any
user-named constant) ride along in the monomials with integer exponents, so
``1/(2*pi)`` is an ordinary coefficient.  Since ``r2`` is irreducible, the
representation with minimal ``k`` is unique, which makes equality decidable.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Mapping

__all__ = [
    "GaussQ",
    "CoeffExpr",
    "DenominatorError",
    "const",
    "sym",
    "Z1",
    "ZB1",
    "Z2",
    "ZB2",
    "R2",
    "PI",
    "LNTAU",
    "ZERO",
    "ONE",
    "I",
]


class DenominatorError(ValueError):
    """Raised when a division would leave the ring of r2-power denominators."""


class GaussQ:
    """Gaussian rational ``re + i*im`` with exact :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x: Any) -> "GaussQ":
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x))
        if isinstance(x, float):
            return cls(Fraction(x))
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            return cls(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} to a Gaussian rational")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        try:
            o = GaussQ.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __add__(self, o: "GaussQ") -> "GaussQ":
        return GaussQ(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "GaussQ") -> "GaussQ":
        return GaussQ(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GaussQ":
        return GaussQ(-self.re, -self.im)

    def __mul__(self, o: "GaussQ") -> "GaussQ":
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def inverse(self) -> "GaussQ":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussQ(self.re / n, -self.im / n)

    def conjugate(self) -> "GaussQ":
        return GaussQ(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


# monomial key: (e_z1, e_zb1, e_z2, e_zb2, ((symbol, exponent), ...))
Mono = tuple
_ONE_MONO: Mono = (0, 0, 0, 0, ())
_GQ_ONE = GaussQ(1)
_GQ_ZERO = GaussQ(0)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    sa, sb = a[4], b[4]
    if not sa:
        s = sb
    elif not sb:
        s = sa
    else:
        d = dict(sa)
        for name, e in sb:
            v = d.get(name, 0) + e
            if v:
                d[name] = v
            else:
                d.pop(name, None)
        s = tuple(sorted(d.items()))
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], s)


def _poly_add(p: dict, q: dict, sign: int = 1) -> dict:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m)
        v = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = _mono_mul(ma, mb)
            v = out.get(m)
            c = ca * cb
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


_R2_POLY = {(1, 1, 0, 0, ()): _GQ_ONE, (0, 0, 1, 1, ()): _GQ_ONE}


def _poly_r2_pow(k: int) -> dict:
    p = {_ONE_MONO: _GQ_ONE}
    for _ in range(k):
        p = _poly_mul(p, _R2_POLY)
    return p


def _divide_by_r2(p: dict) -> dict | None:
    """Exact quotient ``p / r2`` or ``None`` if r2 does not divide ``p``.

    Division by a single polynomial in lex order (z1 > zb1 > z2 > zb2): the
    leading term of a multiple of r2 is always divisible by z1*zb1.
    """
    rem = dict(p)
    quo: dict = {}
    while rem:
        lead = max(rem)
        if lead[0] == 0 or lead[1] == 0:
            return None
        c = rem[lead]
        q = (lead[0] - 1, lead[1] - 1, lead[2], lead[3], lead[4])
        quo[q] = c
        del rem[lead]
        other = (q[0], q[1], q[2] + 1, q[3] + 1, q[4])
        v = rem.get(other)
        v = -c if v is None else v - c
        if v:
            rem[other] = v
        else:
            rem.pop(other, None)
    return quo


def _normalize(num: dict, k: int) -> tuple[dict, int]:
    if not num:
        return {}, 0
    while k > 0:
        q = _divide_by_r2(num)
        if q is None:
            break
        num, k = q, k - 1
    return num, k


class CoeffExpr:
    """Canonical ``numerator / r2**k`` with Gaussian-rational coefficients.

    Instances are immutable; arithmetic returns new canonical values.  Division
    is restricted to divisors of the form ``unit * r2**j`` where a unit is a
    nonzero constant times a monomial in the opaque symbols.
    """

    __slots__ = ("_num", "_k", "_hash")

    def __init__(self, num: Mapping[Mono, GaussQ] | None = None, k: int = 0, *, _canonical: bool = False):
        num = {m: c for m, c in (num or {}).items() if c}
        if k < 0:
            num = _poly_mul(num, _poly_r2_pow(-k))
            k = 0
        if not _canonical:
            num, k = _normalize(num, k)
        self._num = num
        self._k = k if num else 0
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def coerce(cls, x: Any) -> "CoeffExpr":
        if isinstance(x, CoeffExpr):
            return x
        g = GaussQ.coerce(x)
        return cls({_ONE_MONO: g} if g else {}, 0, _canonical=True)

    # -- structure ------------------------------------------------------------
    @property
    def numerator(self) -> dict:
        return dict(self._num)

    @property
    def r2_power(self) -> int:
        return self._k

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self) -> bool:
        return bool(self._num)

    def is_constant(self) -> bool:
        """True when free of coordinate symbols (opaque symbols allowed)."""
        return self._k == 0 and all(m[:4] == (0, 0, 0, 0) for m in self._num)

    def is_number(self) -> bool:
        return self._k == 0 and all(m == _ONE_MONO for m in self._num)

    def as_number(self) -> GaussQ:
        if not self.is_number():
            raise ValueError(f"{self} is not a plain number")
        return self._num.get(_ONE_MONO, _GQ_ZERO)

    def free_symbols(self) -> frozenset[str]:
        return frozenset(name for m in self._num for name, _ in m[4])

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other: Any) -> "CoeffExpr":
        o = CoeffExpr.coerce(other)
        if not o._num:
            return self
        if not self._num:
            return o
        k = max(self._k, o._k)
        a = self._num if self._k == k else _poly_mul(self._num, _poly_r2_pow(k - self._k))
        b = o._num if o._k == k else _poly_mul(o._num, _poly_r2_pow(k - o._k))
        return CoeffExpr(_poly_add(a, b), k)

    __radd__ = __add__

    def __neg__(self) -> "CoeffExpr":
        return CoeffExpr({m: -c for m, c in self._num.items()}, self._k, _canonical=True)

    def __sub__(self, other: Any) -> "CoeffExpr":
        return self + (-CoeffExpr.coerce(other))

    def __rsub__(self, other: Any) -> "CoeffExpr":
        return CoeffExpr.coerce(other) + (-self)

    def __mul__(self, other: Any) -> "CoeffExpr":
        o = CoeffExpr.coerce(other)
        if not self._num or not o._num:
            return ZERO
        if self._k == 0 and len(self._num) == 1 and _ONE_MONO in self._num:
            c = self._num[_ONE_MONO]
            return CoeffExpr({m: c * v for m, v in o._num.items()}, o._k, _canonical=True)
        if o._k == 0 and len(o._num) == 1 and _ONE_MONO in o._num:
            c = o._num[_ONE_MONO]
            return CoeffExpr({m: v * c for m, v in self._num.items()}, self._k, _canonical=True)
        prod = _poly_mul(self._num, o._num)
        k = self._k + o._k
        # r2 is prime, so two numerators it does not divide have a product it
        # does not divide; only a bare polynomial factor can cancel r2
        canonical = k == 0 or (self._k > 0 and o._k > 0)
        return CoeffExpr(prod, k, _canonical=canonical)

    __rmul__ = __mul__

    def _unit_inverse(self) -> "CoeffExpr":
        num, k = self._num, self._k
        if len(num) != 1:
            # maybe numerator is unit * r2**j
            rest = num
            j = 0
            while True:
                q = _divide_by_r2(rest)
                if q is None:
                    break
                rest, j = q, j + 1
            if len(rest) != 1 or j == 0:
                raise DenominatorError(f"denominator {self} is not a unit times a power of r2")
            num, k = rest, k - j
        (m, c), = num.items()
        if m[:4] != (0, 0, 0, 0):
            raise DenominatorError(f"denominator {self} contains coordinate monomials")
        inv_m = (0, 0, 0, 0, tuple((s, -e) for s, e in m[4]))
        return CoeffExpr({inv_m: c.inverse()}, -k)

    def __truediv__(self, other: Any) -> "CoeffExpr":
        o = CoeffExpr.coerce(other)
        if not o._num:
            raise ZeroDivisionError("division by zero CoeffExpr")
        return self * o._unit_inverse()

    def __rtruediv__(self, other: Any) -> "CoeffExpr":
        return CoeffExpr.coerce(other) / self

    def __pow__(self, n: int) -> "CoeffExpr":
        if n < 0:
            return ONE / (self ** (-n))
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        try:
            o = CoeffExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self._k == o._k and self._num == o._num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._k, frozenset(self._num.items())))
        return self._hash

    # -- involution and calculus -----------------------------------------------
    def conj(self) -> "CoeffExpr":
        """Formal conjugation: swap z_i and zb_i, conjugate numbers, fix symbols."""
        return CoeffExpr(
            {(m[1], m[0], m[3], m[2], m[4]): c.conjugate() for m, c in self._num.items()},
            self._k,
            _canonical=True,
        )

    def diff(self, var: int) -> "CoeffExpr":
        """Partial derivative in coordinate ``var`` (0=z1, 1=zb1, 2=z2, 3=zb2)."""
        dn = _poly_diff(self._num, var)
        if self._k == 0:
            return CoeffExpr(dn, 0)
        # (N/r2^k)' = (N' r2 - k N dr2) / r2^(k+1)
        dr2 = _poly_diff(_R2_POLY, var)
        top = _poly_add(_poly_mul(dn, _R2_POLY), _poly_mul(self._num, {m: c * GaussQ(self._k) for m, c in dr2.items()}), -1)
        return CoeffExpr(top, self._k + 1)

    # -- numerics ----------------------------------------------------------------
    def evaluate(self, z1: Any, z2: Any, values: Mapping[str, Any] | None = None) -> Any:
        """Numeric value at ``(z1, z2)``, ``zb = conj(z)``; works on numpy arrays.

        ``values`` must supply every opaque symbol present.
        """
        import numpy as np

        values = dict(values or {})
        zb1, zb2 = np.conj(z1), np.conj(z2)
        base = (z1, zb1, z2, zb2)
        total: Any = 0
        for m, c in self._num.items():
            term: Any = complex(c)
            for v, e in zip(base, m[:4]):
                if e:
                    term = term * v**e
            for name, e in m[4]:
                if name not in values:
                    raise KeyError(f"no numeric value for symbol {name!r}")
                term = term * complex(values[name]) ** e
            total = total + term
        if self._k:
            total = total / (z1 * zb1 + z2 * zb2) ** self._k
        return total

    def substitute(self, values: Mapping[str, Any]) -> "CoeffExpr":
        """Replace opaque symbols by exact numbers or by other CoeffExpr."""
        out = ZERO
        for m, c in self._num.items():
            term = CoeffExpr({(m[0], m[1], m[2], m[3], ()): c}, 0, _canonical=True)
            for name, e in m[4]:
                if name in values:
                    term = term * CoeffExpr.coerce(values[name]) ** e
                else:
                    term = term * CoeffExpr({(0, 0, 0, 0, ((name, e),)): _GQ_ONE}, 0, _canonical=True)
            out = out + term
        return out / R2**self._k if self._k else out

    # -- printing ----------------------------------------------------------------
    def to_tex(self) -> str:
        from .printing import coeff_to_tex

        return coeff_to_tex(self)

    def __repr__(self) -> str:
        return f"CoeffExpr({self.to_tex()})"

    __str__ = to_tex


def _poly_diff(p: dict, var: int) -> dict:
    out: dict = {}
    for m, c in p.items():
        e = m[var]
        if e:
            nm = list(m)
            nm[var] = e - 1
            out[tuple(nm)] = c * GaussQ(e)
    return out


def const(x: Any) -> CoeffExpr:
    """Exact constant from an int, Fraction, float (exact binary value), complex or string."""
    return CoeffExpr.coerce(x)


def sym(name: str) -> CoeffExpr:
    """Opaque real constant; formal conjugation fixes it."""
    if name in ("z1", "zb1", "z2", "zb2"):
        raise ValueError(f"{name!r} is a coordinate, not an opaque symbol")
    return CoeffExpr({(0, 0, 0, 0, ((name, 1),)): _GQ_ONE}, 0, _canonical=True)


def _var(i: int) -> CoeffExpr:
    e = [0, 0, 0, 0]
    e[i] = 1
    return CoeffExpr({(*e, ()): _GQ_ONE}, 0, _canonical=True)


ZERO = CoeffExpr({}, 0, _canonical=True)
ONE = CoeffExpr({_ONE_MONO: _GQ_ONE}, 0, _canonical=True)
I = CoeffExpr({_ONE_MONO: GaussQ(0, 1)}, 0, _canonical=True)
Z1, ZB1, Z2, ZB2 = (_var(i) for i in range(4))
R2 = Z1 * ZB1 + Z2 * ZB2
PI = sym("pi")
LNTAU = sym("lntau")


def sum_exprs(items: Iterable[CoeffExpr]) -> CoeffExpr:
    out = ZERO
    for x in items:
        out = out + x
    return out
