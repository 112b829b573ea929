"""Differential forms, vector fields and sections of TM + T*M in coordinates.

The coordinate coframe is ordered ``(dz1, dz2, dzb1, dzb2)`` and the frame
``(d/dz1, d/dz2, d/dzb1, d/dzb2)``.  All coefficients are :class:`CoeffExpr`.
"""

from __future__ import annotations

from itertools import combinations
from typing import Any, Iterable, Mapping

from .coeff import ONE, ZERO, CoeffExpr

__all__ = [
    "CoordForm",
    "VField",
    "GenSection",
    "GradeError",
    "wedge",
    "ext_d",
    "interior",
    "lie_derivative",
    "lie_bracket",
    "courant",
    "pairing",
    "function_form",
    "dz",
    "coord_vector",
]

# coframe index -> variable index inside CoeffExpr (z1, zb1, z2, zb2)
_BASIS_VAR = (0, 2, 1, 3)
_BASIS_CONJ = (2, 3, 0, 1)
_BASIS_TEX = ("dz_1", "dz_2", r"d\bar z_1", r"d\bar z_2")
_VEC_TEX = (r"\partial_{z_1}", r"\partial_{z_2}", r"\partial_{\bar z_1}", r"\partial_{\bar z_2}")


class GradeError(ValueError):
    """Operation applied to a form of unsupported grade."""


def _sort_sign(idx: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation, or 0 on a repeated index."""
    seq = list(idx)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def _accumulate(out: dict, key: Any, val: CoeffExpr) -> None:
    if val.is_zero():
        return
    cur = out.get(key)
    new = val if cur is None else cur + val
    if new.is_zero():
        out.pop(key, None)
    else:
        out[key] = new


class CoordForm:
    """A grade-p form ``sum_I a_I dx^I`` over strictly increasing multi-indices."""

    __slots__ = ("grade", "_c")

    def __init__(self, grade: int, comps: Mapping[tuple, Any] | None = None):
        if not 0 <= grade <= 4:
            raise GradeError(f"grade {grade} outside 0..4")
        self.grade = grade
        c: dict = {}
        for k, v in (comps or {}).items():
            k = tuple(k)
            if len(k) != grade:
                raise GradeError(f"index {k} does not have grade {grade}")
            sign, key = _sort_sign(k)
            if sign == 0:
                continue
            v = CoeffExpr.coerce(v)
            _accumulate(c, key, v if sign > 0 else -v)
        self._c = c

    @classmethod
    def _raw(cls, grade: int, comps: dict) -> "CoordForm":
        obj = cls.__new__(cls)
        obj.grade = grade
        obj._c = comps
        return obj

    @classmethod
    def zero(cls, grade: int) -> "CoordForm":
        return cls._raw(grade, {})

    def items(self):
        return self._c.items()

    def __getitem__(self, idx: tuple) -> CoeffExpr:
        sign, key = _sort_sign(idx)
        if sign == 0:
            return ZERO
        v = self._c.get(key, ZERO)
        return v if sign > 0 else -v

    def is_zero(self) -> bool:
        return not self._c

    def _check(self, o: "CoordForm") -> None:
        if not isinstance(o, CoordForm):
            raise TypeError(f"expected CoordForm, got {type(o).__name__}")
        if o.grade != self.grade and not (o.is_zero() or self.is_zero()):
            raise GradeError(f"grade mismatch {self.grade} vs {o.grade}")

    def __add__(self, o: "CoordForm") -> "CoordForm":
        self._check(o)
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        c = dict(self._c)
        for k, v in o._c.items():
            _accumulate(c, k, v)
        return CoordForm._raw(self.grade, c)

    def __neg__(self) -> "CoordForm":
        return CoordForm._raw(self.grade, {k: -v for k, v in self._c.items()})

    def __sub__(self, o: "CoordForm") -> "CoordForm":
        return self + (-o)

    def scale(self, f: Any) -> "CoordForm":
        f = CoeffExpr.coerce(f)
        if f.is_zero():
            return CoordForm.zero(self.grade)
        c = {}
        for k, v in self._c.items():
            _accumulate(c, k, f * v)
        return CoordForm._raw(self.grade, c)

    def __mul__(self, f: Any) -> "CoordForm":
        if isinstance(f, CoordForm):
            return wedge(self, f)
        return self.scale(f)

    __rmul__ = scale

    def __xor__(self, o: "CoordForm") -> "CoordForm":
        return wedge(self, o)

    def __truediv__(self, f: Any) -> "CoordForm":
        f = CoeffExpr.coerce(f)
        return self.scale(ONE / f)

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, CoordForm):
            return NotImplemented
        if self.is_zero() and o.is_zero():
            return True
        return self.grade == o.grade and self._c == o._c

    def __hash__(self) -> int:
        return hash((self.grade, frozenset(self._c.items())))

    def conj(self) -> "CoordForm":
        out: dict = {}
        for k, v in self._c.items():
            sign, key = _sort_sign(_BASIS_CONJ[i] for i in k)
            _accumulate(out, key, v.conj() if sign > 0 else -v.conj())
        return CoordForm._raw(self.grade, out)

    def coefficients(self) -> list[CoeffExpr]:
        return list(self._c.values())

    def evaluate(self, z1: Any, z2: Any, values: Mapping[str, Any] | None = None) -> dict:
        return {k: v.evaluate(z1, z2, values) for k, v in self._c.items()}

    def to_tex(self) -> str:
        if self.is_zero():
            return "0"
        if self.grade == 0:
            return self._c[()].to_tex()
        parts = []
        for k in sorted(self._c):
            basis = r" \wedge ".join(_BASIS_TEX[i] for i in k)
            parts.append(f"({self._c[k].to_tex()})\\,{basis}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CoordForm[{self.grade}]({self.to_tex()})"


class VField:
    """Vector field ``sum_i X^i d/dx_i`` with pruned zero coefficients."""

    __slots__ = ("_c",)

    def __init__(self, comps: Mapping[int, Any] | None = None):
        c: dict = {}
        for k, v in (comps or {}).items():
            if k not in range(4):
                raise IndexError(f"frame index {k} outside 0..3")
            _accumulate(c, k, CoeffExpr.coerce(v))
        self._c = c

    def __getitem__(self, i: int) -> CoeffExpr:
        return self._c.get(i, ZERO)

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def __call__(self, f: Any) -> CoeffExpr:
        """Directional derivative of a coefficient function."""
        f = CoeffExpr.coerce(f)
        out = ZERO
        for i, x in self._c.items():
            d = f.diff(_BASIS_VAR[i])
            if not d.is_zero():
                out = out + x * d
        return out

    def __add__(self, o: "VField") -> "VField":
        c = dict(self._c)
        for k, v in o._c.items():
            _accumulate(c, k, v)
        out = VField.__new__(VField)
        out._c = c
        return out

    def __neg__(self) -> "VField":
        out = VField.__new__(VField)
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def __sub__(self, o: "VField") -> "VField":
        return self + (-o)

    def scale(self, f: Any) -> "VField":
        f = CoeffExpr.coerce(f)
        return VField({k: f * v for k, v in self._c.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, VField):
            return NotImplemented
        return self._c == o._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def conj(self) -> "VField":
        return VField({_BASIS_CONJ[k]: v.conj() for k, v in self._c.items()})

    def to_tex(self) -> str:
        if not self._c:
            return "0"
        return " + ".join(f"({self._c[k].to_tex()})\\,{_VEC_TEX[k]}" for k in sorted(self._c))

    def __repr__(self) -> str:
        return f"VField({self.to_tex()})"


class GenSection:
    """Section ``X + xi`` of the generalized tangent bundle."""

    __slots__ = ("vec", "form")

    def __init__(self, vec: VField | None = None, form: CoordForm | None = None):
        self.vec = vec if vec is not None else VField()
        self.form = form if form is not None else CoordForm.zero(1)
        if self.form.grade != 1 and not self.form.is_zero():
            raise GradeError("form part of a generalized section must have grade 1")

    def __add__(self, o: "GenSection") -> "GenSection":
        return GenSection(self.vec + o.vec, _as1(self.form) + _as1(o.form))

    def __neg__(self) -> "GenSection":
        return GenSection(-self.vec, -self.form)

    def __sub__(self, o: "GenSection") -> "GenSection":
        return self + (-o)

    def scale(self, f: Any) -> "GenSection":
        return GenSection(self.vec.scale(f), _as1(self.form).scale(f))

    __mul__ = scale
    __rmul__ = scale

    def is_zero(self) -> bool:
        return self.vec.is_zero() and self.form.is_zero()

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, GenSection):
            return NotImplemented
        return self.vec == o.vec and self.form == o.form

    def __hash__(self) -> int:
        return hash((self.vec, self.form))

    def conj(self) -> "GenSection":
        return GenSection(self.vec.conj(), self.form.conj())

    def __repr__(self) -> str:
        return f"GenSection({self.vec.to_tex()} ; {self.form.to_tex()})"


def _as1(f: CoordForm) -> CoordForm:
    return f if f.grade == 1 else CoordForm.zero(1)


def function_form(f: Any) -> CoordForm:
    return CoordForm(0, {(): CoeffExpr.coerce(f)})


def dz(i: int) -> CoordForm:
    """Coordinate coframe element ``i`` of (dz1, dz2, dzb1, dzb2)."""
    return CoordForm(1, {(i,): 1})


def coord_vector(i: int) -> VField:
    return VField({i: 1})


def wedge(a: CoordForm, b: CoordForm) -> CoordForm:
    g = a.grade + b.grade
    if g > 4:
        return CoordForm.zero(4)
    out: dict = {}
    for ka, va in a._c.items():
        for kb, vb in b._c.items():
            sign, key = _sort_sign(ka + kb)
            if sign == 0:
                continue
            p = va * vb
            _accumulate(out, key, p if sign > 0 else -p)
    return CoordForm._raw(g, out)


def ext_d(a: CoordForm) -> CoordForm:
    g = a.grade + 1
    if g > 4:
        return CoordForm.zero(4)
    out: dict = {}
    for k, v in a._c.items():
        for j in range(4):
            if j in k:
                continue
            dv = v.diff(_BASIS_VAR[j])
            if dv.is_zero():
                continue
            sign, key = _sort_sign((j,) + k)
            _accumulate(out, key, dv if sign > 0 else -dv)
    return CoordForm._raw(g, out)


def interior(X: VField, a: CoordForm) -> CoordForm:
    if a.grade == 0:
        raise GradeError("interior product of a function")
    out: dict = {}
    for k, v in a._c.items():
        for pos, i in enumerate(k):
            x = X[i]
            if x.is_zero():
                continue
            p = x * v
            _accumulate(out, k[:pos] + k[pos + 1 :], p if pos % 2 == 0 else -p)
    return CoordForm._raw(a.grade - 1, out)


def lie_bracket(X: VField, Y: VField) -> VField:
    return VField({j: X(Y[j]) - Y(X[j]) for j in range(4)})


def lie_derivative(X: VField, a: CoordForm) -> CoordForm:
    """Coordinate formula: differentiate coefficients, then each ``dx^j -> d(X^j)``."""
    out: dict = {}
    for k, v in a._c.items():
        _accumulate(out, k, X(v))
        for pos, j in enumerate(k):
            xj = X[j]
            if xj.is_zero():
                continue
            for i in range(4):
                dxj = xj.diff(_BASIS_VAR[i])
                if dxj.is_zero():
                    continue
                sign, key = _sort_sign(k[:pos] + (i,) + k[pos + 1 :])
                if sign == 0:
                    continue
                p = v * dxj
                _accumulate(out, key, p if sign > 0 else -p)
    return CoordForm._raw(a.grade, out)


def pairing(s: GenSection, t: GenSection) -> CoeffExpr:
    """Natural pairing ``(1/2)(xi(Y) + eta(X))``."""
    half = CoeffExpr.coerce("1/2")
    a = interior(s.vec, t.form)[()] if not t.form.is_zero() else ZERO
    b = interior(t.vec, s.form)[()] if not s.form.is_zero() else ZERO
    return half * (a + b)


def courant(s: GenSection, t: GenSection, gamma: CoordForm) -> GenSection:
    """Dorfman bracket twisted by a 3-form ``gamma``."""
    if gamma.grade != 3 and not gamma.is_zero():
        raise GradeError("twisting form must have grade 3")
    X, xi = s.vec, _as1(s.form)
    Y, eta = t.vec, _as1(t.form)
    vec = lie_bracket(X, Y)
    form = lie_derivative(X, eta) - interior(Y, ext_d(xi))
    if not gamma.is_zero():
        form = form + interior(X, interior(Y, gamma))
    return GenSection(vec, form)


def all_indices(grade: int) -> list[tuple[int, ...]]:
    return list(combinations(range(4), grade))
