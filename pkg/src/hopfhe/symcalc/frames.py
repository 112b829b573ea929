"""Invariant frames of the standard Hopf surface and bigraded calculus.

Two complex structures share the manifold ``C^2 \\ {0}``.  Each has an invariant
vector frame and dual coframe:

* ``minus``: ``X1, X2`` and ``alpha1, alpha2`` (plus conjugates),
* ``plus``:  ``Y1, Y2`` and ``beta1, beta2`` (the standard structure).

Frame index order is ``(theta1, theta2, bar theta1, bar theta2)``, so the first
two entries are of type (1,0) and the last two of type (0,1).
"""

from __future__ import annotations

from typing import Any, Literal, Mapping

from .coeff import I, R2, Z1, Z2, ZB1, ZB2, ZERO, CoeffExpr
from .forms import CoordForm, VField, _accumulate, _sort_sign, ext_d, interior, wedge

Side = Literal["minus", "plus"]

__all__ = [
    "X1",
    "X2",
    "Y1",
    "Y2",
    "ALPHA1",
    "ALPHA2",
    "BETA1",
    "BETA2",
    "FrameForm",
    "frame_vectors",
    "frame_coforms",
    "to_frame",
    "to_coord",
    "bidegree",
    "partial",
    "dbar",
    "dc",
    "bidegree_part",
]

X1 = VField({0: Z1, 3: ZB2})
X2 = VField({2: -ZB2, 1: Z1})
Y1 = VField({0: Z1, 1: Z2})
Y2 = VField({0: -ZB2, 1: ZB1})

ALPHA1 = CoordForm(1, {(0,): ZB1 / R2, (3,): Z2 / R2})
ALPHA2 = CoordForm(1, {(2,): -Z2 / R2, (1,): ZB1 / R2})
BETA1 = CoordForm(1, {(0,): ZB1 / R2, (1,): ZB2 / R2})
BETA2 = CoordForm(1, {(0,): -Z2 / R2, (1,): Z1 / R2})

_VECTORS = {
    "minus": (X1, X2, X1.conj(), X2.conj()),
    "plus": (Y1, Y2, Y1.conj(), Y2.conj()),
}
_COFORMS = {
    "minus": (ALPHA1, ALPHA2, ALPHA1.conj(), ALPHA2.conj()),
    "plus": (BETA1, BETA2, BETA1.conj(), BETA2.conj()),
}
_NAMES = {
    "minus": (r"\alpha_1", r"\alpha_2", r"\bar\alpha_1", r"\bar\alpha_2"),
    "plus": (r"\beta_1", r"\beta_2", r"\bar\beta_1", r"\bar\beta_2"),
}


def _side(side: str) -> str:
    if side not in _VECTORS:
        raise ValueError(f"frame must be 'minus' or 'plus', got {side!r}")
    return side


def frame_vectors(side: Side) -> tuple[VField, VField, VField, VField]:
    return _VECTORS[_side(side)]


def frame_coforms(side: Side) -> tuple[CoordForm, CoordForm, CoordForm, CoordForm]:
    return _COFORMS[_side(side)]


class FrameForm:
    """A form written over one of the invariant coframes.

    ``comps`` maps strictly increasing frame multi-indices to coefficients.
    """

    __slots__ = ("frame", "grade", "_c")

    def __init__(self, frame: Side, grade: int, comps: Mapping[tuple, Any] | None = None):
        self.frame = _side(frame)
        self.grade = grade
        c: dict = {}
        for k, v in (comps or {}).items():
            sign, key = _sort_sign(k)
            if sign == 0:
                continue
            v = CoeffExpr.coerce(v)
            _accumulate(c, key, v if sign > 0 else -v)
        self._c = c

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

    def bigrade_of(self, idx: tuple) -> tuple[int, int]:
        p = sum(1 for i in idx if i < 2)
        return p, len(idx) - p

    def bigrades(self) -> set[tuple[int, int]]:
        return {self.bigrade_of(k) for k in self._c}

    def __eq__(self, o: object) -> bool:
        if not isinstance(o, FrameForm):
            return NotImplemented
        return self.frame == o.frame and self._c == o._c and (self.grade == o.grade or not self._c)

    def to_tex(self) -> str:
        if not self._c:
            return "0"
        names = _NAMES[self.frame]
        parts = []
        for k in sorted(self._c):
            basis = r" \wedge ".join(names[i] for i in k) or "1"
            parts.append(f"({self._c[k].to_tex()})\\,{basis}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"FrameForm[{self.frame},{self.grade}]({self.to_tex()})"


def to_frame(a: CoordForm, frame: Side) -> FrameForm:
    """Exact coefficients of ``a`` over the chosen invariant coframe.

    The coefficient of ``theta^{i1} ^ ... ^ theta^{ip}`` is obtained by
    contracting with the dual vectors ``E_{i1}``, then ``E_{i2}``, and so on.
    """
    vecs = frame_vectors(frame)
    comps: dict = {}
    if a.grade == 0:
        return FrameForm(frame, 0, {(): a[()]} if not a.is_zero() else {})
    from itertools import combinations

    for idx in combinations(range(4), a.grade):
        b = a
        for i in idx:
            b = interior(vecs[i], b)
            if b.is_zero():
                break
        if not b.is_zero():
            comps[idx] = b[()]
    return FrameForm(frame, a.grade, comps)


def to_coord(f: FrameForm) -> CoordForm:
    cof = frame_coforms(f.frame)
    out = CoordForm.zero(f.grade)
    for idx, v in f.items():
        term = CoordForm(0, {(): v})
        for i in idx:
            term = wedge(term, cof[i])
        out = out + term
    if out.grade != f.grade:
        out = CoordForm.zero(f.grade) if out.is_zero() else out
    return out


def bidegree(f: FrameForm) -> dict[tuple[int, int], FrameForm]:
    """Split a frame form into its (p,q)-components (non-zero ones only)."""
    parts: dict[tuple[int, int], dict] = {}
    for idx, v in f.items():
        parts.setdefault(f.bigrade_of(idx), {})[idx] = v
    return {pq: FrameForm(f.frame, f.grade, c) for pq, c in parts.items()}


def bidegree_part(a: CoordForm, side: Side, pq: tuple[int, int]) -> CoordForm:
    comp = bidegree(to_frame(a, side)).get(pq)
    return to_coord(comp) if comp is not None else CoordForm.zero(sum(pq))


def _dolbeault(a: CoordForm, side: Side, holo: bool) -> CoordForm:
    out = CoordForm.zero(a.grade + 1)
    if a.grade >= 4:
        return CoordForm.zero(4)
    for (p, q), comp in bidegree(to_frame(a, side)).items():
        target = (p + 1, q) if holo else (p, q + 1)
        out = out + bidegree_part(ext_d(to_coord(comp)), side, target)
    return out


def partial(a: CoordForm, side: Side) -> CoordForm:
    """(1,0)-part of ``d`` for the integrable complex structure of ``side``."""
    return _dolbeault(a, side, True)


def dbar(a: CoordForm, side: Side) -> CoordForm:
    """(0,1)-part of ``d`` for the integrable complex structure of ``side``."""
    return _dolbeault(a, side, False)


def dc(a: CoordForm, side: Side) -> CoordForm:
    """``d^c = i(dbar - partial)``."""
    return (dbar(a, side) - partial(a, side)).scale(I)
