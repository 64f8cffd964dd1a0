"""Tagged forward-mode dual numbers.

A :class:`Dual` carries a value and a vector of tangents (one per seeded
coordinate).  Each seeding gets a fresh integer tag; when two duals with
different tags meet, the one with the lower tag is treated as a constant of
the higher one.  That keeps nested differentiation (a dual whose value slot is
itself a dual) free of perturbation confusion, which is what the engine needs
to differentiate engine-produced fields such as Christoffel symbols.
"""

from __future__ import annotations

import itertools

import numpy as np

_tags = itertools.count(1)


def new_tag() -> int:
    return next(_tags)


class Dual:
    __slots__ = ("val", "eps", "tag")

    def __init__(self, val, eps, tag: int):
        self.val = val
        self.eps = eps
        self.tag = tag

    # -- helpers ---------------------------------------------------------
    def _split(self, other):
        """Return (value, tangent or None) of ``other`` in this dual's tag."""
        if isinstance(other, Dual) and other.tag == self.tag:
            return other.val, other.eps
        return other, None

    def _defer(self, other) -> bool:
        return isinstance(other, Dual) and other.tag > self.tag

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.eps!r}, tag={self.tag})"

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return Dual(-self.val, -self.eps, self.tag)

    def __pos__(self):
        return self

    def __add__(self, other):
        if self._defer(other):
            return other.__radd__(self)
        v, e = self._split(other)
        if isinstance(v, np.ndarray):
            return NotImplemented
        return Dual(self.val + v, self.eps if e is None else self.eps + e, self.tag)

    __radd__ = __add__

    def __sub__(self, other):
        if self._defer(other):
            return other.__rsub__(self)
        v, e = self._split(other)
        if isinstance(v, np.ndarray):
            return NotImplemented
        return Dual(self.val - v, self.eps if e is None else self.eps - e, self.tag)

    def __rsub__(self, other):
        return Dual(other - self.val, -self.eps, self.tag)

    def __mul__(self, other):
        if self._defer(other):
            return other.__rmul__(self)
        v, e = self._split(other)
        if isinstance(v, np.ndarray):
            return NotImplemented
        if e is None:
            return Dual(self.val * v, self.eps * v, self.tag)
        return Dual(self.val * v, self.eps * v + e * self.val, self.tag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if self._defer(other):
            return other.__rtruediv__(self)
        v, e = self._split(other)
        if isinstance(v, np.ndarray):
            return NotImplemented
        if e is None:
            return Dual(self.val / v, self.eps / v, self.tag)
        q = self.val / v
        return Dual(q, (self.eps - e * q) / v, self.tag)

    def __rtruediv__(self, other):
        q = other / self.val
        return Dual(q, -self.eps * (q / self.val), self.tag)

    def __pow__(self, power):
        if self._defer(power):
            return other_pow(self, power)
        if isinstance(power, Dual):
            return exp(power * log(self))
        if power == 0:
            return Dual(self.val**0, self.eps * 0.0, self.tag)
        if isinstance(power, int) and power > 0:
            out = self
            for _ in range(power - 1):
                out = out * self
            return out
        return Dual(self.val**power, self.eps * (power * self.val ** (power - 1)), self.tag)

    def __rpow__(self, base):
        return exp(self * log(base))

    # -- comparisons by primal value (pivoting, sign tests) ----------------
    def __abs__(self):
        return -self if primal(self) < 0 else self

    def __lt__(self, other):
        return primal(self) < primal(other)

    def __gt__(self, other):
        return primal(self) > primal(other)

    def __float__(self):
        return float(primal(self))


def other_pow(base, power):
    return exp(power * log(base))


def primal(x):
    """Innermost real value of a (possibly nested) dual."""
    while isinstance(x, Dual):
        x = x.val
    return x


def is_dual_array(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def _unary(x, fn, dfn):
    if isinstance(x, Dual):
        return Dual(_unary(x.val, fn, dfn), x.eps * dfn(x.val), x.tag)
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return np.array([_unary(v, fn, dfn) for v in x.ravel()], dtype=object).reshape(x.shape)
        return fn(x)
    return fn(x)


def sin(x):
    return _unary(x, np.sin, cos)


def cos(x):
    return _unary(x, np.cos, lambda v: -sin(v))


def exp(x):
    return _unary(x, np.exp, exp)


def log(x):
    return _unary(x, np.log, lambda v: 1.0 / v)


def sqrt(x):
    return _unary(x, np.sqrt, lambda v: 0.5 / sqrt(v))


def as_array(entries) -> np.ndarray:
    """Build an ndarray from nested lists, float64 unless any entry is a dual."""
    arr = np.array(entries, dtype=object)
    if any(isinstance(v, Dual) for v in arr.ravel()):
        return arr
    return arr.astype(float)


def seed(x: np.ndarray) -> tuple[np.ndarray, int]:
    """Wrap each coordinate of ``x`` as a dual with a unit tangent."""
    n = len(x)
    tag = new_tag()
    eye = np.eye(n)
    out = np.empty(n, dtype=object)
    for k in range(n):
        out[k] = Dual(x[k], eye[k].copy(), tag)
    return out, tag


def split(y, tag: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Separate value and partials (trailing axis of length ``n``) of ``y``."""
    y = np.asarray(y, dtype=object)
    vals = np.empty(y.shape, dtype=object)
    ders = np.empty(y.shape + (n,), dtype=object)
    for idx in np.ndindex(y.shape):
        v = y[idx]
        if isinstance(v, Dual) and v.tag == tag:
            vals[idx] = v.val
            ders[idx] = v.eps
        else:
            vals[idx] = v
            ders[idx] = np.zeros(n)
    return _tighten(vals), _tighten(ders)


def _tighten(a: np.ndarray) -> np.ndarray:
    if any(isinstance(v, Dual) for v in a.ravel()):
        return a
    return a.astype(float)


def jacobian(fn, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value and forward-mode partials of ``fn`` at ``x``.

    ``x`` may itself hold duals from an outer seeding.
    """
    xs, tag = seed(x)
    return split(fn(xs), tag, len(x))


def inv(a: np.ndarray) -> np.ndarray:
    """Matrix inverse that also works on object arrays of duals."""
    if a.dtype != object:
        return np.linalg.inv(a)
    n = a.shape[0]
    m = np.concatenate([a.copy(), np.eye(n, dtype=object) * 1.0], axis=1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(float(primal(m[r, col]))))
        if primal(m[piv, col]) == 0:
            raise np.linalg.LinAlgError("singular matrix")
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
        m[col] = m[col] / m[col, col]
        for r in range(n):
            if r != col:
                m[r] = m[r] - m[r, col] * m[col]
    return m[:, n:]


def det(a: np.ndarray):
    if a.dtype != object:
        return np.linalg.det(a)
    n = a.shape[0]
    m = a.copy()
    out = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(float(primal(m[r, col]))))
        if primal(m[piv, col]) == 0:
            return 0.0
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
            out = -out
        out = out * m[col, col]
        for r in range(col + 1, n):
            m[r] = m[r] - (m[r, col] / m[col, col]) * m[col]
    return out


__all__ = [
    "Dual",
    "as_array",
    "cos",
    "det",
    "exp",
    "inv",
    "jacobian",
    "log",
    "primal",
    "seed",
    "sin",
    "split",
    "sqrt",
]
