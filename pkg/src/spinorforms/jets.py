"""Forward-mode jets: truncated Taylor scalars up to second order.

A ``Jet`` carries a value, a gradient over ``m`` coordinates and optionally a
Hessian.  Entries may be python scalars, numpy arrays (one slot per sample
point, so a whole point sweep differentiates in one pass) or further Jets,
which is what makes nested differentiation work without any special casing.
Derivatives are exact; nothing here does finite differencing.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "seed", "partial", "value", "directional", "atan2"]


# numpy ufuncs refuse Jets (``__array_ufunc__ = None``), so elementary
# functions route through these little dispatchers.  That is also what makes
# jets-of-jets work: the chain rules below only ever use arithmetic plus
# these helpers.

def _sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)


def _exp(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def _log(x):
    return x.log() if isinstance(x, Jet) else np.log(x)


def _sin(x):
    return x.sin() if isinstance(x, Jet) else np.sin(x)


def _cos(x):
    return x.cos() if isinstance(x, Jet) else np.cos(x)


def _sinh(x):
    return x.sinh() if isinstance(x, Jet) else np.sinh(x)


def _cosh(x):
    return x.cosh() if isinstance(x, Jet) else np.cosh(x)


def _conj(x):
    return x.conjugate() if isinstance(x, Jet) else np.conjugate(x)


class Jet:
    """Second-order truncated Taylor scalar over m real coordinates.

    grad is a length-m tuple, hess an m x m tuple of tuples (symmetric).
    ``grad=None`` means no derivative information is tracked (order 0);
    ``hess=None`` truncates at first order.  Combining jets takes the
    minimum order, combining with plain constants keeps the jet's order.
    """

    __slots__ = ("val", "grad", "hess")
    __array_ufunc__ = None  # make numpy fall back to our reflected operators

    def __init__(self, val, grad=None, hess=None):
        self.val = val
        self.grad = grad
        self.hess = hess

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            v = self.val + other.val
            if self.grad is None or other.grad is None:
                return Jet(v)
            g = tuple(a + b for a, b in zip(self.grad, other.grad))
            if self.hess is None or other.hess is None:
                return Jet(v, g)
            h = tuple(tuple(a + b for a, b in zip(ra, rb))
                      for ra, rb in zip(self.hess, other.hess))
            return Jet(v, g, h)
        return Jet(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        g = None if self.grad is None else tuple(-a for a in self.grad)
        h = None if self.hess is None else tuple(tuple(-a for a in r) for r in self.hess)
        return Jet(-self.val, g, h)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            u, w = self.val, other.val
            v = u * w
            if self.grad is None or other.grad is None:
                return Jet(v)
            g = tuple(u * b + w * a for a, b in zip(self.grad, other.grad))
            if self.hess is None or other.hess is None:
                return Jet(v, g)
            m = len(g)
            sg, og, sh, oh = self.grad, other.grad, self.hess, other.hess
            h = tuple(tuple(u * oh[i][j] + w * sh[i][j]
                            + sg[i] * og[j] + sg[j] * og[i]
                            for j in range(m)) for i in range(m))
            return Jet(v, g, h)
        # other is a derivative-free constant
        g = None if self.grad is None else tuple(other * a for a in self.grad)
        h = None if self.hess is None else tuple(tuple(other * a for a in r)
                                                 for r in self.hess)
        return Jet(other * self.val, g, h)

    __rmul__ = __mul__

    def _reciprocal(self):
        r = 1.0 / self.val
        return self._chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other._reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, c):
        if isinstance(c, Jet):
            raise TypeError("jet exponents are not supported")
        if c == 0:
            return Jet(self.val ** 0)
        if c == 1:
            return self
        v = self.val
        return self._chain(v ** c, c * v ** (c - 1), c * (c - 1) * v ** (c - 2))

    # -- chain rule ---------------------------------------------------

    def _chain(self, u0, u1, u2):
        """Compose with a scalar function given value and derivatives at self.val."""
        if self.grad is None:
            return Jet(u0)
        g = tuple(u1 * a for a in self.grad)
        if self.hess is None:
            return Jet(u0, g)
        m = len(g)
        sg, sh = self.grad, self.hess
        h = tuple(tuple(u1 * sh[i][j] + u2 * sg[i] * sg[j] for j in range(m))
                  for i in range(m))
        return Jet(u0, g, h)

    # -- elementary functions ------------------------------------------

    def sqrt(self):
        u0 = _sqrt(self.val)
        u1 = 0.5 / u0
        return self._chain(u0, u1, -0.5 * u1 / self.val)

    def exp(self):
        u0 = _exp(self.val)
        return self._chain(u0, u0, u0)

    def log(self):
        r = 1.0 / self.val
        return self._chain(_log(self.val), r, -r * r)

    def sin(self):
        s, c = _sin(self.val), _cos(self.val)
        return self._chain(s, c, -s)

    def cos(self):
        s, c = _sin(self.val), _cos(self.val)
        return self._chain(c, -s, -c)

    def sinh(self):
        s, c = _sinh(self.val), _cosh(self.val)
        return self._chain(s, c, s)

    def cosh(self):
        s, c = _sinh(self.val), _cosh(self.val)
        return self._chain(c, s, c)

    def arctanh(self):
        v = self.val
        d = 1.0 / (1.0 - v * v)
        u0 = 0.5 * (_log(1.0 + v) - _log(1.0 - v))
        return self._chain(u0, d, 2.0 * v * d * d)

    def arctan2(self, other):
        # numpy calls y.arctan2(x) elementwise on object arrays
        return atan2(self, other)

    def conjugate(self):
        # coordinates are real, so conjugation commutes with d/dx
        g = None if self.grad is None else tuple(_conj(a) for a in self.grad)
        h = None if self.hess is None else tuple(tuple(_conj(a) for a in r)
                                                 for r in self.hess)
        return Jet(_conj(self.val), g, h)

    def __repr__(self):
        order = 0 if self.grad is None else (1 if self.hess is None else 2)
        return f"Jet(order={order}, val={self.val!r})"


def atan2(y, x):
    """Two-argument arctangent with first and second jet derivatives."""
    jy, jx = isinstance(y, Jet), isinstance(x, Jet)
    if not (jy or jx):
        return np.arctan2(y, x)
    yv = y.val if jy else y
    xv = x.val if jx else x
    v = atan2(yv, xv) if isinstance(yv, Jet) or isinstance(xv, Jet) \
        else np.arctan2(yv, xv)
    gy = y.grad if jy else None
    gx = x.grad if jx else None
    if (jy and y.grad is None) or (jx and x.grad is None):
        return Jet(v)
    m = len(gy) if gy is not None else len(gx)
    zero = 0.0
    gy = gy if gy is not None else (zero,) * m
    gx = gx if gx is not None else (zero,) * m
    q = 1.0 / (xv * xv + yv * yv)
    ty = xv * q          # d/dy
    tx = -yv * q         # d/dx
    g = tuple(ty * gy[i] + tx * gx[i] for i in range(m))
    hy = y.hess if jy else None
    hx = x.hess if jx else None
    if (jy and y.hess is None) or (jx and x.hess is None):
        return Jet(v, g)
    zrow = ((zero,) * m,) * m
    hy = hy if hy is not None else zrow
    hx = hx if hx is not None else zrow
    q2 = q * q
    txx = 2.0 * xv * yv * q2
    txy = (yv * yv - xv * xv) * q2
    tyy = -txx
    h = tuple(tuple(ty * hy[i][j] + tx * hx[i][j]
                    + tyy * gy[i] * gy[j] + txx * gx[i] * gx[j]
                    + txy * (gx[i] * gy[j] + gy[i] * gx[j])
                    for j in range(m)) for i in range(m))
    return Jet(v, g, h)


def seed(vals, order=2):
    """Jets for the coordinates themselves: unit gradients, zero Hessians."""
    m = len(vals)
    out = []
    for a, v in enumerate(vals):
        grad = tuple(1.0 if b == a else 0.0 for b in range(m))
        if order >= 2:
            hess = tuple((0.0,) * m for _ in range(m))
            out.append(Jet(v, grad, hess))
        elif order == 1:
            out.append(Jet(v, grad))
        else:
            out.append(Jet(v))
    return out


def partial(x, a):
    """The a-th coordinate derivative of x, as a jet one order lower."""
    if not isinstance(x, Jet):
        return 0.0
    if x.grad is None:
        raise ValueError("jet carries no first-order data")
    if x.hess is None:
        return Jet(x.grad[a])
    return Jet(x.grad[a], tuple(x.hess[a]))


def value(x):
    """Plain value of a jet or pass-through for constants."""
    return x.val if isinstance(x, Jet) else x


def directional(x, comps):
    """Derivative of x along a vector with the given coordinate components."""
    total = 0.0
    for a, c in enumerate(comps):
        total = total + c * partial(x, a)
    return total
