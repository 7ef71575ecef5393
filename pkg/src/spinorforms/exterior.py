"""Alternating tensors over the pseudo-Euclidean model space.

A degree-p form stores one coefficient per lexicographically sorted
p-subset of {0..n-1}.  Structure tables (subset ranks, merge signs,
deletion signs) are computed once per (n, degree) and cached, so the sign
bookkeeping is table lookups at evaluation time.  Coefficients may be
complex numbers or jets; numeric inputs stay on the vectorized path.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .jets import Jet

__all__ = [
    "Form",
    "subsets",
    "subset_rank",
    "form_dim",
    "wedge",
    "interior",
    "flat",
    "sharp",
    "form_inner",
]


@lru_cache(maxsize=None)
def subsets(n, p):
    """Sorted p-subsets of range(n) in lexicographic order."""
    if p < 0 or p > n:
        return ()
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def subset_rank(n, p):
    return {K: i for i, K in enumerate(subsets(n, p))}


def form_dim(n, p):
    return comb(n, p) if 0 <= p <= n else 0


def _is_object(arr):
    dt = getattr(arr, "dtype", None)
    if dt is not None:
        return dt == object
    return any(isinstance(v, Jet) for v in arr)


class Form:
    """Alternating p-tensor with one coefficient per sorted index subset.

    Degrees outside 0..n are allowed as honest zero spaces with no
    coefficients; operators that step over the boundary land there, so
    degree bookkeeping stays additive and compositions never clamp.
    """

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n, degree, coeffs=None):
        degree = int(degree)
        self.n = n
        self.degree = degree
        m = form_dim(n, degree)
        if coeffs is None:
            self.coeffs = np.zeros(m, dtype=complex)
        else:
            arr = coeffs if isinstance(coeffs, np.ndarray) else np.asarray(
                coeffs, dtype=object if any(isinstance(v, Jet) for v in coeffs)
                else complex)
            if arr.shape != (m,):
                raise ValueError("coefficient count does not match degree")
            self.coeffs = arr

    @classmethod
    def basis(cls, n, indices):
        """e^{i1} ^ ... ^ e^{ip} for a strictly increasing index tuple."""
        K = tuple(indices)
        if any(a >= b for a, b in zip(K, K[1:])):
            raise ValueError("indices must be strictly increasing")
        f = cls(n, len(K))
        f.coeffs[subset_rank(n, len(K))[K]] = 1.0
        return f

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("degree or dimension mismatch")
        return Form(self.n, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        if isinstance(c, Jet):
            arr = np.frompyfunc(lambda v: c * v, 1, 1)(
                np.asarray(self.coeffs, dtype=object))
        else:
            arr = c * self.coeffs
        return Form(self.n, self.degree, arr)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def __repr__(self):
        return f"Form(n={self.n}, degree={self.degree})"


@lru_cache(maxsize=None)
def _wedge_table(n, p, q):
    rows = []
    rk = subset_rank(n, p + q)
    for i, A in enumerate(subsets(n, p)):
        sa = set(A)
        for j, B in enumerate(subsets(n, q)):
            if sa & set(B):
                continue
            inv = sum(1 for x in A for y in B if x > y)
            rows.append((i, j, rk[tuple(sorted(A + B))],
                         -1.0 if inv % 2 else 1.0))
    ii = np.array([r[0] for r in rows], dtype=np.intp)
    jj = np.array([r[1] for r in rows], dtype=np.intp)
    kk = np.array([r[2] for r in rows], dtype=np.intp)
    ss = np.array([r[3] for r in rows], dtype=float)
    return ii, jj, kk, ss


def wedge(a, b):
    """Exterior product; degrees beyond n are zero spaces, kept additive."""
    if a.n != b.n:
        raise ValueError("forms live over different dimensions")
    n, p, q = a.n, a.degree, b.degree
    ii, jj, kk, ss = _wedge_table(n, p, q)
    if _is_object(a.coeffs) or _is_object(b.coeffs):
        out = np.zeros(form_dim(n, p + q), dtype=object)
        for i, j, k, s in zip(ii, jj, kk, ss):
            out[k] = out[k] + s * (a.coeffs[i] * b.coeffs[j])
        return Form(n, p + q, out)
    out = np.zeros(form_dim(n, p + q), dtype=complex)
    np.add.at(out, kk, ss * a.coeffs[ii] * b.coeffs[jj])
    return Form(n, p + q, out)


@lru_cache(maxsize=None)
def _interior_table(n, p):
    """Rows (src subset rank, deleted axis, dst rank, sign) for degree p."""
    rows = []
    if p >= 1:
        rk = subset_rank(n, p - 1)
        for j, K in enumerate(subsets(n, p)):
            for t, axis in enumerate(K):
                rest = K[:t] + K[t + 1:]
                rows.append((j, axis, rk[rest], -1.0 if t % 2 else 1.0))
    src = np.array([r[0] for r in rows], dtype=np.intp)
    ax = np.array([r[1] for r in rows], dtype=np.intp)
    dst = np.array([r[2] for r in rows], dtype=np.intp)
    ss = np.array([r[3] for r in rows], dtype=float)
    return src, ax, dst, ss


def interior(X, a):
    """Contraction of the frame-component vector X into the form a."""
    n, p = a.n, a.degree
    if len(X) != n:
        raise ValueError("vector length does not match form dimension")
    src, ax, dst, ss = _interior_table(n, p)
    if _is_object(a.coeffs) or any(isinstance(v, Jet) for v in X):
        Xarr = np.asarray(X, dtype=object)
        out = np.zeros(form_dim(n, p - 1), dtype=object)
        for j, i, k, s in zip(src, ax, dst, ss):
            out[k] = out[k] + s * (Xarr[i] * a.coeffs[j])
        return Form(n, p - 1, out)
    Xc = np.asarray(X, dtype=complex)
    out = np.zeros(form_dim(n, p - 1), dtype=complex)
    np.add.at(out, dst, ss * Xc[ax] * a.coeffs[src])
    return Form(n, p - 1, out)


def flat(metric, X):
    """1-form metrically dual to the frame-component vector X."""
    n = len(metric)
    if len(X) != n:
        raise ValueError("vector length does not match metric")
    out = np.empty(n, dtype=object)
    for i in range(n):
        out[i] = metric[i] * X[i]
    if not any(isinstance(v, Jet) for v in out):
        out = out.astype(complex)
    return Form(n, 1, out)


def sharp(metric, alpha):
    """Frame-component vector metrically dual to the 1-form alpha."""
    if alpha.degree != 1 or alpha.n != len(metric):
        raise ValueError("sharp needs a 1-form over the same metric")
    out = np.empty(alpha.n, dtype=object)
    for i in range(alpha.n):
        out[i] = metric[i] * alpha.coeffs[i]
    if not any(isinstance(v, Jet) for v in out):
        out = out.astype(complex)
    return out


def form_inner(metric, a, b):
    """Induced coefficient pairing sum_K (prod_k g_k) conj(a_K) b_K."""
    if (a.n, a.degree) != (b.n, b.degree):
        raise ValueError("degree or dimension mismatch")
    total = 0.0
    for idx, K in enumerate(subsets(a.n, a.degree)):
        w = 1.0
        for k in K:
            w *= metric[k]
        av = a.coeffs[idx]
        av = av.conjugate() if isinstance(av, Jet) else np.conjugate(av)
        total = total + w * av * b.coeffs[idx]
    return total
