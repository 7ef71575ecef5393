"""Spinor-valued forms: coefficient tensors indexed by (p-subset, spinor).

Operator conventions, fixed once and verified by the identity suite:

    cwedge(F) = sum_i e^i ^ (gamma_i F)        degree p -> p+1
    cvee(F)   = sum_i g_ii e_i _| (gamma_i F)  degree p -> p-1

With the Clifford square gamma_i^2 = -g_ii these satisfy the four
vector-compatibility identities (see tests) in every signature, and the
commutator [cwedge, cvee] acts as (n - 2p) times the identity in degree p.
Consequently the degree-lowering operator -cvee, the degree-raising cwedge
and their commutator form an sl(2) triple whose diagonal element has
eigenvalue n - 2p; the decompositions below are its weight-space
bookkeeping made numerical.

Projectors and decompositions are orthogonal with respect to the plain
Hermitian coefficient product.  For indefinite signatures that product is
a computational device (it is not Spin-invariant); only kernels, images
and ranks of the constructed operators are signature-invariant statements.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .exterior import Form, form_dim, subset_rank, subsets, _wedge_table, \
    _interior_table
from .jets import Jet

__all__ = [
    "SpinorForm",
    "CovariantJet",
    "Projector",
    "cwedge",
    "cvee",
    "clifford_act",
    "interior_sv",
    "wedge_form",
    "sl2_ops",
    "operator_matrix",
    "primitive_projector",
    "primitive_ranks",
    "primitive_decomposition",
    "jet_projections",
    "jet_projection_matrices",
    "twistor_projector",
    "twistor_rank",
]


def _scale(c, arr):
    if isinstance(c, Jet):
        return np.frompyfunc(lambda v: c * v, 1, 1)(
            np.asarray(arr, dtype=object))
    return c * arr


def _is_object(arr):
    return getattr(arr, "dtype", None) == object


class SpinorForm:
    """Degree-p form with spinor values over a CliffordRep.

    coeffs has shape (C(n,p), dim); the module need not be irreducible
    (extracted cone fields live in a doubled module when n is odd).
    """

    __slots__ = ("rep", "degree", "coeffs")

    def __init__(self, rep, degree, coeffs=None):
        n = rep.n
        degree = int(degree)
        shape = (form_dim(n, degree), rep.dim)
        if coeffs is None:
            coeffs = np.zeros(shape, dtype=complex)
        else:
            coeffs = np.asarray(coeffs)
            if coeffs.shape != shape:
                raise ValueError("coefficient shape does not match degree")
        self.rep = rep
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def basis(cls, rep, indices, spinor_index):
        f = cls(rep, len(tuple(indices)))
        K = tuple(indices)
        f.coeffs[subset_rank(rep.n, len(K))[K], spinor_index] = 1.0
        return f

    @classmethod
    def from_vec(cls, rep, degree, v):
        return cls(rep, degree,
                   np.asarray(v).reshape(form_dim(rep.n, degree), rep.dim))

    def vec(self):
        return self.coeffs.reshape(-1)

    def __add__(self, other):
        if not isinstance(other, SpinorForm):
            return NotImplemented
        if self.rep is not other.rep or self.degree != other.degree:
            raise ValueError("mismatched spinor forms")
        return SpinorForm(self.rep, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        return SpinorForm(self.rep, self.degree, _scale(c, self.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def norm(self):
        return float(np.linalg.norm(np.asarray(self.coeffs, dtype=complex)))

    def __repr__(self):
        return f"SpinorForm(degree={self.degree}, n={self.rep.n})"


class CovariantJet:
    """One SpinorForm slice per frame direction (an element of V* x Sigma^p)."""

    __slots__ = ("rep", "degree", "slices")

    def __init__(self, rep, degree, slices):
        slices = tuple(slices)
        if len(slices) != rep.n:
            raise ValueError("need one slice per frame direction")
        for s in slices:
            if s.degree != degree or s.rep is not rep:
                raise ValueError("slice degree or module mismatch")
        self.rep = rep
        self.degree = degree
        self.slices = slices

    @classmethod
    def from_vec(cls, rep, degree, v):
        m = form_dim(rep.n, degree) * rep.dim
        v = np.asarray(v)
        return cls(rep, degree,
                   [SpinorForm.from_vec(rep, degree, v[i * m:(i + 1) * m])
                    for i in range(rep.n)])

    def vec(self):
        return np.concatenate([s.vec() for s in self.slices])


class Projector:
    """Orthogonal projector onto a named subspace of flattened coefficients."""

    __slots__ = ("source", "matrix", "rank")

    def __init__(self, source, matrix, rank):
        self.source = source
        self.matrix = matrix
        self.rank = int(rank)

    def __call__(self, v):
        return self.matrix @ np.asarray(v)

    def __repr__(self):
        return f"Projector({self.source!r}, rank={self.rank})"


# -- structure tables ------------------------------------------------------


@lru_cache(maxsize=None)
def _cwedge_table(n, p):
    """Per direction i: (src subset ranks, dst subset ranks, signs)."""
    out = []
    rk = subset_rank(n, p + 1)
    for i in range(n):
        src, dst, sgn = [], [], []
        for j, K in enumerate(subsets(n, p)):
            if i in K:
                continue
            below = sum(1 for k in K if k < i)
            src.append(j)
            dst.append(rk[tuple(sorted(K + (i,)))])
            sgn.append(-1.0 if below % 2 else 1.0)
        out.append((np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp),
                    np.array(sgn, dtype=float)))
    return tuple(out)


@lru_cache(maxsize=None)
def _cvee_table(n, p):
    """Per direction i: (src ranks, dst ranks, deletion signs), metric-free."""
    out = []
    rk = subset_rank(n, p - 1) if p >= 1 else {}
    for i in range(n):
        src, dst, sgn = [], [], []
        if p >= 1:
            for j, K in enumerate(subsets(n, p)):
                if i not in K:
                    continue
                t = K.index(i)
                src.append(j)
                dst.append(rk[K[:t] + K[t + 1:]])
                sgn.append(-1.0 if t % 2 else 1.0)
        out.append((np.array(src, dtype=np.intp), np.array(dst, dtype=np.intp),
                    np.array(sgn, dtype=float)))
    return tuple(out)


def _gamma_T(rep, i):
    key = ("gamma_T", i)
    if key not in rep._cache:
        rep._cache[key] = np.ascontiguousarray(rep.gammas[i].T)
    return rep._cache[key]


# -- operators -------------------------------------------------------------


def cwedge(phi):
    """sum_i e^i ^ (gamma_i phi); raises the form degree by one."""
    rep, n, p = phi.rep, phi.rep.n, phi.degree
    table = _cwedge_table(n, p)
    dtype = object if _is_object(phi.coeffs) else complex
    out = np.zeros((form_dim(n, p + 1), rep.dim), dtype=dtype)
    for i in range(n):
        src, dst, sgn = table[i]
        out[dst] += sgn[:, None] * (phi.coeffs[src] @ _gamma_T(rep, i))
    return SpinorForm(rep, p + 1, out)


def cvee(phi):
    """sum_i g_ii e_i _| (gamma_i phi); lowers the form degree by one."""
    rep, n, p = phi.rep, phi.rep.n, phi.degree
    table = _cvee_table(n, p)
    dtype = object if _is_object(phi.coeffs) else complex
    out = np.zeros((form_dim(n, p - 1), rep.dim), dtype=dtype)
    for i in range(n):
        src, dst, sgn = table[i]
        if len(src) == 0:
            continue
        out[dst] += (rep.metric[i] * sgn)[:, None] * \
            (phi.coeffs[src] @ _gamma_T(rep, i))
    return SpinorForm(rep, p - 1, out)


def clifford_act(X, phi):
    """Clifford multiplication of the spinor values by the frame vector X."""
    rep = phi.rep
    if len(X) != rep.n:
        raise ValueError("vector length does not match the algebra")
    if any(isinstance(c, Jet) for c in X):
        out = np.zeros(phi.coeffs.shape, dtype=object)
        for i, c in enumerate(X):
            out = out + _scale(c, phi.coeffs @ _gamma_T(rep, i))
        return SpinorForm(rep, phi.degree, out)
    G = np.zeros((rep.dim, rep.dim), dtype=complex)
    for i, c in enumerate(X):
        G += c * rep.gammas[i]
    return SpinorForm(rep, phi.degree, phi.coeffs @ G.T)


def interior_sv(X, phi):
    """Contraction of the form slot by the frame vector X."""
    rep, n, p = phi.rep, phi.rep.n, phi.degree
    if len(X) != n:
        raise ValueError("vector length does not match the algebra")
    src, ax, dst, ss = _interior_table(n, p)
    if _is_object(phi.coeffs) or any(isinstance(c, Jet) for c in X):
        Xa = np.asarray(X, dtype=object)
        out = np.zeros((form_dim(n, p - 1), rep.dim), dtype=object)
        for j, i, k, s in zip(src, ax, dst, ss):
            out[k] = out[k] + _scale(s * Xa[i], phi.coeffs[j])
        return SpinorForm(rep, p - 1, out)
    Xc = np.asarray(X, dtype=complex)
    out = np.zeros((form_dim(n, p - 1), rep.dim), dtype=complex)
    np.add.at(out, dst, (ss * Xc[ax])[:, None] * phi.coeffs[src])
    return SpinorForm(rep, p - 1, out)


def wedge_form(alpha, phi):
    """alpha ^ phi for an ordinary form alpha; acts on the form slot only."""
    rep, n = phi.rep, phi.rep.n
    if alpha.n != n:
        raise ValueError("form dimension mismatch")
    q, p = alpha.degree, phi.degree
    ii, jj, kk, ss = _wedge_table(n, q, p)
    if _is_object(phi.coeffs) or _is_object(alpha.coeffs):
        out = np.zeros((form_dim(n, q + p), rep.dim), dtype=object)
        for i, j, k, s in zip(ii, jj, kk, ss):
            out[k] = out[k] + _scale(s * alpha.coeffs[i], phi.coeffs[j])
        return SpinorForm(rep, q + p, out)
    out = np.zeros((form_dim(n, q + p), rep.dim), dtype=complex)
    np.add.at(out, kk, (ss * alpha.coeffs[ii])[:, None] * phi.coeffs[jj])
    return SpinorForm(rep, q + p, out)


def sl2_ops(phi):
    """(lowering, raising, diagonal) triple applied to phi.

    Returns (-cvee(phi), cwedge(phi), [-cvee, cwedge](phi)); the third
    output equals (n - 2p) phi in degree p, and the brackets of the triple
    with the diagonal element are 2 and -2 times the first two.
    """
    low = (-1.0) * cvee(phi)
    high = cwedge(phi)
    diag = cwedge(cvee(phi)) - cvee(cwedge(phi))
    return low, high, diag


# -- operator matrices and projectors ---------------------------------------


def operator_matrix(rep, p, op, out_degree):
    """Matrix of a linear operator on degree-p spinor forms, basis by basis."""
    n, d = rep.n, rep.dim
    cols = form_dim(n, p) * d
    rows = form_dim(n, out_degree) * d
    M = np.zeros((rows, cols), dtype=complex)
    e = SpinorForm(rep, p)
    for j, K in enumerate(subsets(n, p)):
        for s in range(d):
            e.coeffs[j, s] = 1.0
            M[:, j * d + s] = op(e).vec()
            e.coeffs[j, s] = 0.0
    return M


def _nullspace(M, rtol=1e-10):
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(M)
    top = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > rtol * top))
    return vh[rank:].conj().T


def primitive_projector(rep, p):
    """Orthogonal projector onto ker(cvee) in degree p."""
    key = ("primitive_projector", p)
    if key not in rep._cache:
        M = operator_matrix(rep, p, cvee, p - 1)
        null = _nullspace(M)
        P = null @ null.conj().T
        rep._cache[key] = Projector(f"ker cvee, degree {p}", P, null.shape[1])
    return rep._cache[key]


def primitive_ranks(rep, p):
    """dim ker(cvee) per degree q = 0..min(p, n-p)."""
    return [primitive_projector(rep, q).rank
            for q in range(min(p, rep.n - p) + 1)]


def _component_frames(rep, p):
    """Orthonormal bases of the images cwedge^(p-q)(ker cvee, degree q)."""
    key = ("sfdec_frames", p)
    if key not in rep._cache:
        n = rep.n
        frames = []
        for q in range(min(p, n - p) + 1):
            M = operator_matrix(rep, q, cvee, q - 1)
            null = _nullspace(M)
            img = null
            deg = q
            while deg < p:
                W = operator_matrix(rep, deg, cwedge, deg + 1)
                img = W @ img
                deg += 1
            Q, R = np.linalg.qr(img)
            keep = np.abs(np.diag(R)) > 1e-10 * max(1.0, np.abs(R).max())
            frames.append((q, Q[:, keep]))
        rep._cache[key] = tuple(frames)
    return rep._cache[key]


def primitive_decomposition(phi):
    """Components of phi along the images of the primitive subspaces.

    Returns a list indexed by q = 0..min(p, n-p); the q-th entry lies in
    cwedge^(p-q) of the degree-q primitive subspace and the entries sum
    to phi.
    """
    rep, p = phi.rep, phi.degree
    v = phi.vec()
    out = []
    for q, U in _component_frames(rep, p):
        comp = U @ (U.conj().T @ v)
        out.append(SpinorForm.from_vec(rep, p, comp))
    return out


# -- covariant jets ---------------------------------------------------------


def jet_projections(W):
    """The three invariant contractions of a covariant jet.

    For a decomposable jet with slices g_ii X^i phi (the covector dual of
    X tensor phi) these give (X _| phi, X-flat ^ phi, X . phi).
    """
    rep, n = W.rep, W.rep.n
    p1 = None
    p2 = None
    p3 = None
    for i in range(n):
        gi = rep.metric[i]
        Xi = [0.0] * n
        Xi[i] = 1.0
        t1 = gi * interior_sv(Xi, W.slices[i])
        t2 = wedge_form(Form.basis(n, (i,)), W.slices[i])
        t3 = gi * clifford_act(Xi, W.slices[i])
        p1 = t1 if p1 is None else p1 + t1
        p2 = t2 if p2 is None else p2 + t2
        p3 = t3 if p3 is None else p3 + t3
    return p1, p2, p3


def jet_projection_matrices(rep, p):
    """Matrices of the three jet projections on flattened covariant jets."""
    key = ("jet_matrices", p)
    if key not in rep._cache:
        n, d = rep.n, rep.dim
        m = form_dim(n, p) * d
        cols = n * m
        M1 = np.zeros((form_dim(n, p - 1) * d, cols), dtype=complex)
        M2 = np.zeros((form_dim(n, p + 1) * d, cols), dtype=complex)
        M3 = np.zeros((m, cols), dtype=complex)
        v = np.zeros(cols, dtype=complex)
        for c in range(cols):
            v[c] = 1.0
            W = CovariantJet.from_vec(rep, p, v)
            a, b, g = jet_projections(W)
            M1[:, c] = a.vec()
            M2[:, c] = b.vec()
            M3[:, c] = g.vec()
            v[c] = 0.0
        rep._cache[key] = (M1, M2, M3)
    return rep._cache[key]


def twistor_rank(rep, p):
    """Expected dimension of the joint kernel inside V* x Sigma^p.

    The adjoint images of the three contractions overlap: each target
    carries a distinguished copy of the plain spinor module and the three
    copies span only two inside the jet space, so one copy's worth of
    dimensions returns to the kernel count.  In degree 0 and n only the
    Clifford contraction is nontrivial.
    """
    n, d = rep.n, rep.dim
    sp = form_dim(n, p) * d
    if p in (0, n):
        return n * sp - d
    sm = form_dim(n, p - 1) * d
    su = form_dim(n, p + 1) * d
    return n * sp - sm - su - sp + d


def twistor_projector(rep, p):
    """Orthogonal projector onto the joint kernel of the jet projections.

    In degree 0 and n only the Clifford contraction constrains the jet, so
    the kernel is taken with respect to that single map.
    """
    key = ("twistor_projector", p)
    if key not in rep._cache:
        M1, M2, M3 = jet_projection_matrices(rep, p)
        stack = M3 if p in (0, rep.n) else np.vstack([M1, M2, M3])
        null = _nullspace(stack)
        P = null @ null.conj().T
        rep._cache[key] = Projector(f"twistor module, degree {p}", P,
                                    null.shape[1])
    return rep._cache[key]
