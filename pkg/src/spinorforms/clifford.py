"""Clifford algebra matrix representations in arbitrary signature.

Conventions: generators satisfy gamma_i gamma_j + gamma_j gamma_i = -2 g_ij,
so a unit spacelike direction squares to -1 and a unit timelike one to +1.
The matrices come from the iterated Pauli tensor product; timelike
directions are spacelike generators scaled by i, which keeps the whole
family deterministic across signatures.

The dimension-raising embedding realizes the larger algebra so that its
first n generators act through a coordinate inclusion of the small spinor
space.  That makes equivariance exact by layout.  The embedding is only
canonical up to an equivariant isomorphism; every residual computed
downstream is invariant under that freedom, so this realization is as good
as any.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .jets import Jet, atan2 as _atan2, value as _val

__all__ = [
    "Signature",
    "CliffordRep",
    "SpinEmbedding",
    "BranchAmbiguityError",
    "build_clifford",
    "clifford_mul",
    "anticommutation_residual",
    "volume_element",
    "half_spinor_projectors",
    "build_embedding",
    "phi_pm",
    "spin_lift",
]

_S1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_S2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_S3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class BranchAmbiguityError(RuntimeError):
    """Spin lift hit an angle-pi plane or a matrix outside the identity
    component of the special orthogonal group."""


class Signature:
    """Counts of +1 and -1 metric directions, +1 directions listed first."""

    __slots__ = ("n_plus", "n_minus")

    def __init__(self, n_plus, n_minus=0):
        if n_plus < 0 or n_minus < 0 or n_plus + n_minus < 1:
            raise ValueError("need n_plus, n_minus >= 0 with n >= 1")
        self.n_plus = int(n_plus)
        self.n_minus = int(n_minus)

    @property
    def n(self):
        return self.n_plus + self.n_minus

    @property
    def diag(self):
        return (1,) * self.n_plus + (-1,) * self.n_minus

    def __repr__(self):
        return f"Signature({self.n_plus}, {self.n_minus})"

    def __eq__(self, other):
        return (isinstance(other, Signature)
                and (self.n_plus, self.n_minus) == (other.n_plus, other.n_minus))

    def __hash__(self):
        return hash((self.n_plus, self.n_minus))


def _as_diag(sig):
    """Metric diagonal tuple from a Signature or an explicit +-1 sequence.

    Explicit sequences may order the signs freely (a cone frame keeps its
    timelike direction last), whereas a Signature always sorts +1 first.
    """
    if isinstance(sig, Signature):
        return sig.diag
    diag = tuple(int(s) for s in sig)
    if not diag or any(s not in (-1, 1) for s in diag):
        raise ValueError("metric diagonal must be a nonempty +-1 sequence")
    return diag


class CliffordRep:
    """Explicit gamma matrices over a fixed metric diagonal.

    metric: tuple of +-1 per frame direction (not necessarily sorted)
    gammas: tuple of complex (dim, dim) matrices, read-only
    """

    def __init__(self, metric, gammas):
        self.metric = tuple(int(s) for s in metric)
        self.n = len(self.metric)
        gs = []
        for g in gammas:
            a = np.array(g, dtype=complex)
            a.setflags(write=False)
            gs.append(a)
        if len(gs) != self.n:
            raise ValueError("one gamma per metric entry")
        self.gammas = tuple(gs)
        self.dim = self.gammas[0].shape[0]
        self._cache = {}

    @property
    def signature(self):
        plus = sum(1 for s in self.metric if s == 1)
        return Signature(plus, self.n - plus)

    def __repr__(self):
        return f"CliffordRep(metric={self.metric}, dim={self.dim})"


def _euclid_generators(n):
    """Hermitian anticommuting E_i with E_i^2 = +1, dim 2^(n//2)."""
    m = n // 2
    dim = 2 ** m
    mats = []
    for k in range(m):
        head = np.eye(1, dtype=complex)
        for _ in range(k):
            head = np.kron(head, _S3)
        tail = np.eye(2 ** (m - k - 1), dtype=complex)
        mats.append(np.kron(np.kron(head, _S1), tail))
        mats.append(np.kron(np.kron(head, _S2), tail))
    if n % 2:
        odd = np.eye(1, dtype=complex)
        for _ in range(m):
            odd = np.kron(odd, _S3)
        mats.append(odd)
    assert all(a.shape == (dim, dim) for a in mats)
    return mats[:n]


@lru_cache(maxsize=None)
def _build_clifford_cached(diag):
    es = _euclid_generators(len(diag))
    gammas = [1.0j * e if s == 1 else -e for s, e in zip(diag, es)]
    return CliffordRep(diag, gammas)


def build_clifford(sig):
    """Gamma matrices for the given Signature or metric diagonal.

    Cached per metric, so repeated calls hand back the identical object;
    all attached caches (operator tables etc.) are shared.
    """
    return _build_clifford_cached(_as_diag(sig))


def anticommutation_residual(rep):
    """max_ij | gamma_i gamma_j + gamma_j gamma_i + 2 g_ij |, should be 0."""
    eye = np.eye(rep.dim, dtype=complex)
    worst = 0.0
    for i, gi in enumerate(rep.gammas):
        for j, gj in enumerate(rep.gammas):
            t = gi @ gj + gj @ gi
            if i == j:
                t = t + 2.0 * rep.metric[i] * eye
            worst = max(worst, float(np.max(np.abs(t))))
    return worst


def clifford_mul(rep, X, psi):
    """(sum_i X^i gamma_i) psi for frame components X and a spinor psi.

    Components and spinor entries may be jets; plain complex data stays on
    the fast numpy path.
    """
    if len(X) != rep.n:
        raise ValueError("vector length does not match the algebra")
    psi = np.asarray(psi)
    if psi.shape[0] != rep.dim:
        raise ValueError("spinor length does not match the algebra")
    out = None
    for c, g in zip(X, rep.gammas):
        if isinstance(c, Jet):
            term = np.frompyfunc(lambda v, c=c: c * v, 1, 1)(
                np.asarray(g @ psi, dtype=object))
        else:
            term = c * (g @ psi)
        out = term if out is None else out + term
    return out


def volume_element(rep):
    """Ordered product of all gamma matrices, cached on the rep."""
    if "volume" not in rep._cache:
        v = np.eye(rep.dim, dtype=complex)
        for g in rep.gammas:
            v = v @ g
        v.setflags(write=False)
        rep._cache["volume"] = v
    return rep._cache["volume"]


def half_spinor_projectors(rep):
    """Chirality projectors (P_plus, P_minus) for even n.

    Built from the volume element normalized to square to +1; each has rank
    dim/2, commutes with even products gamma_i gamma_j and anticommutes
    with each gamma_i.
    """
    if rep.n % 2:
        raise ValueError("half-spinor projectors need an even number of directions")
    if "half_projectors" not in rep._cache:
        vol = volume_element(rep)
        lam = (vol @ vol)[0, 0]
        omega = vol if abs(lam - 1.0) < 1e-12 else 1.0j * vol
        eye = np.eye(rep.dim, dtype=complex)
        pair = (0.5 * (eye + omega), 0.5 * (eye - omega))
        for p in pair:
            p.setflags(write=False)
        rep._cache["half_projectors"] = pair
    return rep._cache["half_projectors"]


class SpinEmbedding:
    """Inclusion of a spinor module into the one-dimension-higher algebra.

    base: CliffordRep over the given metric diagonal
    cone: CliffordRep over metric + (epsilon,), last direction appended
    restricted: the first n cone gammas viewed over the base metric; this
        is the module extracted base fields live in (it equals `base` when
        n is even, and the doubled module when n is odd)
    inject: coordinate inclusion of base spinors into cone spinors
    sqrt_eps: 1 for epsilon = 1, i for epsilon = -1
    """

    def __init__(self, base, cone, inject, epsilon):
        self.base = base
        self.cone = cone
        self.inject = inject
        self.epsilon = int(epsilon)
        self.sqrt_eps = 1.0 + 0.0j if epsilon == 1 else 1.0j
        self.restricted = CliffordRep(base.metric, cone.gammas[:base.n])
        last = cone.gammas[-1]
        eye = np.eye(cone.dim, dtype=complex)
        self._phi = {
            +1: eye - self.sqrt_eps * last,
            -1: eye + self.sqrt_eps * last,
        }
        for m in self._phi.values():
            m.setflags(write=False)

    def phi_matrix(self, sign):
        """Matrix of (1 -+ sqrt(eps) e_last) acting on the large module."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return self._phi[sign]


@lru_cache(maxsize=None)
def _build_embedding_cached(diag, eps):
    base = build_clifford(diag)
    n, d = base.n, base.dim
    if n % 2 == 0:
        vol = volume_element(base)
        lam = (vol @ vol)[0, 0].real
        scale = 1.0 + 0.0j if abs(lam + eps) < 1e-12 else 1.0j
        last = scale * vol
        cone = CliffordRep(diag + (eps,), list(base.gammas) + [last])
        inject = np.eye(d, dtype=complex)
    else:
        zero = np.zeros((d, d), dtype=complex)
        eye = np.eye(d, dtype=complex)
        gam = [np.block([[g, zero], [zero, -g]]) for g in base.gammas]
        gam.append(np.block([[zero, eye], [-eps * eye, zero]]))
        cone = CliffordRep(diag + (eps,), gam)
        inject = np.vstack([eye, zero])
    assert anticommutation_residual(cone) < 1e-12
    inject.setflags(write=False)
    return SpinEmbedding(base, cone, inject, eps)


def build_embedding(sig, eps=1):
    """SpinEmbedding for the metric extended by one direction of sign eps."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    return _build_embedding_cached(_as_diag(sig), int(eps))


def phi_pm(emb, sign, psi):
    """Apply (1 -+ sqrt(eps) e_last) after including psi in the large module.

    psi of base dimension is included first; psi already of cone dimension
    is mapped in place, which is how the inverse direction (half of the
    opposite sign map) is used.
    """
    psi = np.asarray(psi)
    if psi.shape[0] == emb.base.dim and emb.base.dim != emb.cone.dim:
        psi = emb.inject @ psi
    elif psi.shape[0] != emb.cone.dim:
        raise ValueError("spinor length matches neither module")
    return emb.phi_matrix(sign) @ psi


# -- spin lift -----------------------------------------------------------


def _maxabs(entries):
    worst = 0.0
    for e in entries:
        worst = max(worst, float(np.max(np.abs(np.asarray(e)))))
    return worst


def _rot_factor(t, Q, circular):
    """exp(t Q) where Q^2 = -1 (circular) or +1 (hyperbolic)."""
    if isinstance(t, Jet):
        cs = t.cos() if circular else t.cosh()
        sn = t.sin() if circular else t.sinh()
        D = Q.shape[0]
        F = np.empty((D, D), dtype=object)
        for i in range(D):
            for j in range(D):
                q = Q[i, j]
                term = q * sn if q != 0 else 0.0
                F[i, j] = cs + term if i == j else term
        return F
    cs = np.cos(t) if circular else np.cosh(t)
    sn = np.sin(t) if circular else np.sinh(t)
    return cs * np.eye(Q.shape[0], dtype=complex) + sn * Q


def _plane_factors(rep, R, tol=1e-10):
    """Factor R in SO(metric) into plane rotations and lift each factor.

    Returns (s, s_inv) with s gamma_i s_inv = sum_j R_ji gamma_j.  Entries
    of R may be jets (derivative tracking flows through the lift); all
    validation happens on the plain values, so jet input is still guarded
    against non-orthogonal or disconnected matrices.
    """
    n, g = rep.n, rep.metric
    A = [[R[i][j] for j in range(n)] for i in range(n)]

    V = [[_val(A[i][j]) for j in range(n)] for i in range(n)]
    resid = []
    for i in range(n):
        for j in range(n):
            acc = -g[i] if i == j else 0.0
            for k in range(n):
                acc = acc + g[k] * V[k][i] * V[k][j]
            resid.append(acc)
    if _maxabs(resid) > tol:
        raise ValueError("matrix is not orthogonal for this metric")

    factors = []
    for c in range(n - 1):
        for r in range(c + 1, n):
            a, b = A[c][c], A[r][c]
            if g[c] == g[r]:
                theta = _atan2(b, a)
                if _maxabs([_val(theta)]) > np.pi - 1e-12:
                    raise BranchAmbiguityError(
                        f"plane ({c},{r}) rotation at angle pi is sign-ambiguous")
                cs = theta.cos() if isinstance(theta, Jet) else np.cos(theta)
                sn = theta.sin() if isinstance(theta, Jet) else np.sin(theta)
                t = (0.5 * g[c]) * theta
                circ = True
            else:
                av, bv = np.asarray(_val(a)), np.asarray(_val(b))
                if not np.all(np.abs(av) > np.abs(bv)):
                    raise BranchAmbiguityError(
                        f"hyperbolic plane ({c},{r}) cannot be eliminated; "
                        "matrix is outside the identity component")
                q = b / a
                theta = q.arctanh() if isinstance(q, Jet) else np.arctanh(q)
                cs = theta.cosh() if isinstance(theta, Jet) else np.cosh(theta)
                sn = theta.sinh() if isinstance(theta, Jet) else np.sinh(theta)
                t = (0.25 * (g[c] - g[r])) * theta
                circ = False
            if circ:
                newc = [cs * A[c][k] + sn * A[r][k] for k in range(n)]
                newr = [-sn * A[c][k] + cs * A[r][k] for k in range(n)]
            else:
                newc = [cs * A[c][k] - sn * A[r][k] for k in range(n)]
                newr = [-sn * A[c][k] + cs * A[r][k] for k in range(n)]
            A[c], A[r] = newc, newr
            factors.append((c, r, t, circ))

    resid = []
    for i in range(n):
        for j in range(n):
            resid.append(_val(A[i][j]) - (1.0 if i == j else 0.0))
    if _maxabs(resid) > max(tol, 1e-9):
        raise BranchAmbiguityError(
            "factorization did not reach the identity; matrix is outside "
            "the identity component")

    s = np.eye(rep.dim, dtype=complex)
    s_inv = np.eye(rep.dim, dtype=complex)
    for c, r, t, circ in factors:
        Q = rep.gammas[c] @ rep.gammas[r]
        s = s @ _rot_factor(t, Q, circ)
        s_inv = _rot_factor(-t, Q, circ) @ s_inv
    return s, s_inv


def spin_lift(rep, R, tol=1e-10):
    """Spinor-space matrix s with s gamma_i s^-1 = sum_j R_ji gamma_j.

    The sign of s is fixed by a deterministic column-major plane-rotation
    factorization, so the lift is continuous in R on simply connected
    domains away from angle-pi planes (those raise BranchAmbiguityError,
    as does any R outside the identity component).
    """
    s, _ = _plane_factors(rep, R, tol=tol)
    return s
