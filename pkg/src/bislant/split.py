"""Tangential and normal parts of J (and of an almost product structure F).

Tangent vectors are chart coordinate columns over the Jacobian frame
``Z_1..Z_k``; normal vectors are coordinates in the orthonormal normal frame.
So ``T`` is the endomorphism matrix with ``J Z_a = sum_b T[b, a] Z_b + ...``
and its metric symmetry reads ``G T = (G T)^T``.
"""

from dataclasses import dataclass

import numpy as np

from .jets import solve_spd


@dataclass(frozen=True, eq=False)
class SplitOperators:
    T: np.ndarray  # (k, k)
    N: np.ndarray  # (m-k, k)
    t: np.ndarray  # (k, m-k)
    n: np.ndarray  # (m-k, m-k)
    frame: object
    J: np.ndarray
    f: np.ndarray | None = None
    omega: np.ndarray | None = None
    B: np.ndarray | None = None
    C: np.ndarray | None = None

    @property
    def gram(self):
        return self.frame.gram

    @property
    def k(self):
        return self.T.shape[0]


def _decompose(A, frame):
    Z, nu, G = frame.tangent_frame, frame.normal_frame, frame.gram
    return (solve_spd(G, Z.T @ A @ Z), nu.T @ A @ Z, solve_spd(G, Z.T @ A @ nu), nu.T @ A @ nu)


def split_J(ambient, frame):
    J = np.asarray(ambient.J)
    T, N, t, n = _decompose(J, frame)
    extra = {}
    if getattr(ambient, "F", None) is not None:
        f, omega, B, C = _decompose(np.asarray(ambient.F), frame)
        extra = dict(f=f, omega=omega, B=B, C=C)
    return SplitOperators(T, N, t, n, frame, J, **extra)


def _maxabs(a):
    return float(np.abs(a).max()) if np.size(a) else 0.0


def check_fundamental_identities(split, params):
    """Max-abs residuals of the four algebraic consequences of J^2 = pJ + qI."""
    T, N, t, n = split.T, split.N, split.t, split.n
    p, q = params.p, params.q
    Ik, In = np.eye(T.shape[0]), np.eye(n.shape[0])
    return {
        "Eq9": _maxabs(T @ T - (p * T + q * Ik - t @ N)),
        "Eq10": _maxabs(p * N - (N @ T + n @ N)),
        "Eq11": _maxabs(n @ n - (p * n + q * In - N @ t)),
        "Eq12": _maxabs(p * t - (T @ t + t @ n)),
    }


def check_split_invariants(split):
    """Reconstruction of JZ and J nu, metric symmetry of T and n, and N/t duality."""
    Z, nu, G = split.frame.tangent_frame, split.frame.normal_frame, split.gram
    J = split.J
    GT = G @ split.T
    return {
        "Eq4": _maxabs(J @ Z - (Z @ split.T + nu @ split.N)),
        "Eq5": _maxabs(J @ nu - (Z @ split.t + nu @ split.n)),
        "Eq6": _maxabs(GT - GT.T),
        "Eq7": _maxabs(split.n - split.n.T),
        "Eq8": _maxabs(split.N - (G @ split.t).T),
    }


def product_sign(ambient, params, tol=1e-9):
    """+1 if J = (p/2) I + c F, -1 if J = (p/2) I - c F, with c = (2 sigma - p)/2."""
    c = (2.0 * params.sigma - params.p) / 2.0
    half = params.p / 2.0 * np.eye(ambient.J.shape[0])
    F = np.asarray(ambient.F)
    if _maxabs(ambient.J - (half + c * F)) < tol:
        return 1
    if _maxabs(ambient.J - (half - c * F)) < tol:
        return -1
    raise ValueError("J is not induced by its almost product structure F")


def check_product_relations(split, params, sign):
    """Residuals of T = (p/2) I +/- c f, N = +/- c omega and the symmetry of f and C."""
    if split.f is None:
        raise ValueError("split carries no almost product structure")
    c = sign * (2.0 * params.sigma - params.p) / 2.0
    G = split.gram
    Gf = G @ split.f
    return {
        "Eq110": _maxabs(split.T - (params.p / 2.0 * np.eye(split.k) + c * split.f)),
        "Eq111": _maxabs(split.N - c * split.omega),
        "Eq109": _maxabs(Gf - Gf.T),
        "C_sym": _maxabs(split.C - split.C.T),
    }
