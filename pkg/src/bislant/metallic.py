"""Metallic numbers and constant metallic structures on R^m."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AlmostProductViolation, MetallicViolation

SIGMA = "sigma"
SIGMA_BAR = "sigma_bar"


@dataclass(frozen=True)
class MetallicParams:
    """Roots of ``x^2 - p x - q`` for positive integers ``p``, ``q``."""

    p: int
    q: int
    sigma: float = field(init=False)
    sigma_bar: float = field(init=False)

    def __post_init__(self):
        if isinstance(self.p, bool) or isinstance(self.q, bool):
            raise TypeError("p and q must be integers")
        if int(self.p) != self.p or int(self.q) != self.q:
            raise ValueError(f"p and q must be integers, got p={self.p!r}, q={self.q!r}")
        if self.p < 1 or self.q < 1:
            raise ValueError(f"p and q must be positive, got p={self.p}, q={self.q}")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))
        sigma = (self.p + math.sqrt(self.p * self.p + 4 * self.q)) / 2.0
        object.__setattr__(self, "sigma", sigma)
        # q / sigma avoids the cancellation in p - sigma for large p
        object.__setattr__(self, "sigma_bar", -self.q / sigma)

    @property
    def discriminant_root(self):
        return math.sqrt(self.p * self.p + 4 * self.q)

    def constants(self):
        """Named constants understood by the immersion DSL."""
        return {"sigma": self.sigma, "sigma_bar": self.sigma_bar, "p": float(self.p),
                "q": float(self.q), "pi": math.pi}

    def root(self, name):
        if name in (SIGMA, "s", "σ"):
            return self.sigma
        if name in (SIGMA_BAR, "sb", "σ̄"):
            return self.sigma_bar
        raise ValueError(f"unknown root name {name!r}; expected 'sigma' or 'sigma_bar'")


def make_params(p, q):
    return MetallicParams(p, q)


def metallic_defect(J, params):
    """Max-abs entry of ``J^2 - pJ - qI``."""
    J = np.asarray(J, dtype=float)
    return float(np.abs(J @ J - params.p * J - params.q * np.eye(J.shape[0])).max())


@dataclass(frozen=True, eq=False)
class AmbientStructure:
    """Euclidean R^m with a constant metallic structure ``J`` (and optional source ``F``)."""

    J: np.ndarray
    params: MetallicParams
    F: np.ndarray | None = None
    pattern: tuple | None = None

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        if self.F is not None:
            F = np.array(self.F, dtype=float)
            F.setflags(write=False)
            object.__setattr__(self, "F", F)

    @property
    def dim(self):
        return self.J.shape[0]

    def validate(self, tol=1e-10):
        defect = metallic_defect(self.J, self.params)
        if defect > tol:
            raise MetallicViolation(f"J^2 - pJ - qI has max entry {defect:.3e}")
        if np.abs(self.J - self.J.T).max() > 1e-12:
            raise MetallicViolation("J is not symmetric")
        if self.F is not None:
            _check_almost_product(self.F, tol)
        return self

    def perturbed(self, E):
        """Unvalidated copy with ``J + E``; used for negative controls."""
        return AmbientStructure(self.J + np.asarray(E, dtype=float), self.params, None, None)

    def covariant_derivative(self, direction):
        """Flat-ambient derivative of J along ``direction``: zero for constant J."""
        return np.zeros_like(self.J)


def diagonal_structure(params, signature):
    """``J = diag(roots)`` where ``signature`` names each root."""
    signature = tuple(signature)
    if not signature:
        raise ValueError("signature must be non-empty")
    roots = [params.root(s) for s in signature]
    names = tuple(SIGMA if r == params.sigma else SIGMA_BAR for r in roots)
    return AmbientStructure(np.diag(roots), params, None, names).validate()


def _check_almost_product(F, tol):
    F = np.asarray(F, dtype=float)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise AlmostProductViolation(f"F must be square, got shape {F.shape}")
    defect = np.abs(F @ F - np.eye(F.shape[0])).max()
    if defect > tol:
        raise AlmostProductViolation(f"F^2 - I has max entry {defect:.3e}")
    if np.abs(F - F.T).max() > tol:
        raise AlmostProductViolation("F is not symmetric")


def from_almost_product(params, F, tol=1e-10):
    """The two metallic structures ``(p/2) I +/- ((2 sigma - p)/2) F``."""
    F = np.asarray(F, dtype=float)
    _check_almost_product(F, tol)
    c = (2.0 * params.sigma - params.p) / 2.0
    half = params.p / 2.0 * np.eye(F.shape[0])
    J1 = AmbientStructure(c * F + half, params, F).validate()
    J2 = AmbientStructure(-c * F + half, params, F).validate()
    return J1, J2


def random_almost_product(m, rng, rank=None):
    """A random symmetric involution ``F = Q diag(+-1) Q^T`` from a numpy generator."""
    Q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    if rank is None:
        rank = int(rng.integers(0, m + 1))
    signs = np.array([1.0] * rank + [-1.0] * (m - rank))
    F = (Q * signs) @ Q.T
    return 0.5 * (F + F.T)
