"""Truncated Taylor arithmetic and the small dense linear algebra used throughout.

``Jet2`` carries value, gradient and Hessian of a scalar with respect to the
chart coordinates.  It is what expression trees are evaluated into, so one
pass over an immersion yields the point, its Jacobian and its second jet.

``MatJet`` carries an array together with its first partials along every chart
direction.  Assembled operators (Gram matrix, T, projectors, ...) are built
from jets of the tangent frame, which gives their derivatives without any
symbolic work.
"""

import math

import numpy as np
import scipy.linalg

from .errors import DomainError, NotPositiveDefinite, RankDeficient


class Jet2:
    """Second-order jet ``(value, grad, hess)`` of a scalar in ``k`` variables."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = float(value)
        self.grad = grad
        self.hess = hess

    @classmethod
    def constant(cls, c, k):
        return cls(c, np.zeros(k), np.zeros((k, k)))

    @classmethod
    def variable(cls, x, index, k):
        g = np.zeros(k)
        g[index] = 1.0
        return cls(x, g, np.zeros((k, k)))

    @property
    def dim(self):
        return self.grad.shape[0]

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()!r}, hess={self.hess.tolist()!r})"

    def _lift(self, other):
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(other, self.dim)

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            c = float(other)
            return Jet2(self.value * c, self.grad * c, self.hess * c)
        a, b = self, other
        cross = np.outer(a.grad, b.grad)
        return Jet2(
            a.value * b.value,
            a.value * b.grad + b.value * a.grad,
            a.value * b.hess + b.value * a.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self):
        if self.value == 0.0:
            raise DomainError("division by zero")
        v = self.value
        return self._chain(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("Jet2 only supports integer powers")
        if n == 0:
            return Jet2.constant(1.0, self.dim)
        if n < 0:
            return (self ** (-n)).reciprocal()
        v = self.value
        return self._chain(v**n, n * v ** (n - 1), n * (n - 1) * v ** (n - 2) if n > 1 else 0.0)

    def _chain(self, f0, f1, f2):
        # f(g): grad = f' g', hess = f'' g' g'^T + f' g''
        return Jet2(f0, f1 * self.grad, f2 * np.outer(self.grad, self.grad) + f1 * self.hess)

    def sin(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(s, c, -s)

    def cos(self):
        s, c = math.sin(self.value), math.cos(self.value)
        return self._chain(c, -s, -c)

    def tan(self):
        c = math.cos(self.value)
        if c == 0.0:
            raise DomainError("tan undefined at odd multiples of pi/2")
        t = math.tan(self.value)
        sec2 = 1.0 + t * t
        return self._chain(t, sec2, 2.0 * t * sec2)

    def sqrt(self):
        if self.value <= 0.0:
            raise DomainError(f"sqrt of non-positive argument {self.value!r} has no derivative")
        r = math.sqrt(self.value)
        return self._chain(r, 0.5 / r, -0.25 / (r * self.value))

    def log(self):
        if self.value <= 0.0:
            raise DomainError(f"ln of non-positive argument {self.value!r}")
        v = self.value
        return self._chain(math.log(v), 1.0 / v, -1.0 / v**2)


def stack_jets(jets):
    """Split a sequence of ``Jet2`` into value (m,), Jacobian (m, k), Hessians (m, k, k)."""
    value = np.array([j.value for j in jets])
    jac = np.array([j.grad for j in jets])
    hess = np.array([j.hess for j in jets])
    return value, jac, hess


class MatJet:
    """An array ``value`` with first partials ``d[a] = d value / d u_a``."""

    __slots__ = ("value", "d")
    __array_ufunc__ = None  # make ndarray @ MatJet defer to __rmatmul__

    def __init__(self, value, d):
        self.value = np.asarray(value, dtype=float)
        self.d = np.asarray(d, dtype=float)

    @classmethod
    def constant(cls, value, k):
        value = np.asarray(value, dtype=float)
        return cls(value, np.zeros((k,) + value.shape))

    @property
    def k(self):
        return self.d.shape[0]

    @property
    def T(self):
        return MatJet(self.value.T, np.swapaxes(self.d, -1, -2) if self.value.ndim >= 2 else self.d)

    def _lift(self, other):
        if isinstance(other, MatJet):
            return other
        return MatJet.constant(other, self.k)

    def __add__(self, other):
        o = self._lift(other)
        return MatJet(self.value + o.value, self.d + o.d)

    __radd__ = __add__

    def __neg__(self):
        return MatJet(-self.value, -self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MatJet):
            c = np.asarray(other, dtype=float)
            return MatJet(self.value * c, self.d * c)
        # elementwise with broadcasting (scalars included)
        value = self.value * other.value
        n = value.ndim
        return MatJet(value, _pad(self, n) * other.value + self.value * _pad(other, n))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, MatJet):
            other = np.asarray(other, dtype=float)
            return MatJet(self.value @ other, self.d @ other)
        return MatJet(self.value @ other.value, self.d @ other.value + _left_apply(self.value, other))

    def __rmatmul__(self, other):
        other = np.asarray(other, dtype=float)
        return MatJet(other @ self.value, _left_apply(other, self))

    def __truediv__(self, other):
        o = self._lift(other)
        return self * o.apply(lambda x: 1.0 / x, lambda x: -1.0 / x**2)

    def inv(self):
        vi = np.linalg.inv(self.value)
        return MatJet(vi, -vi @ self.d @ vi)

    def apply(self, f, df):
        """Elementwise ``f`` with derivative ``df``."""
        return MatJet(f(self.value), df(self.value) * self.d)

    def sqrt(self):
        return self.apply(np.sqrt, lambda x: 0.5 / np.sqrt(x))

    def arccos(self):
        return self.apply(np.arccos, lambda x: -1.0 / np.sqrt(1.0 - x * x))

    def along(self, direction):
        """Directional derivative along chart vector ``direction``."""
        return np.tensordot(np.asarray(direction, dtype=float), self.d, axes=1)


def _left_apply(A, jet):
    # A @ d[a] for every chart direction a
    if jet.value.ndim == 1:
        return (A @ jet.d.T).T
    return A @ jet.d


def _pad(jet, ndim):
    # align derivative axes with numpy broadcasting of the values
    extra = ndim - jet.value.ndim
    return jet.d.reshape((jet.k,) + (1,) * extra + jet.value.shape)


def solve_spd(G, b, tol=1e-12):
    """Solve ``G x = b`` for symmetric positive definite ``G`` (Cholesky)."""
    G = np.asarray(G, dtype=float)
    b = np.asarray(b, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {G.shape}")
    try:
        c, lower = scipy.linalg.cho_factor(G, lower=True, check_finite=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from None
    pivots = np.abs(np.diag(c))
    if pivots.min() <= tol * max(1.0, pivots.max()):
        raise NotPositiveDefinite(f"Cholesky pivot {pivots.min():.3e} below tolerance")
    return scipy.linalg.cho_solve((c, lower), b)


def orthonormal_complement(columns, rank_tol=1e-10):
    """Orthonormal basis (m, m-k) of the orthogonal complement of the column span.

    Householder QR of the frame; the trailing columns of the complete Q span
    the complement.  LAPACK's sign convention makes the result deterministic.
    """
    A = np.asarray(columns, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    m, k = A.shape
    if k > m:
        raise RankDeficient(f"{k} columns cannot be independent in R^{m}")
    scale = np.linalg.norm(A, axis=0).max() if k else 0.0
    Q, R = np.linalg.qr(A, mode="complete")
    if k and np.abs(np.diag(R)).min() <= rank_tol * max(scale, np.finfo(float).tiny):
        raise RankDeficient(f"numerical rank below {k}")
    return Q[:, k:]


def procrustes_align(reference, frame):
    """Rotate ``frame`` (orthonormal columns) to best match ``reference``."""
    U, _, Vt = np.linalg.svd(frame.T @ reference)
    return frame @ (U @ Vt)


def projector(columns):
    """Euclidean orthogonal projector onto the column span of ``columns``."""
    G = columns.T @ columns
    return columns @ solve_spd(G, columns.T)
