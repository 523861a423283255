"""Wirtinger angles, pointwise slant tests and bi-slant classification."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateVector, SpanDefect
from .jets import solve_spd

ANGLE_TOL = 1e-6  # radians; agreement of per-direction angles, and "= 0 / = pi/2"
CONSTANT_SPREAD = 1e-8  # max - min threshold separating slant from pointwise slant


def wirtinger_angle(split, X, G=None):
    """``arccos(||TX||_g / ||JX||)`` for a chart vector ``X``."""
    G = split.gram if G is None else G
    X = np.asarray(X, dtype=float)
    JX = split.J @ (split.frame.tangent_frame @ X)
    norm_J = float(np.linalg.norm(JX))
    if norm_J < 1e-12:
        raise DegenerateVector("JX vanishes; the Wirtinger angle is undefined")
    TX = split.T @ X
    norm_T = math.sqrt(max(float(TX @ G @ TX), 0.0))
    return math.acos(min(norm_T / norm_J, 1.0))


def _as_basis(basis, k):
    B = np.asarray(basis, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if B.shape[0] != k:
        raise SpanDefect(f"distribution basis has {B.shape[0]} rows, chart dimension is {k}")
    return B


@dataclass(frozen=True, eq=False)
class Distribution:
    """A distribution spanned by constant combinations of the coordinate fields."""

    basis: np.ndarray  # (k, d)
    name: str = "D"

    @classmethod
    def coordinate(cls, indices, k, name="D"):
        return cls(np.eye(k)[:, list(indices)], name)

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self, G):
        """``G``-orthogonal projector ``B (B^T G B)^{-1} B^T G``."""
        B = self.basis
        return B @ solve_spd(B.T @ G @ B, B.T @ G)

    def restricted(self, T, G):
        """Matrix of ``P T`` restricted to the distribution, in its own basis."""
        B = self.basis
        return solve_spd(B.T @ G @ B, B.T @ G @ T @ B)

    def test_directions(self):
        """Basis vectors plus the normalized sum and difference of the first two."""
        B = self.basis
        dirs = [B[:, i] for i in range(self.dim)]
        if self.dim > 1:
            dirs += [B[:, 0] + B[:, 1], B[:, 0] - B[:, 1]]
        return dirs


def _fit_cos2(T_D, p, q):
    A = T_D @ T_D
    M = p * T_D + q * np.eye(T_D.shape[0])
    c = float(np.sum(A * M) / np.sum(M * M))
    return c, float(np.abs(A - c * M).max())


@dataclass
class SlantTest:
    is_pointwise_slant: bool
    theta: float  # from the fitted cos^2
    cos2: float
    residual: float  # max-abs residual of T_D^2 = c (p T_D + q I)
    direction_angles: list
    angle_spread: float
    stability: float  # ||(I - P) T P||, zero when T(D) is inside D


def pointwise_slant_test(split, params, distribution=None, tol=1e-9):
    """Fit ``T^2 = cos^2(theta) (pT + qI)`` on a distribution (default: whole tangent space)."""
    G = split.gram
    k = split.k
    D = distribution or Distribution(np.eye(k), "TM")
    T = split.T
    P = D.projector(G)
    stability = float(np.abs((np.eye(k) - P) @ T @ P).max())
    c, residual = _fit_cos2(D.restricted(T, G), params.p, params.q)
    theta = math.acos(math.sqrt(min(max(c, 0.0), 1.0)))
    angles = [wirtinger_angle(split, X, G) for X in D.test_directions()]
    spread = max(angles) - min(angles)
    ok = residual < tol and spread < ANGLE_TOL and stability < 1e-9 * max(1.0, np.abs(T).max())
    return SlantTest(bool(ok), theta, c, residual, angles, spread, stability)


def _near(theta, target):
    return abs(theta - target) < ANGLE_TOL


@dataclass
class PointConditions:
    point: tuple
    orthogonality: float  # max |g(X, Z)| over basis pairs
    j_orthogonality: float  # max |<JX, Z>| over basis pairs, both orders
    d1: SlantTest
    d2: SlantTest
    whole: SlantTest

    @property
    def holds(self):
        return self.orthogonality < 1e-9 and self.j_orthogonality < 1e-9 and self.d1.is_pointwise_slant \
            and self.d2.is_pointwise_slant


def check_definition(split, params, d1, d2):
    G = split.gram
    k = split.k
    if d1.dim + d2.dim != k:
        raise SpanDefect(f"dim D1 + dim D2 = {d1.dim + d2.dim}, expected {k}")
    if np.linalg.matrix_rank(np.hstack([d1.basis, d2.basis])) != k:
        raise SpanDefect("D1 and D2 do not span the tangent space")
    Z = split.frame.tangent_frame
    B1, B2 = Z @ d1.basis, Z @ d2.basis
    scale = max(1.0, float(np.abs(G).max()))
    orth = float(np.abs(B1.T @ B2).max()) / scale
    JB1, JB2 = split.J @ B1, split.J @ B2
    jorth = max(float(np.abs(JB1.T @ B2).max()), float(np.abs(JB2.T @ B1).max())) / scale
    return PointConditions(split.frame.point, orth, jorth, pointwise_slant_test(split, params, d1),
                           pointwise_slant_test(split, params, d2), pointwise_slant_test(split, params))


@dataclass
class SlantReport:
    points: list
    theta1: list
    theta2: list
    verdict: str
    proper: bool
    constant1: bool
    constant2: bool
    conditions: list = field(repr=False, default_factory=list)
    warped: bool = False
    reasons: list = field(default_factory=list)

    def to_dict(self):
        worst = lambda key: max((getattr(c, key) for c in self.conditions), default=0.0)  # noqa: E731
        return {
            "verdict": self.verdict,
            "proper": self.proper,
            "theta1": {"min": min(self.theta1, default=None), "max": max(self.theta1, default=None),
                       "constant": self.constant1},
            "theta2": {"min": min(self.theta2, default=None), "max": max(self.theta2, default=None),
                       "constant": self.constant2},
            "orthogonality": worst("orthogonality"),
            "j_orthogonality": worst("j_orthogonality"),
            "slant_residual": max((max(c.d1.residual, c.d2.residual) for c in self.conditions), default=0.0),
            "reasons": list(self.reasons),
            "points": len(self.points),
        }


def _verdict(theta1, theta2, whole_slant, whole_theta):
    t1, t2 = np.asarray(theta1), np.asarray(theta2)
    zero = lambda t: bool(np.all(np.abs(t) < ANGLE_TOL))  # noqa: E731
    right = lambda t: bool(np.all(np.abs(t - math.pi / 2) < ANGLE_TOL))  # noqa: E731
    generic = lambda t: bool(np.all((np.abs(t) >= ANGLE_TOL) & (np.abs(t - math.pi / 2) >= ANGLE_TOL)))  # noqa: E731
    if zero(t1) and zero(t2):
        return "invariant"
    if right(t1) and right(t2):
        return "anti-invariant"
    if whole_slant:
        spread = max(whole_theta) - min(whole_theta)
        return "slant" if spread < CONSTANT_SPREAD else "pointwise slant"
    if (zero(t1) and generic(t2)) or (zero(t2) and generic(t1)):
        return "pointwise semi-slant"
    if (right(t1) and generic(t2)) or (right(t2) and generic(t1)):
        return "pointwise hemi-slant"
    return "pointwise bi-slant"


def classify_bislant(geometries, d1, d2, warping_constant=None):
    """Classify the pair ``(D1, D2)`` over sampled points.

    ``geometries`` are ``PointGeometry`` objects (or anything with ``split`` and
    ``params``).  ``warping_constant`` is ``False`` for a declared warped product
    with nonconstant warping function, which prefixes the verdict.
    """
    conditions, th1, th2, whole = [], [], [], []
    for geom in geometries:
        c = check_definition(geom.split, geom.params, d1, d2)
        conditions.append(c)
        th1.append(c.d1.theta)
        th2.append(c.d2.theta)
        whole.append(c.whole)
    reasons = []
    for c in conditions:
        if c.orthogonality >= 1e-9:
            reasons.append(f"D1 and D2 are not orthogonal at {c.point}")
        if c.j_orthogonality >= 1e-9:
            reasons.append(f"J(D1) is not orthogonal to D2 at {c.point}")
        for name, test in (("D1", c.d1), ("D2", c.d2)):
            if not test.is_pointwise_slant:
                reasons.append(f"{name} is not pointwise slant at {c.point}")
    points = [c.point for c in conditions]
    const1 = bool(th1) and max(th1) - min(th1) < CONSTANT_SPREAD
    const2 = bool(th2) and max(th2) - min(th2) < CONSTANT_SPREAD
    if reasons:
        return SlantReport(points, th1, th2, "none", False, const1, const2, conditions, False, reasons)
    whole_slant = all(w.is_pointwise_slant for w in whole)
    verdict = _verdict(th1, th2, whole_slant, [w.theta for w in whole])
    avoid = all(not (_near(a, 0) or _near(a, math.pi / 2)) for a in th1 + th2)
    proper = avoid and not const1 and not const2
    warped = warping_constant is False
    if warped:
        verdict = "warped product " + verdict
    return SlantReport(points, th1, th2, verdict, proper, const1, const2, conditions, warped, [])


# identity suite ----------------------------------------------------------


def _residual(lhs_terms, rhs_terms):
    lhs = sum(lhs_terms)
    rhs = sum(rhs_terms)
    scale = max([1.0] + [float(np.abs(t).max()) for t in list(lhs_terms) + list(rhs_terms)])
    return float(np.abs(np.asarray(lhs - rhs)).max()) / scale


def theta_fd(spec, ambient, x, X, direction, step=1e-4):
    """``direction(theta_X)`` by central differences of the Wirtinger angle."""
    from .immersion import frame_at
    from .split import split_J

    x = np.asarray(x, dtype=float)
    d = np.asarray(direction, dtype=float)
    vals = []
    for s in (step, -step):
        sp = split_J(ambient, frame_at(spec, x + s * d, check_domain=False))
        vals.append(wirtinger_angle(sp, X))
    return (vals[0] - vals[1]) / (2 * step)


def slant_identity_suite(geom, distribution, params, tol_alg=1e-9, tol_d2=1e-6, fd_step=1e-4):
    """Residuals of the slant identities on ``distribution`` at one point.

    The tangential ``(NX, NY)`` and ``tNX`` identities are checked for basis
    pairs ``X, Y`` of the distribution; the derivative identity for
    ``X`` along every coordinate field and ``Y`` in the distribution.  The
    derivative identity is only asserted when ``nabla_X Y`` stays in the
    distribution (its derivation differentiates ``T_D^2 = cos^2 (pT_D + qI)``
    inside ``D``); otherwise the case is recorded as not applicable.
    """
    test = pointwise_slant_test(geom.split, params, distribution, tol_alg)
    theta = test.theta
    s2 = math.sin(theta) ** 2
    c2 = math.cos(theta) ** 2
    p, q = params.p, params.q
    G = geom.G
    T = geom.T
    P = distribution.projector(G)
    out = []
    dirs = distribution.test_directions()
    for i, X in enumerate(dirs):
        for j, Y in enumerate(dirs):
            NX, NY = geom.N(X), geom.N(Y)
            r29 = _residual([NX @ NY], [s2 * (p * geom.g(T @ X, Y) + q * geom.g(X, Y))])
            out.append({"identity": "Eq29", "pair": (i, j), "residual": r29, "tol": tol_alg, "applicable": True})
        tN = geom.t(geom.N(X))
        r30 = _residual([tN], [s2 * (p * (T @ X) + q * X)])
        out.append({"identity": "Eq30", "pair": (i,), "residual": r30, "tol": tol_alg, "applicable": True})
    Y = distribution.basis[:, 0]
    for a in range(geom.k):
        X = geom.e(a)
        cov = geom.covariant(X)
        dtheta_jet = geom.theta_derivative(Y, X)
        dtheta_fd = theta_fd(geom.spec, geom.ambient, geom.x, Y, X, fd_step)
        leak = float(np.abs((np.eye(geom.k) - P) @ geom.nabla(X, Y)).max())
        applicable = leak < 1e-9
        smooth = bool(np.isfinite(dtheta_jet))
        # at theta in {0, pi/2} the sin(2 theta) factor vanishes
        angle_term = math.sin(2 * theta) * dtheta_jet if smooth else 0.0
        lhs = [cov["T2"] @ Y]
        rhs = [p * c2 * (cov["T"] @ Y), -angle_term * (p * (T @ Y) + q * Y)]
        out.append({"identity": "Eq31", "pair": (a,), "residual": _residual(lhs, rhs), "tol": tol_d2,
                    "applicable": applicable,
                    "note": "" if applicable else "nabla_X Y leaves the distribution"})
        agree = abs(dtheta_jet - dtheta_fd) / max(1.0, abs(dtheta_jet)) if smooth else None
        out.append({"identity": "Eq31.theta_derivative", "pair": (a,), "residual": agree, "tol": tol_d2,
                    "applicable": smooth, "jet": dtheta_jet if smooth else None, "fd": dtheta_fd,
                    "note": "" if smooth else "Wirtinger function not differentiable at theta in {0, pi/2}"})
    return out
