"""Warped product metrics and the identity suites built on them.

Every identity is evaluated as ``(lhs_terms, rhs_terms)``; the residual is
``|sum(lhs) - sum(rhs)| / max(1, largest |term|)``.  Role vectors are
coordinate fields (or constant combinations of them) taken from the declared
distributions or base/fiber blocks, so ``nabla`` terms are reproducible.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import dsl
from .errors import HypothesisNotMet, MetricMismatch, RoleViolation
from .jets import MatJet
from .slant import ANGLE_TOL, Distribution, pointwise_slant_test

PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass
class IdentityCase:
    identity: str
    point_index: int
    point: tuple
    residual: float | None
    verdict: str  # pass | fail | n/a
    roles: str = ""
    note: str = ""
    tol: float | None = None

    def __post_init__(self):
        if self.residual is not None and self.residual < 0:
            raise ValueError("residual must be non-negative")

    def to_dict(self):
        return {"identity": self.identity, "point": [float(c) for c in self.point],
                "point_index": self.point_index, "residual": self.residual, "verdict": self.verdict,
                "roles": self.roles, "note": self.note}


def residual(lhs_terms, rhs_terms):
    lhs_terms, rhs_terms = list(lhs_terms), list(rhs_terms)
    lhs = sum(np.asarray(t, dtype=float) for t in lhs_terms) if lhs_terms else 0.0
    rhs = sum(np.asarray(t, dtype=float) for t in rhs_terms) if rhs_terms else 0.0
    sizes = [float(np.abs(np.asarray(t, dtype=float)).max()) for t in lhs_terms + rhs_terms if np.size(t)]
    scale = max([1.0] + sizes)
    return float(np.abs(np.asarray(lhs) - np.asarray(rhs)).max()) / scale


def _case(identity, i, x, lhs, rhs, tol, roles="", note=""):
    r = residual(lhs, rhs)
    return IdentityCase(identity, i, tuple(x), r, PASS if r < tol else FAIL, roles, note, tol)


def _na(identity, i, x, note, roles=""):
    return IdentityCase(identity, i, tuple(x), None, NA, roles, note)


# warped metric -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WarpedSpec:
    """``g = g1 + phi^2 g2`` on a chart split into base and fiber coordinates.

    ``warping`` is the warping function (called ``phi`` here to keep it apart
    from the tangential part ``f`` of an almost product structure).
    """

    base: tuple
    fiber: tuple
    warping: dsl.Node
    g1: tuple  # rows of DSL nodes over base coordinates
    g2: tuple  # rows of DSL nodes over fiber coordinates
    immersion: object = None
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        base, fiber = tuple(self.base), tuple(self.fiber)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "fiber", fiber)
        if not base or not fiber:
            raise ValueError("base and fiber must both be non-empty")
        if set(base) & set(fiber):
            raise ValueError("base and fiber coordinates overlap")
        if sorted(base + fiber) != list(range(len(base) + len(fiber))):
            raise ValueError("base and fiber must partition the chart coordinates")
        if dsl.variables(self.warping) - set(base):
            raise ValueError("the warping function may depend on base coordinates only")
        for rows, block, name in ((self.g1, base, "g1"), (self.g2, fiber, "g2")):
            if len(rows) != len(block) or any(len(r) != len(block) for r in rows):
                raise ValueError(f"{name} must be {len(block)} x {len(block)}")
            for r in rows:
                for e in r:
                    if dsl.variables(e) - set(block):
                        raise ValueError(f"{name} entries may only depend on their own block's coordinates")

    @property
    def k(self):
        return len(self.base) + len(self.fiber)

    def _jets(self, x):
        x = tuple(float(t) for t in x)
        c = self.constants
        phi = dsl.jet_eval(self.warping, x, c)
        g1 = [[dsl.jet_eval(e, x, c) for e in r] for r in self.g1]
        g2 = [[dsl.jet_eval(e, x, c) for e in r] for r in self.g2]
        return phi, g1, g2

    def metric(self, x):
        """Block metric ``G`` (k, k) and its partials ``dG[c, a, b]``."""
        phi, g1, g2 = self._jets(x)
        k = self.k
        G = np.zeros((k, k))
        dG = np.zeros((k, k, k))
        phi2 = phi * phi
        for i, a in enumerate(self.base):
            for j, b in enumerate(self.base):
                G[a, b], dG[:, a, b] = g1[i][j].value, g1[i][j].grad
        for i, a in enumerate(self.fiber):
            for j, b in enumerate(self.fiber):
                e = phi2 * g2[i][j]
                G[a, b], dG[:, a, b] = e.value, e.grad
        return G, dG

    def dlog_warping(self, x):
        """Gradient of ``ln phi`` over the chart (zero along the fiber)."""
        phi = dsl.jet_eval(self.warping, tuple(float(t) for t in x), self.constants)
        if phi.value <= 0:
            raise ValueError(f"warping function must be positive, got {phi.value}")
        return phi.grad / phi.value

    def christoffel(self, x):
        G, dG = self.metric(x)
        return christoffel_from_metric(G, dG)

    def closed_form_christoffel(self, x):
        """Warped-product connection assembled from the factor connections."""
        phi, g1, g2 = self._jets(x)
        k = self.k
        out = np.zeros((k, k, k))
        B, F = list(self.base), list(self.fiber)
        G1 = np.array([[e.value for e in r] for r in g1])
        dG1 = np.zeros((k, len(B), len(B)))
        for i in range(len(B)):
            for j in range(len(B)):
                dG1[:, i, j] = g1[i][j].grad
        G2 = np.array([[e.value for e in r] for r in g2])
        dG2 = np.zeros((k, len(F), len(F)))
        for i in range(len(F)):
            for j in range(len(F)):
                dG2[:, i, j] = g2[i][j].grad
        gam1 = christoffel_from_metric(G1, dG1[B])
        gam2 = christoffel_from_metric(G2, dG2[F])
        dlog = phi.grad / phi.value
        grad_base = np.linalg.solve(G1, dlog[B])  # (grad ln phi)^c over the base
        for i, a in enumerate(B):
            for j, b in enumerate(B):
                out[a, b, B] = gam1[i, j]
            for z in F:
                out[a, z, z] += dlog[a]
                out[z, a, z] += dlog[a]
        for i, z in enumerate(F):
            for j, w in enumerate(F):
                out[z, w, F] = gam2[i, j]
                out[z, w, B] = -(phi.value ** 2) * G2[i, j] * grad_base
        return out

    def check_realization(self, points, tol=1e-9):
        """Max relative deviation of the immersion's induced metric from the block metric."""
        from .immersion import frame_at

        worst = 0.0
        for x in points:
            Gi = frame_at(self.immersion, x).gram
            Gw, _ = self.metric(x)
            worst = max(worst, float(np.abs(Gi - Gw).max()) / max(1.0, float(np.abs(Gw).max())))
        if worst > tol:
            raise MetricMismatch(f"induced metric deviates from the warped metric by {worst:.3e}")
        return worst


def christoffel_from_metric(G, dG):
    """``Gamma[a, b, c] = 1/2 G^{cd} (d_a G_bd + d_b G_ad - d_d G_ab)``."""
    Ginv = np.linalg.inv(G)
    low = 0.5 * (np.einsum("abd->abd", dG) + np.einsum("bad->abd", dG) - np.einsum("dab->abd", dG))
    return np.einsum("cd,abd->abc", Ginv, low)


def warped_connection_check(w, points, tol=1e-8, realization_tol=1e-9):
    """Base/fiber connection identity on the block metric (and on the immersion if attached)."""
    from .extrinsic import extrinsic_at
    from .immersion import frame_at

    if w.immersion is not None:
        w.check_realization(points, realization_tol)
    cases = []
    for i, x in enumerate(points):
        gam = w.christoffel(x)
        dlog = w.dlog_warping(x)
        sources = [("metric", gam)]
        if w.immersion is not None:
            frame = frame_at(w.immersion, x)
            sources.append(("immersion", extrinsic_at(None, frame, normal_connection=False).christoffel))
        for label, g in sources:
            for a in w.base:
                for z in w.fiber:
                    Z = np.eye(w.k)[z]
                    roles = f"X=Z{a + 1},Z=Z{z + 1}"
                    cases.append(_case("Eq41", i, x, [g[a, z]], [dlog[a] * Z], tol, roles, f"nabla_X Z ({label})"))
                    cases.append(_case("Eq41", i, x, [g[z, a]], [dlog[a] * Z], tol, roles, f"nabla_Z X ({label})"))
        closed = w.closed_form_christoffel(x)
        cases.append(_case("Eq41.christoffel", i, x, [gam], [closed], tol, "", "block metric vs closed form"))
    return cases


# helpers over a PointGeometry ---------------------------------------------


def _block_projector(geom, indices):
    return Distribution.coordinate(indices, geom.k).projector(geom.G)


def _require_block(X, indices, k, what):
    X = np.asarray(X, dtype=float)
    outside = [a for a in range(k) if a not in indices]
    if outside and np.abs(X[outside]).max() > 1e-12:
        raise RoleViolation(f"{what} vector {X} is not aligned with coordinates {list(indices)}")
    return X


def _fiber_theta(geom, fiber):
    return pointwise_slant_test(geom.split, geom.params, Distribution.coordinate(fiber, geom.k)).theta


def prop51_cases(geom, w, i, X, Y, Z, W, tol=1e-7):
    """Base ``X, Y`` and fiber ``Z, W`` at one point."""
    k = geom.k
    X, Y = (_require_block(v, w.base, k, "base") for v in (X, Y))
    Z, W = (_require_block(v, w.fiber, k, "fiber") for v in (Z, W))
    x = geom.x
    g, h, N = geom.g, geom.h, geom.N
    T = geom.T
    P1 = _block_projector(geom, w.base)
    P2 = _block_projector(geom, w.fiber)
    dlog = w.dlog_warping(x)
    Xln = float(dlog @ X)
    T1Xln = float(dlog @ (P1 @ T @ X))
    roles = "X,Y base; Z,W fiber"
    cov = geom.covariant(X)
    return [
        _case("Eq42", i, x, [h(X, Y) @ N(Z)], [-(h(X, Z) @ N(Y))], tol, roles),
        _case("Eq43", i, x, [h(X, Z) @ N(W)], [0.0], tol, roles),
        _case("Eq43.corrected", i, x, [h(X, Z) @ N(W), h(X, W) @ N(Z)], [g(cov["T"] @ Z, W)], tol, roles,
              "symmetrized form keeping the derivative of T along the base"),
        _case("Eq44", i, x, [h(Z, W) @ N(X)], [T1Xln * g(Z, W), -Xln * g(Z, P2 @ T @ W)], tol, roles),
    ]


def _block_fields(w, k):
    e = np.eye(k)
    return [e[a] for a in w.base], [e[z] for z in w.fiber]


def prop51_suite(geometries, w, tol=1e-7):
    cases = []
    for i, geom in enumerate(geometries):
        base, fiber = _block_fields(w, geom.k)
        for X in base:
            for Y in base:
                for Z in fiber:
                    for W in fiber:
                        cases.extend(prop51_cases(geom, w, i, X, Y, Z, W, tol))
    return cases


def prop52_check(geometries, w, tol=1e-6):
    cases = []
    for i, geom in enumerate(geometries):
        base, fiber = _block_fields(w, geom.k)
        c2 = math.cos(_fiber_theta(geom, w.fiber)) ** 2
        p = geom.params.p
        for X in base:
            cov = geom.covariant(X)
            for Z in fiber:
                a = int(np.argmax(X))
                z = int(np.argmax(Z))
                cases.append(_case("Eq45", i, geom.x, [cov["T2"] @ Z], [p * c2 * (cov["T"] @ Z)], tol,
                                   f"X=Z{a + 1} base, Z=Z{z + 1} fiber"))
    return cases


# bi-slant lemma and its specializations -------------------------------------


class _Ops:
    """Shorthand used by the long identities: T1, T2, N, A, g, nabla."""

    def __init__(self, geom, d1, d2):
        self.geom = geom
        G = geom.G
        self.P1 = d1.projector(G)
        self.P2 = d2.projector(G)
        self.T = geom.T
        self.d1, self.d2 = d1, d2
        self.p, self.q = geom.params.p, geom.params.q

    def T1(self, X):
        return self.P1 @ self.T @ X

    def T2(self, X):
        return self.P2 @ self.T @ X

    def g(self, X, Y):
        return self.geom.g(X, Y)

    def nb(self, X, Y):
        return self.geom.nabla(X, Y)

    def A(self, V, X):
        return self.geom.A(V, X)

    def N(self, X):
        return self.geom.N(X)

    def nb_field(self, X, Y, which):
        """``nabla_X (T_i Y)`` for the field ``u -> P_i(u) T(u) Y``; ``which`` is 1 or 2."""
        geom = self.geom
        jets = geom.jets
        B = (self.d1 if which == 1 else self.d2).basis
        P = B @ ((B.T @ jets.G @ B).inv() @ (B.T @ jets.G))
        field_ = P @ (jets.T @ Y)
        return field_.along(X) + geom.ext.christoffel_along(X) @ field_.value


def eq33(o, X, Y, Z, c1, c2):
    s1, s2 = 1 - c1, 1 - c2
    p, q, g, nb, A, N, T1, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(s1 - s2) * g(nb(X, Y), p * T2(Z) + q * Z)]
    rhs = [p * g(nb(X, Y), T2(Z)), p * g(nb(X, Z), T1(Y)),
           p * (c1 + 1) * g(A(N(Z), Y) + A(N(Y), Z), X),
           -g(A(N(T1(Y)), Z) + A(N(T2(Z)), Y), X),
           -g(A(N(Z), T1(Y)) + A(N(Y), T2(Z)), X)]
    return lhs, rhs


def eq34(o, X, Z, W, c1, c2):
    s1, s2 = 1 - c1, 1 - c2
    p, q, g, nb, A, N, T1, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(s2 - s1) * g(nb(Z, W), p * T1(X) + q * X)]
    rhs = [p * g(nb(Z, W), T1(X)), p * g(nb(Z, X), T2(W)),
           p * (c2 + 1) * g(A(N(X), W) + A(N(W), X), Z),
           -g(A(N(T2(W)), X) + A(N(T1(X)), W), Z),
           -g(A(N(W), T1(X)) + A(N(X), T2(W)), Z)]
    return lhs, rhs


def eq350(o, X, Y, Z, c):
    p, q, g, nb, A, N, T1, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(1 - c) * g(nb(X, Y), p * T2(Z) + q * Z)]
    rhs = [-p * g(nb(X, Y), T2(Z)), -p * g(nb(X, Z), T1(Y)), -2 * p * g(A(N(Z), Y), X),
           g(A(N(Z), T1(Y)) + A(N(T2(Z)), Y), X)]
    return lhs, rhs


def eq37(o, X, Z, W, c):
    p, q, g, nb, A, N, T1, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(1 - c) * g(nb(Z, W), p * T1(X) + q * X)]
    rhs = [p * g(nb(Z, W), T1(X)), p * g(nb(Z, X), T2(W)), p * (c + 1) * g(A(N(W), X), Z),
           -g(A(N(T2(W)), X) + A(N(W), T1(X)), Z)]
    return lhs, rhs


def eq360(o, X, Y, Z, c):
    p, g, nb, A, N, T1, T2 = o.p, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(1 - c) * g(nb(X, Y), T2(T2(Z)))]
    rhs = [p * g(nb(X, Y), T2(Z)), -p * g(o.nb_field(X, Y, 1), Z), p * (c + 1) * g(A(N(Y), X), Z),
           -g(A(N(T1(Y)), Z) + A(N(T2(Z)), Y), X), -g(A(N(Y), T2(Z)), X)]
    return lhs, rhs


def eq370(o, X, Z, W, c):
    p, q, g, nb, A, N, T1, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1, o.T2
    lhs = [(1 - c) * g(nb(Z, W), p * T1(X) + q * X)]
    rhs = [-p * g(nb(Z, W), T1(X)), p * g(o.nb_field(Z, W, 2), X), -2 * p * g(A(N(X), Z), W),
           g(A(N(T2(W)), Z), X), g(A(N(T1(X)), Z), W), g(A(N(X), T2(W)), Z)]
    return lhs, rhs


def eq38(o, X, Y, Z, c):
    p, q, g, nb, A, N, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T2
    lhs = [c * g(nb(X, Y), p * T2(Z) + q * Z)]
    rhs = [p * g(nb(X, Y), T2(Z)), p * g(A(N(Z), Y) + A(N(Y), Z), X), -g(A(N(T2(Z)), Y) + A(N(Y), T2(Z)), X)]
    return lhs, rhs


def eq39(o, X, Z, W, c):
    p, q, g, nb, A, N, T2 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T2
    lhs = [q * c * g(nb(Z, W), X)]
    rhs = [-p * g(nb(Z, X), T2(W)), -p * (c + 1) * g(A(N(X), W) + A(N(W), X), Z),
           g(A(N(T2(W)), X) + A(N(X), T2(W)), Z)]
    return lhs, rhs


def eq309(o, X, Y, Z, c):
    p, q, g, nb, A, N, T1 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1
    lhs = [q * c * g(nb(X, Y), Z)]
    rhs = [-p * g(nb(X, Z), T1(Y)), -p * (c + 1) * g(A(N(Z), Y) + A(N(Y), Z), X),
           g(A(N(T1(Y)), Z) + A(N(Z), T1(Y)), X)]
    return lhs, rhs


def eq310(o, X, Z, W, c):
    p, q, g, nb, A, N, T1 = o.p, o.q, o.g, o.nb, o.A, o.N, o.T1
    lhs = [c * g(nb(Z, W), p * T1(X) + q * X)]
    rhs = [p * g(nb(Z, W), T1(X)), p * g(A(N(X), W) + A(N(W), X), Z), -g(A(N(T1(X)), W) + A(N(W), T1(X)), Z)]
    return lhs, rhs


def _generic(theta):
    return abs(theta) >= ANGLE_TOL and abs(theta - math.pi / 2) >= ANGLE_TOL


# (identity, evaluator, hypothesis on (theta1, theta2), slot pattern, note)
_SPECIALIZATIONS = [
    ("Eq350", eq350, lambda a, b: abs(a) < ANGLE_TOL and _generic(b), "XY1Z2", "theta1 = 0, cos^2 of theta2"),
    ("Eq37", eq37, lambda a, b: abs(a) < ANGLE_TOL and _generic(b), "X1ZW2", "theta1 = 0, cos^2 of theta2"),
    ("Eq360", eq360, lambda a, b: abs(b) < ANGLE_TOL and _generic(a), "XY1Z2",
     "theta2 = 0; left side uses T2^2 Z as printed where parallel identities use pT2Z + qZ"),
    ("Eq370", eq370, lambda a, b: abs(b) < ANGLE_TOL and _generic(a), "X1ZW2", "theta2 = 0"),
    ("Eq38", eq38, lambda a, b: abs(a - math.pi / 2) < ANGLE_TOL and _generic(b), "XY1Z2", "theta1 = pi/2"),
    ("Eq39", eq39, lambda a, b: abs(a - math.pi / 2) < ANGLE_TOL and _generic(b), "X1ZW2", "theta1 = pi/2"),
    ("Eq309", eq309, lambda a, b: abs(b - math.pi / 2) < ANGLE_TOL and _generic(a), "XY1Z2", "theta2 = pi/2"),
    ("Eq310", eq310, lambda a, b: abs(b - math.pi / 2) < ANGLE_TOL and _generic(a), "X1ZW2", "theta2 = pi/2"),
]


def _slots(pattern, B1, B2):
    if pattern == "XY1Z2":
        return [(X, Y, Z) for X in B1 for Y in B1 for Z in B2]
    return [(X, Z, W) for X in B1 for Z in B2 for W in B2]


def bislant_lemma_suite(geometries, d1, d2, tol=1e-6):
    cases = []
    for i, geom in enumerate(geometries):
        o = _Ops(geom, d1, d2)
        th1 = pointwise_slant_test(geom.split, geom.params, d1).theta
        th2 = pointwise_slant_test(geom.split, geom.params, d2).theta
        c1, c2 = math.cos(th1) ** 2, math.cos(th2) ** 2
        B1 = [d1.basis[:, j] for j in range(d1.dim)]
        B2 = [d2.basis[:, j] for j in range(d2.dim)]
        for X, Y, Z in _slots("XY1Z2", B1, B2):
            cases.append(_case("Eq33", i, geom.x, *eq33(o, X, Y, Z, c1, c2), tol, "X,Y in D1; Z in D2"))
        for X, Z, W in _slots("X1ZW2", B1, B2):
            cases.append(_case("Eq34", i, geom.x, *eq34(o, X, Z, W, c1, c2), tol, "X in D1; Z,W in D2"))
        for ident, fn, hyp, pattern, note in _SPECIALIZATIONS:
            roles = "X,Y in D1; Z in D2" if pattern == "XY1Z2" else "X in D1; Z,W in D2"
            if not hyp(th1, th2):
                cases.append(_na(ident, i, geom.x, f"hypothesis not met ({note.split(';')[0]})", roles))
                continue
            c = c2 if ident in ("Eq350", "Eq37", "Eq38", "Eq39") else c1
            for slots in _slots(pattern, B1, B2):
                cases.append(_case(ident, i, geom.x, *fn(o, *slots, c), tol, roles, note))
    return cases


# theorem predicates ----------------------------------------------------------


def _factor_kind(thetas):
    t = np.asarray(thetas)
    if np.all(np.abs(t) < ANGLE_TOL):
        return "invariant"
    if np.all(np.abs(t - math.pi / 2) < ANGLE_TOL):
        return "anti-invariant"
    if np.all((t >= ANGLE_TOL) & (t <= math.pi / 2 - ANGLE_TOL)):
        return "slant"
    return "mixed"


def factor_kinds(geometries, w):
    base_t, fiber_t = [], []
    for geom in geometries:
        base_t.append(pointwise_slant_test(geom.split, geom.params, Distribution.coordinate(w.base, geom.k)).theta)
        fiber_t.append(pointwise_slant_test(geom.split, geom.params, Distribution.coordinate(w.fiber, geom.k)).theta)
    return _factor_kind(base_t), _factor_kind(fiber_t)


def theorem_predicates(geometries, w, tol_alg=1e-9, tol_d1=1e-7, tol_th1=1e-8, tol_th2=1e-6):
    """Hypothesis-filtered predicates for warped semi-slant / hemi-slant products.

    Three layouts are covered: invariant base with slant fiber, slant base
    with invariant fiber, and one anti-invariant factor with one slant factor.
    Cases whose hypotheses fail are ``n/a``.
    """
    base_kind, fiber_kind = factor_kinds(geometries, w)
    layout = f"base {base_kind}, fiber {fiber_kind}"
    cases = []
    th61 = base_kind == "invariant" and fiber_kind == "slant"
    th62 = base_kind == "slant" and fiber_kind == "invariant"
    th63 = {base_kind, fiber_kind} == {"anti-invariant", "slant"}
    for i, geom in enumerate(geometries):
        x = geom.x
        if not th61:
            for ident in ("Eq320", "Eq303", "Th6.1"):
                cases.append(_na(ident, i, x, f"needs invariant base and pointwise slant fiber ({layout})"))
        else:
            cases.extend(_theorem_61(geom, w, i, tol_alg, tol_d1, tol_th1))
        if not th62:
            cases.append(_na("Th6.2", i, x, f"needs pointwise slant base and invariant fiber ({layout})"))
        else:
            cases.extend(_theorem_62(geom, w, i, tol_th2))
        if not th63:
            cases.append(_na("Eq10008", i, x, f"needs one anti-invariant and one pointwise slant factor ({layout})"))
    if th63:
        cases.extend(_theorem_63(geometries, w, base_kind, tol_d1, tol_th1))
    return cases


def _theorem_61(geom, w, i, tol_alg, tol_d1, tol_th1):
    x = geom.x
    T, h, N, n, g = geom.T, geom.h, geom.N, geom.n, geom.g
    dlog = w.dlog_warping(x)
    theta = _fiber_theta(geom, w.fiber)
    s2 = math.sin(theta) ** 2
    p, q = geom.params.p, geom.params.q
    base, fiber = _block_fields(w, geom.k)
    out = []
    for X in base:
        TX = T @ X
        for Z in fiber:
            out.append(_case("Eq320", i, x, [h(TX, Z)], [float(dlog @ X) * N(Z), n(h(X, Z))], tol_d1,
                             "X base (invariant), Z fiber (slant)"))
            out.append(_case("Eq303", i, x, [float(dlog @ TX) * s2 * (p * g(T @ Z, Z) + q * g(Z, Z))],
                             [-(n(h(TX, Z)) @ N(Z))], tol_d1, "X base (invariant), Z fiber (slant)"))
        lhs = float(dlog @ X)
        r = abs(lhs)
        out.append(IdentityCase("Th6.1", i, tuple(x), r, PASS if r < tol_th1 else FAIL,
                                "X base", "conclusion |X(ln f)| = 0", tol_th1))
    return out


def _theorem_62(geom, w, i, tol):
    x = geom.x
    base, fiber = _block_fields(w, geom.k)
    d_base = Distribution.coordinate(w.base, geom.k)
    P_T = _block_projector(geom, w.fiber)
    T1 = lambda X: d_base.projector(geom.G) @ geom.T @ X  # noqa: E731
    out = []
    for X in base:
        for Y in base:
            vec = geom.A(geom.N(T1(Y)), X) - geom.A(geom.N(T1(X)), Y)
            comp = P_T @ vec
            r = math.sqrt(max(geom.g(comp, comp), 0.0))
            out.append(IdentityCase("Th6.2", i, tuple(x), r, PASS if r < tol else FAIL, "X,Y base (slant)",
                                    "invariant component of A_{NT1Y}X - A_{NT1X}Y", tol))
    return out


def _theorem_63(geometries, w, base_kind, tol_d1, tol_const):
    anti, slant = (w.base, w.fiber) if base_kind == "anti-invariant" else (w.fiber, w.base)
    eq_cases, f_const = [], True
    for i, geom in enumerate(geometries):
        e = np.eye(geom.k)
        dlog = w.dlog_warping(geom.x)
        f_const &= all(abs(dlog[a]) < tol_const for a in w.base)
        for a in anti:
            for z in slant:
                X, Z = e[a], e[z]
                eq_cases.append(_case("Eq10008", i, geom.x, [geom.A(geom.N(Z), X)], [geom.A(geom.N(X), Z)],
                                      tol_d1, f"X=Z{a + 1} anti-invariant, Z=Z{z + 1} slant"))
    eq_holds = all(c.verdict == PASS for c in eq_cases)
    worst = max((c.residual for c in eq_cases), default=0.0)
    verdict = PASS if eq_holds == f_const else FAIL
    note = f"warping constant: {f_const}; shape-operator identity holds: {eq_holds}"
    x0 = geometries[0].x if geometries else ()
    return eq_cases + [IdentityCase("Th6.3", 0, tuple(x0), worst, verdict, "", note, tol_d1)]


def require(condition, message):
    if not condition:
        raise HypothesisNotMet(message)
