"""Gauss and Weingarten data for immersions in flat R^m.

The ambient connection is the coordinate derivative, so ``D_{Z_a} Z_b`` is the
second jet of the immersion.  Its tangential part gives the induced
connection and its normal part the second fundamental form.

Covariant derivatives of T, N, t, n are taken along chart directions by
differentiating the assembled operator fields with ``MatJet``.  Normal test
vectors are extended off the point as ``P_perp(u) nu(x)``, which is
normal-parallel at ``x``; everything reported this way is independent of that
choice because the operators are tensorial.
"""

from dataclasses import dataclass

import numpy as np

from .immersion import frame_at
from .jets import MatJet, procrustes_align, solve_spd


@dataclass(frozen=True, eq=False)
class ExtrinsicData:
    h: np.ndarray  # (k, k, m-k) in normal-frame coordinates
    h_ambient: np.ndarray  # (k, k, m)
    A: np.ndarray  # (m-k, k, k); A[beta] is the chart matrix of A_{nu_beta}
    christoffel: np.ndarray  # (k, k, k); [a, b, c] = coefficient of Z_c in nabla_{Z_a} Z_b
    normal_connection: np.ndarray | None  # (k, m-k, m-k); [a, al, be] = <nu_al, d_a nu_be> for the QR frame
    frame: object

    def shape_operator(self, V):
        """Chart matrix of ``A_V`` for an ambient normal vector ``V``."""
        hv = self.h_ambient @ V  # (k, k)
        return solve_spd(self.frame.gram, hv)

    def second_form(self, X, Y):
        """``h(X, Y)`` as an ambient vector for chart vectors ``X``, ``Y``."""
        return np.einsum("a,b,abm->m", X, Y, self.h_ambient)

    def connection(self, X, Y):
        """``nabla_X Y`` (chart coordinates) for constant-coefficient fields over the coordinate frame."""
        return np.einsum("a,b,abc->c", X, Y, self.christoffel)

    def christoffel_along(self, X):
        """Matrix ``M[c, b] = sum_a X^a Gamma[a, b, c]`` so that ``nabla_X (Y^b Z_b) = dY + M Y``."""
        return np.einsum("a,abc->cb", X, self.christoffel)


def extrinsic_at(spec, frame, normal_connection=True, fd_step=1e-6):
    Z, nu, G, H = frame.tangent_frame, frame.normal_frame, frame.gram, frame.second_jet
    k = frame.chart_dim
    tangential = np.einsum("mc,abm->abc", Z, H)
    gamma = np.linalg.solve(G, tangential.reshape(k * k, k).T).T.reshape(k, k, k)
    h_amb = H - np.einsum("mc,abc->abm", Z, gamma)
    h_amb = 0.5 * (h_amb + np.swapaxes(h_amb, 0, 1))
    h = h_amb @ nu
    A = np.stack([solve_spd(G, h[:, :, b]) for b in range(nu.shape[1])]) if nu.shape[1] else np.zeros((0, k, k))
    omega = _normal_connection(spec, frame, fd_step) if normal_connection and spec is not None else None
    return ExtrinsicData(h, h_amb, A, gamma, omega, frame)


def _normal_connection(spec, frame, step):
    """Connection one-form of the QR normal frame, by central differences.

    Column signs of the shifted frames are matched to the base frame so a
    LAPACK sign flip cannot masquerade as a rotation.
    """
    nu = frame.normal_frame
    k, r = frame.chart_dim, nu.shape[1]
    out = np.zeros((k, r, r))
    for a in range(k):
        shifted = []
        for s in (step, -step):
            x = list(frame.point)
            x[a] += s
            other = frame_at(spec, x, check_domain=False).normal_frame
            signs = np.sign(np.einsum("mi,mi->i", other, nu))
            signs[signs == 0] = 1.0
            shifted.append(other * signs)
        out[a] = nu.T @ (shifted[0] - shifted[1]) / (2 * step)
    return out


def parallel_normal_frame(spec, x, reference):
    """QR normal frame at ``x`` rotated onto ``reference`` (orthogonal Procrustes)."""
    return procrustes_align(reference, frame_at(spec, x, check_domain=False).normal_frame)


class OperatorJets:
    """First-order jets of the frame-assembled operator fields at one point."""

    def __init__(self, frame, J):
        J = np.asarray(J, dtype=float)
        m, k = frame.tangent_frame.shape
        nu0 = frame.normal_frame
        Z = MatJet(frame.tangent_frame, np.transpose(frame.second_jet, (0, 2, 1)))
        G = Z.T @ Z
        Ginv = G.inv()
        self.Z = Z
        self.G = G
        self.Ginv = Ginv
        self.T = Ginv @ (Z.T @ (J @ Z))
        self.T2 = self.T @ self.T
        P_tan = Z @ (Ginv @ Z.T)
        self.P_perp = MatJet.constant(np.eye(m), k) - P_tan
        self.N_ambient = J @ Z - Z @ self.T  # columns N Z_b as ambient vectors
        ext_nu = self.P_perp @ nu0  # normal extension of the base normal frame
        self.ext_nu = ext_nu
        self.t_ext = Ginv @ (Z.T @ (J @ ext_nu))
        self.n_ambient = self.P_perp @ (J @ ext_nu)
        self.nu0 = nu0


def covariant_T_N(ext, jets, X):
    """``(nabla_X T)``, ``(nablabar_X N)``, ``(nabla_X t)``, ``(nablabar_X n)`` as matrices.

    Shapes follow ``SplitOperators``: k x k, (m-k) x k, k x (m-k), (m-k) x (m-k).
    ``perp`` is the normal connection matrix of the extended normal frame
    along ``X`` (``nu^T nabla^perp_X nu``), returned for completeness.
    """
    X = np.asarray(X, dtype=float)
    M = ext.christoffel_along(X)
    nu = jets.nu0
    T = jets.T.value
    t = jets.t_ext.value
    n = nu.T @ jets.n_ambient.value
    N = nu.T @ jets.N_ambient.value
    perp = nu.T @ jets.ext_nu.along(X)
    return {
        "T": jets.T.along(X) + M @ T - T @ M,
        "N": nu.T @ jets.N_ambient.along(X) - N @ M,
        "t": jets.t_ext.along(X) + M @ t - t @ perp,
        "n": nu.T @ jets.n_ambient.along(X) - n @ perp,
        "T2": jets.T2.along(X) + M @ (T @ T) - (T @ T) @ M,
        "perp": perp,
    }
