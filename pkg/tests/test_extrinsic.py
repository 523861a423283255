import math

import numpy as np
import pytest

from bislant.extrinsic import extrinsic_at, parallel_normal_frame
from bislant.geometry import PointGeometry
from bislant.immersion import frame_at, parse_immersion
from bislant.registry import registry_get
from bislant.report import RunConfig, run

from conftest import fd_grad


def _circle(r=2.0):
    return parse_immersion(f"{r}*cos(u1)\n{r}*sin(u1)", domain=[(0, 6)])


def test_circle_second_form_and_shape_operator():
    r = 2.0
    spec = _circle(r)
    u = 0.8
    fr = frame_at(spec, (u,))
    ext = extrinsic_at(spec, fr)
    X = np.array([1.0])
    np.testing.assert_allclose(ext.second_form(X, X), [-r * math.cos(u), -r * math.sin(u)], atol=1e-14)
    outward = np.array([math.cos(u), math.sin(u)])
    # g(A_nu Z, Z) = <h(Z, Z), nu> = -r and g = r^2
    assert ext.shape_operator(outward)[0, 0] == pytest.approx(-1 / r)
    assert abs(ext.christoffel[0, 0, 0]) < 1e-14
    assert np.abs(ext.normal_connection).max() < 1e-8


def test_ex51_christoffel_by_hand():
    t = registry_get("ex5_1")
    u = 1.3
    ext = extrinsic_at(t.spec, frame_at(t.spec, (u, 0.4)), normal_connection=False)
    gam = ext.christoffel
    assert gam[0, 1, 1] == pytest.approx(2 * u / (2 * u * u + 1), abs=1e-12)
    assert gam[1, 0, 1] == pytest.approx(2 * u / (2 * u * u + 1), abs=1e-12)
    assert gam[1, 1, 0] == pytest.approx(-2 * u / 3, abs=1e-12)
    assert abs(gam[0, 0, 0]) < 1e-12 and abs(gam[1, 1, 1]) < 1e-12


def test_weingarten_duality_on_ex41():
    t = registry_get("ex4_1")
    geo = PointGeometry(t.spec, t.ambient, (0.4, 0.9))
    nu = geo.frame.normal_frame
    X, Y = np.array([1.0, 0.5]), np.array([-0.3, 2.0])
    for b in range(nu.shape[1]):
        V = nu[:, b]
        assert geo.g(geo.A(V, X), Y) == pytest.approx(float(geo.h(X, Y) @ V), abs=1e-12)


def test_normal_connection_matches_parallel_frame():
    t = registry_get("ex4_1")
    x = np.array([0.4, 0.9])
    fr = frame_at(t.spec, x)
    ext = extrinsic_at(t.spec, fr)
    # antisymmetric connection form
    for a in range(2):
        np.testing.assert_allclose(ext.normal_connection[a], -ext.normal_connection[a].T, atol=1e-8)
    aligned = parallel_normal_frame(t.spec, x + np.array([1e-6, 0.0]), fr.normal_frame)
    assert np.abs(aligned.T @ fr.tangent_frame).max() < 1e-5


@pytest.mark.parametrize("name", ["ex4_1", "ex5_1", "semislant_warped"])
def test_covariant_derivatives_against_fd(name):
    t = registry_get(name)
    x = t.sample(1, 9)[0]
    geo = PointGeometry(t.spec, t.ambient, x)
    h = 1e-5
    for a in range(geo.k):
        d = np.eye(geo.k)[a]
        jet_T = geo.jets.T.along(d)
        fp = PointGeometry(t.spec, t.ambient, np.asarray(x) + h * d)
        fm = PointGeometry(t.spec, t.ambient, np.asarray(x) - h * d)
        np.testing.assert_allclose(jet_T, (fp.T - fm.T) / (2 * h), atol=1e-6)


def test_theta_gradient_from_wirtinger_jet():
    t = registry_get("ex4_1")
    x = (0.3, 0.6)
    geo = PointGeometry(t.spec, t.ambient, x)
    c2 = geo.wirtinger_jet(np.array([1.0, 0.0]))

    def cos2(y):
        return float(PointGeometry(t.spec, t.ambient, y).wirtinger_jet(np.array([1.0, 0.0])).value)

    np.testing.assert_allclose([c2.along(e) for e in np.eye(2)], fd_grad(cos2, x, 1e-5), atol=1e-8)


def test_extrinsic_suite_passes_on_ex41():
    rep = run(RunConfig("ex4_1", suites=("extrinsic",), samples=10, seed=2))
    assert rep.ok, rep.failures[:3]
    ids = {c.identity for c in rep.suites[0]["cases"]}
    assert {"h.symmetry", "Eq15", "Eq21", "Eq22", "FD.T", "FD.N", "FD.t", "FD.n"} <= ids


@pytest.mark.parametrize("name", ["ex5_1", "plane_invariant", "plane_antiinvariant", "hemislant_cone"])
def test_extrinsic_suite_passes_elsewhere(name):
    rep = run(RunConfig(name, suites=("extrinsic",), samples=6, seed=4))
    assert rep.ok, rep.failures[:3]


def test_plane_is_totally_geodesic_with_parallel_operators():
    t = registry_get("plane_invariant")
    geo = PointGeometry(t.spec, t.ambient, (0.2, -0.5))
    assert np.abs(geo.ext.h).max() == 0.0
    assert np.abs(geo.ext.christoffel).max() == 0.0
    for a in range(2):
        cov = geo.covariant(np.eye(2)[a])
        for key in ("T", "N", "t", "n"):
            assert np.abs(cov[key]).max() < 1e-14, key


def test_gauss_formula_round_trip():
    t = registry_get("ex4_1")
    fr = frame_at(t.spec, (0.6, 0.2))
    ext = extrinsic_at(t.spec, fr, normal_connection=False)
    e = np.eye(2)
    for a in range(2):
        for b in range(2):
            recon = fr.tangent_frame @ ext.connection(e[a], e[b]) + ext.second_form(e[a], e[b])
            np.testing.assert_allclose(recon, fr.second_jet[a, b], atol=1e-10)
            assert np.abs(fr.tangent_frame.T @ ext.second_form(e[a], e[b])).max() < 1e-10
