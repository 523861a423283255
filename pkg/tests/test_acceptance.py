"""Acceptance checks, one per criterion.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible even
without ``-s``).  Run directly with ``python tests/test_acceptance.py`` for
just the summary lines.
"""

import json
import math
import sys
import time

import numpy as np
import pytest

from bislant.geometry import PointGeometry
from bislant.immersion import frame_at
from bislant.metallic import from_almost_product, make_params, random_almost_product
from bislant.registry import registry_get
from bislant.report import RunConfig, emit, run
from bislant.slant import classify_bislant, slant_identity_suite, wirtinger_angle
from bislant.split import check_fundamental_identities, split_J
from bislant.warped import bislant_lemma_suite, prop51_suite, prop52_check, warped_connection_check

PQ = [(1, 1), (2, 1), (1, 2)]


@pytest.fixture
def say(capsys):
    def _say(n, title, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title} -- {detail}"
        with capsys.disabled():
            print("\n" + line)
        return ok

    return _say


def _max(cases, ident):
    vals = [c.residual for c in cases if c.identity == ident and c.residual is not None]
    return max(vals) if vals else float("nan")


# 1 -------------------------------------------------------------------------


def check_metallic_algebra():
    t0 = time.perf_counter()
    worst_root = 0.0
    for p in range(1, 6):
        for q in range(1, 6):
            m = make_params(p, q)
            for r in (m.sigma, m.sigma_bar):
                worst_root = max(worst_root, abs(r * r - p * r - q))
    rng = np.random.default_rng(20240101)
    worst_sum = 0.0
    m = make_params(1, 1)
    for _ in range(20):
        F = random_almost_product(6, rng)
        J1, J2 = from_almost_product(m, F)
        worst_sum = max(worst_sum, float(np.abs(J1.J + J2.J - m.p * np.eye(6)).max()))
    elapsed = time.perf_counter() - t0
    ok = worst_root < 1e-12 and worst_sum < 1e-12 and elapsed < 1.0
    return ok, f"root residual {worst_root:.2e} (<1e-12), |J1+J2-pI| {worst_sum:.2e}, {elapsed:.3f}s (<1s)"


def test_criterion_01_metallic_algebra(say):
    ok, detail = check_metallic_algebra()
    assert say(1, "metallic algebra", ok, detail)


# 2 -------------------------------------------------------------------------


def check_fundamental():
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for name in ("ex4_1", "ex5_1", "plane_invariant", "plane_antiinvariant"):
        for p, q in PQ:
            t = registry_get(name, p, q)
            for x in t.sample(100, 0):
                s = split_J(t.ambient, frame_at(t.spec, x))
                worst = max(worst, max(check_fundamental_identities(s, t.params).values()))
                count += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and elapsed < 5.0
    return ok, f"max residual {worst:.2e} (<1e-9) over {count} points, {elapsed:.2f}s (<5s)"


def test_criterion_02_fundamental_identities(say):
    ok, detail = check_fundamental()
    assert say(2, "fundamental identities", ok, detail)


# 3 -------------------------------------------------------------------------


def check_closed_forms():
    worst = {"ex4_1 theta1": 0.0, "ex4_1 theta2": 0.0, "ex4_1 theta1 signed (f>=0)": 0.0,
             "ex5_1 theta1": 0.0, "ex5_1 theta2": 0.0}
    for p, q in PQ:
        t = registry_get("ex4_1", p, q)
        s_, sb = t.params.sigma, t.params.sigma_bar
        for x in t.sample(100, 1):
            sp = split_J(t.ambient, frame_at(t.spec, x))
            f = s_ * math.cos(x[1]) ** 2 + sb * math.sin(x[1]) ** 2
            c1 = math.cos(wirtinger_angle(sp, [1.0, 0.0]))
            c2 = math.cos(wirtinger_angle(sp, [0.0, 1.0]))
            # a cosine is non-negative; the printed ratio is negative wherever f < 0
            worst["ex4_1 theta1"] = max(worst["ex4_1 theta1"], abs(c1 - abs(f) / math.sqrt(p * f + q)))
            if f >= 0:
                worst["ex4_1 theta1 signed (f>=0)"] = max(worst["ex4_1 theta1 signed (f>=0)"],
                                                           abs(c1 - f / math.sqrt(p * f + q)))
            worst["ex4_1 theta2"] = max(worst["ex4_1 theta2"], abs(c2 - p / math.sqrt(2 * (p * p + 2 * q))))
        t = registry_get("ex5_1", p, q)
        for u, v in t.sample(100, 1):
            sp = split_J(t.ambient, frame_at(t.spec, (u, v)))
            c1 = math.cos(wirtinger_angle(sp, [1.0, 0.0]))
            c2 = math.cos(wirtinger_angle(sp, [0.0, 1.0]))
            e1 = (2 * s_ + sb) / math.sqrt(3 * (2 * s_ * s_ + sb * sb))
            e2 = abs(u * u * (s_ + sb) + sb) / math.sqrt((2 * u * u + 1) * (u * u * (s_ * s_ + sb * sb) + sb * sb))
            worst["ex5_1 theta1"] = max(worst["ex5_1 theta1"], abs(c1 - e1))
            worst["ex5_1 theta2"] = max(worst["ex5_1 theta2"], abs(c2 - e2))
    tols = {"ex4_1 theta1": 1e-10, "ex4_1 theta2": 1e-10, "ex4_1 theta1 signed (f>=0)": 1e-10,
            "ex5_1 theta1": 1e-9, "ex5_1 theta2": 1e-9}
    ok = all(worst[k] < tols[k] for k in worst)
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items())


def test_criterion_03_closed_form_slant(say):
    ok, detail = check_closed_forms()
    assert say(3, "closed-form slant regression", ok, detail)


# 4 -------------------------------------------------------------------------


def check_discrimination():
    t = registry_get("ex4_1")
    th2 = [wirtinger_angle(split_J(t.ambient, frame_at(t.spec, x)), [0.0, 1.0]) for x in t.sample(200, 2)]
    spread41 = max(th2) - min(th2)
    t = registry_get("ex5_1")
    th2 = [wirtinger_angle(split_J(t.ambient, frame_at(t.spec, x)), [0.0, 1.0]) for x in t.sample(200, 2)]
    spread51 = max(th2) - min(th2)
    t = registry_get("ex4_3")
    geoms = [PointGeometry(t.spec, t.ambient, x) for x in t.sample(50, 2)]
    rep = classify_bislant(geoms, t.d1, t.d2)
    dev = max(abs(a - math.pi / 2) for a in rep.theta1)
    ok = spread41 < 1e-10 and spread51 > 1e-3 and dev < 1e-8 and rep.verdict == "pointwise hemi-slant"
    return ok, (f"ex4_1 theta2 spread {spread41:.1e} (<1e-10), ex5_1 theta2 spread {spread51:.3f} (>1e-3), "
                f"ex4_3 |theta1 - pi/2| {dev:.1e} (<1e-8), verdict {rep.verdict!r}")


def test_criterion_04_slant_discrimination(say):
    ok, detail = check_discrimination()
    assert say(4, "pointwise vs global slant", ok, detail)


# 5 -------------------------------------------------------------------------


def check_slant_identities():
    t = registry_get("ex5_1")
    worst = {"Eq29": 0.0, "Eq30": 0.0, "Eq31": 0.0, "dtheta": 0.0}
    applicable31 = 0
    for x in t.sample(50, 3):
        geo = PointGeometry(t.spec, t.ambient, x)
        for c in slant_identity_suite(geo, t.d2, t.params, fd_step=1e-4):
            if not c["applicable"]:
                continue
            key = "dtheta" if c["identity"] == "Eq31.theta_derivative" else c["identity"]
            worst[key] = max(worst[key], c["residual"])
            applicable31 += c["identity"] == "Eq31"
    ok = (worst["Eq29"] < 1e-9 and worst["Eq30"] < 1e-9 and worst["Eq31"] < 1e-6 and worst['dtheta'] < 1e-6
          and applicable31 >= 50)
    return ok, (f"<NX,NY> {worst['Eq29']:.1e}, tNX {worst['Eq30']:.1e} (<1e-9); derivative identity "
                f"{worst['Eq31']:.1e} on {applicable31} cases; jet vs FD X(theta) {worst['dtheta']:.1e}"
                " (<1e-6)")


def test_criterion_05_slant_identity_suite(say):
    ok, detail = check_slant_identities()
    assert say(5, "slant identity suite", ok, detail)


# 6 -------------------------------------------------------------------------


def check_extrinsic():
    rep = run(RunConfig("ex4_1", suites=("extrinsic",), samples=50, seed=4))
    cases = rep.suites[0]["cases"]
    limits = {"h.symmetry": 1e-10, "Eq15": 1e-9, "Eq21": 1e-8, "Eq22": 1e-8}
    got = {k: _max(cases, k) for k in limits}
    fd = max(_max(cases, k) for k in ("FD.jacobian", "FD.Z", "FD.G", "FD.T", "FD.N", "FD.t", "FD.n"))
    ok = all(got[k] < limits[k] for k in limits) and fd < 1e-6
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in got.items()) + f", FD relative {fd:.1e} (<1e-6)"


def test_criterion_06_extrinsic_layer(say):
    ok, detail = check_extrinsic()
    assert say(6, "extrinsic layer", ok, detail)


# 7 -------------------------------------------------------------------------


def check_warped():
    t0 = time.perf_counter()
    t = registry_get("ex5_1")
    pts = t.sample(25, 5)
    metric = 0.0
    for u, v in pts:
        G = frame_at(t.spec, (u, v)).gram
        metric = max(metric, float(np.abs(G - np.diag([3.0, 2 * u * u + 1])).max()))
    geoms = [PointGeometry(t.spec, t.ambient, x) for x in pts]
    conn = warped_connection_check(t.warped, pts)
    p51 = prop51_suite(geoms, t.warped, tol=1e-7)
    p52 = prop52_check(geoms, t.warped, tol=1e-6)
    elapsed = time.perf_counter() - t0
    r = {k: _max(conn + p51 + p52, k) for k in ("Eq41", "Eq42", "Eq43", "Eq44", "Eq45")}
    ok = (metric < 1e-10 and r["Eq41"] < 1e-8 and max(r["Eq42"], r["Eq43"], r["Eq44"]) < 1e-7
          and r["Eq45"] < 1e-6 and elapsed < 10.0)
    detail = (f"metric {metric:.1e} (<1e-10), connection {r['Eq41']:.1e} (<1e-8), "
              f"h/N relations {r['Eq42']:.1e} / {r['Eq43']:.1e} / {r['Eq44']:.1e} (<1e-7), "
              f"fiber T^2 derivative {r['Eq45']:.1e} (<1e-6), {elapsed:.2f}s (<10s)")
    return ok, detail


def test_criterion_07_warped_product(say):
    # Expected to fail: on this surface <h(X,Z),NW> does not vanish, and the two
    # relations derived from it inherit the defect.
    ok, detail = check_warped()
    assert say(7, "warped product", ok, detail)


# 8 -------------------------------------------------------------------------


def check_lemma():
    t = registry_get("ex4_1")
    geoms = [PointGeometry(t.spec, t.ambient, x) for x in t.sample(25, 6)]
    cases = bislant_lemma_suite(geoms, t.d1, t.d2, tol=1e-6)
    r33, r34 = _max(cases, "Eq33"), _max(cases, "Eq34")
    t = registry_get("ex4_3")
    geoms = [PointGeometry(t.spec, t.ambient, x) for x in t.sample(25, 6)]
    hemi = [c for c in bislant_lemma_suite(geoms, t.d1, t.d2, tol=1e-6) if c.identity in ("Eq38", "Eq39")]
    hemi_ok = bool(hemi) and all(c.verdict == "pass" for c in hemi)
    ok = r33 < 1e-6 and r34 < 1e-6 and hemi_ok
    return ok, (f"lemma residuals {r33:.1e} / {r34:.1e} (<1e-6); hemi-slant specializations "
                f"{sum(c.verdict == 'pass' for c in hemi)}/{len(hemi)} pass")


def test_criterion_08_bislant_lemma(say):
    ok, detail = check_lemma()
    assert say(8, "bi-slant lemma", ok, detail)


# 9 -------------------------------------------------------------------------


def check_determinism():
    cfg = dict(samples=10, seed=11)
    a = emit(run(RunConfig("ex5_1", **cfg)), "json")
    b = emit(run(RunConfig("ex5_1", **cfg)), "json")
    json.loads(a)
    return a == b, f"{len(a)} bytes, identical: {a == b}"


def test_criterion_09_determinism(say):
    ok, detail = check_determinism()
    assert say(9, "determinism", ok, detail)


# 10 ------------------------------------------------------------------------


def check_negative_control():
    t = registry_get("ex4_1")
    E = np.random.default_rng(99).standard_normal((6, 6))
    E = 1e-3 * (E + E.T) / 2
    E /= np.abs(E).max() / 1e-3
    rep = run(RunConfig("ex4_1", suites=("fundamental",), samples=25), ambient=t.ambient.perturbed(E))
    cases = rep.suites[0]["cases"]
    worst = max(_max(cases, k) for k in ("Eq9", "Eq10", "Eq11", "Eq12"))
    ok = (not rep.ok) and worst > 1e-5
    return ok, f"max identity residual {worst:.2e} (>1e-5), suite failing: {not rep.ok}"


def test_criterion_10_negative_control(say):
    ok, detail = check_negative_control()
    assert say(10, "negative control", ok, detail)


CHECKS = [
    (1, "metallic algebra", check_metallic_algebra),
    (2, "fundamental identities", check_fundamental),
    (3, "closed-form slant regression", check_closed_forms),
    (4, "pointwise vs global slant", check_discrimination),
    (5, "slant identity suite", check_slant_identities),
    (6, "extrinsic layer", check_extrinsic),
    (7, "warped product", check_warped),
    (8, "bi-slant lemma", check_lemma),
    (9, "determinism", check_determinism),
    (10, "negative control", check_negative_control),
]

if __name__ == "__main__":
    failed = 0
    for n, title, fn in CHECKS:
        ok, detail = fn()
        failed += not ok
        print(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title} -- {detail}")
    sys.exit(1 if failed else 0)
