"""Run configured suites over sampled points and serialize the results."""

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import PointGeometry
from .immersion import frame_at
from .metallic import metallic_defect
from .registry import resolve_target
from .slant import classify_bislant, pointwise_slant_test, slant_identity_suite, wirtinger_angle
from .split import check_fundamental_identities, check_product_relations, check_split_invariants, product_sign
from .warped import (FAIL, NA, PASS, IdentityCase, bislant_lemma_suite, prop51_suite, prop52_check,
                     theorem_predicates, warped_connection_check)

SUITES = ("fundamental", "slant", "extrinsic", "bislant", "warped", "theorems")
FORMATS = ("json", "csv", "text")


@dataclass
class RunConfig:
    target: str
    p: int = 1
    q: int = 1
    suites: tuple = SUITES
    samples: int = 25
    seed: int = 0
    tol_alg: float = 1e-9
    tol_d1: float = 1e-7
    tol_d2: float = 1e-6
    tol_conn: float = 1e-8  # connection-level identities: derivatives of T and N, warped connection, metric compatibility
    tol_fd: float = 1e-6  # jet vs finite-difference agreement
    format: str = "json"
    d1: object = None  # Distribution overriding the target's
    d2: object = None
    timing: bool = False

    def __post_init__(self):
        self.suites = tuple(self.suites)
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}; choose from {', '.join(SUITES)}")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        for name in ("tol_alg", "tol_d1", "tol_d2", "tol_conn", "tol_fd"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")

    def echo(self):
        out = asdict(self)
        out["suites"] = list(self.suites)
        out.pop("timing")
        for key in ("d1", "d2"):
            D = getattr(self, key)
            out[key] = None if D is None else np.asarray(D.basis).T.tolist()
        return out


@dataclass
class Report:
    config: dict
    classification: dict
    suites: list  # [{"id": ..., "cases": [IdentityCase], "summary": {...}}]
    timing: dict = field(default_factory=dict)

    @property
    def failures(self):
        return [(s["id"], c) for s in self.suites for c in s["cases"] if c.verdict == FAIL]

    @property
    def ok(self):
        return not self.failures

    def to_dict(self, timing=False):
        out = {
            "config": self.config,
            "classification": self.classification,
            "suites": [{"id": s["id"], "cases": [c.to_dict() for c in s["cases"]], "summary": s["summary"]}
                       for s in self.suites],
        }
        if timing:
            out["timing"] = self.timing
        return out


def summarize(cases):
    by_id = {}
    for c in cases:
        entry = by_id.setdefault(c.identity, {"pass": 0, "fail": 0, "n/a": 0, "max_residual": None})
        entry[c.verdict] += 1
        if c.residual is not None and (entry["max_residual"] is None or c.residual > entry["max_residual"]):
            entry["max_residual"] = c.residual
    totals = {v: sum(1 for c in cases if c.verdict == v) for v in (PASS, FAIL, NA)}
    return {"identities": by_id, "cases": len(cases), **totals}


def _sorted(cases):
    return sorted(cases, key=lambda c: (c.identity, c.point_index))


def _case(identity, i, x, r, tol, roles="", note=""):
    r = float(r)
    if not math.isfinite(r):
        return IdentityCase(identity, i, tuple(x), None, FAIL, roles, f"non-finite residual; {note}".strip("; "), tol)
    return IdentityCase(identity, i, tuple(x), r, PASS if r < tol else FAIL, roles, note, tol)


# suites -------------------------------------------------------------------------


def fundamental_suite(target, geoms, cfg):
    cases = []
    ambient, params = target.ambient, target.params
    J = np.asarray(ambient.J)
    x0 = geoms[0].x if geoms else ()
    cases.append(_case("Eq1", 0, x0, metallic_defect(J, params), cfg.tol_alg, "ambient"))
    cases.append(_case("Eq2", 0, x0, float(np.abs(J - J.T).max()), cfg.tol_alg, "ambient"))
    sign = None
    if ambient.F is not None:
        sign = product_sign(ambient, params)
    for i, geom in enumerate(geoms):
        for ident, r in check_fundamental_identities(geom.split, params).items():
            cases.append(_case(ident, i, geom.x, r, cfg.tol_alg))
        for ident, r in check_split_invariants(geom.split).items():
            cases.append(_case(ident, i, geom.x, r / max(1.0, float(np.abs(geom.G).max())), cfg.tol_alg))
        if sign is not None:
            for ident, r in check_product_relations(geom.split, params, sign).items():
                cases.append(_case(ident, i, geom.x, r, cfg.tol_alg, f"sign {sign:+d}"))
    return cases


def _distributions(target, cfg):
    d1 = cfg.d1 if cfg.d1 is not None else target.d1
    d2 = cfg.d2 if cfg.d2 is not None else target.d2
    return d1, d2


def slant_suite(target, geoms, cfg):
    d1, d2 = _distributions(target, cfg)
    dists = [d for d in (d1, d2) if d is not None]
    cases = []
    for i, geom in enumerate(geoms):
        for D in dists:
            test = pointwise_slant_test(geom.split, target.params, D, cfg.tol_alg)
            cases.append(IdentityCase("Eq28", i, geom.x, test.residual, PASS if test.is_pointwise_slant else FAIL,
                                      D.name, f"theta={test.theta:.12g}; direction spread {test.angle_spread:.2e}",
                                      cfg.tol_alg))
            direct = wirtinger_angle(geom.split, D.basis[:, 0])
            cases.append(_case("Eq27", i, geom.x, abs(direct - test.theta), 1e-8, D.name,
                               "Wirtinger angle vs fitted angle"))
            for c in slant_identity_suite(geom, D, target.params, cfg.tol_alg, cfg.tol_d2):
                tol = c["tol"]
                if not c["applicable"]:
                    cases.append(IdentityCase(c["identity"], i, geom.x, None, NA, D.name, c.get("note", "")))
                else:
                    cases.append(_case(c["identity"], i, geom.x, c["residual"], tol, D.name, c.get("note", "")))
    return cases


def _fd_frames(spec, x, a, step):
    x = np.asarray(x, dtype=float)
    e = np.zeros_like(x)
    e[a] = step
    return frame_at(spec, x + e, check_domain=False), frame_at(spec, x - e, check_domain=False)


def _fd_fields(frame, J, nu0):
    """The operator fields differentiated by ``OperatorJets``, evaluated from a frame."""
    Z, G = frame.tangent_frame, frame.gram
    Ginv = np.linalg.inv(G)
    T = Ginv @ Z.T @ J @ Z
    P = np.eye(Z.shape[0]) - Z @ Ginv @ Z.T
    return {"Z": Z, "G": G, "T": T, "N": J @ Z - Z @ T, "t": Ginv @ Z.T @ J @ P @ nu0, "n": P @ J @ P @ nu0}


def extrinsic_suite(target, geoms, cfg, fd_step=1e-5):
    cases = []
    J = np.asarray(target.ambient.J)
    for i, geom in enumerate(geoms):
        x, fr, ext = geom.x, geom.frame, geom.ext
        Z, G, H = fr.tangent_frame, fr.gram, fr.second_jet
        k = geom.k
        raw_h = H - np.einsum("mc,abc->abm", Z, ext.christoffel)
        cases.append(_case("h.symmetry", i, x, float(np.abs(raw_h - np.swapaxes(raw_h, 0, 1)).max()), 1e-10))
        cases.append(_case("h.normal", i, x, float(np.abs(Z.T @ ext.h_ambient.reshape(k * k, -1).T).max()), 1e-10))
        GA = np.einsum("ab,sbc->sac", G, ext.A)
        cases.append(_case("Eq15", i, x, float(np.abs(np.moveaxis(ext.h, 2, 0) - GA).max()), cfg.tol_alg))
        recon = np.einsum("mc,abc->abm", Z, ext.christoffel) + ext.h_ambient - H
        cases.append(_case("Eq13", i, x, float(np.abs(recon).max()) / max(1.0, float(np.abs(H).max())), 1e-10))
        dG = geom.jets.G.d
        compat = np.einsum("cad,db->cab", ext.christoffel, G) + np.einsum("cbd,ad->cab", ext.christoffel, G)
        cases.append(_case("metric_compatibility", i, x, float(np.abs(dG - compat).max()), cfg.tol_conn))
        for a in range(k):
            X = geom.e(a)
            cov = geom.covariant(X)
            dJ = target.ambient.covariant_derivative(fr.tangent_frame @ X)
            cases.append(_case("Eq20", i, x, float(np.abs(dJ - dJ.T).max() + np.abs(dJ).max()), 1e-12,
                               f"X=Z{a + 1}"))
            GnT = G @ cov["T"]
            r21 = float(np.abs(GnT - GnT.T).max()) / max(1.0, float(np.abs(GnT).max()))
            cases.append(_case("Eq21", i, x, r21, cfg.tol_conn, f"X=Z{a + 1}"))
            dual = G @ cov["t"]
            r22 = float(np.abs(cov["N"] - dual.T).max()) / max(1.0, float(np.abs(dual).max()))
            cases.append(_case("Eq22", i, x, r22, cfg.tol_conn, f"X=Z{a + 1}"))
            sym_n = float(np.abs(cov["n"] - cov["n"].T).max()) if cov["n"].size else 0.0
            cases.append(_case("Eq19.symmetry", i, x, sym_n, cfg.tol_conn, f"X=Z{a + 1}",
                               "derivative of n stays symmetric"))
            # finite-difference cross-check of the jet derivatives
            plus, minus = _fd_frames(geom.spec, x, a, fd_step)
            fp, fm = _fd_fields(plus, J, fr.normal_frame), _fd_fields(minus, J, fr.normal_frame)
            jets = geom.jets
            jet_d = {"Z": jets.Z.along(X), "G": jets.G.along(X), "T": jets.T.along(X),
                     "N": jets.N_ambient.along(X), "t": jets.t_ext.along(X), "n": jets.n_ambient.along(X)}
            for key, d in jet_d.items():
                fd = (fp[key] - fm[key]) / (2 * fd_step)
                rel = float(np.abs(d - fd).max()) / max(1.0, float(np.abs(d).max())) if d.size else 0.0
                cases.append(_case(f"FD.{key}", i, x, rel, cfg.tol_fd, f"direction u{a + 1}"))
            vp = geom.spec.evaluate(np.asarray(x) + fd_step * X)
            vm = geom.spec.evaluate(np.asarray(x) - fd_step * X)
            fd = (vp - vm) / (2 * fd_step)
            jac = Z @ X
            cases.append(_case("FD.jacobian", i, x, float(np.abs(jac - fd).max()) / max(1.0, float(np.abs(jac).max())),
                               cfg.tol_fd, f"direction u{a + 1}"))
    return cases


def _require(obj, message, geoms, ident):
    if obj is None:
        x0 = geoms[0].x if geoms else ()
        return [IdentityCase(ident, 0, tuple(x0), None, NA, "", message)]
    return None


def bislant_suite(target, geoms, cfg):
    d1, d2 = _distributions(target, cfg)
    if d1 is None or d2 is None:
        return _require(None, "no distributions declared", geoms, "Eq33")
    return bislant_lemma_suite(geoms, d1, d2, cfg.tol_d2)


def warped_suite(target, geoms, cfg):
    w = target.warped
    missing = _require(w, "no warped structure declared", geoms, "Eq41")
    if missing:
        return missing
    points = [g.x for g in geoms]
    return (warped_connection_check(w, points, cfg.tol_conn) + prop51_suite(geoms, w, cfg.tol_d1)
            + prop52_check(geoms, w, cfg.tol_d2))


def theorems_suite(target, geoms, cfg):
    w = target.warped
    missing = _require(w, "no warped structure declared", geoms, "Th6.1")
    if missing:
        return missing
    return theorem_predicates(geoms, w, cfg.tol_alg, cfg.tol_d1)


_RUNNERS = {"fundamental": fundamental_suite, "slant": slant_suite, "extrinsic": extrinsic_suite,
            "bislant": bislant_suite, "warped": warped_suite, "theorems": theorems_suite}


def classification(target, geoms, cfg):
    d1, d2 = _distributions(target, cfg)
    if not geoms:
        reason = "constraint locus has no points inside the chart domain" if target.locus is not None \
            else "no sample points"
        out = {"verdict": "none", "reasons": [reason], "points": 0}
        if target.locus is not None:
            out["locus"] = target.locus.to_dict()
        return out
    if d1 is None or d2 is None:
        tests = [pointwise_slant_test(g.split, target.params) for g in geoms]
        thetas = [t.theta for t in tests]
        slant = all(t.is_pointwise_slant for t in tests)
        verdict = "none"
        if slant:
            if max(thetas) < 1e-6:
                verdict = "invariant"
            elif min(thetas) > math.pi / 2 - 1e-6:
                verdict = "anti-invariant"
            else:
                verdict = "slant" if max(thetas) - min(thetas) < 1e-8 else "pointwise slant"
        return {"verdict": verdict, "theta": {"min": min(thetas), "max": max(thetas)}, "points": len(geoms),
                "reasons": [] if slant else ["tangent space is not pointwise slant"]}
    const = None
    if target.warped is not None:
        const = all(np.abs(target.warped.dlog_warping(g.x)).max() < 1e-8 for g in geoms)
    out = classify_bislant(geoms, d1, d2, const).to_dict()
    if target.locus is not None:
        out["locus"] = target.locus.to_dict()
    return out


def run(cfg, ambient=None):
    """Execute ``cfg``; ``ambient`` overrides the target's structure (negative controls)."""
    t0 = time.perf_counter()
    target = resolve_target(cfg.target, cfg.p, cfg.q)
    if ambient is not None:
        target.ambient = ambient
    points = target.sample(cfg.samples, cfg.seed)
    geoms = [PointGeometry(target.spec, target.ambient, x) for x in points]
    timing = {"setup": time.perf_counter() - t0}
    cls = classification(target, geoms, cfg)
    suites = []
    for sid in cfg.suites:
        t1 = time.perf_counter()
        cases = _sorted(_RUNNERS[sid](target, geoms, cfg)) if geoms else []
        suites.append({"id": sid, "cases": cases, "summary": summarize(cases)})
        timing[sid] = time.perf_counter() - t1
    timing["total"] = time.perf_counter() - t0
    return Report(cfg.echo(), cls, suites, timing)


# emit -----------------------------------------------------------------------------


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


CSV_FIELDS = ("suite", "identity", "point_index", "point", "residual", "verdict", "roles", "note")


def emit(report, fmt="json", timing=False):
    if fmt == "json":
        return (json.dumps(_clean(report.to_dict(timing)), sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for s in report.suites:
            for c in s["cases"]:
                point = " ".join(repr(float(v)) for v in c.point)
                res = "" if c.residual is None else repr(float(c.residual))
                writer.writerow([s["id"], c.identity, c.point_index, point, res, c.verdict, c.roles, c.note])
        return buf.getvalue().encode()
    if fmt == "text":
        return _text(report).encode()
    raise ConfigError(f"unknown format {fmt!r}")


def _text(report):
    lines = [f"target: {report.config['target']}  p={report.config['p']} q={report.config['q']}  "
             f"samples={report.config['samples']} seed={report.config['seed']}",
             f"classification: {report.classification.get('verdict')}"]
    for reason in report.classification.get("reasons", []):
        lines.append(f"  reason: {reason}")
    for s in report.suites:
        summ = s["summary"]
        lines.append(f"[{s['id']}] {summ['pass']} pass, {summ['fail']} fail, {summ['n/a']} n/a")
        for ident, e in sorted(summ["identities"].items()):
            mr = "-" if e["max_residual"] is None else f"{e['max_residual']:.3e}"
            lines.append(f"  {ident:<24} pass={e['pass']:<4} fail={e['fail']:<4} n/a={e['n/a']:<4} max={mr}")
    fails = report.failures
    if fails:
        lines.append("failing cases:")
        for sid, c in fails[:50]:
            res = "-" if c.residual is None else f"{c.residual:.3e}"
            lines.append(f"  {sid}/{c.identity} point {c.point_index} {tuple(round(v, 6) for v in c.point)} "
                         f"residual {res} {c.roles} {c.note}".rstrip())
        if len(fails) > 50:
            lines.append(f"  ... {len(fails) - 50} more")
    return "\n".join(lines) + "\n"
