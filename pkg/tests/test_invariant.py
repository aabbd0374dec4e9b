from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from cherncurv import catalog
from cherncurv import invariant as inv
from cherncurv.forms import InvariantForm, ext_d
from cherncurv.scalars import I_EXACT, QQi, conj
from cherncurv.invariant import (DegenerateMetric, HermitianMetric,
                                 NotPositiveDefinite, SurfaceMetricParams)

ENTRIES = catalog.list_entries()


def rng_metric(rng, n=2):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a @ a.conj().T + np.eye(n)
    return HermitianMetric(h.tolist())


# ---------------------------------------------------------------------------
# Hopf anchors, exact arithmetic

@pytest.mark.parametrize("r", [1, 2, Fraction(1, 3)])
def test_hopf_anchors_exact(r):
    alg, h, _ = catalog.build("hopf", {"r": r}, exact=True)
    curv = inv.chern_curvature(alg, h)
    ric1 = inv.ricci(1, curv, h)
    assert ric1 == InvariantForm(2, {(0, 2): 2 * I_EXACT})
    s = inv.scalar_chern(curv, h)
    assert s == Fraction(4) / (Fraction(r) ** 2)
    lam, residual = inv.einstein_residual(2, alg, h)
    assert lam == pytest.approx(float(4 / (Fraction(r) ** 2 * 2)))
    assert residual == pytest.approx(0.0, abs=1e-14)


def test_hopf_anchors_float():
    alg, h, _ = catalog.build("hopf", {"r": 2.0}, exact=False)
    curv = inv.chern_curvature(alg, h)
    assert inv.scalar_chern(curv, h) == pytest.approx(1.0, rel=1e-12)
    lam, residual = inv.einstein_residual(2, alg, h)
    assert lam == pytest.approx(0.5, rel=1e-12)
    assert residual < 1e-14


# ---------------------------------------------------------------------------
# structural identities across the whole catalog

@pytest.mark.parametrize("name", ENTRIES)
def test_ric1_closed(name):
    alg, h, _ = catalog.build(name, exact=True)
    curv = inv.chern_curvature(alg, h)
    ric1 = inv.ricci(1, curv, h)
    assert ext_d(alg, ric1).is_zero()


@pytest.mark.parametrize("name", ENTRIES)
def test_trace_identity(name):
    alg, h, _ = catalog.build(name, exact=True)
    curv = inv.chern_curvature(alg, h)
    s = inv.scalar_chern(curv, h)
    up = h.inverse_upper()
    n = alg.n
    for kind in (1, 2):
        m = inv._ric_matrix(kind, curv, h)
        tr = sum((up[a][b] * m[a][b] for a in range(n) for b in range(n)),
                 QQi())
        assert tr == QQi(s)


@pytest.mark.parametrize("name", ENTRIES)
def test_hermitian_pair_symmetry(name):
    rng = np.random.default_rng(11)
    alg, _, _ = catalog.build(name, {"r": 1.0}, exact=False)
    h = rng_metric(rng, alg.n)
    th = inv.chern_curvature(alg, h).lowered
    n = alg.n
    scale = max(abs(th[i][j][k][l])
                for i, j, k, l in product(range(n), repeat=4)) + 1e-30
    for i, j, k, l in product(range(n), repeat=4):
        assert abs(th[i][j][k][l] - conj(th[j][i][l][k])) < 1e-12 * scale


def test_rescaling_covariance():
    alg, h, _ = catalog.build("inoue-sm", exact=True)
    lam, _ = inv.einstein_residual(2, alg, h)
    for c in (2, Fraction(1, 3)):
        hc = h.scaled(QQi(c))
        lam_c, _ = inv.einstein_residual(2, alg, hc)
        assert lam_c == pytest.approx(lam / float(c), rel=1e-12)
        s = inv.scalar_chern(inv.chern_curvature(alg, h), h)
        sc = inv.scalar_chern(inv.chern_curvature(alg, hc), hc)
        assert sc == s / c


def test_third_ricci_hopf():
    alg, h, _ = catalog.build("hopf", exact=True)
    curv = inv.chern_curvature(alg, h)
    ric3 = inv.ricci(3, curv, h)
    assert ric3[0][0] == QQi(1)
    assert not ric3[1][1]


# ---------------------------------------------------------------------------
# batched backend against the forms engine

def test_batch_matches_forms_engine():
    rng = np.random.default_rng(3)
    for name in ("hopf", "inoue-spm", "kodaira-secondary", "ovando-r4"):
        alg, _, _ = catalog.build(name, {"r": 1.0}, exact=False)
        hs = np.empty((8, 2, 2), dtype=complex)
        mets = []
        for idx in range(8):
            m = rng_metric(rng)
            mets.append(m)
            hs[idx] = np.array(m.h)
        batch = inv.batch_curvature(alg, hs)
        for idx, m in enumerate(mets):
            ref = np.array(inv.chern_curvature(alg, m).lowered)
            scale = np.max(np.abs(ref)) + 1e-30
            assert np.max(np.abs(batch[idx] - ref)) < 1e-12 * scale


def test_batch_residual_relative_dimensionless():
    alg, _, _ = catalog.build("inoue-sm", {"r": 1.0}, exact=False)
    hs = np.empty((2, 2, 2), dtype=complex)
    for idx, c in enumerate((1.0, 50.0)):
        hs[idx] = c * np.array([[0.5, 0], [0, 0.5]])
    _, rel, _ = inv.batch_einstein_residual(2, alg, hs, relative=True)
    assert rel[0] == pytest.approx(rel[1], rel=1e-12)


# ---------------------------------------------------------------------------
# torsion, Lee form, Gauduchon

def test_torsion_flat_torus_vanishes():
    alg, h, _ = catalog.build("flat-torus", exact=True)
    taus, trace = inv.torsion(alg, h)
    assert all(t.is_zero() for t in taus)
    assert trace.is_zero()


@pytest.mark.parametrize("name", ENTRIES)
def test_torsion_is_20(name):
    alg, h, _ = catalog.build(name, exact=True)
    taus, _ = inv.torsion(alg, h)
    for t in taus:
        assert t.bidegrees() <= {(2, 0)}


def test_lee_form_snow():
    alg, h, _ = catalog.build("snow-s5", {"r": 1.0, "ell": 1.0},
                              exact=False)
    theta, lck, residual = inv.lee_form(alg, h)
    assert theta is not None and lck
    assert residual < 1e-12
    assert abs(theta.coeff(0) - 1) < 1e-9
    assert abs(theta.coeff(2) - 1) < 1e-9
    # re-wedge: d omega = theta ^ omega for n = 2
    omega = h.omega()
    assert (ext_d(alg, omega) - theta.wedge(omega)).is_zero(
        tol_scale=max(omega.max_abs(), 1.0))


def test_gauduchon_degrees():
    for name, sign in (("flat-torus", 0), ("hopf", 1), ("inoue-sm", -1)):
        alg, h, _ = catalog.build(name, {"r": 1.0}, exact=False)
        ok, residual = inv.is_gauduchon(alg, h)
        assert ok and residual < 1e-12
        deg = inv.gauduchon_degree(alg, h)
        if sign == 0:
            assert abs(deg) < 1e-12
        else:
            assert deg * sign > 0


# ---------------------------------------------------------------------------
# metric validation

def test_metric_validation():
    with pytest.raises(NotPositiveDefinite):
        HermitianMetric([[1 + 0j, 0j], [0j, -1 + 0j]])
    with pytest.raises(NotPositiveDefinite):
        HermitianMetric([[1 + 0j, 2 + 0j], [2 + 0j, 1 + 0j]])
    with pytest.raises(ValueError):
        HermitianMetric([[1 + 0j, 1j], [1j, 1 + 0j]])  # not Hermitian
    with pytest.raises(DegenerateMetric):
        HermitianMetric([[1e-30 + 0j, 0j], [0j, 1e30 + 0j]])


def test_admissibility():
    assert SurfaceMetricParams(1, 1, 0.5).admissible()
    assert not SurfaceMetricParams(1, 1, 1.0).admissible()
    assert not SurfaceMetricParams(0, 1, 0).admissible()


def test_bad_kind_and_mode():
    alg, h, _ = catalog.build("hopf", exact=True)
    curv = inv.chern_curvature(alg, h)
    with pytest.raises(ValueError):
        inv.ricci(4, curv, h)
    with pytest.raises(ValueError):
        inv.einstein_residual(2, alg, h, mode="medium")


# ---------------------------------------------------------------------------
# Einstein residuals, Chern-Weil, Bogomolov-Lubke

def test_ovando_r4_einstein():
    alg, h, _ = catalog.build("ovando-r4", {"r": 1.0}, exact=False)
    for mode in ("strong", "weak"):
        lam, residual = inv.einstein_residual(2, alg, h, mode=mode)
        assert lam == pytest.approx(-1.0, rel=1e-12)
        assert residual < 1e-13


@pytest.mark.parametrize("name", ENTRIES)
def test_c1_closed(name):
    alg, h, _ = catalog.build(name, {"r": 1.0}, exact=False)
    curv = inv.chern_curvature(alg, h)
    c1, _ = inv.chern_weil(curv)
    assert ext_d(alg, c1).is_zero(tol_scale=max(c1.max_abs(), 1.0))


def test_bogomolov_lubke_signs():
    for name in ("hopf", "ovando-r4"):
        alg, h, _ = catalog.build(name, {"r": 1.0}, exact=False)
        curv = inv.chern_curvature(alg, h)
        assert inv.bogomolov_lubke(curv, h) <= 1e-9


# ---------------------------------------------------------------------------
# scans

def test_scan_small_grid():
    grid = inv.default_surface_grid(r_values=[0.5, 1.0], s_values=[0.5, 1.0],
                                    radii=2, phases=4)
    report = catalog.scan_entry("inoue-sm", kind=2, grid=grid)
    assert report.count > 0
    assert report.min_residual > 1e-3
    assert report.certificate_ok
    assert report.certificate_worst < 0
    assert report.min_residual_abs > 0


def test_scan_rejects_empty_grid():
    alg, _, _ = catalog.build("hopf", {"r": 1.0}, exact=False)
    with pytest.raises(ValueError):
        inv.scan(alg, 2, grid=[(1.0, 1.0, 5.0)])  # inadmissible point


def test_ricci_report_consistent():
    alg, h, _ = catalog.build("ovando-r4", {"r": 1.0}, exact=False)
    rep = inv.ricci_report(alg, h)
    assert rep.einstein[(2, "strong")][1] < 1e-13
    assert rep.s_chern == pytest.approx(-2.0, rel=1e-12)
