import math

import numpy as np
import pytest
from shapely.geometry import LinearRing

from harmonic_radius.certify import (
    Certificate,
    Check,
    GridSpec,
    PreconditionError,
    Verdict,
    boundary_simple,
    certify_sense_preserving,
    check_growth_bound,
    check_schwarz_pick,
    check_starlike_half,
    infer_injectivity,
    injective_pairwise,
    polar_grid,
    replay,
    schwarz_pick_gap,
)
from harmonic_radius.expr import Blaschke, ConstantFn, HalfPlane, Koebe, Monomial, build_catalog, derivative, evaluate
from harmonic_radius.mapping import eval_f, f1, f2, jacobian, make_mapping
from harmonic_radius.radius import radius_n1, radius_n2
from harmonic_radius.sampling import disk_points


def analytic(cid):
    return make_mapping(build_catalog(cid), build_catalog(ConstantFn(0)), label="analytic")


@pytest.fixture(scope="module")
def m1():
    return f1()


@pytest.fixture(scope="module")
def m2():
    return f2()


def test_polar_grid_shape():
    zs = polar_grid(0.5, GridSpec(4, 8, 0))
    assert len(zs) == 1 + 3 * 8
    assert np.max(np.abs(zs)) == pytest.approx(0.5)
    assert 0.5 + 0j in zs


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(1, 8, 0)
    with pytest.raises(ValueError):
        GridSpec(2, 4, 0)


def test_f1_sense_preserving_small_disk(m1):
    # |g'/h'| = |1-z|^2/2 <= 1.69/2 on |z| <= 0.3
    cert = certify_sense_preserving(m1, 0.3)
    assert cert.verdict is Verdict.HOLDS_SAMPLED
    assert cert.margin > 0
    assert not cert.witness


def test_f1_fails_near_minus_point_nine(m1):
    cert = certify_sense_preserving(m1, 0.9)
    assert cert.verdict is Verdict.FAILS_WITNESS
    (z,) = cert.witness
    assert abs(z + 0.9) < 0.05
    # J(-0.9) = (1/1.9^2)^2 - 1/4
    assert jacobian(m1, -0.9 + 0j) == pytest.approx(1 / 1.9**4 - 0.25, abs=1e-15)
    assert cert.margin <= jacobian(m1, -0.9 + 0j) + 1e-15
    assert replay(cert, m1) == pytest.approx(cert.witness_value, abs=1e-12)


@pytest.mark.parametrize("r", [0.2, 0.6, 0.95])
def test_zero_dilatation_holds_with_min_derivative_margin(r):
    m = analytic(HalfPlane(-1))
    cert = certify_sense_preserving(m, r)
    assert cert.verdict is Verdict.HOLDS_SAMPLED
    # min |h'|^2 = 1/(1+r)^4 attained at z = -r, which lies on the grid
    assert cert.margin == pytest.approx(1 / (1 + r) ** 4, rel=1e-12)


def test_monotone_in_radius(m1):
    for r in np.arange(0.05, 0.31, 0.05):
        assert certify_sense_preserving(m1, float(r)).verdict is Verdict.HOLDS_SAMPLED


def test_radius_rejected():
    with pytest.raises(ValueError):
        certify_sense_preserving(f1(), 1.0)
    with pytest.raises(ValueError):
        injective_pairwise(f1(), 0.0)


def test_refinement_lowers_margin():
    m = make_mapping(build_catalog(HalfPlane(1)), build_catalog(Blaschke(0.9)))
    coarse = certify_sense_preserving(m, 0.45, GridSpec(8, 16, 0))
    fine = certify_sense_preserving(m, 0.45, GridSpec(8, 16, 3))
    assert fine.margin <= coarse.margin


@pytest.mark.parametrize("n", range(1, 6))
def test_monomial_radius_n1_sharp_for_halfplane(n):
    # |g'/h'| at z = -r equals n r^(n+1) + (n+1) r^n for h = z/(1-z), w = z^n
    m = make_mapping(build_catalog(HalfPlane(-1)), build_catalog(Monomial(0.0, n)))
    r = radius_n1(n).value
    assert certify_sense_preserving(m, r - 0.01).verdict is Verdict.HOLDS_SAMPLED
    cert = certify_sense_preserving(m, r + 0.01)
    assert cert.verdict is Verdict.FAILS_WITNESS
    assert jacobian(m, -(r + 0.01) + 0j) < 0


@pytest.mark.parametrize("n", range(1, 6))
def test_monomial_radius_n2_sharp_for_koebe(n):
    m = make_mapping(build_catalog(Koebe(-1)), build_catalog(Monomial(0.0, n)))
    r = radius_n2(n).value
    assert certify_sense_preserving(m, r - 0.01).verdict is Verdict.HOLDS_SAMPLED
    assert certify_sense_preserving(m, r + 0.01).verdict is Verdict.FAILS_WITNESS
    assert jacobian(m, -(r + 0.01) + 0j) < 0


def test_constant_dilatation_sense_preserving_everywhere():
    for c in (0.9, -0.5 + 0.8j):
        m = make_mapping(build_catalog(HalfPlane(1)), build_catalog(ConstantFn(c)))
        assert certify_sense_preserving(m, 0.99).verdict is Verdict.HOLDS_SAMPLED


# ------------------------------------------------------------ inference


def test_infer_injectivity(m1):
    cert = certify_sense_preserving(m1, 0.3)
    inj = infer_injectivity(cert, True)
    assert inj.check is Check.INJECTIVE_PAIRWISE
    assert inj.verdict is Verdict.HOLDS_SAMPLED
    assert "convex" in inj.note
    assert infer_injectivity(cert, False).verdict is Verdict.INCONCLUSIVE


def test_infer_injectivity_preconditions(m1):
    with pytest.raises(PreconditionError):
        infer_injectivity(certify_sense_preserving(m1, 0.9), True)
    with pytest.raises(PreconditionError):
        infer_injectivity(boundary_simple(m1, 0.5, 256), True)


# ------------------------------------------------------- injectivity


def test_pairwise_holds_for_analytic_map():
    cert = injective_pairwise(analytic(HalfPlane(-1)), 0.5)
    assert cert.verdict is Verdict.HOLDS_SAMPLED


def test_pairwise_holds_on_certified_disk(m1):
    assert injective_pairwise(m1, 0.3).verdict is Verdict.HOLDS_SAMPLED


@pytest.mark.parametrize("name", ["m1", "m2"])
def test_pairwise_finds_collision(name, request):
    m = request.getfixturevalue(name)
    cert = injective_pairwise(m, 0.99)
    assert cert.verdict is Verdict.FAILS_WITNESS
    z1, z2 = cert.witness
    assert abs(z1) <= 0.99 + 1e-12 and abs(z2) <= 0.99 + 1e-12
    assert abs(z1 - z2) >= 0.99 / 63
    assert abs(eval_f(m, z1) - eval_f(m, z2)) <= 1e-9
    assert replay(cert, m) == pytest.approx(cert.witness_value, abs=1e-12)


def test_boundary_simple_for_analytic_maps():
    for cid, r in ((HalfPlane(-1), 0.5), (Koebe(1), 0.9), (HalfPlane(1), 0.99)):
        cert = boundary_simple(analytic(cid), r, 1024)
        assert cert.verdict is Verdict.HOLDS_SAMPLED
        assert cert.margin > 0


def test_boundary_detects_folded_curve():
    # h = z/(1-z), w = z^4: the circle image at r = 0.9 winds back on itself
    m = make_mapping(build_catalog(HalfPlane(-1)), build_catalog(Monomial(0.0, 4)))
    cert = boundary_simple(m, 0.9, 1024)
    z = 0.9 * np.exp(2j * np.pi * np.arange(1024) / 1024)
    p = eval_f(m, z)
    assert not LinearRing(np.column_stack([p.real, p.imag])).is_simple
    assert cert.verdict is Verdict.FAILS_WITNESS
    assert cert.witness_value <= 0
    assert replay(cert, m) == pytest.approx(cert.witness_value, abs=1e-12)


@pytest.mark.parametrize("name", ["m1", "m2"])
def test_counterexample_boundary_curves_agree_with_shapely(name, request):
    # Both counterexamples fold in the interior; the circle images themselves
    # stay simple, and the detector must agree with an independent check.
    m = request.getfixturevalue(name)
    for r in (0.5, 0.9, 0.99):
        cert = boundary_simple(m, r, 2048)
        z = r * np.exp(2j * np.pi * np.arange(2048) / 2048)
        p = eval_f(m, z)
        simple = LinearRing(np.column_stack([p.real, p.imag])).is_simple
        assert (cert.verdict is Verdict.HOLDS_SAMPLED) == simple


def test_boundary_samples_validated():
    with pytest.raises(ValueError):
        boundary_simple(f1(), 0.5, 32)


# ------------------------------------------------------- inequalities


@pytest.mark.parametrize("zeta", [-1.0, -0.6, 0.0, 0.7, 1.0])
def test_schwarz_pick_equality_for_blaschke(zeta):
    w = build_catalog(Blaschke(zeta))
    cert = check_schwarz_pick(w, 10_000)
    assert cert.verdict is Verdict.HOLDS_SAMPLED
    gap = schwarz_pick_gap(w, disk_points(10_000, 0.99))
    assert np.max(np.abs(gap)) <= 1e-9


def test_schwarz_pick_strict_for_monomial():
    w = build_catalog(Monomial(0.0, 3))
    cert = check_schwarz_pick(w, 10_000)
    assert cert.verdict is Verdict.HOLDS_SAMPLED
    assert cert.margin < 0
    # |3 z^2| vs 1 + |z|^2 + |z|^4
    z = disk_points(2000, 0.99)
    t = np.abs(z)
    np.testing.assert_allclose(schwarz_pick_gap(w, z), 3 * t**2 - (1 + t**2 + t**4), atol=1e-12)


def test_schwarz_pick_constant():
    cert = check_schwarz_pick(build_catalog(ConstantFn(0.5)), 1000)
    assert cert.verdict is Verdict.HOLDS_SAMPLED


def test_schwarz_pick_detects_non_class_b():
    # 2z is not in the Schwarz class
    from harmonic_radius.expr import Constant, Z

    cert = check_schwarz_pick(Constant(2) * Z, 1000)
    assert cert.verdict is Verdict.FAILS_WITNESS
    assert replay(cert, fn=Constant(2) * Z) == pytest.approx(cert.witness_value, abs=1e-12)


def test_growth_bounds():
    assert check_growth_bound(build_catalog(HalfPlane(1)), "convex").verdict is Verdict.HOLDS_SAMPLED
    assert check_growth_bound(build_catalog(HalfPlane(-1)), "convex").verdict is Verdict.HOLDS_SAMPLED
    cert = check_growth_bound(build_catalog(Koebe(1)), "univalent")
    assert cert.verdict is Verdict.HOLDS_SAMPLED
    # Koebe attains equality on the positive axis
    x = np.linspace(0.01, 0.95, 50)
    h = build_catalog(Koebe(1))
    gap = np.abs(evaluate(h, x + 0j)) - x * (1 + x) / (1 - x) * np.abs(evaluate(derivative(h), x + 0j))
    assert np.max(np.abs(gap)) <= 1e-12


def test_growth_bound_fails_for_koebe_with_convex_constant():
    cert = check_growth_bound(build_catalog(Koebe(1)), "convex")
    assert cert.verdict is Verdict.FAILS_WITNESS


def test_starlike_half():
    assert check_starlike_half(build_catalog(HalfPlane(-1))).verdict is Verdict.HOLDS_SAMPLED
    assert check_starlike_half(build_catalog(HalfPlane(1))).verdict is Verdict.HOLDS_SAMPLED
    cert = check_starlike_half(build_catalog(Koebe(-1)))
    assert cert.verdict is Verdict.FAILS_WITNESS
    (z,) = cert.witness
    # (1+z)/(1-z) has real part below 1/2 there
    assert ((1 + z) / (1 - z)).real < 0.5
    assert replay(cert, fn=build_catalog(Koebe(-1))) == pytest.approx(cert.witness_value, abs=1e-12)


def test_starlike_halfplane_closed_form():
    z = disk_points(1000, 0.95, r_min=1e-6)
    from harmonic_radius.certify import starlike_gap

    np.testing.assert_allclose(starlike_gap(build_catalog(HalfPlane(-1)), z), (1 / (1 - z)).real - 0.5, atol=1e-12)


# ------------------------------------------------------- serialization


def test_json_round_trip(m1):
    certs = [
        certify_sense_preserving(m1, 0.9),
        certify_sense_preserving(m1, 0.3),
        injective_pairwise(m1, 0.99),
        injective_pairwise(m1, 0.2),
        boundary_simple(m1, 0.5, 128),
        check_schwarz_pick(build_catalog(Blaschke(0.3)), 100),
    ]
    for cert in certs:
        back = Certificate.from_json(cert.to_json())
        assert back == cert or (math.isnan(cert.margin) and math.isnan(back.margin))
        assert back.to_json() == cert.to_json()


def test_json_rejects_unknown_version(m1):
    import json

    doc = json.loads(certify_sense_preserving(m1, 0.3).to_json())
    doc["version"] = 99
    with pytest.raises(ValueError):
        Certificate.from_json(json.dumps(doc))
