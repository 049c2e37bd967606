import json
import math
from fractions import Fraction

import numpy as np
import pytest

from squeeze import (
    PointC2,
    LogPoint,
    RadialProfile,
    ReinhardtDomain,
    ValidationError,
    CertificationError,
    bidisc_domain,
    boundary_distance_lower,
    contains,
    is_pseudoconvex,
    outer_radius_upper,
    annulus_model_domain,
    profile_eval,
    slice_radii,
)
from squeeze.domain import domain_from_doc, domain_to_doc, perturb_value


def test_profile_eval_flat_region(p0):
    _, domain, _ = p0
    assert profile_eval(domain.profile, 0.0) == 0.0


def test_profile_eval_matches_schedule(p0):
    # independent recomputation: heights follow phi(t_{k+1}) = phi(t_k) - n_k dt
    _, domain, _ = p0
    t1, t2 = math.log(1.5), math.log(1.75)
    expected = -99.0 * (t2 - t1)
    got = profile_eval(domain.profile, math.log(1.75))
    assert math.isclose(got, expected, rel_tol=1e-13)
    assert math.isclose(got, -15.261, rel_tol=1e-4)


def test_profile_eval_symmetric(p0):
    _, domain, _ = p0
    for t in domain.profile.breakpoints:
        assert profile_eval(domain.profile, -t) == profile_eval(domain.profile, t)


def test_profile_eval_linear_extension():
    prof = RadialProfile((0.0, 1.0), (0.0, -2.0))
    assert profile_eval(prof, 2.0) == pytest.approx(-4.0)
    assert profile_eval(prof, -1.0) == pytest.approx(2.0)


def test_contains_flat_region(p0):
    _, domain, _ = p0
    assert contains(domain, (1.0, 0.5))


def test_contains_monomial_region(p0):
    _, domain, _ = p0
    phi = profile_eval(domain.profile, math.log(1.75))
    assert not contains(domain, (1.75, math.exp(phi) * 1.01))
    assert contains(domain, (1.75, math.exp(phi) * 0.99))


def test_contains_outside_annulus(p0):
    _, domain, _ = p0
    assert not contains(domain, (2.1, 0.0))
    assert contains(domain, (0.51, 0.0))
    assert not contains(domain, (0.49, 0.0))


def test_contains_axis_is_inside_everywhere(p0):
    _, domain, _ = p0
    for r in np.linspace(0.51, 1.99, 41):
        assert contains(domain, (r, 0.0))


def test_slice_radii_prime_model():
    model = annulus_model_domain(0.5, 2.0, 5)
    r_h, r_v = slice_radii(model, 1.0)
    assert r_h == pytest.approx(0.5, rel=1e-12)
    assert r_v == pytest.approx(1.0, rel=1e-12)


def test_slice_radii_at_breakpoints(p0):
    _, domain, cert = p0
    for rec in cert.levels:
        t_k = math.log(rec.a_k)
        _r_h, r_v = slice_radii(domain, rec.a_k)
        assert r_v == math.exp(profile_eval(domain.profile, t_k))


def test_slice_radii_bidisc():
    d = bidisc_domain()
    r_h, r_v = slice_radii(d, 0.5)
    assert r_h == pytest.approx(0.5, rel=1e-12)
    assert r_v == pytest.approx(1.0, rel=1e-12)


def test_slice_radii_rejects_outside():
    d = bidisc_domain()
    with pytest.raises(ValidationError):
        slice_radii(d, 1.5)


def test_boundary_distance_bidisc_center():
    d = bidisc_domain()
    val = boundary_distance_lower(d, (0.0, 0.0))
    assert val <= 1.0
    assert val >= 1.0 - 1e-6


def test_boundary_distance_below_brute_force(p0):
    _, domain, _ = p0
    d_cert = boundary_distance_lower(domain, (1.0, 0.0), resolution=2048)
    d_brute = domain.boundary_distance_brute((1.0, 0.0), 10 * 2048)
    assert 0.0 < d_cert <= d_brute


def test_boundary_distance_near_inner_edge():
    # approaching the inner circle of a flat annulus domain
    flat = ReinhardtDomain(RadialProfile((-0.5, 0.5), (0.0, 0.0)),
                           math.log(0.5), math.log(2.0))
    eps = 1e-3
    p = (math.exp(flat.t_min + eps), 0.0)
    val = boundary_distance_lower(flat, p)
    assert 0.0 < val < 2 * eps * math.exp(flat.t_min + eps)


def test_boundary_distance_refuses_degenerate():
    # razor-thin staircase region: certified distance collapses to zero
    prof = RadialProfile((-0.5, 0.0, 0.1, 0.5), (0.0, 0.0, -500.0, -2500.0))
    d = ReinhardtDomain(prof, -0.5, 0.5)
    with pytest.raises(CertificationError):
        boundary_distance_lower(d, (math.exp(0.3), 0.0), resolution=64)


def test_outer_radius_bidisc():
    d = bidisc_domain()
    assert outer_radius_upper(d, (0.0, 0.0)) == pytest.approx(math.sqrt(2.0), rel=1e-9)


def test_outer_radius_p0(p0):
    _, domain, _ = p0
    assert outer_radius_upper(domain, (1.0, 0.0)) == pytest.approx(math.sqrt(10.0), rel=1e-9)


def test_outer_radius_dominates_samples(p0):
    _, domain, _ = p0
    r = outer_radius_upper(domain, (1.0, 0.0))
    t = np.linspace(domain.t_min, domain.t_max, 20001)
    u = np.exp(t)
    h = np.exp(domain.profile.eval_many(t))
    # sample the surface at the extremal phases
    worst = np.max(np.hypot(u + 1.0, h))
    assert r >= worst - 1e-12


def test_is_pseudoconvex(p0):
    _, domain, _ = p0
    assert is_pseudoconvex(domain)
    assert is_pseudoconvex(domain, strict=True)


def test_is_pseudoconvex_convex_corner():
    prof = RadialProfile((-1.0, 0.0, 1.0), (0.0, 0.0, 1.0))
    d = ReinhardtDomain(prof, -2.0, 2.0)
    assert not is_pseudoconvex(d)


def test_is_pseudoconvex_single_segment():
    d = ReinhardtDomain(RadialProfile((-1.0, 1.0), (0.0, 0.0)), -2.0, 2.0)
    assert is_pseudoconvex(d)
    assert is_pseudoconvex(d, strict=True)


def test_logpoint_roundtrip():
    p = PointC2(0.5 + 0.0j, 0.25 + 0.0j)
    lp = LogPoint.from_point(p)
    assert lp.t == math.log(0.5)
    assert lp.lam == math.log(0.25)
    q = lp.to_point()
    assert abs(q.z) == pytest.approx(0.5, rel=1e-15)
    assert LogPoint.from_point(PointC2(1.0 + 0.0j, 0.0j)).lam == -math.inf


def test_serialization_roundtrip_bitexact(p0):
    _, domain, _ = p0
    doc = domain_to_doc(domain)
    doc2 = json.loads(json.dumps(doc))
    d2 = domain_from_doc(doc2)
    assert d2.profile == domain.profile
    assert d2.t_min == domain.t_min and d2.t_max == domain.t_max
    # integer-slope snapping reproduces the exact accumulation identities
    assert d2.profile.exact_values == domain.profile.exact_values
    assert domain_to_doc(d2) == doc


def test_serialization_rejects_bad_version(p0):
    _, domain, _ = p0
    doc = domain_to_doc(domain)
    doc["version"] = 99
    with pytest.raises(ValidationError):
        domain_from_doc(doc)


def test_profile_validation():
    with pytest.raises(ValidationError):
        RadialProfile((0.0, 0.0), (0.0, 0.0))  # not increasing
    with pytest.raises(ValidationError):
        RadialProfile((0.0,), (0.0,))  # too short
    with pytest.raises(ValidationError):
        RadialProfile((0.0, 1.0, 2.0), (0.0, 0.0, 0.0), pseudoconvex=True)
    with pytest.raises(ValidationError):
        RadialProfile((0.0, 1.0), (0.0, -1.0), symmetric=True)


def test_domain_validation():
    prof = RadialProfile((0.0, 1.0), (0.0, -1.0))
    with pytest.raises(ValidationError):
        ReinhardtDomain(prof, 0.5, 0.9)  # breakpoints outside range
    with pytest.raises(ValidationError):
        ReinhardtDomain(prof, 2.0, 1.0)


def test_inversion_invariance_of_membership(p0):
    # symmetric profile: (z, w) is a member iff (1/z, w) is
    _, domain, _ = p0
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 400:
        t = rng.uniform(domain.t_min + 0.02, domain.t_max - 0.02)
        lam = domain.profile.eval(t)
        if lam < -600.0:
            continue
        for offset, inside in ((-0.5, True), (0.5, False)):
            z = math.exp(t)
            w = math.exp(lam + offset)
            assert domain.contains((z, w)) == inside
            assert domain.contains((1.0 / z, w)) == inside
        checked += 1


def test_slice_discs_verify_against_contains(p0):
    # sampled points of the reported discs are members; inflating a disc by
    # 1e-9 relative exposes a sampled point outside
    _, domain, _ = p0
    for z0 in (1.0, 1.2, 0.8):
        r_h, r_v = slice_radii(domain, z0)
        angles = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        for th in angles:
            dz = (r_h * (1.0 - 1e-12)) * complex(math.cos(th), math.sin(th))
            assert contains(domain, (z0 + dz, 0.0))
            assert contains(domain, (z0, r_v * (1.0 - 1e-12) *
                                     complex(math.cos(th), math.sin(th))))
        inflated_h = any(
            not contains(domain, (z0 + r_h * (1.0 + 1e-9) *
                                  complex(math.cos(th), math.sin(th)), 0.0))
            for th in angles)
        assert inflated_h
        assert not contains(domain, (z0, r_v * (1.0 + 1e-9)))


def test_perturb_value_is_exact(p0):
    _, domain, _ = p0
    prof2 = perturb_value(domain.profile, 2, 1e-6)
    diff = prof2.exact_values[2] - domain.profile.exact_values[2]
    assert diff == Fraction(1e-6)
