import math
from fractions import Fraction

import pytest

from squeeze import (
    CertificationError,
    Direction,
    PointC2,
    RadialProfile,
    ReinhardtDomain,
    ValidationError,
    caratheodory_upper_slices,
    check_sandwich,
    kobayashi_lower_shear,
    annulus_model_domain,
    shear_normalize,
    squeezing_lower_inclusion,
    squeezing_upper_at_breakpoint,
    squeezing_upper_quotient,
    bidisc_domain,
)
from squeeze.domain import perturb_value
from squeeze.metrics import Bound

P = PointC2(1.0 + 0.0j, 0.0 + 0.0j)
XI = Direction(1.0 + 0.0j, 1.0 + 0.0j)


class TestSliceBound:
    def test_flat_monomial_model_half_two(self):
        model = annulus_model_domain(0.5, 2.0, 7)
        b = caratheodory_upper_slices(model, P, XI)
        assert b.value == pytest.approx(3.0, rel=1e-12)
        assert b.certified

    def test_flat_monomial_model_schedule_ratios(self):
        # min(1 - 2/3, 7/6 - 1) = 1/6, constant 7
        model = annulus_model_domain(2.0 / 3.0, 7.0 / 6.0, 99)
        b = caratheodory_upper_slices(model, P, XI)
        assert b.value == pytest.approx(7.0, rel=1e-12)

    def test_vertical_direction_only(self):
        model = annulus_model_domain(0.5, 2.0, 3)
        b = caratheodory_upper_slices(model, P, Direction(0.0j, 1.0 + 0.0j))
        assert b.value == pytest.approx(1.0, rel=1e-12)

    def test_scaling_linearity(self):
        model = annulus_model_domain(0.5, 2.0, 3)
        b1 = caratheodory_upper_slices(model, P, XI)
        b2 = caratheodory_upper_slices(model, P, XI.scaled(2.5j))
        assert b2.value == pytest.approx(2.5 * b1.value, rel=1e-12)

    def test_rejects_off_axis(self):
        model = annulus_model_domain(0.5, 2.0, 3)
        with pytest.raises(ValidationError):
            caratheodory_upper_slices(model, PointC2(1.0 + 0.0j, 0.1 + 0.0j), XI)


class TestShear:
    def test_breakpoint_to_origin(self, p0):
        _, domain, _ = p0
        for k in range(len(domain.profile.breakpoints)):
            image, _ = shear_normalize(domain, k)
            assert 0.0 in image.profile.breakpoints
            idx = image.profile.breakpoints.index(0.0)
            assert image.profile.values[idx] == 0.0

    def test_affine_formula_level2(self, p0):
        # (t_3, phi(t_3)) maps to (t_3 - t_2, -m_2 (t_3 - t_2))
        _, domain, cert = p0
        t2 = math.log(cert.row(2).a_k)
        t3 = math.log(cert.row(3).a_k)
        k2 = domain.profile.breakpoints.index(t2)
        image, _ = shear_normalize(domain, k2)
        k3 = domain.profile.breakpoints.index(t3)
        m2 = cert.row(2).m_k
        s = image.profile.exact_breakpoints[k3]
        assert image.profile.exact_values[k3] == -m2 * s

    def test_flat_point_under_first_shear(self, p0):
        # the shear at t_1 is a pure translation (left slope 0)
        _, domain, cert = p0
        t1 = math.log(cert.row(1).a_k)
        k1 = domain.profile.breakpoints.index(t1)
        _, mp = shear_normalize(domain, k1)
        t_img, lam_img = mp.apply(0.0, 0.0)
        assert t_img == -t1
        assert lam_img == 0.0

    def test_inverse_recovers_bitexact(self, p0):
        _, domain, _ = p0
        prof = domain.profile
        for k in (2, 5):
            image, mp = shear_normalize(domain, k)
            for tb, vb, ti, vi in zip(prof.exact_breakpoints, prof.exact_values,
                                      image.profile.exact_breakpoints,
                                      image.profile.exact_values):
                assert mp.invert_exact(ti, vi) == (tb, vb)
                assert mp.apply_exact(tb, vb) == (ti, vi)

    def test_image_evaluation_matches_map(self, p0):
        _, domain, _ = p0
        image, mp = shear_normalize(domain, 3)
        for tb, vb in zip(domain.profile.exact_breakpoints,
                          domain.profile.exact_values):
            ti, vi = mp.apply_exact(tb, vb)
            assert image.profile.eval_exact(ti) == vi


class TestKobayashiLower:
    def test_small_drops(self):
        for m, want in ((2, 1.0), (8, 2.0)):
            model_prof = RadialProfile(
                (-1.0, 0.0, 1.0), (0.0, 0.0, -float(m)),
                exact_breakpoints=(Fraction(-1), Fraction(0), Fraction(1)),
                exact_values=(Fraction(0), Fraction(0), Fraction(-m)),
            )
            d = ReinhardtDomain(model_prof, -1.0, 1.0)
            b = kobayashi_lower_shear(d, 1)
            assert b.value == want

    def test_schedule_level2(self, p0):
        _, domain, cert = p0
        t2 = math.log(cert.row(2).a_k)
        k2 = domain.profile.breakpoints.index(t2)
        b = kobayashi_lower_shear(domain, k2)
        assert b.value == math.sqrt(1801.0 / 2.0)
        assert b.value == pytest.approx(30.008, abs=1e-3)

    def test_no_drop_is_rejected(self, p0):
        _, domain, _ = p0
        with pytest.raises(ValidationError):
            kobayashi_lower_shear(domain, 0)  # edge node, no slope drop

    def test_perturbed_profile_caught(self, p0):
        # with the level exponent pinned, raising the right-neighbour height
        # breaks the equality-riding segment of the sheared profile
        _, domain, cert = p0
        n = len(domain.profile.breakpoints)
        mid = n // 2  # first positive breakpoint t_1
        bad = ReinhardtDomain(perturb_value(domain.profile, mid + 1, 1e-6),
                              domain.t_min, domain.t_max)
        with pytest.raises(CertificationError) as err:
            kobayashi_lower_shear(bad, mid, m=cert.row(1).m_k)
        assert "breakpoint" in str(err.value)


class TestQuotientBound:
    def test_level1_composition(self):
        c = Bound("caratheodory", "upper", 7.0, P, XI, True, "slices")
        k = Bound("kobayashi", "lower", math.sqrt(99.0 / 2.0), P, XI, True, "shear")
        s = squeezing_upper_quotient(c, k)
        assert s.value == pytest.approx(7.0 * math.sqrt(2.0 / 99.0), rel=1e-12)
        assert s.value == pytest.approx(0.9949, abs=1e-4)
        assert s.direction is None

    def test_level2_composition(self):
        c = Bound("caratheodory", "upper", 15.0, P, XI, True, "slices")
        k = Bound("kobayashi", "lower", math.sqrt(1801.0 / 2.0), P, XI, True, "shear")
        s = squeezing_upper_quotient(c, k)
        assert s.value == pytest.approx(15.0 * math.sqrt(2.0 / 1801.0), rel=1e-12)
        assert s.value == pytest.approx(0.49986, abs=1e-5)

    def test_clamp(self):
        c = Bound("caratheodory", "upper", 1.0, P, XI, True, "slices")
        k = Bound("kobayashi", "lower", 1.0, P, XI, True, "shear")
        assert squeezing_upper_quotient(c, k).value == 1.0

    def test_mismatch_rejected(self):
        c = Bound("caratheodory", "upper", 7.0, P, XI, True, "slices")
        other = PointC2(1.5 + 0.0j, 0.0j)
        k = Bound("kobayashi", "lower", 2.0, other, XI, True, "shear")
        with pytest.raises(ValidationError):
            squeezing_upper_quotient(c, k)
        k0 = Bound("kobayashi", "lower", 0.0, P, XI, True, "shear")
        with pytest.raises(ValidationError):
            squeezing_upper_quotient(c, k0)


class TestSqueezingLower:
    def test_bidisc_center(self):
        d = bidisc_domain()
        b = squeezing_lower_inclusion(d, PointC2(0.0j, 0.0j))
        # dist = 1 and outer radius sqrt(2) by brute-force box geometry
        assert b.value <= 1.0 / math.sqrt(2.0) + 1e-9
        assert b.value >= 1.0 / math.sqrt(2.0) - 1e-4
        assert b.certified

    def test_p0_center(self, p0):
        _, domain, _ = p0
        b = squeezing_lower_inclusion(domain, P)
        assert b.value >= 0.08
        assert b.value <= 1.0


class TestSqueezingUpperAtBreakpoint:
    def test_p0_values(self, p0):
        _, domain, cert = p0
        t1 = math.log(cert.row(1).a_k)
        k1 = domain.profile.breakpoints.index(t1)
        b = squeezing_upper_at_breakpoint(domain, k1)
        # standalone call uses adjacent breakpoints for the model annulus;
        # t_0 = -t_1 widens only the flat side, so the constant is unchanged
        assert b.value == pytest.approx(7.0 * math.sqrt(2.0 / 99.0), rel=1e-9)

    def test_symmetric_mirror_bitexact(self, p0):
        _, domain, _ = p0
        n = len(domain.profile.breakpoints)
        for k in range(1, n - 1):
            b_pos = squeezing_upper_at_breakpoint(domain, k)
            b_neg = squeezing_upper_at_breakpoint(domain, n - 1 - k)
            assert b_pos.value == b_neg.value


def test_sandwich_checker():
    lo = Bound("squeezing", "lower", 0.5, P, None, True, "inclusion")
    hi = Bound("squeezing", "upper", 0.4, P, None, True, "quotient")
    with pytest.raises(CertificationError):
        check_sandwich([lo, hi])
    ok_hi = Bound("squeezing", "upper", 0.6, P, None, True, "quotient")
    check_sandwich([lo, ok_hi])


def test_slice_radii_monotone_under_growth(p0):
    # growing the domain grows both slice radii
    _, domain, _ = p0
    bigger = ReinhardtDomain(domain.profile, domain.t_min - 0.1, domain.t_max + 0.1)
    r_h1, r_v1 = domain.slice_radii(1.0)
    r_h2, r_v2 = bigger.slice_radii(1.0)
    assert r_h2 >= r_h1 and r_v2 >= r_v1
