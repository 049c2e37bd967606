import math
from fractions import Fraction

import pytest

from squeeze import (
    CertificationError,
    ConstructionParams,
    MarginSchedule,
    ReinhardtDomain,
    ValidationError,
    build,
    choose_exponent,
    level_constant,
    verify_model_annulus_inclusion,
)
from squeeze.construct import verify_construction
from squeeze.domain import perturb_value


class TestLevelConstant:
    def test_p0_level1(self, p0):
        params, _, _ = p0
        assert level_constant(params, 1) == Fraction(7)

    def test_p0_level2(self, p0):
        params, _, _ = p0
        assert level_constant(params, 2) == Fraction(15)

    def test_symmetric_toy(self):
        # ratios 1/2 both sides: min(1/2, 1) = 1/2, constant 3
        params = ConstructionParams(a="9", levels=1, a_sequence=["2", "4"])
        assert level_constant(params, 1) == Fraction(3)

    def test_degenerate_rejected(self):
        params = ConstructionParams(a="2", levels=2,
                                    a_sequence=["1.5", "1.5", "1.6"])
        with pytest.raises(ValidationError):
            params.radii()


class TestChooseExponent:
    def test_p0_exponents(self, p0):
        params, _, _ = p0
        assert choose_exponent(params, 1, Fraction(7), 0) == 99
        assert choose_exponent(params, 2, Fraction(15), 99) == 1900

    def test_margin_schedule(self):
        params = ConstructionParams(a="2", levels=2,
                                    schedule=MarginSchedule("0.1"))
        inc = choose_exponent(params, 2, Fraction(15), 0)
        assert inc == 45001

    def test_exponent_limit(self):
        params = ConstructionParams(a="2", levels=1,
                                    schedule=MarginSchedule("1e-9"),
                                    exponent_limit=2**40)
        with pytest.raises(ValidationError):
            choose_exponent(params, 1, Fraction(7), 0)


class TestBuild:
    def test_p0_certificate_rows(self, p0):
        _, _, cert = p0
        expect = {1: (7, 99, 99), 2: (15, 1801, 1900), 3: (31, 17299, 19199)}
        for rec in cert.levels:
            c, m, nn = expect[rec.k]
            assert rec.c_k == c and rec.m_k == m and rec.n_k == nn
            assert rec.s_upper.value == pytest.approx(
                float(c) * math.sqrt(2.0 / m), rel=1e-13)
            assert rec.target_met

    def test_margin_schedule_targets(self, headline):
        _, _, cert = headline
        for rec in cert.levels:
            assert rec.s_upper.value < 0.05

    def test_mirror_bitexact(self, p0):
        _, _, cert = p0
        for rec in cert.levels:
            assert rec.s_upper.value == rec.s_upper_mirror.value
            assert abs(rec.s_upper_mirror.basepoint.z) == pytest.approx(
                1.0 / rec.a_k, rel=1e-15)

    def test_deterministic(self, p0):
        params, _, cert = p0
        _, cert2 = build(params)
        assert cert2.to_doc() == cert.to_doc()

    def test_zero_levels(self):
        domain, cert = build(ConstructionParams(a="2", levels=0))
        assert cert.levels == ()
        assert not cert.violation
        assert cert.s_lower.value > 0.0
        assert domain.contains((1.0, 0.99))

    def test_profile_shape(self, p0):
        _, domain, cert = p0
        ks = len(cert.levels)
        bps = domain.profile.breakpoints
        assert len(bps) == 2 * ks + 2
        assert bps[0] == domain.t_min and bps[-1] == domain.t_max
        assert domain.profile.symmetric and domain.profile.pseudoconvex

    def test_monotone_exponents(self, p0):
        _, _, cert = p0
        ns = [rec.n_k for rec in cert.levels]
        assert ns == sorted(ns)
        for rec in cert.levels:
            # harmonic schedule: increment beats 2 k^2 C_k^2
            assert rec.m_k >= 2 * rec.k**2 * rec.c_k**2

    def test_violation_headline(self, headline):
        _, _, cert = headline
        assert cert.violation
        assert cert.violation_level == 1
        assert cert.margin is not None and cert.margin >= 0.01

    def test_no_violation_p0(self, p0):
        _, _, cert = p0
        assert not cert.violation


class TestPrimeInclusion:
    def test_p0_levels_contained(self, p0):
        _, domain, cert = p0
        for rec in cert.levels:
            idx = domain.profile.breakpoints.index(math.log(rec.a_k))
            assert verify_model_annulus_inclusion(domain, idx, m=rec.m_k)

    def test_perturbed_fails(self, p0):
        _, domain, cert = p0
        idx = domain.profile.breakpoints.index(math.log(cert.row(1).a_k))
        bad = ReinhardtDomain(perturb_value(domain.profile, idx + 1, -1e-6),
                              domain.t_min, domain.t_max)
        # lowering the right-neighbour height pulls the sheared profile
        # below the model's monomial line
        assert not verify_model_annulus_inclusion(bad, idx, m=cert.row(1).m_k)


class TestVerifyConstruction:
    def test_passes_clean(self, p0):
        _, domain, cert = p0
        verify_construction(domain, cert)

    def test_catches_every_height(self, headline):
        _, domain, cert = headline
        n = len(domain.profile.breakpoints)
        for idx in range(n):
            bad = ReinhardtDomain(perturb_value(domain.profile, idx, 1e-6),
                                  domain.t_min, domain.t_max)
            with pytest.raises(CertificationError):
                verify_construction(bad, cert)


def test_default_sequence_matches_acceptance_schedule():
    params = ConstructionParams(a="2", levels=3)
    assert params.radii() == [Fraction(1), Fraction(3, 2), Fraction(7, 4),
                              Fraction(15, 8), Fraction(31, 16)]


def test_params_validation():
    with pytest.raises(ValidationError):
        ConstructionParams(a="1", levels=1)
    with pytest.raises(ValidationError):
        ConstructionParams(a="2", levels=-1)
    with pytest.raises(ValidationError):
        MarginSchedule("1.5")
