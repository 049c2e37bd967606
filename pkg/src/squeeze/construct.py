"""Inductive construction of the staircase domain and its certificates.

Level by level, a slice constant ``C_k`` is computed from the ratios of
consecutive radii, the exponent ``n_k`` is the smallest integer making the
certified squeezing upper bound at the breakpoint beat the schedule target,
and the profile gains a mirrored pair of breakpoints.  All schedule
arithmetic runs on exact rationals: the ``C_k`` and ``n_k`` of a given
parameter set are exact integers/fractions, reproducible bit-for-bit.

The certificate records, per level, the certified squeezing upper bound at
``(a_k, 0)`` and ``(1/a_k, 0)`` (equal by inversion symmetry), a certified
squeezing lower bound at ``(1, 0)``, and the resulting maximum-principle
violation verdict: when some circle bound drops below the center bound by
more than the margin guard, no function satisfying the maximum principle on
analytic discs is compatible with the certified values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .domain import RadialProfile, ReinhardtDomain, PointC2
from .errors import CertificationError, ValidationError
from .metrics import (
    Bound,
    GUARD_COMPARE,
    LevelModel,
    bound_to_record,
    check_sandwich,
    kobayashi_lower_shear,
    shear_normalize,
    squeezing_lower_inclusion,
    squeezing_upper_at_breakpoint,
)

EXPONENT_LIMIT = 2**62


def _to_fraction(x) -> Fraction:
    """Exact coercion; floats go through their shortest decimal repr so that
    human inputs like 0.05 mean 1/20."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    raise ValidationError(f"cannot coerce {x!r} to an exact rational")


@dataclass(frozen=True)
class HarmonicSchedule:
    """Target S(p_k) < 1/k at level k; smallest admissible integer increment."""

    name: str = "harmonic"

    def target(self, k: int) -> Fraction:
        return Fraction(1, k)

    def increment(self, k: int, c_k: Fraction) -> int:
        return math.floor(2 * k * k * c_k * c_k) + 1


@dataclass(frozen=True)
class MarginSchedule:
    """Target S(p_k) < u at every level, for a fixed margin u in (0, 1)."""

    u: Fraction
    name: str = "margin"

    def __post_init__(self):
        object.__setattr__(self, "u", _to_fraction(self.u))
        if not 0 < self.u < 1:
            raise ValidationError("margin u must lie in (0, 1)")

    def target(self, k: int) -> Fraction:
        return self.u

    def increment(self, k: int, c_k: Fraction) -> int:
        return math.floor(2 * (c_k / self.u) ** 2) + 1


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters of the staircase construction.

    ``a_sequence`` may be an explicit sequence of radii, a callable
    ``k -> a_k``, or None for the default rule ``a_k = a - a 2^{-(k+1)}``
    (halving gaps; at ``a = 2`` this is ``2 - 2^{-k}``).  ``a_0`` is fixed
    to 1.  One radius beyond the last level is consumed as the outer model
    edge of the final level.
    """

    a: Fraction
    levels: int
    a_sequence: Sequence | Callable[[int], object] | None = None
    schedule: HarmonicSchedule | MarginSchedule = field(default_factory=HarmonicSchedule)
    margin_guard: float = 0.01
    distance_resolution: int = 2048
    exponent_limit: int = EXPONENT_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "a", _to_fraction(self.a))
        if not self.a > 1:
            raise ValidationError("annulus radius a must exceed 1")
        if self.levels < 0:
            raise ValidationError("levels must be nonnegative")
        if not 0.0 <= self.margin_guard < 1.0:
            raise ValidationError("margin_guard must lie in [0, 1)")

    def radius(self, k: int) -> Fraction:
        """Exact a_k; a_0 = 1, and k may run one past ``levels``."""
        if k == 0:
            return Fraction(1)
        if self.a_sequence is None:
            return self.a - self.a * Fraction(1, 2 ** (k + 1))
        if callable(self.a_sequence):
            return _to_fraction(self.a_sequence(k))
        seq = self.a_sequence
        if k <= len(seq):
            return _to_fraction(seq[k - 1])
        if k == len(seq) + 1:
            # model edge beyond an explicit list: midpoint toward the annulus edge
            return (_to_fraction(seq[-1]) + self.a) / 2
        raise ValidationError(f"a_sequence does not provide a_{k}")

    def radii(self) -> list[Fraction]:
        """[a_0, a_1, ..., a_{K+1}], validated strictly increasing in (1, a)."""
        ks = self.levels
        out = [self.radius(k) for k in range(ks + 2)]
        for k in range(1, ks + 2):
            if not out[k - 1] < out[k]:
                raise ValidationError(f"a_sequence not strictly increasing at k={k}")
            if not (1 < out[k] < self.a):
                raise ValidationError(f"a_{k} = {out[k]} outside (1, a)")
        return out


def level_constant(params: ConstructionParams, k: int) -> Fraction:
    """Exact slice constant C_k = 1/min(1 - a_{k-1}/a_k, a_{k+1}/a_k - 1) + 1."""
    if not 1 <= k <= params.levels:
        raise ValidationError(f"level {k} out of range 1..{params.levels}")
    radii = params.radii()
    gap = min(1 - radii[k - 1] / radii[k], radii[k + 1] / radii[k] - 1)
    if not gap > 0:
        raise ValidationError(f"degenerate model annulus at level {k}")
    return 1 / gap + 1


def choose_exponent(params: ConstructionParams, k: int, c_k: Fraction, n_prev: int) -> int:
    """Smallest admissible integer exponent for level ``k``."""
    if n_prev < 0:
        raise ValidationError("previous exponent must be nonnegative")
    n_k = n_prev + params.schedule.increment(k, c_k)
    if n_k > params.exponent_limit:
        raise ValidationError(
            f"exponent n_{k} = {n_k} exceeds the configured limit "
            f"{params.exponent_limit}; relax the schedule target"
        )
    return n_k


@dataclass(frozen=True)
class LevelRecord:
    """One certificate row."""

    k: int
    a_k: float
    a_k_exact: Fraction
    a_prev: float
    a_next: float
    c_k: Fraction
    m_k: int
    n_k: int
    s_upper: Bound
    s_upper_mirror: Bound
    target: Fraction
    target_met: bool

    def s_upper_value(self) -> float:
        return self.s_upper.value


@dataclass(frozen=True)
class ConstructionCertificate:
    """Per-level certified squeezing uppers, the center lower bound, and the
    maximum-principle-violation verdict with its margin."""

    levels: tuple[LevelRecord, ...]
    s_lower: Bound
    violation: bool
    violation_level: int | None
    margin: float | None
    margin_guard: float
    smoothed: bool = False

    def row(self, k: int) -> LevelRecord:
        for rec in self.levels:
            if rec.k == k:
                return rec
        raise KeyError(f"no level {k} in certificate")

    def to_doc(self) -> dict:
        return {
            "schema": "construction-certificate/1",
            "smoothed": self.smoothed,
            "levels": [
                {
                    "k": rec.k,
                    "a_k": format(rec.a_k, ".17g"),
                    "a_k_exact": str(rec.a_k_exact),
                    "C_k": str(rec.c_k),
                    "m_k": rec.m_k,
                    "n_k": rec.n_k,
                    "s_upper": format(rec.s_upper.value, ".17g"),
                    "target": str(rec.target),
                    "target_met": rec.target_met,
                    "bound": bound_to_record(rec.s_upper),
                    "bound_mirror": bound_to_record(rec.s_upper_mirror),
                }
                for rec in self.levels
            ],
            "s_lower": bound_to_record(self.s_lower),
            "violation": self.violation,
            "violation_level": self.violation_level,
            "margin": None if self.margin is None else format(self.margin, ".17g"),
            "margin_guard": format(self.margin_guard, ".17g"),
        }

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["k", "a_k", "C_k", "m_k", "n_k", "s_upper_k", "target"]]
        for rec in self.levels:
            rows.append([
                str(rec.k),
                format(rec.a_k, ".17g"),
                str(rec.c_k),
                str(rec.m_k),
                str(rec.n_k),
                format(rec.s_upper.value, ".17g"),
                str(rec.target),
            ])
        return rows


def assemble_certificate(levels: tuple[LevelRecord, ...], s_lower: Bound,
                         margin_guard: float, smoothed: bool = False) -> ConstructionCertificate:
    """Violation verdict: smallest level whose circle bound is certifiably
    below the center bound minus the margin guard."""
    violation_level = None
    for rec in levels:
        lhs = max(rec.s_upper.value, rec.s_upper_mirror.value)
        if lhs * (1.0 + GUARD_COMPARE) < s_lower.value * (1.0 - GUARD_COMPARE) - margin_guard:
            violation_level = rec.k
            break
    if violation_level is not None:
        rec = next(r for r in levels if r.k == violation_level)
        margin = s_lower.value - max(rec.s_upper.value, rec.s_upper_mirror.value)
    elif levels:
        margin = s_lower.value - min(
            max(r.s_upper.value, r.s_upper_mirror.value) for r in levels
        )
    else:
        margin = None
    return ConstructionCertificate(
        levels=levels,
        s_lower=s_lower,
        violation=violation_level is not None,
        violation_level=violation_level,
        margin=margin,
        margin_guard=margin_guard,
        smoothed=smoothed,
    )


def _model_edges(profile: RadialProfile, idx: int, k: int, ks: int,
                 a_lo: Fraction, a_hi: Fraction) -> tuple[float, float]:
    """Float representatives of the level-k model annulus edges in sheared
    coordinates.

    Where the edge coincides with a profile breakpoint the exact breakpoint
    difference is used (a log-of-ratio float can land a hair past the
    breakpoint, outside the segment the model relies on); the remaining
    edges (a_0 = 1 on the left of level 1, the schedule continuation on the
    right of the last level) fall strictly inside a segment, where ulp-level
    placement cannot matter.
    """
    t_k = profile.exact_breakpoints[idx]
    if k >= 2:
        lo = float(profile.exact_breakpoints[idx - 1] - t_k)
    else:
        lo = math.log(float(a_lo))
    if k <= ks - 1:
        hi = float(profile.exact_breakpoints[idx + 1] - t_k)
    else:
        hi = math.log(float(a_hi))
    return lo, hi


def _staircase_profile(params: ConstructionParams, exponents: list[int]) -> RadialProfile:
    """Symmetric staircase profile with exact dyadic heights.

    Breakpoints are ``-t_max, -t_K, ..., -t_1, t_1, ..., t_K, t_max`` with
    heights 0 on the flat region and exact accumulation
    ``phi(t_{k+1}) = phi(t_k) - n_k (t_{k+1} - t_k)`` outward; the edge nodes
    carry the last exponent's slope out to the annulus boundary.
    """
    a_float = float(params.a)
    t_max = math.log(a_float)
    radii = params.radii()
    ks = params.levels
    if ks == 0:
        return RadialProfile(
            breakpoints=(-t_max, t_max),
            values=(0.0, 0.0),
            symmetric=True,
            pseudoconvex=True,
        )
    ts = [math.log(float(radii[k])) for k in range(1, ks + 1)]
    te = [Fraction(t) for t in ts]
    te_max = Fraction(t_max)
    ve = [Fraction(0)]
    for j in range(ks - 1):
        ve.append(ve[j] - exponents[j] * (te[j + 1] - te[j]))
    v_edge = ve[-1] - exponents[ks - 1] * (te_max - te[-1])

    eb = [-te_max] + [-t for t in reversed(te)] + te + [te_max]
    ev = [v_edge] + list(reversed(ve)) + ve + [v_edge]
    return RadialProfile(
        breakpoints=tuple(float(t) for t in eb),
        values=tuple(float(v) for v in ev),
        symmetric=True,
        pseudoconvex=True,
        exact_breakpoints=tuple(eb),
        exact_values=tuple(ev),
    )


def build(params: ConstructionParams) -> tuple[ReinhardtDomain, ConstructionCertificate]:
    """Run the inductive construction and certify every level.

    Deterministic: identical parameters produce bit-identical domains and
    certificates.
    """
    radii = params.radii()
    ks = params.levels

    constants: list[Fraction] = []
    exponents: list[int] = []
    n_prev = 0
    for k in range(1, ks + 1):
        c_k = level_constant(params, k)
        n_k = choose_exponent(params, k, c_k, n_prev)
        constants.append(c_k)
        exponents.append(n_k)
        n_prev = n_k

    profile = _staircase_profile(params, exponents)
    t_max = math.log(float(params.a))
    domain = ReinhardtDomain(profile, -t_max, t_max)

    records: list[LevelRecord] = []
    n_bp = len(profile.breakpoints)
    for k in range(1, ks + 1):
        # positive-side breakpoint t_k sits at index (edge node + K mirrors) + k - 1
        idx = 1 + ks + (k - 1)
        c_k = constants[k - 1]
        m_k = exponents[k - 1] - (exponents[k - 2] if k >= 2 else 0)
        a_lo = radii[k - 1] / radii[k]
        a_hi = radii[k + 1] / radii[k]
        lo_log, hi_log = _model_edges(profile, idx, k, ks, a_lo, a_hi)
        model = LevelModel(a_ratio=a_lo, b_ratio=a_hi, c_constant=c_k, m=m_k)
        s_up = squeezing_upper_at_breakpoint(
            domain,
            idx,
            model_lo_log=lo_log,
            model_hi_log=hi_log,
            exact_model=model,
        )
        mirror_idx = n_bp - 1 - idx
        s_up_mirror = squeezing_upper_at_breakpoint(
            domain,
            mirror_idx,
            model_lo_log=lo_log,
            model_hi_log=hi_log,
            exact_model=model,
        )
        if s_up_mirror.value != s_up.value:
            raise CertificationError(
                f"inversion symmetry broken at level {k}: "
                f"{s_up.value!r} != {s_up_mirror.value!r}"
            )
        target = params.schedule.target(k)
        met = s_up.value * (1.0 + GUARD_COMPARE) < float(target)
        if not met:
            raise CertificationError(
                f"level {k}: certified upper {s_up.value!r} misses target {target} "
                f"(n_{k} = {exponents[k - 1]})"
            )
        records.append(LevelRecord(
            k=k,
            a_k=float(radii[k]),
            a_k_exact=radii[k],
            a_prev=float(radii[k - 1]),
            a_next=float(radii[k + 1]),
            c_k=c_k,
            m_k=m_k,
            n_k=exponents[k - 1],
            s_upper=s_up,
            s_upper_mirror=s_up_mirror,
            target=target,
            target_met=met,
        ))

    p_center = PointC2(1.0 + 0.0j, 0.0 + 0.0j)
    s_lower = squeezing_lower_inclusion(domain, p_center, params.distance_resolution)
    cert = assemble_certificate(tuple(records), s_lower, params.margin_guard)
    bounds = [rec.s_upper for rec in records] + [rec.s_upper_mirror for rec in records]
    check_sandwich(bounds + [s_lower], context="construction certificate")
    return domain, cert


def verify_construction(domain: ReinhardtDomain, cert: ConstructionCertificate) -> None:
    """Re-run every exact structural check backing a certificate.

    Raises CertificationError on the first failure.  Checks: exact mirror
    symmetry of breakpoints and heights, strict concavity, and for each
    level the shear containment against the certificate's pinned exponent
    plus the model-annulus inclusion.  A 1e-6 perturbation of any single
    height fails at least one of these.
    """
    prof = domain.profile
    n = len(prof.breakpoints)
    for i in range(n):
        j = n - 1 - i
        if (prof.exact_breakpoints[i] != -prof.exact_breakpoints[j]
                or prof.exact_values[i] != prof.exact_values[j]):
            raise CertificationError(
                f"inversion symmetry broken at breakpoint index {i}"
            )
    if not prof.is_concave(strict=True):
        raise CertificationError("profile is not strictly concave")
    ks = len(cert.levels)
    for rec in cert.levels:
        t_k = math.log(rec.a_k)
        try:
            idx = prof.breakpoints.index(t_k)
        except ValueError:
            raise CertificationError(f"level {rec.k}: breakpoint t={t_k!r} missing")
        lo, hi = _model_edges(prof, idx, rec.k, ks,
                              Fraction(rec.a_prev) / Fraction(rec.a_k),
                              Fraction(rec.a_next) / Fraction(rec.a_k))
        for anchor in (idx, n - 1 - idx):
            kobayashi_lower_shear(domain, anchor, m=rec.m_k)
        if not verify_model_annulus_inclusion(domain, idx, model_lo_log=lo,
                                             model_hi_log=hi, m=rec.m_k):
            raise CertificationError(
                f"level {rec.k}: model annulus escapes the sheared domain"
            )


def verify_model_annulus_inclusion(domain: ReinhardtDomain, k: int,
                                  model_lo_log: float | None = None,
                                  model_hi_log: float | None = None,
                                  m: int | None = None,
                                  raise_on_failure: bool = False) -> bool:
    """Check (exactly, at breakpoints) that the flat-then-monomial model annulus
    sits inside the sheared domain.

    The model profile is ``min(0, -m s)`` restricted to ``(lo, hi)``; the
    sheared profile must dominate it there.  Both are piecewise linear, so
    the comparison at the union of their breakpoints is equivalent to the
    comparison everywhere on the range.
    """
    profile = domain.profile
    image, _ = shear_normalize(domain, k)
    if model_lo_log is None:
        model_lo_log = image.profile.breakpoints[k - 1] if k > 0 else image.t_min
    if model_hi_log is None:
        model_hi_log = (image.profile.breakpoints[k + 1]
                        if k + 1 < len(profile.breakpoints) else image.t_max)
    if m is None:
        from .metrics import _adjacent_exact_slopes
        s_l, s_r = _adjacent_exact_slopes(profile, k)
        m = math.floor(s_l - s_r)
    lo_e, hi_e = Fraction(model_lo_log), Fraction(model_hi_log)
    if not (Fraction(image.t_min) <= lo_e < 0 < hi_e <= Fraction(image.t_max)):
        if raise_on_failure:
            raise CertificationError("model annulus not inside the sheared range")
        return False
    check_pts = [lo_e, Fraction(0), hi_e]
    check_pts += [s for s in image.profile.exact_breakpoints if lo_e < s < hi_e]
    for s in check_pts:
        model_val = min(Fraction(0), -m * s)
        if image.profile.eval_exact(s) < model_val:
            if raise_on_failure:
                raise CertificationError(
                    f"model escapes the sheared domain at s = {float(s)!r}"
                )
            return False
    return True
