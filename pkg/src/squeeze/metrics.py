"""Certified one-sided bounds on invariant metrics and the squeezing function.

Three mechanisms produce certified bounds at points of the ``w = 0`` axis:

* a Schwarz-lemma slice bound gives Carathéodory uppers from the radii of the
  largest horizontal and vertical discs through the basepoint;
* a shear normalization (affine in log coordinates) places a profile
  breakpoint at the origin; exact containment of the sheared domain in the
  model ``{|w| < 1, |w| < |z|^-m}`` yields the Kobayashi lower ``sqrt(m/2)``,
  where ``m`` is the slope drop at the breakpoint;
* the quotient of a Carathéodory upper by a Kobayashi lower bounds the
  squeezing function from above, and an inclusion argument (domain between
  two balls) bounds it from below.

Certified comparisons never trust raw float comparisons: values produced by
float arithmetic are compared under a relative guard band, while structural
checks (shear containment) run on exact dyadic rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .domain import (
    DEFAULT_GRID,
    PointC2,
    RadialProfile,
    ReinhardtDomain,
    _as_point,
)
from .errors import CertificationError, ValidationError

# Relative guard band for certified float comparisons: subtracted from lower
# bounds, added to upper bounds, so rounding can never flip a certificate.
GUARD_COMPARE = 1e-10


@dataclass(frozen=True)
class Direction:
    """A nonzero tangent vector of C^2."""

    xi_z: complex
    xi_w: complex

    def __post_init__(self):
        if abs(self.xi_z) == 0.0 and abs(self.xi_w) == 0.0:
            raise ValidationError("direction must be nonzero")

    def scaled(self, c: complex) -> "Direction":
        return Direction(c * self.xi_z, c * self.xi_w)


_QUANTITIES = ("kobayashi", "caratheodory", "squeezing")
_SIDES = ("upper", "lower")


@dataclass(frozen=True)
class Bound:
    """A one-sided inequality on K, C or S at a basepoint.

    ``certified`` distinguishes rigorous bounds (produced by the mechanisms in
    this module) from numerical estimates (the ``estimate`` module).
    ``provenance`` is a human-readable trace of the producing rule.
    """

    quantity: str
    side: str
    value: float
    basepoint: PointC2
    direction: Direction | None
    certified: bool
    provenance: str

    def __post_init__(self):
        if self.quantity not in _QUANTITIES:
            raise ValidationError(f"unknown quantity {self.quantity!r}")
        if self.side not in _SIDES:
            raise ValidationError(f"unknown side {self.side!r}")
        if not (self.value >= 0.0):
            raise ValidationError("bound values are nonnegative")
        if self.quantity == "squeezing":
            if self.direction is not None:
                raise ValidationError("squeezing bounds carry no direction")
            if self.value > 1.0:
                raise ValidationError("squeezing bounds must be clamped to [0, 1]")
        if self.certified and not self.provenance:
            raise ValidationError("certified bounds must cite a producing operation")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def bound_to_record(b: Bound) -> dict:
    """JSON record with values as decimal strings."""
    return {
        "quantity": b.quantity,
        "side": b.side,
        "value": _fmt(b.value),
        "basepoint": [_fmt(b.basepoint.z.real), _fmt(b.basepoint.z.imag),
                      _fmt(b.basepoint.w.real), _fmt(b.basepoint.w.imag)],
        "direction": None if b.direction is None else
            [_fmt(b.direction.xi_z.real), _fmt(b.direction.xi_z.imag),
             _fmt(b.direction.xi_w.real), _fmt(b.direction.xi_w.imag)],
        "certified": b.certified,
        "provenance": b.provenance,
    }


def certified_below(upper: float, target: float, guard: float = GUARD_COMPARE) -> bool:
    """True when ``upper < target`` still holds after inflating ``upper``."""
    return upper * (1.0 + guard) + 0.0 < target


def check_sandwich(bounds: list[Bound], context: str = "") -> None:
    """Assert lower <= upper for every certified squeezing pair at a basepoint."""
    lows = [b for b in bounds if b.quantity == "squeezing" and b.side == "lower" and b.certified]
    ups = [b for b in bounds if b.quantity == "squeezing" and b.side == "upper" and b.certified]
    for lo in lows:
        for up in ups:
            if lo.basepoint == up.basepoint and lo.value > up.value * (1.0 + GUARD_COMPARE):
                raise CertificationError(
                    f"sandwich violated{' in ' + context if context else ''}: "
                    f"certified lower {lo.value} > certified upper {up.value} "
                    f"at {lo.basepoint}"
                )


# --------------------------------------------------------------- slice bound
def caratheodory_upper_slices(domain: ReinhardtDomain, p, xi: Direction) -> Bound:
    """Certified Carathéodory upper bound from Schwarz on the two slice discs.

    Any map to the unit disc vanishing at ``p = (z0, 0)`` restricts to the
    horizontal disc of radius ``r_h`` and the vertical disc of radius ``r_v``,
    so ``|f'(p)(xi)| <= |xi_z|/r_h + |xi_w|/r_v``.
    """
    p = _as_point(p)
    if abs(p.w) != 0.0:
        raise ValidationError("slice bound requires a basepoint on the w = 0 axis")
    if not domain.contains(p):
        raise ValidationError("basepoint must lie in the domain")
    r_h, r_v = domain.slice_radii(p.z)
    if not (r_h > 0.0 and r_v > 0.0):
        raise ValidationError("degenerate slice radii")
    value = abs(xi.xi_z) / r_h + abs(xi.xi_w) / r_v
    return Bound(
        quantity="caratheodory",
        side="upper",
        value=value,
        basepoint=p,
        direction=xi,
        certified=True,
        provenance=f"schwarz slice discs: r_h={r_h!r}, r_v={r_v!r}",
    )


# ------------------------------------------------------------------ shearing
@dataclass(frozen=True)
class AffineLogMap:
    """The log-coordinate form of a shear biholomorphism.

    ``(t, lam) -> (t + t_shift, lam + lam_shift + shear * (t + t_shift))``.
    Parameters are exact rationals so applying the inverse recovers inputs
    bit-exactly.
    """

    t_shift: Fraction
    lam_shift: Fraction
    shear: Fraction

    def apply_exact(self, t: Fraction, lam: Fraction) -> tuple[Fraction, Fraction]:
        t2 = t + self.t_shift
        return t2, lam + self.lam_shift + self.shear * t2

    def invert_exact(self, t2: Fraction, lam2: Fraction) -> tuple[Fraction, Fraction]:
        return t2 - self.t_shift, lam2 - self.lam_shift - self.shear * t2

    def apply(self, t: float, lam: float) -> tuple[float, float]:
        t2, l2 = self.apply_exact(Fraction(t), Fraction(lam))
        return float(t2), float(l2)


def _adjacent_exact_slopes(profile: RadialProfile, k: int) -> tuple[Fraction, Fraction]:
    """(slope left, slope right) of breakpoint ``k``, extension-aware."""
    slopes = profile.exact_slopes()
    left = slopes[k - 1] if k > 0 else slopes[0]
    right = slopes[k] if k < len(slopes) else slopes[-1]
    return left, right


def shear_normalize(domain: ReinhardtDomain, k: int) -> tuple[ReinhardtDomain, AffineLogMap]:
    """Image domain under the shear that moves breakpoint ``k`` to ``(0, 0)``
    and flattens the segment on its left.

    In log coordinates the map is ``(t, lam) -> (t - t_k, lam - phi(t_k) +
    n_left (t - t_k))`` where ``-n_left`` is the slope left of ``t_k``.
    """
    profile = domain.profile
    n = len(profile.breakpoints)
    if not 0 <= k < n:
        raise ValidationError(f"breakpoint index {k} out of range (profile has {n})")
    t_k = profile.exact_breakpoints[k]
    v_k = profile.exact_values[k]
    s_left, _ = _adjacent_exact_slopes(profile, k)
    n_left = -s_left
    mp = AffineLogMap(t_shift=-t_k, lam_shift=-v_k, shear=n_left)
    eb = tuple(t - t_k for t in profile.exact_breakpoints)
    ev = tuple(
        v - v_k + n_left * (t - t_k)
        for t, v in zip(profile.exact_breakpoints, profile.exact_values)
    )
    image = RadialProfile(
        breakpoints=tuple(float(t) for t in eb),
        values=tuple(float(v) for v in ev),
        symmetric=False,
        pseudoconvex=profile.pseudoconvex,
        exact_breakpoints=eb,
        exact_values=ev,
    )
    t_min = float(Fraction(domain.t_min) - t_k) if domain.t_min != -math.inf else -math.inf
    t_max = float(Fraction(domain.t_max) - t_k)
    return ReinhardtDomain(image, t_min, t_max), mp


def _restrict_to_annulus(domain: ReinhardtDomain, lo: float, hi: float) -> ReinhardtDomain:
    """Sub-domain over ``lo < t < hi`` (profile trimmed, heights kept exact)."""
    if not (domain.t_min <= lo < hi <= domain.t_max):
        raise ValidationError("restriction range must lie within the annulus")
    prof = domain.profile
    lo_e, hi_e = Fraction(lo), Fraction(hi)
    eb = [lo_e]
    ev = [prof.eval_exact(lo_e)]
    for t, v in zip(prof.exact_breakpoints, prof.exact_values):
        if lo_e < t < hi_e:
            eb.append(t)
            ev.append(v)
    eb.append(hi_e)
    ev.append(prof.eval_exact(hi_e))
    trimmed = RadialProfile(
        breakpoints=tuple(float(t) for t in eb),
        values=tuple(float(v) for v in ev),
        exact_breakpoints=tuple(eb),
        exact_values=tuple(ev),
    )
    return ReinhardtDomain(trimmed, lo, hi)


# ----------------------------------------------------- Kobayashi lower bound
def kobayashi_lower_shear(domain: ReinhardtDomain, k: int,
                          m: int | None = None) -> Bound:
    """Certified ``K >= sqrt(m/2)`` at ``(1, 0)``, direction ``(1, 1)``, of the
    sheared domain, where ``m`` is the integer slope drop at breakpoint ``k``
    (or a caller-pinned model exponent, e.g. from a certificate being
    re-verified).

    The sheared profile must satisfy ``phi'(s) <= min(0, -m s)`` everywhere,
    i.e. the image lies in the model ``{|w| < 1, |w| < |z|^-m}``.  Both sides
    are piecewise linear and concave, so the inequality holds everywhere iff
    it holds at every breakpoint of both functions; the check runs on exact
    rationals (equality-riding segments are decided exactly), plus exact slope
    conditions for the two linear tails.
    """
    profile = domain.profile
    if not profile.is_concave():
        raise ValidationError("profile must be pseudoconvex (nonincreasing slopes)")
    if m is None:
        s_left, s_right = _adjacent_exact_slopes(profile, k)
        m = math.floor(s_left - s_right)
    if m < 1:
        raise ValidationError(
            f"slope drop at breakpoint {k} gives model exponent {m}; need m >= 1"
        )
    image, mp = shear_normalize(domain, k)
    prof = image.profile
    # node check: phi'(s_j) <= min(0, -m s_j), exact
    for j, (s, v) in enumerate(zip(prof.exact_breakpoints, prof.exact_values)):
        h = min(Fraction(0), -m * s)
        if v > h:
            raise CertificationError(
                f"model containment violated at breakpoint index {j} "
                f"(s = {float(s)!r}): phi'={float(v)!r} > {float(h)!r}"
            )
    # tail checks: left tail stays <= 0, right tail stays <= -m s
    img_slopes = prof.exact_slopes()
    if prof.exact_breakpoints[0] >= 0 or prof.exact_breakpoints[-1] <= 0:
        raise CertificationError("sheared breakpoints must straddle the origin")
    if img_slopes[0] < 0:
        raise CertificationError("left tail of sheared profile increases leftwards")
    if img_slopes[-1] > -m:
        raise CertificationError("right tail of sheared profile is shallower than the model")
    value = math.sqrt(m / 2.0)
    return Bound(
        quantity="kobayashi",
        side="lower",
        value=value,
        basepoint=PointC2(1.0 + 0.0j, 0.0 + 0.0j),
        direction=Direction(1.0 + 0.0j, 1.0 + 0.0j),
        certified=True,
        provenance=(
            f"shear at breakpoint {k} (shear slope {float(mp.shear)!r}); exact "
            f"containment in {{|w|<1, |w|<|z|^-{m}}}; coefficient bound "
            f"sqrt(m/2), m={m}"
        ),
    )


# ------------------------------------------------------- squeezing composites
def squeezing_upper_quotient(c_upper: Bound, k_lower: Bound) -> Bound:
    """S(p) <= C(p, xi) / K(p, xi): combine matching certified bounds."""
    if c_upper.quantity != "caratheodory" or c_upper.side != "upper":
        raise ValidationError("first argument must be a Caratheodory upper bound")
    if k_lower.quantity != "kobayashi" or k_lower.side != "lower":
        raise ValidationError("second argument must be a Kobayashi lower bound")
    if c_upper.basepoint != k_lower.basepoint:
        raise ValidationError("bounds must share the basepoint")
    if c_upper.direction != k_lower.direction:
        raise ValidationError("bounds must share the direction")
    if not k_lower.value > 0.0:
        raise ValidationError("Kobayashi lower bound must be positive")
    raw = c_upper.value / k_lower.value
    value = min(1.0, raw)
    clamp_note = " (clamped to 1)" if raw > 1.0 else ""
    return Bound(
        quantity="squeezing",
        side="upper",
        value=value,
        basepoint=c_upper.basepoint,
        direction=None,
        certified=c_upper.certified and k_lower.certified,
        provenance=(
            f"S*K<=C with C<={c_upper.value!r}, K>={k_lower.value!r}{clamp_note}; "
            f"[C] {c_upper.provenance} [K] {k_lower.provenance}"
        ),
    )


def squeezing_lower_inclusion(domain: ReinhardtDomain, p,
                              resolution: int = DEFAULT_GRID) -> Bound:
    """Certified squeezing lower bound dist(p, bD) / R.

    ``q -> (q - p)/R`` embeds the domain in the unit ball and the image
    contains the ball of radius ``dist(p, bD)/R``.
    """
    p = _as_point(p)
    d = domain.boundary_distance_lower(p, resolution)
    r = domain.outer_radius_upper(p)
    value = min(1.0, d / r)
    return Bound(
        quantity="squeezing",
        side="lower",
        value=value,
        basepoint=p,
        direction=None,
        certified=True,
        provenance=(
            f"inclusion bound: certified dist>= {d!r} (grid {resolution}, per-cell "
            f"moduli boxes), outer radius <= {r!r} (circumscribed box)"
        ),
    )


@dataclass(frozen=True)
class LevelModel:
    """Exact model data injected by the construction for one breakpoint level.

    ``a_ratio``/``b_ratio`` are the model annulus edges relative to the
    breakpoint; ``c_constant`` the exact slice constant; ``m`` the slope drop.
    """

    a_ratio: Fraction
    b_ratio: Fraction
    c_constant: Fraction
    m: int


def squeezing_upper_at_breakpoint(
    domain: ReinhardtDomain,
    k: int,
    model_lo_log: float | None = None,
    model_hi_log: float | None = None,
    exact_model: LevelModel | None = None,
) -> Bound:
    """Certified squeezing upper bound at the breakpoint ``t_k`` axis point.

    Composition: shear-normalize at ``t_k``; slice the restriction of the
    sheared domain to a model annulus around the peak for the Carathéodory
    upper at ``(1, 0)``, direction ``(1, 1)``; certify the Kobayashi lower by
    model containment; combine; report at ``(exp(t_k), 0)`` of the source
    domain, valid by biholomorphic invariance of the squeezing function.

    For symmetric profiles the computation canonicalizes to the mirror
    breakpoint ``|t_k|`` (the inversion ``z -> 1/z`` is an automorphism), so
    values at ``t_k`` and ``-t_k`` agree bit-exactly.  The model annulus
    defaults to the adjacent breakpoints; the construction passes the exact
    schedule edges instead.
    """
    profile = domain.profile
    n = len(profile.breakpoints)
    if not 0 <= k < n:
        raise ValidationError(f"breakpoint index {k} out of range")
    t_k = profile.breakpoints[k]
    mirrored = False
    if profile.symmetric and t_k < 0.0:
        k = n - 1 - k
        mirrored = True
    basepoint_t = profile.breakpoints[n - 1 - k] if mirrored else profile.breakpoints[k]

    image, _mp = shear_normalize(domain, k)
    if model_lo_log is None:
        if k == 0:
            raise ValidationError("no breakpoint left of the peak; pass model_lo_log")
        model_lo_log = image.profile.breakpoints[k - 1]
    if model_hi_log is None:
        if k + 1 >= n:
            model_hi_log = image.t_max
        else:
            model_hi_log = image.profile.breakpoints[k + 1]
    if not model_lo_log < 0.0 < model_hi_log:
        raise ValidationError("model annulus must contain the peak")

    restriction = _restrict_to_annulus(image, model_lo_log, model_hi_log)
    p_sheared = PointC2(1.0 + 0.0j, 0.0 + 0.0j)
    xi = Direction(1.0 + 0.0j, 1.0 + 0.0j)
    c_slice = caratheodory_upper_slices(restriction, p_sheared, xi)
    k_low = kobayashi_lower_shear(domain, k)

    if exact_model is not None:
        c_exact = float(exact_model.c_constant)
        if abs(c_slice.value - c_exact) > 1e-9 * c_exact:
            raise CertificationError(
                f"slice constant {c_slice.value!r} disagrees with exact model "
                f"constant {c_exact!r}"
            )
        m_img = int(math.floor(_adjacent_exact_slopes(profile, k)[0]
                               - _adjacent_exact_slopes(profile, k)[1]))
        if m_img != exact_model.m:
            raise CertificationError(
                f"slope drop {m_img} disagrees with exact model m={exact_model.m}"
            )
        c_used = replace(
            c_slice,
            value=c_exact,
            provenance=c_slice.provenance + "; exact rational slice constant substituted",
        )
    else:
        c_used = c_slice

    s_up = squeezing_upper_quotient(c_used, k_low)
    note = "; mirrored by inversion symmetry" if mirrored else ""
    return Bound(
        quantity="squeezing",
        side="upper",
        value=s_up.value,
        basepoint=PointC2(complex(math.exp(basepoint_t), 0.0), 0.0 + 0.0j),
        direction=None,
        certified=s_up.certified,
        provenance=(
            f"biholomorphic invariance under shear at breakpoint t={t_k!r}"
            f"{note}; " + s_up.provenance
        ),
    )
