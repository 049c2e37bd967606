"""Inner smoothing of a staircase domain and direct certification on it.

The smooth profile is ``phi_tilde = (phi * zeta_h) - eps t^2`` where
``zeta_h`` is a normalized compactly supported bump of width ``h``.  The
kernel is the polynomial bump ``c (1 - x^2)^4`` on ``[-1, 1]``, whose
convolution with a piecewise-linear concave function has a closed form: the
profile is an affine function minus a sum of kink terms ``m_j relu(t - t_j)``,
and ``relu * zeta_h`` is an explicit degree-10 piecewise polynomial.  The
convolution is therefore evaluated exactly (no quadrature), is C^5 in ``t``,
and the correction to ``phi`` is local to each kink::

    phi_tilde(t) = phi(t) - sum_j m_j * K_h(t - t_j) - eps t^2,

with ``K_h`` supported on ``|x| < h`` and ``K_h >= 0``, so ``phi_tilde <=
phi`` holds structurally (Jensen), and ``phi_tilde'' <= -2 eps`` everywhere.

The domain is closed off by exponential end caps inside a single defining
function::

    rho(z, w) = |w|^2 exp(-2 phi_tilde(log|z|)) + exp(kappa (log|z| - t_+))
                + exp(-kappa (log|z| - t_-)) - 1,

so ``{rho < 0}`` is an open, smoothly bounded, circular subdomain of the
staircase domain.  On the boundary face the Levi form restricted to the
complex tangent has the closed form

    L = F (-2 phi_tilde'' F^2 + g'' F + g'^2) / ((r A)^2 + 4 z^2 F^2),

``F = 1 - g`` the cap slack, ``r`` the face radius, ``A = -2 phi_tilde' F +
g'``; every factor is moderate even where ``exp(-2 phi_tilde)`` itself would
overflow, and positivity is manifest (``-phi_tilde'' >= 2 eps``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import GUARD_REL, PointC2, RadialProfile, ReinhardtDomain, _as_point
from .errors import CertificationError, NumericalError, ValidationError
from .metrics import Bound, check_sandwich
from .construct import (
    ConstructionCertificate,
    LevelRecord,
    assemble_certificate,
    kobayashi_lower_shear,
)

# bump kernel c (1 - x^2)^4 on [-1, 1]
BUMP_NORM = 315.0 / 256.0
# integral of |x| * bump(x): the corner sag of a unit kink at width h is
# (m/2) * h * BUMP_ABS_MOMENT
BUMP_ABS_MOMENT = BUMP_NORM / 5.0


def bump(x):
    x = np.asarray(x)
    inside = np.abs(x) < 1.0
    y = np.where(inside, 1.0 - x * x, 0.0)
    return BUMP_NORM * y**4


def bump_cdf(x):
    """Z(x) = integral of the bump from -1 to x."""
    x = np.asarray(x)
    xc = np.clip(x, -1.0, 1.0)
    p = xc * (1.0 + xc * xc * (-4.0 / 3.0 + xc * xc * (6.0 / 5.0 + xc * xc * (-4.0 / 7.0 + xc * xc / 9.0))))
    return 0.5 + BUMP_NORM * p


def bump_first_moment(x):
    """M(x) = integral of s*bump(s) from -1 to x (vanishes at both ends)."""
    x = np.asarray(x)
    xc = np.clip(x, -1.0, 1.0)
    y = 1.0 - xc * xc
    return -(BUMP_NORM / 10.0) * y**5


def kink_correction(x, h):
    """K_h(x) = (relu * zeta_h)(x) - relu(x): nonnegative, supported on |x| < h."""
    x = np.asarray(x, dtype=float)
    s = x / h
    val = x * bump_cdf(s) - h * bump_first_moment(s) - np.maximum(x, 0.0)
    return np.where(np.abs(x) < h, val, 0.0)


def kink_correction_d1(x, h):
    """d/dx K_h(x) = Z(x/h) - [x > 0]."""
    x = np.asarray(x, dtype=float)
    val = bump_cdf(x / h) - (x > 0.0)
    return np.where(np.abs(x) < h, val, 0.0)


class MollifiedProfile:
    """Closed-form mollification of a piecewise-linear concave profile.

    Each kink carries its own kernel width; this is what lets the staircase
    smoothing serve two masters at once: wide kernels where the tangential
    Levi form needs curvature coverage past a corner, narrow kernels where a
    large slope drop must not sag the profile.
    """

    def __init__(self, base: RadialProfile, widths, eps: float):
        if eps < 0.0:
            raise ValidationError("concavity boost eps must be nonnegative")
        self.base = base
        self.eps = float(eps)
        slopes = base.slopes()
        kinks = []
        drops = []
        for j in range(1, len(base.breakpoints) - 1):
            drop = slopes[j - 1] - slopes[j]
            if drop > 0.0:
                kinks.append(base.breakpoints[j])
                drops.append(drop)
        self.kinks = np.asarray(kinks)
        self.drops = np.asarray(drops)
        widths = np.broadcast_to(np.asarray(widths, dtype=float),
                                 self.kinks.shape).copy()
        if self.kinks.size and not np.all(widths > 0.0):
            raise ValidationError("mollifier widths must be positive")
        self.widths = widths
        self._slope0 = slopes[0]

    @property
    def h(self) -> float:
        """Largest kernel width (reporting; per-kink values in ``widths``)."""
        return float(np.max(self.widths)) if self.kinks.size else 0.0

    def gap(self, t):
        """phi(t) - phi_tilde(t) >= 0, evaluated without cancellation."""
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        if self.kinks.size:
            diffs = t[..., None] - self.kinks
            corr = np.where(
                np.abs(diffs) < self.widths,
                diffs * bump_cdf(diffs / self.widths)
                - self.widths * bump_first_moment(diffs / self.widths)
                - np.maximum(diffs, 0.0),
                0.0,
            )
            out = np.sum(self.drops * corr, axis=-1)
        return out + self.eps * t * t

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.base.eval_many(t) - self.gap(t)

    def deriv1(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self._slope0) - 2.0 * self.eps * t
        if self.kinks.size:
            diffs = t[..., None] - self.kinks
            out = out - np.sum(self.drops * bump_cdf(diffs / self.widths), axis=-1)
        return out

    def deriv2(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, -2.0 * self.eps)
        if self.kinks.size:
            diffs = t[..., None] - self.kinks
            out = out - np.sum(self.drops * bump(diffs / self.widths) / self.widths,
                               axis=-1)
        return out

    def sup_gap_bound(self, t_lo: float, t_hi: float) -> float:
        """max width * max|slope| + eps * max(t^2) on [t_lo, t_hi]."""
        max_slope = max(abs(s) for s in self.base.slopes())
        return self.h * max_slope + self.eps * max(t_lo * t_lo, t_hi * t_hi)


# target for the tangential Levi floor left uncovered by kernels (an order
# above the default verification tolerance 1e-7)
LEVI_FLOOR_TARGET = 1e-6
# largest tolerated corner sag in log units: exp(0.35) ~ 1.42x slice-bound cost
SAG_BUDGET = 0.35


def default_widths(base: RadialProfile, eps: float) -> np.ndarray:
    """Per-kink kernel widths balancing Levi coverage against corner sag.

    Past a corner at height ``r`` with adjacent slope ``-n``, the tangential
    Levi form behaves like ``4 eps / (2 n r e^{-n d})^2`` at distance ``d``
    once the kernel support has ended; requiring the floor ``LEVI_FLOOR_TARGET``
    at ``d = h`` gives ``h >= ln(2 n r / sqrt(4 eps / target)) / n``.  Where no
    coverage is needed the width is capped so the corner sag
    ``(drop/2) h E`` stays within ``SAG_BUDGET``.
    """
    slopes = base.slopes()
    bps = base.breakpoints
    kinks = []
    for j in range(1, len(bps) - 1):
        if slopes[j - 1] - slopes[j] > 0.0:
            kinks.append(j)
    if not kinks:
        return np.asarray([])
    denom = math.sqrt(4.0 * max(eps, 1e-12) / LEVI_FLOOR_TARGET)
    widths = []
    for j in kinks:
        drop = slopes[j - 1] - slopes[j]
        r_j = math.exp(base.values[j])
        need = 0.0
        for n in (abs(slopes[j - 1]), abs(slopes[j])):
            if n > 0.0:
                arg = 2.0 * n * r_j / denom
                if arg > 1.0:
                    need = max(need, math.log(arg) / n)
        sag_cap = SAG_BUDGET / (BUMP_ABS_MOMENT * drop)
        gap_cap = 0.45 * min(bps[j] - bps[j - 1], bps[j + 1] - bps[j])
        h_j = max(need, min(sag_cap, 1e-3))
        h_j = min(h_j, gap_cap)
        widths.append(h_j)
    return np.asarray(widths)


@dataclass(frozen=True)
class LeviReport:
    """Result of the numerical strict-pseudoconvexity verification."""

    grid_points: int
    tolerance: float
    min_value: float
    argmin_t: float
    argmin_w: float
    face_range: tuple[float, float]
    strictly_pseudoconvex_reported: bool
    provenance: str

    def to_doc(self) -> dict:
        return {
            "schema": "levi-report/1",
            "grid_points": self.grid_points,
            "tolerance": format(self.tolerance, ".17g"),
            "min_value": format(self.min_value, ".17g"),
            "argmin": [format(self.argmin_t, ".17g"), format(self.argmin_w, ".17g")],
            "face_range": [format(self.face_range[0], ".17g"),
                           format(self.face_range[1], ".17g")],
            "strictly_pseudoconvex_reported": self.strictly_pseudoconvex_reported,
            "provenance": self.provenance,
        }


class SmoothDomain:
    """Mollified inner approximation with end caps and a closed-form defining
    function; immutable after construction."""

    def __init__(self, base: ReinhardtDomain, h=None,
                 eps: float = 1e-5, kappa: float = 50.0,
                 t_plus: float | None = None, t_minus: float | None = None):
        if base.t_min == -math.inf:
            raise ValidationError("smoothing requires a finite inner annulus edge")
        self.base = base
        prof = base.profile
        gaps = [b - a for a, b in zip(prof.breakpoints, prof.breakpoints[1:])]
        min_gap = min(gaps)
        widths = default_widths(prof, eps) if h is None else h
        self.profile = MollifiedProfile(prof, widths, eps)
        if self.profile.kinks.size and not np.max(self.profile.widths) < min_gap:
            raise ValidationError(
                f"mollifier width {np.max(self.profile.widths)!r} must stay below "
                f"the minimal breakpoint gap {min_gap!r}"
            )
        if kappa <= 0.0:
            raise ValidationError("cap stiffness kappa must be positive")
        self.eps = float(eps)
        self.kappa = float(kappa)
        self.t_plus = base.t_max if t_plus is None else float(t_plus)
        self.t_minus = base.t_min if t_minus is None else float(t_minus)
        if not (base.t_min <= self.t_minus < self.t_plus <= base.t_max):
            raise ValidationError("cap centers must respect the base annulus")

        mid = 0.5 * (self.t_plus + self.t_minus)
        if not self.g(mid) < 1.0:
            raise ValidationError("caps so stiff that the smoothed domain is empty")
        self._axis_lo_in, self._axis_lo_out = self._root_bracket(left=True)
        self._axis_hi_in, self._axis_hi_out = self._root_bracket(left=False)

        # key points must stay inside: the center circle and the kink circles
        for t_check in [0.0] + list(self.profile.kinks):
            if not (self._axis_lo_in < t_check < self._axis_hi_in
                    and self.g(t_check) < 1.0):
                raise ValidationError(
                    f"cap configuration pushes the circle at t={t_check!r} "
                    "out of the smoothed domain"
                )

        # verification grid for the structural inequality phi_tilde <= phi
        tgrid = np.linspace(base.t_min, base.t_max, 4097)
        if np.any(self.profile.gap(tgrid) < 0.0):
            raise CertificationError("mollified profile exceeds the base profile")

    @property
    def h(self) -> float:
        return self.profile.h

    # ------------------------------------------------------------ cap profile
    def g(self, t):
        t = np.asarray(t, dtype=float) if not np.isscalar(t) else t
        return (np.exp(self.kappa * (t - self.t_plus))
                + np.exp(-self.kappa * (t - self.t_minus)))

    def g1(self, t):
        return self.kappa * (np.exp(self.kappa * (t - self.t_plus))
                             - np.exp(-self.kappa * (t - self.t_minus)))

    def g2(self, t):
        return self.kappa * self.kappa * self.g(t)

    def _root_bracket(self, left: bool) -> tuple[float, float]:
        """Conservative bracket of the axis-edge root of g = 1.

        Returns (inner, outer): g(inner) < 1 < g(outer), inner strictly inside.
        """
        mid = 0.5 * (self.t_plus + self.t_minus)
        outside = self.t_minus if left else self.t_plus
        # the cap term can underflow, leaving g(outside) == 1 exactly; beyond
        # the cap centers g > 1 structurally, so >= is the right sentinel
        if not (self.g(outside) >= 1.0 and self.g(mid) < 1.0):
            raise NumericalError("axis root bracketing failed")
        inner, outer = mid, outside
        for _ in range(200):
            m = 0.5 * (inner + outer)
            if self.g(m) < 1.0:
                inner = m
            else:
                outer = m
        return inner, outer

    def axis_log_range(self) -> tuple[float, float]:
        """Conservative open t-range of the smoothed axis {rho(z, 0) < 0}."""
        return self._axis_lo_in, self._axis_hi_in

    # ------------------------------------------------------ defining function
    def phi(self, t):
        return self.profile.value(t)

    def rho_moduli(self, rz, rw):
        """rho at |z| = rz, |w| = rw (rotation invariance); dtype-preserving.

        The w-term is computed in log form, ``exp(2 log rw - 2 phi_tilde)``,
        so that deep staircase corners (where ``exp(-2 phi_tilde)`` alone
        overflows) and the axis ``rw = 0`` are both handled; the exponent cap
        only engages far outside the domain where only the sign matters.
        """
        rz = np.asarray(rz)
        rw = np.asarray(rw)
        with np.errstate(divide="ignore"):
            t = np.log(rz)
            log_rw = np.where(rw > 0.0, np.log(np.where(rw > 0.0, rw, 1.0)), -np.inf)
        phi_t = self._phi_any(t)
        arg = np.minimum(2.0 * log_rw - 2.0 * phi_t, 709.0)
        w_term = np.where(np.isneginf(arg), 0.0, np.exp(np.where(np.isneginf(arg), 0.0, arg)))
        cap = (np.exp(self.kappa * (t - self.t_plus))
               + np.exp(-self.kappa * (t - self.t_minus)))
        return w_term + cap - 1.0

    def _phi_any(self, t):
        """phi_tilde for arbitrary (possibly extended-precision) dtypes.

        np.interp would downcast to float64, so the piecewise-linear part is
        evaluated by hand (searchsorted + segment line, which also realizes
        the linear extension beyond the outermost breakpoints).
        """
        t = np.asarray(t)
        prof = self.profile
        base = prof.base
        bps = np.asarray(base.breakpoints, dtype=t.dtype)
        vals = np.asarray(base.values, dtype=t.dtype)
        idx = np.clip(np.searchsorted(bps, t), 1, len(base.breakpoints) - 1)
        t0 = bps[idx - 1]
        seg_slope = (vals[idx] - vals[idx - 1]) / (bps[idx] - t0)
        out = vals[idx - 1] + seg_slope * (t - t0)
        if prof.kinks.size:
            diffs = t[..., None] - np.asarray(prof.kinks, dtype=t.dtype)
            widths = np.asarray(prof.widths, dtype=t.dtype)
            x = diffs / widths
            xc = np.clip(x, -1.0, 1.0)
            p = xc * (1.0 + xc * xc * (-4.0 / 3.0 + xc * xc * (6.0 / 5.0 + xc * xc * (-4.0 / 7.0 + xc * xc / 9.0))))
            zc = 0.5 + t.dtype.type(BUMP_NORM) * p
            mc = -(t.dtype.type(BUMP_NORM) / 10.0) * (1.0 - xc * xc) ** 5
            val = diffs * zc - widths * mc - np.maximum(diffs, 0.0)
            corr = np.where(np.abs(diffs) < widths, val, 0.0)
            out = out - np.sum(np.asarray(prof.drops, dtype=t.dtype) * corr, axis=-1)
        return out - t.dtype.type(prof.eps) * t * t

    def rho(self, z, w):
        z = np.asarray(z)
        w = np.asarray(w)
        return self.rho_moduli(np.abs(z), np.abs(w))

    def contains(self, p) -> bool:
        p = _as_point(p)
        rz, rw = p.moduli()
        if rz <= 0.0:
            return False
        return bool(self.rho_moduli(rz, rw) < 0.0)

    def face_radius(self, t):
        """Radius of the vertical disc {|w| < r(t)} inscribed at log|z| = t."""
        t = np.asarray(t, dtype=float)
        slack = 1.0 - self.g(t)
        return np.exp(self.phi(t)) * np.sqrt(np.maximum(slack, 0.0))

    # -------------------------------------------------------------- Hessian
    def hessian_entries(self, t: float, rw: float):
        """Analytic complex Hessian of rho at the real-positive representative
        (e^t, rw).  Overflows where exp(-2 phi_tilde) does; use
        ``levi_face_values`` for whole-face scans.
        """
        z = math.exp(t)
        phi = float(self.phi(t))
        d1 = float(self.profile.deriv1(t))
        d2 = float(self.profile.deriv2(t))
        u = math.exp(-2.0 * phi)
        u1 = -2.0 * d1 * u
        u2 = (4.0 * d1 * d1 - 2.0 * d2) * u
        g1 = float(self.g1(t))
        g2 = float(self.g2(t))
        w2 = rw * rw
        rho_z = (u1 * w2 + g1) / (2.0 * z)
        rho_w = u * rw
        rho_zz = (u2 * w2 + g2) / (4.0 * z * z)
        rho_zw = u1 * rw / (2.0 * z)
        rho_ww = u
        return rho_z, rho_w, rho_zz, rho_zw, rho_ww

    def levi_face_values(self, t):
        """Levi form on the complex tangent along the boundary face,
        cancellation-free:

            L = F (-2 phi'' F^2 + g'' F + g'^2) / ((r A)^2 + 4 e^{2t} F^2)

        with F = 1 - g, r the face radius, A = -2 phi' F + g'.
        """
        t = np.asarray(t, dtype=float)
        f = 1.0 - self.g(t)
        if np.any(f <= 0.0):
            raise ValidationError("face values requested outside the face range")
        d1 = self.profile.deriv1(t)
        d2 = self.profile.deriv2(t)
        g1 = self.g1(t)
        g2 = self.g2(t)
        r = self.face_radius(t)
        a = -2.0 * d1 * f + g1
        num = f * (-2.0 * d2 * f * f + g2 * f + g1 * g1)
        den = (r * a) ** 2 + 4.0 * np.exp(2.0 * t) * f * f
        return num / den

    # ------------------------------------------------------------- geometry
    def outer_radius_upper(self, p) -> float:
        """Valid for the smoothed domain since it sits inside the base."""
        return self.base.outer_radius_upper(p)

    def boundary_distance_lower(self, p, resolution: int = 2048) -> float:
        """Certified distance lower bound to the smooth boundary.

        Same per-cell moduli-box strategy as the base domain; cell radius
        ranges use endpoint values (log-concavity: minima at endpoints) and
        tangent caps (concavity: maxima under either endpoint tangent).  The
        two closing strips beyond the conservative face range are covered by
        coarse boxes.
        """
        p = _as_point(p)
        if not self.contains(p):
            raise ValidationError("basepoint must lie inside the smoothed domain")
        rz, rw = p.moduli()
        lo, hi = self._axis_lo_in, self._axis_hi_in
        t = np.linspace(lo, hi, resolution + 1)
        r = self.face_radius(t)
        phi_s = np.log(np.maximum(r, 1e-300))
        with np.errstate(divide="ignore"):
            slack = 1.0 - self.g(t)
            d_phi_s = self.profile.deriv1(t) - self.g1(t) / (2.0 * slack)
        t0, t1 = t[:-1], t[1:]
        dt = t1 - t0
        u0, u1 = np.exp(t0), np.exp(t1)
        r_lo = np.minimum(r[:-1], r[1:])
        cap0 = phi_s[:-1] + np.maximum(0.0, d_phi_s[:-1]) * dt
        cap1 = phi_s[1:] + np.maximum(0.0, -d_phi_s[1:]) * dt
        r_hi = np.exp(np.minimum(cap0, cap1))
        r_hi = np.maximum(r_hi, np.maximum(r[:-1], r[1:]))
        dz = np.maximum.reduce([np.zeros_like(u0), u0 - rz, rz - u1])
        dw = np.maximum.reduce([np.zeros_like(r_lo), r_lo - rw, rw - r_hi])
        d = float(np.min(np.hypot(dz, dw)))

        # closing strips: all boundary beyond the conservative face range lies
        # between the face range and the cap centers
        r_global = math.exp(self.base.max_log_height())
        for (s_out, s_in) in ((self.t_minus, lo), (hi, self.t_plus)):
            ua, ub = math.exp(min(s_out, s_in)), math.exp(max(s_out, s_in))
            dz_strip = max(0.0, ua - rz, rz - ub)
            dw_strip = max(0.0, rw - r_global)
            d = min(d, math.hypot(dz_strip, dw_strip))

        d *= 1.0 - GUARD_REL
        if not d > 0.0:
            raise CertificationError(
                "certified smooth boundary distance is not positive; refine the grid"
            )
        return d

    def sample_interior(self, n: int, rng: np.random.Generator):
        """n random points of {rho < 0} (moduli sampled, phases uniform).

        Where the face radius falls into the subnormal range its logarithm
        carries almost no precision, so such samples are snapped to the axis
        (which is inside wherever the caps admit any fiber at all).
        """
        lo, hi = self._axis_lo_in, self._axis_hi_in
        t = rng.uniform(lo, hi, n)
        frac = rng.uniform(0.0, 1.0, n)
        r_v = self.face_radius(t)
        rw = np.where(r_v < 1e-300, 0.0, frac * r_v * (1.0 - 1e-12))
        if not np.all(self.rho_moduli(np.exp(t), rw) < 0.0):
            raise NumericalError("interior sampler produced a boundary point")
        th = rng.uniform(0.0, 2.0 * math.pi, n)
        ps = rng.uniform(0.0, 2.0 * math.pi, n)
        z = np.exp(t) * np.exp(1j * th)
        w = rw * np.exp(1j * ps)
        return z, w


def smooth(domain: ReinhardtDomain, h=None, eps: float = 1e-5,
           kappa: float = 50.0, t_plus: float | None = None,
           t_minus: float | None = None) -> SmoothDomain:
    """Build the mollified inner approximation of ``domain``.

    ``h`` is a single kernel width, a per-kink sequence, or None for the
    adaptive per-kink policy of ``default_widths``.
    """
    return SmoothDomain(domain, h=h, eps=eps, kappa=kappa,
                        t_plus=t_plus, t_minus=t_minus)


def levi_on_tangent(rho_z, rho_w, rho_zz, rho_zw, rho_ww) -> float:
    """Levi form of a defining function on the canonical complex tangent
    ``v = (-rho_w, rho_z)``, normalized to a unit vector."""
    vz = -rho_w
    vw = rho_z
    norm2 = abs(vz) ** 2 + abs(vw) ** 2
    if norm2 == 0.0:
        raise ValidationError("vanishing gradient: not a boundary point")
    raw = (rho_zz * abs(vz) ** 2
           + 2.0 * (rho_zw * vz * np.conj(vw)).real
           + rho_ww * abs(vw) ** 2)
    return float(raw / norm2)


def levi_verify(sd: SmoothDomain, grid_points: int = 10000,
                tolerance: float = 1e-7) -> LeviReport:
    """Scan the boundary for the minimal tangential Levi value.

    Face points come from the closed-form radius (the analytic root of
    ``rho = 0`` in the w-modulus for fixed t); the two closing circles are
    appended with their tangent value ``exp(-2 phi_tilde)``.  Strict
    pseudoconvexity is reported, not proven, when the minimum clears the
    tolerance.
    """
    if grid_points < 16:
        raise ValidationError("grid too small")
    lo, hi = sd.axis_log_range()
    t = np.linspace(lo, hi, grid_points)
    values = sd.levi_face_values(t)
    rw = sd.face_radius(t)
    # closing circles (w -> 0): tangent (0, 1), L = u = exp(-2 phi_tilde)
    edge_l = [math.exp(min(-2.0 * float(sd.phi(te)), 700.0)) for te in (lo, hi)]
    all_vals = np.concatenate([values, np.asarray(edge_l)])
    all_t = np.concatenate([t, np.asarray([lo, hi])])
    all_w = np.concatenate([rw, np.asarray([0.0, 0.0])])
    i = int(np.argmin(all_vals))
    min_val = float(all_vals[i])
    report = LeviReport(
        grid_points=grid_points,
        tolerance=tolerance,
        min_value=min_val,
        argmin_t=float(all_t[i]),
        argmin_w=float(all_w[i]),
        face_range=(lo, hi),
        strictly_pseudoconvex_reported=bool(min_val > tolerance),
        provenance=(
            f"face grid of {grid_points} t-points on [{lo!r}, {hi!r}] plus the two "
            f"closing circles; h={sd.h!r}, eps={sd.eps!r}, kappa={sd.kappa!r}; "
            "rotation invariance reduces the scan to real-positive phases"
        ),
    )
    return report


def certify_smoothed(sd: SmoothDomain, base_cert: ConstructionCertificate,
                     levels: Sequence[int] | None = None,
                     resolution: int = 2048) -> ConstructionCertificate:
    """Recompute the level certificates directly on the smoothed domain.

    Carathéodory uppers: slice bound at ``(a_k, 0)`` in the pulled-back shear
    direction ``(a_k, e^{phi(t_k)})``; the vertical radius shrinks by the
    mollification gap and the cap slack, the horizontal radius is the model
    annulus clipped by the smoothed axis range.  Kobayashi lowers transfer by
    monotonicity: the smoothed domain sits inside the base (structural
    ``phi_tilde <= phi`` plus caps), whose shear containment is re-verified
    exactly.  The squeezing lower at ``(1, 0)`` is the inclusion bound
    computed on the smoothed boundary.
    """
    base = sd.base
    if not base.profile.symmetric or sd.t_plus != -sd.t_minus:
        raise ValidationError(
            "smoothed certification mirrors by inversion symmetry and needs the "
            "symmetric setup"
        )
    if levels is None:
        levels = [rec.k for rec in base_cert.levels]
    lo_ax, hi_ax = sd.axis_log_range()
    records: list[LevelRecord] = []
    for k in levels:
        rec = base_cert.row(k)
        t_k = math.log(rec.a_k)
        try:
            idx = base.profile.breakpoints.index(t_k)
        except ValueError:
            raise ValidationError(f"level {k}: breakpoint t={t_k!r} not in the base profile")
        if not sd.contains(PointC2(complex(rec.a_k, 0.0), 0.0 + 0.0j)):
            raise ValidationError(
                f"level {k}: basepoint ({rec.a_k}, 0) left the smoothed domain"
            )
        # exact re-verification of the base shear containment backing the
        # Kobayashi transfer
        k_low = kobayashi_lower_shear(base, idx)

        slack = float(1.0 - sd.g(t_k))
        gap = float(sd.profile.gap(np.asarray(t_k)))
        vertical_term = math.exp(gap) / math.sqrt(slack)
        lo_edge = max(rec.a_prev, math.exp(lo_ax))
        hi_edge = min(rec.a_next, math.exp(hi_ax))
        r_h = min(rec.a_k - lo_edge, hi_edge - rec.a_k)
        if not r_h > 0.0:
            raise CertificationError(
                f"level {k}: smoothed horizontal radius degenerate (caps too stiff)"
            )
        c_smooth = rec.a_k / r_h + vertical_term
        s_val = min(1.0, c_smooth * math.sqrt(2.0 / rec.m_k))
        prov = (
            f"smoothed slice bound at (a_{k}, 0): C <= {c_smooth!r} "
            f"(r_h={r_h!r}, vertical factor={vertical_term!r}, gap={gap!r}); "
            f"Kobayashi lower sqrt({rec.m_k}/2) transfers by inclusion in the "
            f"base domain; [base K] {k_low.provenance}"
        )
        s_up = Bound(
            quantity="squeezing", side="upper", value=s_val,
            basepoint=PointC2(complex(rec.a_k, 0.0), 0.0 + 0.0j),
            direction=None, certified=True, provenance=prov,
        )
        s_up_mirror = Bound(
            quantity="squeezing", side="upper", value=s_val,
            basepoint=PointC2(complex(1.0 / rec.a_k, 0.0), 0.0 + 0.0j),
            direction=None, certified=True,
            provenance=prov + "; mirrored by inversion symmetry of the smoothed domain",
        )
        records.append(LevelRecord(
            k=rec.k, a_k=rec.a_k, a_k_exact=rec.a_k_exact,
            a_prev=rec.a_prev, a_next=rec.a_next,
            c_k=rec.c_k, m_k=rec.m_k, n_k=rec.n_k,
            s_upper=s_up, s_upper_mirror=s_up_mirror,
            target=rec.target,
            target_met=bool(s_val < float(rec.target)),
        ))

    p_center = PointC2(1.0 + 0.0j, 0.0 + 0.0j)
    d = sd.boundary_distance_lower(p_center, resolution)
    r = sd.outer_radius_upper(p_center)
    s_lower = Bound(
        quantity="squeezing", side="lower", value=min(1.0, d / r),
        basepoint=p_center, direction=None, certified=True,
        provenance=(
            f"inclusion bound on the smoothed domain: certified dist >= {d!r} "
            f"(grid {resolution}), outer radius <= {r!r} (base circumscribed box)"
        ),
    )
    cert = assemble_certificate(tuple(records), s_lower,
                                base_cert.margin_guard, smoothed=True)
    bounds = [r_.s_upper for r_ in records] + [r_.s_upper_mirror for r_ in records]
    check_sandwich(bounds + [s_lower], context="smoothed certificate")
    return cert
