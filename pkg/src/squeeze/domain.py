"""Log-coordinate model of circular (Reinhardt) domains fibered over an annulus.

A domain is described by a piecewise-linear concave profile ``phi`` in log
coordinates: ``t = log|z|``, ``phi(t) = log`` of the ``w``-radius at ``|z| = e^t``.
The point set is::

    { (z, w) : t_min < log|z| < t_max,  log|w| < phi(log|z|) }

together with the ``w = 0`` axis over the same annulus.  All membership and
slice geometry is evaluated in log space, so astronomically large monomial
coefficients (the heights drop by thousands of log units) never overflow.

Profiles carry exact dyadic-rational mirrors of their breakpoints and heights
(``fractions.Fraction`` of the stored doubles).  Certified containment checks
run on the exact mirrors, which makes equality-riding comparisons (a profile
segment lying exactly on a model boundary) decidable with no tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
import numpy as np

from .errors import CertificationError, ValidationError

# Relative guard applied to certified geometric quantities so double rounding
# can never flip a certificate.
GUARD_REL = 1e-12

# Default number of cells per axis for certified grid minimizations.
DEFAULT_GRID = 2048

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class PointC2:
    """A point of C^2."""

    z: complex
    w: complex

    def __post_init__(self):
        for part in (self.z.real, self.z.imag, self.w.real, self.w.imag):
            if not math.isfinite(part):
                raise ValidationError(f"non-finite point component: {part!r}")

    def moduli(self) -> tuple[float, float]:
        return abs(self.z), abs(self.w)


@dataclass(frozen=True)
class LogPoint:
    """Moduli of a point in log coordinates; ``lam = -inf`` encodes ``w = 0``."""

    t: float
    lam: float

    @classmethod
    def from_point(cls, p: PointC2) -> "LogPoint":
        rz, rw = p.moduli()
        t = math.log(rz) if rz > 0.0 else _NEG_INF
        lam = math.log(rw) if rw > 0.0 else _NEG_INF
        return cls(t, lam)

    def to_point(self) -> PointC2:
        """Representative point with both phases zero."""
        rz = math.exp(self.t) if self.t != _NEG_INF else 0.0
        rw = math.exp(self.lam) if self.lam != _NEG_INF else 0.0
        return PointC2(complex(rz, 0.0), complex(rw, 0.0))


def _as_point(p) -> PointC2:
    if isinstance(p, PointC2):
        return p
    if isinstance(p, (tuple, list)) and len(p) == 2:
        return PointC2(complex(p[0]), complex(p[1]))
    raise ValidationError(f"cannot interpret {p!r} as a point of C^2")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Piecewise-linear concave log-radius profile.

    ``values[i]`` is ``phi(breakpoints[i])``; between breakpoints the profile
    interpolates linearly and beyond the first/last breakpoint it continues
    with the adjacent slope.  ``exact_breakpoints`` / ``exact_values`` are
    dyadic-rational mirrors used by certified comparisons; by default they are
    the exact rational values of the stored doubles.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    symmetric: bool = False
    pseudoconvex: bool = False
    exact_breakpoints: tuple[Fraction, ...] = field(default=None, repr=False)
    exact_values: tuple[Fraction, ...] = field(default=None, repr=False)

    def __post_init__(self):
        bps = tuple(float(t) for t in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(bps) < 2:
            raise ValidationError("profile needs at least two breakpoints")
        if len(bps) != len(vals):
            raise ValidationError("breakpoints and values length mismatch")
        if self.exact_breakpoints is None:
            object.__setattr__(
                self, "exact_breakpoints", tuple(Fraction(t) for t in bps)
            )
        if self.exact_values is None:
            object.__setattr__(self, "exact_values", tuple(Fraction(v) for v in vals))
        if len(self.exact_breakpoints) != len(bps) or len(self.exact_values) != len(vals):
            raise ValidationError("exact mirrors length mismatch")
        for t, te in zip(bps, self.exact_breakpoints):
            if float(te) != t:
                raise ValidationError("exact breakpoint does not project to its double")
        for v, ve in zip(vals, self.exact_values):
            if not math.isclose(float(ve), v, rel_tol=1e-9, abs_tol=1e-9):
                raise ValidationError("exact value inconsistent with stored double")
        for a, b in zip(self.exact_breakpoints, self.exact_breakpoints[1:]):
            if not a < b:
                raise ValidationError("breakpoints must be strictly increasing")
        if not all(math.isfinite(v) for v in vals):
            raise ValidationError("profile values must be finite")
        if self.pseudoconvex:
            slopes = self.exact_slopes()
            for s0, s1 in zip(slopes, slopes[1:]):
                if not s1 < s0:
                    raise ValidationError(
                        "pseudoconvex flag requires strictly decreasing slopes"
                    )
        if self.symmetric:
            n = len(bps)
            for i in range(n):
                j = n - 1 - i
                if self.exact_breakpoints[i] != -self.exact_breakpoints[j]:
                    raise ValidationError("symmetric flag requires mirrored breakpoints")
                if self.exact_values[i] != self.exact_values[j]:
                    raise ValidationError("symmetric flag requires mirrored values")

    # equality is on the observable double-precision content; exact mirrors
    # follow from it up to anchoring and are certification aids
    def __eq__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return (
            self.breakpoints == other.breakpoints
            and self.values == other.values
            and self.symmetric == other.symmetric
            and self.pseudoconvex == other.pseudoconvex
        )

    def __hash__(self):
        return hash((self.breakpoints, self.values, self.symmetric, self.pseudoconvex))

    # ------------------------------------------------------------------ float
    def slopes(self) -> tuple[float, ...]:
        return tuple(float(s) for s in self.exact_slopes())

    def eval(self, t: float) -> float:
        """phi(t): linear interpolation, linear extension outside the breakpoints."""
        bps, vals = self.breakpoints, self.values
        if t == _NEG_INF:
            s = self.slopes()[0]
            if s > 0.0:
                return _NEG_INF
            if s == 0.0:
                return vals[0]
            return math.inf
        if t == math.inf:
            s = self.slopes()[-1]
            if s < 0.0:
                return _NEG_INF
            if s == 0.0:
                return vals[-1]
            return math.inf
        if not math.isfinite(t):
            raise ValidationError(f"profile argument must be finite, got {t!r}")
        i = np.searchsorted(bps, t)
        if i == 0:
            return vals[0] + self.slopes()[0] * (t - bps[0])
        if i == len(bps):
            return vals[-1] + self.slopes()[-1] * (t - bps[-1])
        t0, t1 = bps[i - 1], bps[i]
        v0, v1 = vals[i - 1], vals[i]
        if t == t1:
            return v1
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def eval_many(self, t: np.ndarray) -> np.ndarray:
        """Vectorized ``eval`` for finite inputs."""
        t = np.asarray(t, dtype=float)
        bps = np.asarray(self.breakpoints)
        vals = np.asarray(self.values)
        out = np.interp(t, bps, vals)
        s = self.slopes()
        left = t < bps[0]
        right = t > bps[-1]
        if np.any(left):
            out = np.where(left, vals[0] + s[0] * (t - bps[0]), out)
        if np.any(right):
            out = np.where(right, vals[-1] + s[-1] * (t - bps[-1]), out)
        return out

    def max_value(self, t_lo: float, t_hi: float) -> float:
        """sup of phi over [t_lo, t_hi] (concavity: attained at a breakpoint or an end)."""
        cands = [self.eval(t_lo), self.eval(t_hi)]
        for t, v in zip(self.breakpoints, self.values):
            if t_lo <= t <= t_hi:
                cands.append(v)
        return max(cands)

    # ------------------------------------------------------------------ exact
    def exact_slopes(self) -> tuple[Fraction, ...]:
        bs, vs = self.exact_breakpoints, self.exact_values
        return tuple(
            (vs[i + 1] - vs[i]) / (bs[i + 1] - bs[i]) for i in range(len(bs) - 1)
        )

    def eval_exact(self, t: Fraction) -> Fraction:
        """Exact piecewise-linear evaluation on the dyadic mirrors."""
        bs, vs = self.exact_breakpoints, self.exact_values
        slopes = self.exact_slopes()
        if t <= bs[0]:
            return vs[0] + slopes[0] * (t - bs[0])
        if t >= bs[-1]:
            return vs[-1] + slopes[-1] * (t - bs[-1])
        for i in range(len(bs) - 1):
            if t <= bs[i + 1]:
                return vs[i] + slopes[i] * (t - bs[i])
        raise AssertionError("unreachable")

    def is_concave(self, strict: bool = False) -> bool:
        slopes = self.exact_slopes()
        if strict:
            return all(b < a for a, b in zip(slopes, slopes[1:]))
        return all(b <= a for a, b in zip(slopes, slopes[1:]))


def perturb_value(profile: RadialProfile, index: int, delta: float) -> RadialProfile:
    """Copy of ``profile`` with breakpoint height ``index`` raised by ``delta``.

    The perturbation is applied to the exact mirror too, so certified checks
    see it exactly.  Used by mutation tests and demos.
    """
    vals = list(profile.values)
    exact = list(profile.exact_values)
    exact[index] = exact[index] + Fraction(delta)
    vals[index] = float(exact[index])
    return replace(
        profile,
        values=tuple(vals),
        exact_values=tuple(exact),
        symmetric=False,
        pseudoconvex=False,
    )


@dataclass(frozen=True)
class ReinhardtDomain:
    """Reinhardt domain over a z-annulus, described by a radial profile.

    ``t_min`` may be ``-inf``: the domain is then fibered over a full disc
    ``|z| < exp(t_max)`` (no inner hole; ``z = 0`` is inside), which models
    polydiscs.  For ``t_min = -inf`` the leftmost profile slope must be >= 0
    so the domain stays bounded.
    """

    profile: RadialProfile
    t_min: float
    t_max: float

    def __post_init__(self):
        if math.isnan(self.t_min) or math.isnan(self.t_max):
            raise ValidationError("annulus range must not be NaN")
        if not self.t_min < self.t_max:
            raise ValidationError("t_min must be strictly below t_max")
        if self.t_max == math.inf:
            raise ValidationError("t_max must be finite (bounded domain)")
        if self.t_min == _NEG_INF and self.profile.slopes()[0] < 0.0:
            raise ValidationError("t_min = -inf requires leftmost slope >= 0")
        bps = self.profile.breakpoints
        if bps[0] < self.t_min or bps[-1] > self.t_max:
            raise ValidationError("profile breakpoints must lie within [t_min, t_max]")

    # ------------------------------------------------------------- membership
    def contains_log(self, t: float, lam: float) -> bool:
        if math.isnan(t) or math.isnan(lam):
            return False
        if not t < self.t_max:
            return False
        if self.t_min != _NEG_INF and not t > self.t_min:
            return False
        if lam == _NEG_INF:  # w = 0 axis: only the annulus condition applies
            return True
        if t == _NEG_INF:
            return lam < self.profile.eval(_NEG_INF)
        return lam < self.profile.eval(t)

    def contains(self, p) -> bool:
        lp = LogPoint.from_point(_as_point(p))
        return self.contains_log(lp.t, lp.lam)

    # --------------------------------------------------------------- geometry
    def inner_radius(self) -> float:
        return 0.0 if self.t_min == _NEG_INF else math.exp(self.t_min)

    def outer_radius(self) -> float:
        return math.exp(self.t_max)

    def slice_radii(self, z0: complex) -> tuple[float, float]:
        """Radii of the largest horizontal/vertical discs through ``(z0, 0)``."""
        z0 = complex(z0)
        if not self.contains(PointC2(z0, 0.0)):
            raise ValidationError(f"(z0, 0) with z0 = {z0!r} is not in the domain")
        rz = abs(z0)
        t = math.log(rz) if rz > 0.0 else _NEG_INF
        r_v = math.exp(self.profile.eval(t))
        r_h = min(rz - self.inner_radius(), self.outer_radius() - rz)
        return r_h, r_v

    def max_log_height(self) -> float:
        """sup of phi over the annulus range (for t_min = -inf the leftmost
        slope is >= 0, so the left tail never exceeds the first breakpoint)."""
        t_lo = self.t_min if self.t_min != _NEG_INF else self.profile.breakpoints[0]
        return self.profile.max_value(t_lo, self.t_max)

    def outer_radius_upper(self, p) -> float:
        """Certified ``R >= sup_{q in D} |q - p|`` via the circumscribed box."""
        p = _as_point(p)
        if not self.contains(p):
            raise ValidationError("basepoint must lie in the domain")
        rz, rw = p.moduli()
        phi_max = self.max_log_height()
        r = math.hypot(self.outer_radius() + rz, math.exp(phi_max) + rw)
        return r * (1.0 + GUARD_REL)

    def boundary_distance_lower(self, p, resolution: int = DEFAULT_GRID) -> float:
        """Certified lower bound on the Euclidean distance from ``p`` to the boundary.

        The boundary splits into the profile surface and (for finite edges)
        two end caps.  Rotation invariance reduces the distance to moduli:
        for any boundary point ``q``, ``|q - p| >= hypot(||z_q|-|z_p||,
        ||w_q|-|w_p||)`` with equality at aligned phases.  The surface is
        covered by breakpoint-free cells in ``u = |z|``; per cell the moduli
        ranges give an exact box lower bound (no Lipschitz slack needed).
        """
        p = _as_point(p)
        if not self.contains(p):
            raise ValidationError("basepoint must lie in the domain")
        if resolution < 8:
            raise ValidationError("resolution too small")
        rz, rw = p.moduli()

        u_lo = self.inner_radius()
        u_hi = self.outer_radius()
        grid = np.linspace(u_lo, u_hi, resolution + 1)
        knots_u = np.exp(np.asarray(self.profile.breakpoints))
        knots_u = knots_u[(knots_u > u_lo) & (knots_u < u_hi)]
        u = np.unique(np.concatenate([grid, knots_u]))
        with np.errstate(divide="ignore"):
            tgrid = np.where(u > 0.0, np.log(np.maximum(u, 1e-300)), _NEG_INF)
        r = np.empty_like(u)
        finite = u > 0.0
        r[finite] = np.exp(self.profile.eval_many(tgrid[finite]))
        if not np.all(finite):
            r[~finite] = math.exp(self.profile.eval(_NEG_INF))

        # per-cell moduli boxes; cells contain no breakpoint, so the radius
        # range over a cell is exactly the endpoint range
        u0, u1 = u[:-1], u[1:]
        r_lo = np.minimum(r[:-1], r[1:])
        r_hi = np.maximum(r[:-1], r[1:])
        dz = np.maximum.reduce([np.zeros_like(u0), u0 - rz, rz - u1])
        dw = np.maximum.reduce([np.zeros_like(r_lo), r_lo - rw, rw - r_hi])
        d = float(np.min(np.hypot(dz, dw)))

        # end caps {|z| = edge, |w| <= radius(edge)}; the exp cap at 709 keeps
        # huge cap heights finite and only ever shrinks the claimed distance
        for edge_t in (self.t_min, self.t_max):
            if edge_t == _NEG_INF:
                continue
            ue = math.exp(edge_t)
            re = math.exp(min(self.profile.eval(edge_t), 709.0))
            d_cap = math.hypot(abs(rz - ue), max(0.0, rw - re))
            d = min(d, d_cap)

        d *= 1.0 - GUARD_REL
        if not d > 0.0:
            raise CertificationError(
                "certified boundary distance is not positive at resolution "
                f"{resolution}; refine the grid"
            )
        return d

    def boundary_distance_brute(self, p, resolution: int) -> float:
        """Plain sampled distance minimum (test oracle, not certified)."""
        p = _as_point(p)
        rz, rw = p.moduli()
        u = np.linspace(self.inner_radius(), self.outer_radius(), resolution + 1)
        u = u[u > 0.0]
        r = np.exp(self.profile.eval_many(np.log(u)))
        d = float(np.min(np.hypot(u - rz, r - rw)))
        for edge_t in (self.t_min, self.t_max):
            if edge_t == _NEG_INF:
                continue
            ue = math.exp(edge_t)
            re = math.exp(self.profile.eval(edge_t))
            ws = np.linspace(0.0, re, 256)
            d = min(d, float(np.min(np.hypot(abs(rz - ue), np.abs(ws - rw)))))
        return d


# ------------------------------------------------------------------ module ops
def profile_eval(profile: RadialProfile, t: float) -> float:
    return profile.eval(t)


def contains(domain: ReinhardtDomain, p) -> bool:
    return domain.contains(p)


def slice_radii(domain: ReinhardtDomain, z0: complex) -> tuple[float, float]:
    return domain.slice_radii(z0)


def boundary_distance_lower(domain: ReinhardtDomain, p, resolution: int = DEFAULT_GRID) -> float:
    return domain.boundary_distance_lower(p, resolution)


def outer_radius_upper(domain: ReinhardtDomain, p) -> float:
    return domain.outer_radius_upper(p)


def is_pseudoconvex(domain: ReinhardtDomain, strict: bool = False) -> bool:
    """Nonincreasing-slope predicate (log-concavity of the radius function)."""
    return domain.profile.is_concave(strict=strict)


# ------------------------------------------------------------- model builders
def bidisc_domain(r_z: float = 1.0, r_w: float = 1.0) -> ReinhardtDomain:
    """Polydisc {|z| < r_z} x {|w| < r_w} as a flat-profile domain."""
    lam = math.log(r_w)
    tmx = math.log(r_z)
    profile = RadialProfile((tmx - 1.0, tmx), (lam, lam))
    return ReinhardtDomain(profile, _NEG_INF, tmx)


def annulus_model_domain(a_ratio: float, b_ratio: float, m: int,
                       exact_a: Fraction | None = None,
                       exact_b: Fraction | None = None) -> ReinhardtDomain:
    """The flat-then-monomial annulus model

        { a < |z| < b, |w| < 1, |w| < |z|^-m }     (0 < a < 1 < b)

    as a ReinhardtDomain: profile 0 on [log a, 0], slope -m on [0, log b].
    """
    if not (0.0 < a_ratio < 1.0 < b_ratio):
        raise ValidationError("model needs 0 < a < 1 < b")
    if m < 1:
        raise ValidationError("model exponent must be >= 1")
    ta = math.log(a_ratio)
    tb = math.log(b_ratio)
    ta_e = Fraction(ta)
    tb_e = Fraction(tb)
    vb_e = -m * tb_e
    profile = RadialProfile(
        breakpoints=(ta, 0.0, tb),
        values=(0.0, 0.0, float(vb_e)),
        exact_breakpoints=(ta_e, Fraction(0), tb_e),
        exact_values=(Fraction(0), Fraction(0), vb_e),
    )
    return ReinhardtDomain(profile, ta, tb)


# ---------------------------------------------------------------- persistence
_DOC_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def domain_to_doc(domain: ReinhardtDomain) -> dict:
    """Versioned JSON document; all reals as decimal strings (17 significant digits)."""
    return {
        "version": _DOC_VERSION,
        "t_min": _fmt(domain.t_min),
        "t_max": _fmt(domain.t_max),
        "breakpoints": [
            [_fmt(t), _fmt(v)]
            for t, v in zip(domain.profile.breakpoints, domain.profile.values)
        ],
        "flags": {
            "symmetric": domain.profile.symmetric,
            "pseudoconvex": domain.profile.pseudoconvex,
        },
    }


def _snap_exact_values(bps: tuple[float, ...], vals: tuple[float, ...]):
    """Rebuild exact heights from integer slopes when the data supports it.

    Profiles produced by the construction have exact integer slopes; parsing
    doubles loses the exact accumulation identities.  If every slope is within
    1e-9 of an integer, re-accumulate exactly from the highest breakpoint.
    Returns None when slopes are not integer-like.
    """
    eb = tuple(Fraction(t) for t in bps)
    slopes = []
    for i in range(len(bps) - 1):
        s = (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
        si = round(s)
        if abs(s - si) > 1e-9 * max(1.0, abs(s)):
            return None
        slopes.append(si)
    anchor = int(np.argmax(vals))
    ev = [None] * len(vals)
    ev[anchor] = Fraction(vals[anchor])
    for i in range(anchor + 1, len(vals)):
        ev[i] = ev[i - 1] + slopes[i - 1] * (eb[i] - eb[i - 1])
    for i in range(anchor - 1, -1, -1):
        ev[i] = ev[i + 1] - slopes[i] * (eb[i + 1] - eb[i])
    for v, e in zip(vals, ev):
        if not math.isclose(float(e), v, rel_tol=1e-9, abs_tol=1e-9):
            return None
    return eb, tuple(ev)


def domain_from_doc(doc: dict, snap_integer_slopes: bool = True) -> ReinhardtDomain:
    if doc.get("version") != _DOC_VERSION:
        raise ValidationError(f"unsupported domain document version: {doc.get('version')!r}")
    bps = tuple(float(pair[0]) for pair in doc["breakpoints"])
    vals = tuple(float(pair[1]) for pair in doc["breakpoints"])
    flags = doc.get("flags", {})
    exact = _snap_exact_values(bps, vals) if snap_integer_slopes else None
    if exact is not None:
        eb, ev = exact
        profile = RadialProfile(
            bps, vals,
            symmetric=bool(flags.get("symmetric", False)),
            pseudoconvex=bool(flags.get("pseudoconvex", False)),
            exact_breakpoints=eb, exact_values=ev,
        )
    else:
        profile = RadialProfile(
            bps, vals,
            symmetric=bool(flags.get("symmetric", False)),
            pseudoconvex=bool(flags.get("pseudoconvex", False)),
        )
    return ReinhardtDomain(profile, float(doc["t_min"]), float(doc["t_max"]))
