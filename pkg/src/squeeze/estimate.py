"""Non-certified numerical estimates sandwiching the certified bounds.

Kobayashi upper estimates come from optimizing polynomial analytic discs
(feasibility enforced on boundary samples of the unit circle); Carathéodory
lower estimates from optimizing finite monomial combinations against a
sampled sup norm; classical disc/polydisc/ball values calibrate both.  A
vectorized random-disc oracle checks the coefficient-based Kobayashi lower
bound on the monomial model domains with rigorously feasible discs
(Bernstein-margined circle sampling).

Estimates are tagged ``certified = False`` and never merged into
certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .domain import PointC2, ReinhardtDomain, _as_point
from .errors import NumericalError, ValidationError
from .metrics import Bound, Direction

_LOG_FLOOR = -745.0  # log of the smallest positive double


# ------------------------------------------------------------------ adapters
class ReinhardtAdapter:
    """Membership defect and boundary samples for a profile domain."""

    def __init__(self, domain: ReinhardtDomain):
        self.domain = domain

    def defect(self, z: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Positive outside, negative inside; log-coordinate units.

        ``w = 0`` carries lam = -inf (the axis is inside wherever the annulus
        condition holds, however deep the profile drops).
        """
        az = np.abs(z)
        aw = np.abs(w)
        t = np.where(az > 0.0, np.log(np.maximum(az, 1e-320)), _LOG_FLOOR)
        lam = np.where(aw > 0.0, np.log(np.where(aw > 0.0, aw, 1.0)), -np.inf)
        d = lam - self.domain.profile.eval_many(t)
        d = np.maximum(d, t - self.domain.t_max)
        if self.domain.t_min != -math.inf:
            d = np.maximum(d, self.domain.t_min - t)
        return d

    def polydisc_radii(self, p: PointC2):
        return self.domain.slice_radii(p.z)

    def has_hole(self) -> bool:
        return self.domain.t_min != -math.inf

    def boundary_samples(self, nt: int = 48, nphase: int = 16) -> tuple[np.ndarray, np.ndarray]:
        """(t, theta, psi) grid on the profile surface plus end-cap tori."""
        dom = self.domain
        t_lo = dom.t_min if dom.t_min != -math.inf else dom.t_max - 12.0
        t = np.linspace(t_lo, dom.t_max, nt)
        r = np.exp(dom.profile.eval_many(t))
        th = np.exp(2j * math.pi * np.arange(nphase) / nphase)
        ones = np.ones(nphase)
        zz = (np.exp(t)[:, None, None] * th[None, :, None] * ones[None, None, :]).ravel()
        ww = (r[:, None, None] * ones[None, :, None] * th[None, None, :]).ravel()
        out_z = [zz]
        out_w = [ww]
        for edge_t in (dom.t_min, dom.t_max):
            if edge_t == -math.inf:
                continue
            re = math.exp(dom.profile.eval(edge_t))
            levels = np.linspace(0.0, re, 6)
            ez = math.exp(edge_t) * th
            for lev in levels:
                out_z.append(np.repeat(ez, nphase))
                out_w.append(np.tile(lev * th, nphase))
        return np.concatenate(out_z), np.concatenate(out_w)


class BallModel:
    """Euclidean ball of radius r about the origin."""

    def __init__(self, r: float = 1.0):
        self.r = float(r)

    def defect(self, z, w):
        return (np.abs(z) ** 2 + np.abs(w) ** 2) / (self.r * self.r) - 1.0

    def polydisc_radii(self, p: PointC2):
        rz, rw = p.moduli()
        s = math.sqrt(max(self.r * self.r - rz * rz - rw * rw, 0.0) / 2.0)
        return s, s

    def has_hole(self) -> bool:
        return False

    def boundary_samples(self, nt: int = 48, nphase: int = 16):
        mu = np.linspace(0.0, 1.0, nt)
        rz = self.r * np.sqrt(mu)
        rw = self.r * np.sqrt(1.0 - mu)
        th = np.exp(2j * math.pi * np.arange(nphase) / nphase)
        z = np.repeat((rz[:, None] * th[None, :]), nphase, axis=1).ravel()
        w = np.tile((rw[:, None] * th[None, :]), (1, nphase)).ravel()
        return z, w


class MonomialModel:
    """The model {|w| < 1, |w| < |z|^-m} (unbounded in z; z = 0 allowed)."""

    def __init__(self, m: int):
        if m < 1:
            raise ValidationError("m must be a positive integer")
        self.m = int(m)

    def defect(self, z, w):
        aw = np.abs(w)
        az = np.abs(z)
        lam = np.where(aw > 0.0, np.log(np.where(aw > 0.0, aw, 1.0)), -np.inf)
        t = np.where(az > 0.0, np.log(np.maximum(az, 1e-320)), _LOG_FLOOR)
        return np.maximum(lam, lam + self.m * t)

    def polydisc_radii(self, p: PointC2):
        rz, rw = p.moduli()
        cap = min(1.0, rz ** (-self.m)) if rz > 0 else 1.0
        return math.inf, cap - rw

    def has_hole(self) -> bool:
        return False

    def boundary_samples(self, nt: int = 48, nphase: int = 16):
        t = np.linspace(-2.0, 2.0, nt)
        r = np.exp(np.minimum(0.0, -self.m * t))
        th = np.exp(2j * math.pi * np.arange(nphase) / nphase)
        ones = np.ones(nphase)
        z = (np.exp(t)[:, None, None] * th[None, :, None] * ones[None, None, :]).ravel()
        w = (r[:, None, None] * ones[None, :, None] * th[None, None, :]).ravel()
        return z, w


class PolydiscModel:
    def __init__(self, r_z: float = 1.0, r_w: float = 1.0):
        self.r_z = float(r_z)
        self.r_w = float(r_w)

    def defect(self, z, w):
        return np.maximum(np.abs(z) / self.r_z, np.abs(w) / self.r_w) - 1.0

    def polydisc_radii(self, p: PointC2):
        rz, rw = p.moduli()
        return self.r_z - rz, self.r_w - rw

    def has_hole(self) -> bool:
        return False

    def boundary_samples(self, nt: int = 48, nphase: int = 16):
        th = np.exp(2j * math.pi * np.arange(nphase * 4) / (nphase * 4))
        z = np.repeat(self.r_z * th, nphase * 4)
        w = np.tile(self.r_w * th, nphase * 4)
        return z, w


def _as_adapter(domain):
    if isinstance(domain, ReinhardtDomain):
        return ReinhardtAdapter(domain)
    if hasattr(domain, "defect"):
        return domain
    raise ValidationError(f"cannot interpret {domain!r} as a searchable domain")


# --------------------------------------------------------------- references
def reference_metric(model: str, p, xi) -> tuple[float, float]:
    """Classical (K, C) values for disc, polydisc (bidisc) and ball."""
    if model == "disc":
        pz = complex(p)
        xz = complex(xi)
        if not abs(pz) < 1.0:
            raise ValidationError("point outside the unit disc")
        v = abs(xz) / (1.0 - abs(pz) ** 2)
        return v, v
    p = _as_point(p)
    xi = xi if isinstance(xi, Direction) else Direction(complex(xi[0]), complex(xi[1]))
    if model in ("bidisc", "polydisc"):
        if not (abs(p.z) < 1.0 and abs(p.w) < 1.0):
            raise ValidationError("point outside the unit bidisc")
        v = max(abs(xi.xi_z) / (1.0 - abs(p.z) ** 2),
                abs(xi.xi_w) / (1.0 - abs(p.w) ** 2))
        return v, v
    if model == "ball":
        p2 = abs(p.z) ** 2 + abs(p.w) ** 2
        if not p2 < 1.0:
            raise ValidationError("point outside the unit ball")
        inner = xi.xi_z * p.z.conjugate() + xi.xi_w * p.w.conjugate()
        xi2 = abs(xi.xi_z) ** 2 + abs(xi.xi_w) ** 2
        v = math.sqrt(xi2 / (1.0 - p2) + abs(inner) ** 2 / (1.0 - p2) ** 2)
        return v, v
    raise ValidationError(f"unknown reference model {model!r}")


# ------------------------------------------------------------- disc candidate
@dataclass(frozen=True)
class DiscCandidate:
    """Polynomial analytic disc with f(0) = p and f'(0) = tau * xi."""

    basepoint: PointC2
    direction: Direction
    tau: float
    tails_z: tuple[complex, ...]
    tails_w: tuple[complex, ...]

    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        cz = np.concatenate([[self.basepoint.z, self.tau * self.direction.xi_z],
                             np.asarray(self.tails_z, dtype=complex)])
        cw = np.concatenate([[self.basepoint.w, self.tau * self.direction.xi_w],
                             np.asarray(self.tails_w, dtype=complex)])
        return cz, cw

    def evaluate(self, zeta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cz, cw = self.coefficients()
        return _polyval(cz, zeta), _polyval(cw, zeta)

    def alpha(self) -> float:
        if self.tau <= 0.0:
            raise ValidationError("degenerate disc")
        return 1.0 / self.tau


def _polyval(coeffs: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    acc = np.full_like(zeta, coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * zeta + c
    return acc


# ------------------------------------------------------- shared local search
def _adaptive_search(objective, x0: np.ndarray, rng: np.random.Generator,
                     iters: int, step0: float = 0.25):
    """Seeded coordinate search with multiplicative step adaptation."""
    x = x0.copy()
    f = objective(x)
    step = step0
    for _ in range(iters):
        if x.size == 0:
            break
        i = int(rng.integers(x.size))
        xp = x.copy()
        xp[i] += step * rng.standard_normal()
        fp = objective(xp)
        if fp > f:
            x, f = xp, fp
            step = min(step * 1.4, 10.0)
        else:
            step = max(step * 0.7, 1e-6)
    return x, f


# ------------------------------------------------------ Kobayashi upper search
def kobayashi_upper_search(domain, p, xi: Direction, degree: int = 6,
                           budget: int = 150, seed: int = 0,
                           samples: int = 2048, restarts: int = 4,
                           margin: float = 1e-6, return_trace: bool = False):
    """Best polynomial-disc upper estimate of K(p, xi); not certified.

    Feasibility of a disc is enforced as ``defect <= -margin`` on ``samples``
    boundary points of the unit circle; the returned disc additionally passes
    a 10x finer sampling (the scale backs off until it does).
    """
    adapter = _as_adapter(domain)
    p = _as_point(p)
    if isinstance(domain, ReinhardtDomain) and not domain.contains(p):
        raise ValidationError("basepoint must lie in the domain")
    if degree < 1:
        raise ValidationError("degree must be at least 1")
    zeta = np.exp(2j * math.pi * np.arange(samples) / samples)
    n_tail = max(degree - 1, 0)

    def tail_arrays(x: np.ndarray):
        c = x.view(complex) if x.size else np.zeros(0, dtype=complex)
        return c[:n_tail], c[n_tail:]

    def max_defect(tz_val, tw_val, tau):
        z = p.z + tau * xi.xi_z * zeta + tz_val
        w = p.w + tau * xi.xi_w * zeta + tw_val
        return float(np.max(adapter.defect(z, w)))

    def feasible_tau(x: np.ndarray) -> float:
        tz, tw = tail_arrays(x)
        tz_val = _polyval(np.concatenate([[0.0, 0.0], tz]), zeta) if n_tail else 0.0
        tw_val = _polyval(np.concatenate([[0.0, 0.0], tw]), zeta) if n_tail else 0.0
        tau = 1e-6
        if max_defect(tz_val, tw_val, tau) > -margin:
            return 0.0
        for _ in range(80):
            if max_defect(tz_val, tw_val, 2.0 * tau) > -margin:
                break
            tau *= 2.0
        lo, hi = tau, 2.0 * tau
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if max_defect(tz_val, tw_val, mid) > -margin:
                hi = mid
            else:
                lo = mid
        return lo

    best_tau = 0.0
    best_x = np.zeros(4 * n_tail)
    trace = []
    for ridx in range(restarts):
        rng = np.random.default_rng([seed, 7, ridx])
        if ridx == 0:
            x0 = np.zeros(4 * n_tail)
        else:
            scale = 0.05 / (1.0 + np.repeat(np.arange(2 * n_tail) % max(n_tail, 1), 2))
            x0 = rng.standard_normal(4 * n_tail) * np.concatenate([scale, scale])[: 4 * n_tail]
        x, tau = _adaptive_search(feasible_tau, x0, rng, budget)
        trace.append((ridx, 1.0 / tau if tau > 0.0 else math.inf, tau))
        if tau > best_tau:
            best_tau, best_x = tau, x

    fallback = False
    if best_tau <= 0.0:
        try:
            r_h, r_v = adapter.polydisc_radii(p)
            scale = max(abs(xi.xi_z) / r_h if r_h > 0 else math.inf,
                        abs(xi.xi_w) / r_v if r_v > 0 else math.inf)
            best_tau = 0.98 / scale
            best_x = np.zeros(4 * n_tail)
            fallback = True
        except Exception as exc:
            raise NumericalError("no feasible disc found and no polydisc fallback") from exc

    # honesty pass: the returned disc must clear a 10x finer sampling
    zeta_fine = np.exp(2j * math.pi * np.arange(10 * samples) / (10 * samples))
    tz, tw = tail_arrays(best_x)
    cz_t = np.concatenate([[0.0, 0.0], tz]) if n_tail else np.asarray([0.0, 0.0])
    cw_t = np.concatenate([[0.0, 0.0], tw]) if n_tail else np.asarray([0.0, 0.0])
    for _ in range(200):
        z = p.z + best_tau * xi.xi_z * zeta_fine + _polyval(cz_t, zeta_fine)
        w = p.w + best_tau * xi.xi_w * zeta_fine + _polyval(cw_t, zeta_fine)
        fine_defect = float(np.max(adapter.defect(z, w)))
        if fine_defect <= -0.5 * margin:
            break
        best_tau *= 0.999
    else:
        raise NumericalError("could not stabilize the returned disc on the fine grid")

    value = 1.0 / best_tau
    bound = Bound(
        quantity="kobayashi", side="upper", value=value, basepoint=p, direction=xi,
        certified=False,
        provenance=(
            f"polynomial disc search: degree={degree}, budget={budget}, seed={seed}, "
            f"samples={samples}, restarts={restarts}, margin={margin!r}, "
            f"fine-grid defect={fine_defect!r}"
            + ("; inscribed polydisc fallback" if fallback else "")
        ),
    )
    if return_trace:
        tz_best, tw_best = tail_arrays(best_x)
        candidate = DiscCandidate(
            basepoint=p, direction=xi, tau=best_tau,
            tails_z=tuple(tz_best.tolist()), tails_w=tuple(tw_best.tolist()))
        return bound, candidate, trace
    return bound


# --------------------------------------------------- Caratheodory lower search
DEFAULT_ANNULUS_INDEXES = ((1, 0), (0, 1), (-1, 0), (2, 0), (0, 2), (1, 1), (-1, 1), (-2, 0))
DEFAULT_DISC_INDEXES = ((1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 1))


@dataclass(frozen=True)
class FunctionCandidate:
    """Monomial combination g = sum c_ij (z^i w^j - p^i p^j); g(p) = 0 exactly."""

    indices: tuple[tuple[int, int], ...]
    coefficients: tuple[complex, ...]
    basepoint: PointC2


def _monomial_matrix(indices, z, w):
    cols = []
    for (i, j) in indices:
        col = np.ones_like(z)
        if i != 0:
            col = col * z ** i
        if j != 0:
            col = col * w ** j
        cols.append(col)
    return np.stack(cols, axis=1)


def _validate_indices(indices, p: PointC2):
    for (i, j) in indices:
        if j < 0:
            raise ValidationError("negative w-powers are not holomorphic on the domain")
        if i < 0 and abs(p.z) == 0.0:
            raise ValidationError("Laurent z-powers need a basepoint off z = 0")


def _monomial_at(indices, p: PointC2):
    # p.w ** j with p.w = 0 and j >= 1 is exactly 0; j = 0 is skipped
    vals = []
    for (i, j) in indices:
        v = 1.0 + 0.0j
        if i != 0:
            v *= p.z ** i
        if j != 0:
            v *= p.w ** j
        vals.append(v)
    return np.asarray(vals)


def _monomial_grad(indices, p: PointC2, xi: Direction):
    out = []
    pz, pw = p.z, p.w
    for (i, j) in indices:
        dz = 0.0 + 0.0j
        dw = 0.0 + 0.0j
        if i != 0:
            dz = i * pz ** (i - 1) * (pw ** j if j != 0 else 1.0)
        if j != 0:
            dw = j * (pz ** i if i != 0 else 1.0) * (pw ** (j - 1) if j != 1 else 1.0)
        out.append(xi.xi_z * dz + xi.xi_w * dw)
    return np.asarray(out)


def caratheodory_lower_search(domain, p, xi: Direction,
                              index_set: Sequence[tuple[int, int]] | None = None,
                              budget: int = 200, seed: int = 0,
                              safety: float = 1.01, return_trace: bool = False):
    """Best monomial-combination lower estimate of C(p, xi); not certified.

    Maximizes |g'(p)(xi)| / (safety * sampled sup |g|) over coefficient
    vectors; the sup is sampled on the distinguished boundary grid of the
    adapter and inflated by ``safety``.
    """
    adapter = _as_adapter(domain)
    p = _as_point(p)
    if index_set is None:
        index_set = (DEFAULT_ANNULUS_INDEXES if adapter.has_hole()
                     else DEFAULT_DISC_INDEXES)
    indices = tuple((int(i), int(j)) for i, j in index_set)
    if not indices:
        raise ValidationError("empty index set")
    _validate_indices(indices, p)
    zs, ws = adapter.boundary_samples()
    b = _monomial_matrix(indices, zs, ws)
    b = b - _monomial_at(indices, p)[None, :]
    d = _monomial_grad(indices, p, xi)

    def objective(x: np.ndarray) -> float:
        c = x.view(complex)
        sup = float(np.max(np.abs(b @ c)))
        if sup <= 0.0:
            return 0.0
        return float(abs(np.dot(d, c)) / (safety * sup))

    # seed pool: single monomials, signed/rotated pairs, random mixtures;
    # polish the strongest seeds with the adaptive search
    n = len(indices)
    seeds = []
    for j in range(n):
        c = np.zeros(n, dtype=complex)
        c[j] = 1.0
        seeds.append(c)
    for j in range(n):
        for k in range(j + 1, n):
            for factor in (1.0, -1.0, 1j, -1j):
                c = np.zeros(n, dtype=complex)
                c[j] = 1.0
                c[k] = factor
                seeds.append(c)
    rng0 = np.random.default_rng([seed, 11])
    for _ in range(4):
        seeds.append(rng0.standard_normal(n) + 1j * rng0.standard_normal(n))

    def as_real(c):
        out = np.empty(2 * n)
        out[0::2] = c.real
        out[1::2] = c.imag
        return out

    scored = sorted(
        ((objective(as_real(c)), i) for i, c in enumerate(seeds)), reverse=True
    )
    best_val = 0.0
    best_c = np.zeros(n, dtype=complex)
    trace = []
    for ridx, (_, sidx) in enumerate(scored[:3]):
        rng = np.random.default_rng([seed, 11, ridx])
        x, val = _adaptive_search(objective, as_real(seeds[sidx]), rng, budget)
        trace.append((ridx, val, 0.0))
        if val > best_val:
            best_val, best_c = val, x.view(complex).copy()

    bound = Bound(
        quantity="caratheodory", side="lower", value=best_val, basepoint=p,
        direction=xi, certified=False,
        provenance=(
            f"monomial candidate search: indices={indices}, budget={budget}, "
            f"seed={seed}, boundary samples={len(zs)}, safety={safety}"
        ),
    )
    candidate = FunctionCandidate(indices=indices,
                                  coefficients=tuple(best_c.tolist()),
                                  basepoint=p)
    if return_trace:
        return bound, candidate, trace
    return bound


# -------------------------------------------------------- coefficient checks
@dataclass(frozen=True)
class CoefficientCheck:
    ok: bool
    violations: tuple[tuple[int, float, float], ...]
    alias_level: float
    scaled_coefficients: tuple[float, ...]


def coefficient_bound_check(samples: np.ndarray, r: float,
                            sup_bound: float | None = None,
                            tol: float = 1e-9,
                            alias_threshold: float = 1e-8) -> CoefficientCheck:
    """Cauchy-estimate check |c_j| r^j <= sup|g| + tol from circle samples.

    ``samples`` are values of a holomorphic function on the uniform grid of
    the circle of radius ``r < 1``.  The DFT recovers ``c_j r^j``; the top
    (negative-frequency) modes must carry no energy, otherwise the samples
    alias and the check aborts.
    """
    samples = np.asarray(samples, dtype=complex)
    n = samples.size
    if n < 8:
        raise ValidationError("need at least 8 samples")
    if not 0.0 < r < 1.0:
        raise ValidationError("sample circle radius must lie in (0, 1)")
    coeffs = np.fft.fft(samples) / n
    mags = np.abs(coeffs)
    scale = float(np.max(mags)) if np.max(mags) > 0 else 1.0
    # a holomorphic function adequately sampled leaves the whole
    # negative-frequency band empty
    alias = float(np.max(mags[n // 2:])) / scale
    if alias > alias_threshold:
        raise NumericalError(
            f"aliasing detected: top-mode energy {alias!r} above threshold"
        )
    sup = float(np.max(np.abs(samples))) if sup_bound is None else float(sup_bound)
    violations = []
    for j in range(n // 2):
        if mags[j] > sup + tol:
            violations.append((j, float(mags[j]), sup + tol))
    return CoefficientCheck(
        ok=not violations,
        violations=tuple(violations),
        alias_level=alias,
        scaled_coefficients=tuple(mags[: n // 2].tolist()),
    )


# ------------------------------------------------------------- disc oracle
@dataclass(frozen=True)
class OracleResult:
    m: int
    count: int
    degree: int
    samples: int
    min_alpha: float
    coefficient_bound: float
    feasibility_factor: float


def _int_power(base: np.ndarray, m: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base
    e = m
    while e > 0:
        if e & 1:
            out = out * b
        b = b * b
        e >>= 1
    return out


def monomial_disc_oracle(m: int, count: int = 34000, degree: int = 6,
                       seed: int = 1234, samples: int | None = None) -> OracleResult:
    """Minimum |alpha| over random rigorously feasible polynomial discs in the
    model {|w| < 1, |w| < |z|^-m} through (1, 0) with f'(0) = tau (1, 1).

    Feasibility is certified: a polynomial of degree d on the unit circle
    satisfies sup <= grid_max / (1 - pi d / N), so requiring grid_max <=
    1 - pi d / N guarantees sup <= 1 for both |w| and |w z^m|, and the open
    image condition follows from the maximum principle.  Every reported disc
    is genuinely inside the model, so min |alpha| can never undercut the true
    Kobayashi infimum.
    """
    if m < 1:
        raise ValidationError("m must be a positive integer")
    d_eff = degree * (m + 1)
    if samples is None:
        samples = 128
        while samples < 5 * d_eff:
            samples *= 2
    thr = 1.0 - math.pi * d_eff / samples
    if thr <= 0.0:
        raise ValidationError("not enough circle samples for the Bernstein margin")
    zeta = np.exp(2j * math.pi * np.arange(samples) / samples).astype(np.complex64)
    chunk = max(256, (1 << 21) // samples)
    # float32 evaluation: the Bernstein margin is ~0.2-0.8, so a 1e-4 relative
    # haircut swallows single-precision rounding with orders to spare
    thr2 = np.float32((thr * (1.0 - 1e-4)) ** 2)

    best_tau = 0.0
    done = 0
    ci = 0
    while done < count:
        b = min(chunk, count - done)
        rng = np.random.default_rng([seed, m, ci])
        scales = 0.35 / (np.arange(2, degree + 1) ** 2)
        az = (rng.standard_normal((b, degree - 1)) + 1j * rng.standard_normal((b, degree - 1))) * scales
        bw = (rng.standard_normal((b, degree - 1)) + 1j * rng.standard_normal((b, degree - 1))) * scales

        base_z = np.broadcast_to(zeta, (b, samples)).astype(np.complex64)
        base_w = base_z.copy()
        pw = zeta.copy()
        for j in range(degree - 1):
            pw = pw * zeta
            base_z = base_z + az[:, j:j + 1].astype(np.complex64) * pw
            base_w = base_w + bw[:, j:j + 1].astype(np.complex64) * pw

        def feasible(c):
            with np.errstate(over="ignore", invalid="ignore"):
                cc = c.astype(np.float32)[:, None]
                w = cc * base_w
                z = 1.0 + cc * base_z
                aw2 = w.real**2 + w.imag**2
                az2 = z.real**2 + z.imag**2
                bad = np.maximum(aw2, aw2 * _int_power(az2, m)) > thr2
                return ~np.any(bad, axis=1)

        lo = np.zeros(b)
        hi = np.full(b, np.inf)
        c = np.full(b, math.sqrt(2.0 / m))
        for _ in range(30):
            ok = feasible(c)
            lo = np.where(ok, np.maximum(lo, c), lo)
            hi = np.where(ok, hi, np.minimum(hi, c))
            c = np.where(np.isinf(hi), 4.0 * c, 0.5 * (lo + hi))
        if not np.all(lo > 0.0):
            raise NumericalError("oracle found a disc with no feasible scale")
        best_tau = max(best_tau, float(np.max(lo)))
        done += b
        ci += 1

    return OracleResult(
        m=m, count=count, degree=degree, samples=samples,
        min_alpha=1.0 / best_tau,
        coefficient_bound=math.sqrt(m / 2.0),
        feasibility_factor=thr,
    )
