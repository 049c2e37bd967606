"""Shared test oracles."""

import math

import numpy as np


def fd_hessian_mismatch(sd, rng, n_points: int) -> float:
    """Worst relative mismatch between the analytic complex Hessian of rho and
    central finite differences, over random boundary points.

    The FD step adapts to the local profile slope (the fourth derivative along
    z scales like slope^4), and sampling avoids the kernel bands around the
    smoothed corners and the belt where exp(-2 phi) overflows; both regions
    are measure ~1e-3 of the face and carry enormous, manifestly positive
    curvature.
    """
    lo, hi = sd.axis_log_range()
    kinks = np.asarray(sd.profile.kinks)
    widths = np.asarray(sd.profile.widths)
    worst = 0.0
    checked = 0
    while checked < n_points:
        t = float(rng.uniform(lo + 0.01, hi - 0.01))
        if float(sd.phi(t)) < -150.0:
            continue
        if kinks.size and np.any(np.abs(t - kinks) < 5.0 * widths):
            continue
        rw = float(sd.face_radius(t))
        rho_z, rho_w, rho_zz, rho_zw, rho_ww = sd.hessian_entries(t, rw)
        z0 = math.exp(t)
        slope = abs(float(sd.profile.deriv1(t)))
        delta = np.longdouble(min(1e-5, 3e-4 / max(1.0, slope)))

        def fd(vz, vw):
            tot = np.longdouble(0.0)
            for eta in (delta, -delta, 1j * delta, -1j * delta):
                zz = np.asarray(abs(z0 + eta * vz), dtype=np.longdouble)
                ww = np.asarray(abs(rw + eta * vw), dtype=np.longdouble)
                tot += sd.rho_moduli(zz, ww)
            base = sd.rho_moduli(np.asarray(z0, dtype=np.longdouble),
                                 np.asarray(rw, dtype=np.longdouble))
            return float((tot - 4.0 * base) / (4.0 * delta * delta))

        scale = max(abs(rho_zz), abs(rho_ww), abs(rho_zw))
        worst = max(
            worst,
            abs(fd(1.0, 0.0) - rho_zz) / scale,
            abs(fd(0.0, 1.0) - rho_ww) / scale,
            abs((fd(1.0, 1.0) - fd(1.0, 0.0) - fd(0.0, 1.0)) / 2.0 - rho_zw) / scale,
        )
        checked += 1
    return worst
