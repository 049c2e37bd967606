"""Command-line pipeline: build | certify-smoothed | estimate | plot-data | all.

A run directory is a pure function of the configuration: all randomness is
seeded from the config, floats are serialized as decimal strings or via
their shortest round-trip repr, and JSON keys are sorted, so two runs with
the same config produce byte-identical directories.

Exit codes: 0 success, 2 config/validation error, 3 certification failure,
4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import estimate as est
from .construct import (
    ConstructionParams,
    MarginSchedule,
    HarmonicSchedule,
    build,
)
from .domain import PointC2, domain_to_doc
from .errors import CertificationError, NumericalError, SqueezeError, ValidationError
from .schema import validate_doc
from .metrics import Direction, bound_to_record, caratheodory_upper_slices
from .smooth import certify_smoothed, levi_verify, smooth

log = logging.getLogger("squeeze")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERTIFICATION = 3
EXIT_NUMERICAL = 4


@dataclass(frozen=True)
class RunConfig:
    """Reproducible run configuration; round-trips through JSON bit-exactly.

    Exact rationals (``a``, ``margin_u``) are stored as strings.
    """

    a: str = "2"
    levels: int = 3
    sequence: list | None = None
    schedule: str = "harmonic"
    margin_u: str = "0.05"
    margin_guard: float = 0.01
    smooth_h: float | None = None
    smooth_eps: float = 1e-5
    smooth_kappa: float = 50.0
    distance_resolution: int = 2048
    levi_points: int = 10000
    levi_tolerance: float = 1e-7
    est_degree: int = 6
    est_budget: int = 150
    est_restarts: int = 4
    est_samples: int = 2048
    seed: int = 20240501
    out: str = "run"

    def to_doc(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_doc(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    def construction_params(self) -> ConstructionParams:
        if self.schedule == "harmonic":
            sched = HarmonicSchedule()
        elif self.schedule == "margin":
            sched = MarginSchedule(self.margin_u)
        else:
            raise ValidationError(f"unknown schedule {self.schedule!r}")
        return ConstructionParams(
            a=self.a,
            levels=self.levels,
            a_sequence=list(self.sequence) if self.sequence else None,
            schedule=sched,
            margin_guard=self.margin_guard,
            distance_resolution=self.distance_resolution,
        )


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _write_csv(path: Path, rows) -> None:
    with path.open("w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


class _RunDir:
    """Output directory with a lock file preventing concurrent runs."""

    def __init__(self, out: str):
        self.path = Path(out)
        self.lock = self.path / ".lock"

    def __enter__(self) -> Path:
        self.path.mkdir(parents=True, exist_ok=True)
        try:
            self.lock.touch(exist_ok=False)
        except FileExistsError:
            raise ValidationError(
                f"output directory {self.path} is locked by another run"
            )
        return self.path

    def __exit__(self, *exc) -> None:
        self.lock.unlink(missing_ok=True)


def cmd_build(config: RunConfig) -> int:
    params = config.construction_params()
    with _RunDir(config.out) as out:
        domain, cert = build(params)
        _write_json(out / "domain.json", validate_doc("domain", domain_to_doc(domain)))
        _write_json(out / "certificate.json",
                    validate_doc("construction-certificate", cert.to_doc()))
        _write_csv(out / "certificate.csv", cert.to_csv_rows())
        for rec in cert.levels:
            log.info("level %d: C=%s n=%d s_upper=%.6g target=%s",
                     rec.k, rec.c_k, rec.n_k, rec.s_upper.value, rec.target)
        if all(rec.target_met for rec in cert.levels):
            return EXIT_OK
        return EXIT_CERTIFICATION


def cmd_certify_smoothed(config: RunConfig) -> int:
    params = config.construction_params()
    with _RunDir(config.out) as out:
        domain, cert = build(params)
        sd = smooth(domain, h=config.smooth_h, eps=config.smooth_eps,
                    kappa=config.smooth_kappa)
        report = levi_verify(sd, grid_points=config.levi_points,
                             tolerance=config.levi_tolerance)
        smoothed = certify_smoothed(sd, cert,
                                    resolution=config.distance_resolution)
        tgrid = np.linspace(domain.t_min, domain.t_max, 2001)
        rows = [["t", "phi", "phi_tilde"]]
        base_vals = domain.profile.eval_many(tgrid)
        smooth_vals = sd.profile.value(tgrid)
        for t, v, vs in zip(tgrid, base_vals, smooth_vals):
            rows.append([format(t, ".17g"), format(v, ".17g"), format(vs, ".17g")])
        _write_csv(out / "smooth_profile.csv", rows)
        _write_json(out / "levi_report.json",
                    validate_doc("levi-report", report.to_doc()))
        doc = smoothed.to_doc()
        doc["smoothing"] = {
            "h": format(sd.h, ".17g"),
            "eps": format(sd.eps, ".17g"),
            "kappa": format(sd.kappa, ".17g"),
        }
        _write_json(out / "smoothed_certificate.json",
                    validate_doc("construction-certificate", doc))
        log.info("levi min %.3g (tolerance %.3g); violation=%s margin=%s",
                 report.min_value, report.tolerance, smoothed.violation,
                 smoothed.margin)
        if not report.strictly_pseudoconvex_reported:
            return EXIT_CERTIFICATION
        if not smoothed.violation:
            return EXIT_CERTIFICATION
        if smoothed.margin is None or smoothed.margin < config.margin_guard:
            return EXIT_CERTIFICATION
        return EXIT_OK


def _estimate_payload(config: RunConfig):
    params = config.construction_params()
    domain, cert = build(params)
    points = []
    sandwich_ok = True
    trace_rows = [["point", "quantity", "restart", "objective", "feasibility_margin"]]

    for rec in cert.levels:
        t_k = math.log(rec.a_k)
        beta = math.exp(domain.profile.eval(t_k))
        p = PointC2(complex(rec.a_k, 0.0), 0.0 + 0.0j)
        entry = {"point": f"(a_{rec.k}, 0)"}
        if beta > 0.0:
            # direction of the certified bound, pulled back through the shear
            xi = Direction(complex(rec.a_k, 0.0), complex(beta, 0.0))
            k_cert_lower = math.sqrt(rec.m_k / 2.0)
            k_est, _disc, ktrace = est.kobayashi_upper_search(
                domain, p, xi, degree=config.est_degree, budget=config.est_budget,
                seed=config.seed + rec.k, samples=config.est_samples,
                restarts=config.est_restarts, return_trace=True)
            c_cert_upper = float(rec.c_k)
            c_est, _cand, ctrace = est.caratheodory_lower_search(
                domain, p, xi, budget=config.est_budget, seed=config.seed + rec.k,
                return_trace=True)
            k_ok = k_est.value >= k_cert_lower * (1.0 - 1e-9)
            c_ok = c_est.value <= c_cert_upper * (1.0 + 1e-9)
            sandwich_ok = sandwich_ok and k_ok and c_ok
            entry["kobayashi"] = {"certified_lower": format(k_cert_lower, ".17g"),
                                  "estimate_upper": bound_to_record(k_est),
                                  "sandwich_ok": k_ok}
            entry["caratheodory"] = {"certified_upper": format(c_cert_upper, ".17g"),
                                     "estimate_lower": bound_to_record(c_est),
                                     "sandwich_ok": c_ok}
            for ridx, objv, marg in ktrace:
                trace_rows.append([f"(a_{rec.k},0)", "kobayashi", str(ridx),
                                   format(objv, ".17g"), format(marg, ".17g")])
            for ridx, objv, marg in ctrace:
                trace_rows.append([f"(a_{rec.k},0)", "caratheodory", str(ridx),
                                   format(objv, ".17g"), format(marg, ".17g")])
        else:
            # profile so deep that exp(phi(t_k)) underflows: the pulled-back
            # direction is not representable, so no estimate is paired
            log.warning("level %d: face height underflows; skipping estimates",
                        rec.k)
            entry["skipped"] = "face height underflows double precision"
        points.append(entry)

    p1 = PointC2(1.0 + 0.0j, 0.0 + 0.0j)
    xi1 = Direction(1.0 + 0.0j, 1.0 + 0.0j)
    c_up = caratheodory_upper_slices(domain, p1, xi1)
    c_est1, _cand, ctrace1 = est.caratheodory_lower_search(
        domain, p1, xi1, budget=config.est_budget, seed=config.seed,
        return_trace=True)
    ok1 = c_est1.value <= c_up.value * (1.0 + 1e-9)
    sandwich_ok = sandwich_ok and ok1
    points.append({
        "point": "(1, 0)",
        "caratheodory": {"certified_upper": format(c_up.value, ".17g"),
                         "estimate_lower": bound_to_record(c_est1),
                         "sandwich_ok": ok1},
    })
    for ridx, objv, marg in ctrace1:
        trace_rows.append(["(1,0)", "caratheodory", str(ridx),
                           format(objv, ".17g"), format(marg, ".17g")])

    calibration = []
    cases = [
        ("bidisc", est.PolydiscModel(), PointC2(0.0 + 0.0j, 0.0 + 0.0j),
         Direction(1.0 + 0.0j, 1.0 + 0.0j)),
        ("ball", est.BallModel(), PointC2(0.0 + 0.0j, 0.0 + 0.0j),
         Direction(1.0 + 0.0j, 1.0 + 0.0j)),
        ("disc", est.PolydiscModel(), PointC2(0.0 + 0.0j, 0.0 + 0.0j),
         Direction(1.0 + 0.0j, 0.0 + 0.0j)),
    ]
    for name, model, p, xi in cases:
        k_ref, c_ref = est.reference_metric(
            "bidisc" if name == "disc" else name, p, xi)
        k_est2 = est.kobayashi_upper_search(
            model, p, xi, degree=config.est_degree, budget=config.est_budget,
            seed=config.seed, samples=config.est_samples,
            restarts=config.est_restarts)
        c_est2 = est.caratheodory_lower_search(
            model, p, xi, budget=config.est_budget, seed=config.seed)
        calibration.append({
            "model": name,
            "reference": format(k_ref, ".17g"),
            "kobayashi_estimate": format(k_est2.value, ".17g"),
            "caratheodory_estimate": format(c_est2.value, ".17g"),
            "kobayashi_within_5pct": abs(k_est2.value - k_ref) <= 0.05 * k_ref,
            "caratheodory_within_5pct": abs(c_est2.value - c_ref) <= 0.05 * c_ref,
        })

    doc = {
        "schema": "estimates/1",
        "certified": False,
        "points": points,
        "calibration": calibration,
        "sandwich_ok": sandwich_ok,
        "seed": config.seed,
    }
    return doc, trace_rows, sandwich_ok


def cmd_estimate(config: RunConfig) -> int:
    with _RunDir(config.out) as out:
        doc, trace_rows, sandwich_ok = _estimate_payload(config)
        _write_json(out / "estimates.json", validate_doc("estimates", doc))
        _write_csv(out / "estimate_traces.csv", trace_rows)
        return EXIT_OK if sandwich_ok else EXIT_CERTIFICATION


def cmd_plotdata(config: RunConfig) -> int:
    params = config.construction_params()
    with _RunDir(config.out) as out:
        domain, cert = build(params)
        sd = smooth(domain, h=config.smooth_h, eps=config.smooth_eps,
                    kappa=config.smooth_kappa)
        # profile rows: the level breakpoints plus the center (2K + 1 rows)
        ts = sorted({math.log(rec.a_k) for rec in cert.levels}
                    | {-math.log(rec.a_k) for rec in cert.levels} | {0.0})
        rows = [["t", "phi", "phi_tilde"]]
        for t in ts:
            rows.append([format(t, ".17g"),
                         format(domain.profile.eval(t), ".17g"),
                         format(float(sd.profile.value(np.asarray(t))), ".17g")])
        _write_csv(out / "profile.csv", rows)

        from .metrics import shear_normalize
        for rec in cert.levels:
            t_k = math.log(rec.a_k)
            idx = domain.profile.breakpoints.index(t_k)
            image, _ = shear_normalize(domain, idx)
            rows = [["s", "phi_sheared"]]
            for s, v in zip(image.profile.breakpoints, image.profile.values):
                rows.append([format(s, ".17g"), format(v, ".17g")])
            _write_csv(out / f"sheared_profile_level{rec.k}.csv", rows)

        rows = [["t", "kind", "value"]]
        for rec in cert.levels:
            for sign in (1.0, -1.0):
                rows.append([format(sign * math.log(rec.a_k), ".17g"),
                             "s_upper", format(rec.s_upper.value, ".17g")])
        from .metrics import squeezing_lower_inclusion
        for t in np.linspace(domain.t_min * 0.8, domain.t_max * 0.8, 17):
            p = PointC2(complex(math.exp(t), 0.0), 0.0 + 0.0j)
            try:
                b = squeezing_lower_inclusion(domain, p, config.distance_resolution)
                value = b.value
            except CertificationError:
                # domain razor-thin here: 0 is the (trivially valid) lower bound
                value = 0.0
            rows.append([format(t, ".17g"), "s_lower", format(value, ".17g")])
        _write_csv(out / "bound_curve.csv", rows)
        return EXIT_OK


def cmd_all(config: RunConfig) -> int:
    for fn in (cmd_build, cmd_certify_smoothed, cmd_estimate, cmd_plotdata):
        code = fn(config)
        if code != EXIT_OK:
            return code
    return EXIT_OK


_COMMANDS = {
    "build": cmd_build,
    "certify-smoothed": cmd_certify_smoothed,
    "estimate": cmd_estimate,
    "plot-data": cmd_plotdata,
    "all": cmd_all,
}


def _load_config(args) -> RunConfig:
    doc = {}
    if args.config:
        doc = json.loads(Path(args.config).read_text())
        validate_doc("run-config", doc)
    cfg = RunConfig.from_doc(doc)
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.levels is not None:
        overrides["levels"] = args.levels
    if args.margin is not None:
        overrides["schedule"] = "margin"
        overrides["margin_u"] = args.margin
    if args.grid is not None:
        overrides["distance_resolution"] = args.grid
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="squeeze",
        description=(
            "Build staircase Reinhardt domains, certify squeezing-function "
            "bounds, smooth and re-certify, estimate, and export plot data."
        ),
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON config file", default=None)
    parser.add_argument("--out", help="output directory", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--levels", type=int, default=None)
    parser.add_argument("--margin", default=None,
                        help="margin schedule target u (switches the schedule)")
    parser.add_argument("--grid", type=int, default=None,
                        help="certified distance grid resolution")
    args = parser.parse_args(argv)

    level = os.environ.get("SQUEEZE_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        config = _load_config(args)
        return _COMMANDS[args.command](config)
    except ValidationError as exc:
        log.error("validation: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CertificationError as exc:
        log.error("certification: %s", exc)
        print(f"certification failure: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION
    except (NumericalError, SqueezeError, ArithmeticError) as exc:
        log.error("numerical: %s", exc)
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
