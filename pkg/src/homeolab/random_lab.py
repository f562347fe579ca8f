"""Monte Carlo experiments over the two witness families.

Interval trials draw a tent map ``f_a`` and classify ``g^-1 o f_a``; circle
trials draw a rotation ``R_alpha`` and classify ``R_alpha o f``.  Parameters
are dyadic rationals, so every trial is classified exactly.

Each trial's parameter depends only on ``(seed, trial)``, and reports are
aggregated in trial order, so a run is byte-identical for any worker count.
"""
from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import circle_dynamics as cd
from .circle_dynamics import CircleLift, CircleNonHaarNull
from .interval_dynamics import HaarNull, NonHaarNull, classify
from .pl_core import CeilingExceeded, PLMap, compose, invert, tent
from .rational import ONE, Rat, fmt, rat, sqrt_bounds

REPORT_SCHEMA = "homeolab.report/1"
CSV_SCHEMA = "homeolab.trials/1"
CSV_FIELDS = ("trial", "parameter", "verdict", "label", "certificate_id")
RESOURCE_FAILURE = "resource-failure"

# 1.96 as an exact rational
Z95 = rat(49, 25)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    trials: int
    seed: int = 7
    bits: int = 32
    q_max: int = cd.DEFAULT_QMAX
    n_iter: int = cd.DEFAULT_NITER

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.bits < 8:
            raise ValueError("bits must be at least 8")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned value")

    def echo(self, family: str) -> dict:
        out = {"family": family, "trials": self.trials, "seed": self.seed, "bits": self.bits}
        if family == "circle":
            out.update(q_max=self.q_max, n_iter=self.n_iter)
        return out


def trial_word(seed: int, trial: int, bits: int) -> int:
    """Uniform integer in [0, 2^bits) derived from seed xor trial."""
    ss = np.random.SeedSequence((seed ^ trial) & _MASK64)
    n_words = (bits + 31) // 32
    words = ss.generate_state(n_words, dtype=np.uint32)
    value = 0
    for w in words:
        value = (value << 32) | int(w)
    return value & ((1 << bits) - 1)


def tent_parameter(j: int, bits: int) -> Rat:
    return rat(1, 4) + rat(j, 1 << (bits + 1))


def sample_tent(seed: int, bits: int, trial: int = 0) -> tuple[Rat, PLMap]:
    if bits < 8:
        raise ValueError("bits must be at least 8")
    a = tent_parameter(trial_word(seed, trial, bits), bits)
    return a, tent(a)


def sample_rotation(seed: int, bits: int, trial: int = 0) -> tuple[Rat, CircleLift]:
    if bits < 8:
        raise ValueError("bits must be at least 8")
    alpha = rat(trial_word(seed, trial, bits), 1 << bits)
    return alpha, cd.rigid(alpha)


# ---------------------------------------------------------------------------
# per-trial work


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    parameter: Rat
    verdict: str
    label: str
    detail: dict = field(default_factory=dict)
    # circle runs: (K, q) for non-Haar-null outcomes
    periodic: tuple | None = None

    @property
    def certificate_id(self) -> str:
        return f"t{self.trial}" if self.detail else ""


def _interval_trial(g_inv: PLMap, seed: int, bits: int, trial: int) -> TrialOutcome:
    a, fa = sample_tent(seed, bits, trial)
    try:
        cls = classify(compose(g_inv, fa))
    except CeilingExceeded as exc:
        return TrialOutcome(trial, a, RESOURCE_FAILURE, RESOURCE_FAILURE, {"error": str(exc)})
    if isinstance(cls, NonHaarNull):
        return TrialOutcome(trial, a, "non-haar-null", f"{cls.n}/{cls.first_sign.value}")
    return TrialOutcome(trial, a, "haar-null", cls.reason.value, cls.to_json())


def _circle_trial(f: CircleLift, cfg: SamplerConfig, trial: int) -> TrialOutcome:
    alpha, _ = sample_rotation(cfg.seed, cfg.bits, trial)
    try:
        cls = cd.classify_circle(f.shifted(alpha).normalized(), cfg.q_max, cfg.n_iter)
    except CeilingExceeded as exc:
        return TrialOutcome(trial, alpha, RESOURCE_FAILURE, RESOURCE_FAILURE, {"error": str(exc)})
    if isinstance(cls, CircleNonHaarNull):
        label = f"{cls.rotation} k={cls.k}"
        return TrialOutcome(trial, alpha, "non-haar-null", label,
                            periodic=(cls.point_count, cls.rotation.q))
    if isinstance(cls, cd.CircleHaarNull):
        return TrialOutcome(trial, alpha, "haar-null", cls.reason.value, cls.to_json())
    return TrialOutcome(trial, alpha, "undetermined", "undetermined", cls.to_json())


def _interval_chunk(args) -> list[TrialOutcome]:
    g_inv, seed, bits, lo, hi = args
    return [_interval_trial(g_inv, seed, bits, t) for t in range(lo, hi)]


def _circle_chunk(args) -> list[TrialOutcome]:
    f, cfg, lo, hi = args
    return [_circle_trial(f, cfg, t) for t in range(lo, hi)]


def _chunks(n: int, workers: int) -> list[tuple[int, int]]:
    size = max(1, -(-n // (workers * 4)))
    return [(lo, min(n, lo + size)) for lo in range(0, n, size)]


def _run(fn: Callable, jobs: list, workers: int) -> list[TrialOutcome]:
    if workers <= 1:
        results = [fn(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, jobs))
    out = [o for chunk in results for o in chunk]
    out.sort(key=lambda o: o.trial)
    return out


# ---------------------------------------------------------------------------
# reports


def wilson_interval(successes: int, trials: int) -> tuple[Rat, Rat]:
    """95% Wilson score interval, exact rational arithmetic, rounded outward.

    The square root is bracketed by rationals and its upper bound is used on
    both sides, so the interval can only widen; ends are clamped to [0, 1].
    """
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials and trials >= 1")
    n = rat(trials)
    p = rat(successes) / n
    z2 = Z95 * Z95
    denom = 1 + z2 / n
    centre = p + z2 / (2 * n)
    _, root = sqrt_bounds(p * (1 - p) / n + z2 / (4 * n * n))
    lo = (centre - Z95 * root) / denom
    hi = (centre + Z95 * root) / denom
    if successes == 0:
        lo = rat(0)
    if successes == trials:
        hi = ONE
    return max(lo, rat(0)), min(hi, ONE)


def _fraction_entry(k: int, n: int) -> dict:
    lo, hi = wilson_interval(k, n)
    return {"count": k, "fraction": fmt(rat(k, n)), "wilson95": [fmt(lo), fmt(hi)]}


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    outcomes: tuple

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def counts(self) -> dict:
        return dict(Counter(o.verdict for o in self.outcomes))

    def count(self, verdict: str) -> int:
        return sum(1 for o in self.outcomes if o.verdict == verdict)

    def fraction(self, verdict: str) -> Rat:
        return rat(self.count(verdict), self.trials)

    @property
    def histogram(self) -> dict:
        return dict(Counter(o.label for o in self.outcomes if o.verdict == "non-haar-null"))

    @property
    def exceptions(self) -> list[TrialOutcome]:
        return [o for o in self.outcomes if o.verdict != "non-haar-null"]

    def to_json(self) -> dict:
        n = self.trials
        verdicts = sorted(self.counts)
        out = {
            "schema": REPORT_SCHEMA,
            "config": self.config,
            "trials": n,
            "counts": {v: self.count(v) for v in verdicts},
            "fractions": {v: _fraction_entry(self.count(v), n) for v in verdicts},
            "histogram": dict(sorted(self.histogram.items())),
            "certificates": [
                {"id": o.certificate_id, "trial": o.trial, "parameter": fmt(o.parameter),
                 "verdict": o.verdict, "label": o.label, "detail": o.detail}
                for o in self.exceptions
            ],
        }
        if self.config.get("family") == "circle":
            resolved = n - self.count("undetermined")
            out["resolved"] = resolved
            out["parity"] = self.parity_tally()
        return out

    def parity_tally(self) -> dict:
        """Orbit-count parity among non-Haar-null outcomes: K mod 2q == 0 or not."""
        ok = bad = 0
        for o in self.outcomes:
            if o.periodic is None:
                continue
            K, q = o.periodic
            if K % (2 * q) == 0:
                ok += 1
            else:
                bad += 1
        return {"divisible": ok, "violations": bad}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {CSV_SCHEMA}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for o in self.outcomes:
            w.writerow([o.trial, fmt(o.parameter), o.verdict, o.label, o.certificate_id])
        return buf.getvalue()


def experiment_interval(g: PLMap, config: SamplerConfig, workers: int = 1) -> ExperimentReport:
    g_inv = invert(g)
    jobs = [(g_inv, config.seed, config.bits, lo, hi) for lo, hi in _chunks(config.trials, workers)]
    return ExperimentReport(config.echo("interval"), tuple(_run(_interval_chunk, jobs, workers)))


def experiment_circle(f: CircleLift, config: SamplerConfig, workers: int = 1) -> ExperimentReport:
    f = f.normalized()
    jobs = [(f, config, lo, hi) for lo, hi in _chunks(config.trials, workers)]
    return ExperimentReport(config.echo("circle"), tuple(_run(_circle_chunk, jobs, workers)))


def recheck_certificate(g: PLMap, outcome: TrialOutcome) -> bool:
    """Re-run the interval classifier on a recorded parameter."""
    cls = classify(compose(invert(g), tent(outcome.parameter)))
    return isinstance(cls, HaarNull) and cls.to_json() == outcome.detail
