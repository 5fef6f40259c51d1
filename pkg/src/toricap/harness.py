"""Capacity curves along geometric-mean interpolation and inequality checks.

For ``Q_t = (1-t) Q0 + t Q1`` and weights ``c0, c1 > 0`` with
``c_t = (1-t) c0 + t c1`` the checks are

* weighted Brunn-Minkowski:
  ``c_t^(n+1) Cap_t <= (1-t) c0^(n+1) Cap_0 + t c1^(n+1) Cap_1``;
* concavity of ``V(t) = Cap_t^(-1/(n+1))`` (reported for equilibrated weights);
* log-convexity ``Cap_t <= Cap_0^(1-t) Cap_1^t``;
* reverse Brunn-Minkowski for volumes ``Vol(K_t) >= Vol_0^(1-t) Vol_1^t``;
* the same weighted inequality for covolumes of copolar combinations, which
  must reproduce the capacity numbers through ``Cap = n! Covol``.

Slacks are always ``RHS - LHS``, signed and never clamped.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .covolume import DEFAULT_SAMPLES, capacity, covolume, normalize_method
from .geodesic import GeodesicSpec, WeightedExtremal, equality_case_detect
from .orthant import GeneratorSet, copolar, copolar_add, interpolate
from .simplex import NumericalError
from .toric import ReinhardtSpec, geometric_mean, log_image, volume

CSV_COLUMNS = ("t", "c_t", "cap", "covol", "V", "rho", "bm_slack", "logconv_slack", "std_err")
DEFAULT_T_GRID = tuple(k / 10 for k in range(11))


@dataclass(frozen=True)
class Tolerances:
    ineq_slack: float = 1e-9
    exact_eq: float = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    set0: ReinhardtSpec
    set1: ReinhardtSpec
    weights: tuple[float, float] | str = "equilibrated"
    t_grid: tuple[float, ...] = DEFAULT_T_GRID
    method: str = "exact"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.set0.dim != self.set1.dim:
            raise ValueError("set0 and set1 have different dimensions")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid or any(not 0.0 <= t <= 1.0 for t in grid):
            raise ValueError("t_grid must be a nonempty list of values in [0, 1]")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing")
        object.__setattr__(self, "t_grid", grid)
        if isinstance(self.weights, str):
            if self.weights != "equilibrated":
                raise ValueError("weights must be [c0, c1] or 'equilibrated'")
        else:
            c0, c1 = (float(c) for c in self.weights)
            if not (c0 > 0 and c1 > 0):
                raise ValueError("weights must be positive")
            object.__setattr__(self, "weights", (c0, c1))
        normalize_method(self.method)
        if self.samples < 1:
            raise ValueError("samples must be positive")

    @property
    def dim(self) -> int:
        return self.set0.dim

    @property
    def weight_mode(self) -> str:
        return "equilibrated" if isinstance(self.weights, str) else "explicit"

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        try:
            set0 = ReinhardtSpec.from_json(data["set0"])
            set1 = ReinhardtSpec.from_json(data["set1"])
        except KeyError as exc:
            raise ValueError(f"config is missing {exc.args[0]!r}") from None
        if "n" in data and int(data["n"]) != set0.dim:
            raise ValueError(f"config says n={data['n']} but sets have dimension {set0.dim}")
        if "t_grid" in data:
            grid = tuple(data["t_grid"])
        elif "t_count" in data:
            k = int(data["t_count"])
            if k < 2:
                raise ValueError("t_count must be at least 2")
            grid = tuple(np.linspace(0.0, 1.0, k).tolist())
        else:
            grid = DEFAULT_T_GRID
        weights = data.get("weights", "equilibrated")
        if not isinstance(weights, str):
            weights = tuple(weights)
            if len(weights) != 2:
                raise ValueError("weights must have two entries")
        tol = data.get("tolerances", {})
        return cls(
            set0=set0,
            set1=set1,
            weights=weights,
            t_grid=grid,
            method=data.get("method", "exact"),
            samples=int(data.get("samples", DEFAULT_SAMPLES)),
            seed=int(data.get("seed", 0)),
            tolerances=Tolerances(**tol),
        )

    def to_json(self) -> dict:
        return {
            "n": self.dim,
            "set0": self.set0.to_json(),
            "set1": self.set1.to_json(),
            "weights": self.weights if isinstance(self.weights, str) else list(self.weights),
            "t_grid": list(self.t_grid),
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": {"ineq_slack": self.tolerances.ineq_slack, "exact_eq": self.tolerances.exact_eq},
        }

    def with_weights(self, weights) -> "ExperimentConfig":
        d = self.to_json()
        d["weights"] = weights if isinstance(weights, str) else list(weights)
        return ExperimentConfig.from_json(d)


@dataclass(frozen=True)
class CurveRow:
    t: float
    c_t: float
    cap: float
    covol: float
    V: float
    rho: float
    bm_slack: float
    logconv_slack: float
    std_err: float
    error: str | None = None


@dataclass(frozen=True)
class CapacityReport:
    n: int
    weights: tuple[float, float]
    weight_mode: str
    cap0: float
    cap1: float
    rows: tuple[CurveRow, ...]
    concavity_max_second_difference: float | None
    equality_case: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow([format(getattr(row, col), ".17g") for col in CSV_COLUMNS])
        return buf.getvalue()


def _cap_pair(Q0, Q1, method, samples, seed):
    cap0 = capacity(interpolate(Q0, Q1, 0.0), method, samples, seed).value
    cap1 = capacity(interpolate(Q0, Q1, 1.0), method, samples, seed).value
    return cap0, cap1


def equilibrate_from_capacities(cap0: float, cap1: float, n: int) -> tuple[float, float]:
    if not (cap0 > 0 and cap1 > 0) or not (math.isfinite(cap0) and math.isfinite(cap1)):
        raise NumericalError(f"cannot equilibrate capacities {cap0}, {cap1}")
    return 1.0, (cap0 / cap1) ** (1.0 / (n + 1))


def equilibrate_weights(
    Q0: GeneratorSet,
    Q1: GeneratorSet,
    method: str = "exact",
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> tuple[float, float]:
    """Weights with ``c0^(n+1) Cap_0 = c1^(n+1) Cap_1`` and ``c0 = 1``."""
    return equilibrate_from_capacities(*_cap_pair(Q0, Q1, method, samples, seed), Q0.dim)


def second_differences(t: Sequence[float], v: Sequence[float]) -> np.ndarray:
    """``2 * (chord - midpoint value)`` over consecutive triples; <= 0 for concave data.

    On a uniform grid this is the usual ``v[i-1] - 2 v[i] + v[i+1]``.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    if len(t) < 3:
        return np.zeros(0)
    t1, t2, t3 = t[:-2], t[1:-1], t[2:]
    chord = ((t3 - t2) * v[:-2] + (t2 - t1) * v[2:]) / (t3 - t1)
    return 2.0 * (chord - v[1:-1])


def run_capacity_curve(config: ExperimentConfig) -> CapacityReport:
    n = config.dim
    Q0, Q1 = log_image(config.set0), log_image(config.set1)
    method, samples, seed = config.method, config.samples, config.seed
    cap0, cap1 = _cap_pair(Q0, Q1, method, samples, seed)
    if config.weight_mode == "equilibrated":
        c0, c1 = equilibrate_from_capacities(cap0, cap1, n)
    else:
        c0, c1 = config.weights
    fact = math.factorial(n)
    rows = []
    for t in config.t_grid:
        c_t = (1 - t) * c0 + t * c1
        try:
            res = capacity(interpolate(Q0, Q1, t), method, samples, seed)
            cap = res.value
            if not cap > 0:
                raise NumericalError(f"non-positive capacity {cap} at t={t}")
            rhs = (1 - t) * c0 ** (n + 1) * cap0 + t * c1 ** (n + 1) * cap1
            rows.append(CurveRow(
                t=t,
                c_t=c_t,
                cap=cap,
                covol=cap / fact,
                V=cap ** (-1.0 / (n + 1)),
                rho=cap ** (1.0 / (n + 1)),
                bm_slack=rhs - c_t ** (n + 1) * cap,
                logconv_slack=cap0 ** (1 - t) * cap1**t - cap,
                std_err=res.std_err,
            ))
        except (NumericalError, ValueError) as exc:
            nan = float("nan")
            rows.append(CurveRow(t, c_t, nan, nan, nan, nan, nan, nan, nan, error=str(exc)))
    concavity = None
    if config.weight_mode == "equilibrated":
        good = [r for r in rows if r.error is None]
        d2 = second_differences([r.t for r in good], [r.V for r in good])
        concavity = float(d2.max()) if d2.size else 0.0
    spec = GeodesicSpec(WeightedExtremal(Q0, c0), WeightedExtremal(Q1, c1))
    return CapacityReport(
        n=n,
        weights=(c0, c1),
        weight_mode=config.weight_mode,
        cap0=cap0,
        cap1=cap1,
        rows=tuple(rows),
        concavity_max_second_difference=concavity,
        equality_case=equality_case_detect(spec),
    )


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    worst: float
    detail: str = ""


def _failed_rows(report: CapacityReport) -> list[CurveRow]:
    return [r for r in report.rows if r.error is not None]


def check_weighted_bm(report: CapacityReport, tol: float = 1e-9) -> CheckOutcome:
    slacks = [r.bm_slack for r in report.rows if r.error is None]
    worst = min(slacks) if slacks else float("nan")
    ok = bool(slacks) and worst >= -tol and not _failed_rows(report)
    return CheckOutcome("weighted_bm", ok, worst, "min over t of RHS - LHS")


def check_concavity(report: CapacityReport, tol: float = 1e-9) -> CheckOutcome:
    """Concavity of ``t -> Cap_t^(-1/(n+1))`` from discrete second differences."""
    if report.weight_mode != "equilibrated":
        raise ValueError("concavity is checked on curves with equilibrated weights")
    good = [r for r in report.rows if r.error is None]
    if len(good) < 3:
        raise ValueError("concavity needs at least three grid points")
    d2 = second_differences([r.t for r in good], [r.V for r in good])
    worst = float(d2.max())
    return CheckOutcome("concavity", worst <= tol and not _failed_rows(report), worst, "max second difference of V")


def check_logconvexity(report: CapacityReport, tol: float = 1e-9) -> CheckOutcome:
    slacks = [r.logconv_slack for r in report.rows if r.error is None]
    worst = min(slacks) if slacks else float("nan")
    ok = bool(slacks) and worst >= -tol and not _failed_rows(report)
    return CheckOutcome("logconvexity", ok, worst, "min over t of Cap_0^(1-t) Cap_1^t - Cap_t")


def check_volume_reverse_bm(config: ExperimentConfig) -> CheckOutcome:
    """``Vol(K_t) >= Vol_0^(1-t) Vol_1^t`` up to three propagated standard errors."""
    kw = dict(method=config.method, samples=config.samples, seed=config.seed)
    v0 = volume(config.set0, **kw)
    v1 = volume(config.set1, **kw)
    worst = math.inf
    ok = True
    for t in config.t_grid:
        vt = volume(geometric_mean(config.set0, config.set1, t), **kw)
        rhs = v0.value ** (1 - t) * v1.value**t
        err = math.sqrt(
            vt.std_err**2
            + (rhs * (1 - t) * v0.std_err / v0.value) ** 2
            + (rhs * t * v1.std_err / v1.value) ** 2
        )
        margin = vt.value - rhs + 3.0 * err
        ok &= margin >= -config.tolerances.ineq_slack * max(1.0, rhs)
        worst = min(worst, margin)
    return CheckOutcome("volume_reverse_bm", bool(ok), worst, "min over t of Vol_t - Vol_0^(1-t) Vol_1^t + 3 sigma")


def check_copolar_add(config: ExperimentConfig, report: CapacityReport | None = None) -> CheckOutcome:
    """Weighted inequality for covolumes of copolar combinations.

    Also confirms that ``n! Covol(P_t)`` reproduces the capacity curve to
    ``1e-12`` (relative to ``max(1, Cap_t)``).
    """
    report = run_capacity_curve(config) if report is None else report
    n = report.n
    fact = math.factorial(n)
    c0, c1 = report.weights
    Q0, Q1 = log_image(config.set0), log_image(config.set1)
    P0, P1 = copolar(Q0), copolar(Q1)
    kw = dict(method=config.method, samples=config.samples, seed=config.seed)
    cov0 = covolume(copolar_add(P0, P1, 0.0), **kw).value
    cov1 = covolume(copolar_add(P0, P1, 1.0), **kw).value
    worst = math.inf
    ok = True
    dictionary_gap = 0.0
    for row in report.rows:
        if row.error is not None:
            ok = False
            continue
        t = row.t
        cov = covolume(copolar_add(P0, P1, t), **kw).value
        slack = (1 - t) * c0 ** (n + 1) * cov0 + t * c1 ** (n + 1) * cov1 - row.c_t ** (n + 1) * cov
        worst = min(worst, slack)
        ok &= slack >= -config.tolerances.ineq_slack
        dictionary_gap = max(dictionary_gap, abs(fact * cov - row.cap) / max(1.0, row.cap))
    ok &= dictionary_gap <= 1e-12
    return CheckOutcome("copolar_add", bool(ok), worst, f"dictionary gap {dictionary_gap:.3g}")


def run_all_checks(config: ExperimentConfig) -> list[CheckOutcome]:
    tol = config.tolerances.ineq_slack
    report = run_capacity_curve(config)
    eq_report = report if config.weight_mode == "equilibrated" else run_capacity_curve(config.with_weights("equilibrated"))
    return [
        check_weighted_bm(report, tol),
        check_concavity(eq_report, tol),
        check_logconvexity(report, tol),
        check_volume_reverse_bm(config),
        check_copolar_add(config, report),
    ]


def homothety_exponent(report: CapacityReport, lam: float) -> np.ndarray:
    """Exponent ``p`` with ``Cap_t = ((1-t) + t lam)^p Cap_0`` at each interior row.

    Meaningful when ``Q1 = lam * Q0``; the scaling law predicts ``p = -n``.
    """
    out = []
    for r in report.rows:
        base = (1 - r.t) + r.t * lam
        if r.error is None and 0.0 < r.t and base != 1.0:
            out.append(math.log(r.cap / report.cap0) / math.log(base))
    return np.array(out)


def slack_vanishes(report: CapacityReport, rel: float = 1e-9) -> bool:
    """Whether every weighted BM slack is zero relative to the right-hand side."""
    n = report.n
    c0, c1 = report.weights
    for r in report.rows:
        scale_ = (1 - r.t) * c0 ** (n + 1) * report.cap0 + r.t * c1 ** (n + 1) * report.cap1
        if r.error is not None or abs(r.bm_slack) > rel * max(1.0, scale_):
            return False
    return True


def random_generator_set(rng: np.random.Generator, n: int, low: float = -3.0, high: float = -0.2, max_generators: int = 4) -> GeneratorSet:
    m = int(rng.integers(1, max_generators + 1))
    return GeneratorSet(rng.uniform(low, high, size=(m, n)))


def random_config(rng: np.random.Generator, n: int | None = None, weights="random", **kw) -> ExperimentConfig:
    """Random pair with ``n`` in {1, 2, 3}, 1-4 generators each, coordinates in [-3, -0.2]."""
    n = int(rng.integers(1, 4)) if n is None else n
    Q0 = random_generator_set(rng, n)
    Q1 = random_generator_set(rng, n)
    if weights == "random":
        weights = tuple(np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2)).tolist())
    return ExperimentConfig(ReinhardtSpec.from_generators(Q0), ReinhardtSpec.from_generators(Q1), weights=weights, **kw)


def selftest(count: int = 100, seed: int = 0, volume_samples: int = 20_000) -> list[tuple[ExperimentConfig, CheckOutcome]]:
    """Run every check on ``count`` random instances; return the failures."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(count):
        cfg = random_config(rng, samples=volume_samples, seed=seed + k)
        for outcome in run_all_checks(cfg):
            if not outcome.passed:
                failures.append((cfg, outcome))
    return failures


def dump_instance(config: ExperimentConfig, outcome: CheckOutcome) -> str:
    return json.dumps({"check": outcome.name, "worst": outcome.worst, "detail": outcome.detail, "config": config.to_json()})
