"""Sensitivity estimation from trajectory ensembles.

One t1 ensemble is pushed through the interferometer at every phase of a
grid (exact common random numbers: the super-radiance dynamics do not
depend on the interferometer phase, so the same trajectories and the same
local-oscillator noise are reused everywhere).  Per phase this yields the
sample mean and unbiased variance of the combined signal; the slope of the
mean fringe comes from central differences (one-sided at the grid ends),
and the phase sensitivity is

    delta_phi = sqrt( V(S) / (d<S>/dphi)^2 ),    M = delta_phi * sqrt(N_t).

Confidence intervals are trajectory-level bootstrap: whole trajectories
are resampled and V(S), d<S>/dphi and M are recomputed jointly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .analytics import predict
from .config import RunConfig
from .dynamics import Ensemble, build_ensemble, transferred_atoms
from .interferometer import (
    HomodyneSpec,
    calibrate_correction_sign,
    lo_noise_samples,
    measure_signals,
    resolve_homodyne,
)
from .phasespace import quadrature_x, quadrature_y

_BOOTSTRAP_STREAM_BLOCK = 5  # Philox counter block disjoint from trajectory streams


@dataclass
class PhiGrid:
    """Strictly increasing, uniformly spaced phase grid."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("phi grid needs at least two points")
        d = np.diff(v)
        if np.any(d <= 0):
            raise ValueError("phi grid must be strictly increasing")
        if np.max(np.abs(d - d[0])) > 1e-12 * max(1.0, abs(d[0])):
            raise ValueError("phi grid must be uniformly spaced")
        self.values = v

    @classmethod
    def from_range(cls, start: float, stop: float, count: int) -> "PhiGrid":
        return cls(np.linspace(start, stop, count))

    @property
    def spacing(self) -> float:
        return float(self.values[1] - self.values[0])

    def __len__(self):
        return self.values.size


@dataclass
class SensitivityCurve:
    """Per-phase aggregates of one run."""

    phi: np.ndarray
    mean_s_a: np.ndarray
    var_s_a: np.ndarray
    mean_s_b: np.ndarray
    mean_s: np.ndarray
    var_s: np.ndarray
    ds_dphi: np.ndarray
    delta_phi: np.ndarray
    m: np.ndarray
    m_ci_lo: np.ndarray
    m_ci_hi: np.ndarray
    traj_count: int
    n_total: float
    correction_sign: str  # "plus", "minus" or "off"

    def min_m(self) -> tuple[float, float]:
        """(min M, argmin phi) over the grid, ignoring non-finite entries."""
        finite = np.isfinite(self.m)
        if not np.any(finite):
            return float("inf"), float("nan")
        k = np.argmin(np.where(finite, self.m, np.inf))
        return float(self.m[k]), float(self.phi[k])


@dataclass
class OptimumReport:
    r_star: float
    m_star: float
    atoms_transferred_at_star: float
    equivalent_atom_gain: float  # 1 / m_star^2
    at_boundary: bool = False


@dataclass
class RScanRow:
    r: float
    m: float
    m_ci_lo: float
    m_ci_hi: float
    transferred: float
    var_squeezed_combo: float
    m_plain: float
    m_recycled: float
    correction_sign: str
    drift_atoms: float
    drift_manley_rowe: float


@dataclass
class RScanResult:
    rows: list[RScanRow]
    report: OptimumReport


def signal_matrix(
    ensemble: Ensemble, grid: PhiGrid, spec: HomodyneSpec, correction: bool = True
) -> tuple[np.ndarray, np.ndarray, str]:
    """Combined-signal matrix S[trajectory, phi], the light record, and the sign used.

    An "auto" correction sign is calibrated at pi/2 before the sweep.  With
    correction disabled the matrix holds the bare atomic signal.
    """
    spec = resolve_homodyne(spec, ensemble)
    if correction and spec.correction_sign == "auto":
        spec = replace(spec, correction_sign=calibrate_correction_sign(ensemble, spec))
    lo_noise = lo_noise_samples(ensemble) if spec.lo_sampled else None

    n_phi = len(grid)
    s = np.empty((ensemble.n_traj, n_phi))
    s_b = None
    use_spec = spec if correction else replace(spec, correction_sign="auto")
    for k, phi in enumerate(grid.values):
        sample = measure_signals(ensemble, phi, use_spec, lo_noise)
        s[:, k] = sample.s_combined
        if s_b is None:
            s_b = sample.s_b  # light measured at t1; identical at every phi
    sign = spec.correction_sign if correction else "off"
    return s, s_b, sign


def point_statistics(s_matrix: np.ndarray, grid: PhiGrid, n_total: float) -> dict:
    """Mean, variance, fringe slope, delta_phi and M per grid point."""
    mean_s = s_matrix.mean(axis=0)
    var_s = s_matrix.var(axis=0, ddof=1)
    ds = np.gradient(mean_s, grid.spacing)
    with np.errstate(divide="ignore"):
        delta_phi = np.where(ds != 0.0, np.sqrt(var_s) / np.abs(ds), np.inf)
    return {
        "mean_s": mean_s,
        "var_s": var_s,
        "ds_dphi": ds,
        "delta_phi": delta_phi,
        "m": delta_phi * np.sqrt(n_total),
    }


def _bootstrap_rng(master_seed: int) -> np.random.Generator:
    counter = [0, 0, 0, _BOOTSTRAP_STREAM_BLOCK]
    return np.random.Generator(
        np.random.Philox(key=master_seed & 0xFFFFFFFFFFFFFFFF, counter=counter)
    )


def bootstrap_ci(
    s_matrix: np.ndarray,
    grid: PhiGrid,
    n_total: float,
    resamples: int = 200,
    quantile: float = 0.95,
    master_seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Percentile bootstrap interval for M at every grid point.

    Whole trajectories are resampled so the variance and the fringe slope are
    recomputed jointly.  Grid points where the resampled slope vanishes give
    infinite M and show up as infinite interval edges (flagged, not masked).
    """
    if resamples < 100:
        raise ValueError("resamples must be >= 100")
    n_traj = s_matrix.shape[0]
    if n_traj < 2:
        raise ValueError("too few trajectories to bootstrap")
    rng = _bootstrap_rng(master_seed)
    ms = np.empty((resamples, s_matrix.shape[1]))
    for b in range(resamples):
        idx = rng.integers(0, n_traj, size=n_traj)
        ms[b] = point_statistics(s_matrix[idx], grid, n_total)["m"]
    lo_q = 100.0 * (1.0 - quantile) / 2.0
    return (
        np.percentile(ms, lo_q, axis=0),
        np.percentile(ms, 100.0 - lo_q, axis=0),
    )


def sensitivity_curve(
    ensemble: Ensemble,
    grid: PhiGrid,
    spec: HomodyneSpec,
    n_total: float | None = None,
    correction: bool = True,
    resamples: int = 200,
    quantile: float = 0.95,
) -> SensitivityCurve:
    """Full per-phase sensitivity analysis of one ensemble."""
    if ensemble.n_traj < 100:
        raise ValueError("need at least 100 trajectories")
    if n_total is None:
        n_total = ensemble.n_total

    s, s_b, sign = signal_matrix(ensemble, grid, spec, correction)
    stats = point_statistics(s, grid, n_total)

    # the atomic record alone, for the fringe and scatter diagnostics
    s_a = s if sign == "off" else None
    if s_a is None:
        s_a, _, _ = signal_matrix(ensemble, grid, spec, correction=False)
    mean_s_a = s_a.mean(axis=0)
    var_s_a = s_a.var(axis=0, ddof=1)

    ci_lo, ci_hi = bootstrap_ci(
        s, grid, n_total, resamples=resamples, quantile=quantile,
        master_seed=ensemble.master_seed,
    )
    return SensitivityCurve(
        phi=grid.values.copy(),
        mean_s_a=mean_s_a,
        var_s_a=var_s_a,
        mean_s_b=np.full(len(grid), float(np.mean(s_b))),
        mean_s=stats["mean_s"],
        var_s=stats["var_s"],
        ds_dphi=stats["ds_dphi"],
        delta_phi=stats["delta_phi"],
        m=stats["m"],
        m_ci_lo=ci_lo,
        m_ci_hi=ci_hi,
        traj_count=ensemble.n_traj,
        n_total=float(n_total),
        correction_sign=sign,
    )


def m_at_phi(
    ensemble: Ensemble,
    spec: HomodyneSpec,
    phi: float = np.pi / 2,
    half_step: float = np.pi / 100,
    correction: bool = True,
    resamples: int | None = None,
) -> tuple[float, tuple[float, float], str]:
    """M at a single working phase from a three-point local grid.

    Returns (m, (ci_lo, ci_hi), correction_sign); the interval collapses to
    the point value when resamples is None.
    """
    grid = PhiGrid(np.array([phi - half_step, phi, phi + half_step]))
    s, _, sign = signal_matrix(ensemble, grid, spec, correction)
    m = float(point_statistics(s, grid, ensemble.n_total)["m"][1])
    if resamples is None:
        return m, (m, m), sign
    lo, hi = bootstrap_ci(
        s, grid, ensemble.n_total, resamples=resamples, master_seed=ensemble.master_seed
    )
    return m, (float(lo[1]), float(hi[1])), sign


def squeezed_combo_variance(ensemble: Ensemble) -> float:
    """Sample variance of the correlated quadrature pair X_a2 + Y_b2 at t1."""
    combo = quadrature_x(ensemble.state.alpha2) + quadrature_y(ensemble.state.beta2)
    return float(np.var(combo, ddof=1))


def scan_over_r(r_values, config: RunConfig) -> RScanResult:
    """Evaluate M at phi = pi/2 for each r and locate the optimum.

    In "analytic" mode the rows come from the closed undepleted-pump forms
    (exact, no sampling); otherwise each r gets its own ensemble, sign
    calibration and bootstrap interval.
    """
    r_values = [float(v) for v in r_values]
    if not r_values:
        raise ValueError("r_values must be non-empty")
    if any(v < 0 for v in r_values):
        raise ValueError("r_values must be >= 0")

    rows = []
    for r in r_values:
        pred = predict(r, config.n_total)
        if config.mode == "analytic":
            m = pred.m_plain if config.correction == "off" else pred.m_recycled
            rows.append(RScanRow(
                r=r, m=m, m_ci_lo=m, m_ci_hi=m,
                transferred=(config.n_seed + 1.0) * np.sinh(r) ** 2,
                var_squeezed_combo=pred.var_squeezed_combo,
                m_plain=pred.m_plain, m_recycled=pred.m_recycled,
                correction_sign="off" if config.correction == "off" else "plus",
                drift_atoms=0.0, drift_manley_rowe=0.0,
            ))
            continue

        ensemble = build_ensemble(
            config.n_total, config.n_seed, r, config.trajectories,
            config.master_seed, mode=config.mode,
            steps_per_unit_r=config.steps_per_unit_r, n_threads=config.threads,
        )
        spec = HomodyneSpec(
            gain_g=config.gain_g, lo_sampled=config.lo_sampled,
            correction_sign="plus" if config.correction == "on" else "auto",
        )
        m, (lo, hi), sign = m_at_phi(
            ensemble, spec, correction=(config.correction != "off"),
            resamples=config.bootstrap_resamples,
        )
        rows.append(RScanRow(
            r=r, m=m, m_ci_lo=lo, m_ci_hi=hi,
            transferred=transferred_atoms(ensemble),
            var_squeezed_combo=squeezed_combo_variance(ensemble),
            m_plain=pred.m_plain, m_recycled=pred.m_recycled,
            correction_sign=sign,
            drift_atoms=ensemble.conservation.max_rel_drift_atoms,
            drift_manley_rowe=ensemble.conservation.max_rel_drift_manley_rowe,
        ))

    k = int(np.argmin([row.m for row in rows]))
    best = rows[k]
    report = OptimumReport(
        r_star=best.r,
        m_star=best.m,
        atoms_transferred_at_star=best.transferred,
        equivalent_atom_gain=1.0 / best.m**2 if best.m > 0 else float("inf"),
        at_boundary=(k == 0 or k == len(rows) - 1) and len(rows) > 1,
    )
    return RScanResult(rows=rows, report=report)


def optimum_over_r(r_values, config: RunConfig) -> OptimumReport:
    """Convenience wrapper returning only the optimum of scan_over_r."""
    return scan_over_r(r_values, config).report
