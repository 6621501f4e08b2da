"""Propagation through the Raman super-radiance step.

The c-number equations of motion for (alpha1, alpha2, beta2) are

    i d(alpha1)/dt = -G beta2 alpha2
    i d(alpha2)/dt = -G alpha1 conj(beta2)
    i d(beta2)/dt  = -G alpha1 conj(alpha2)

with coupling G = 1 in simulation units.  Time is rescaled so the
integration variable is s = sqrt(N1(0)) * t, which runs from 0 to the
squeezing parameter r; the physical time and coupling never appear
separately.  Two exact invariants are tracked per trajectory:

    |alpha1|^2 + |alpha2|^2          (atom number)
    |alpha2|^2 - |beta2|^2           (Manley-Rowe: one photon per atom)

With the pump clamped to its classical amplitude sqrt(N1(0)) the pair
(alpha2, beta2) obeys the exact two-mode Bogoliubov map

    alpha2(t1) = alpha2(0) cosh r + i conj(beta2(0)) sinh r
    beta2(t1)  = beta2(0) cosh r + i conj(alpha2(0)) sinh r

which is used both as the undepleted-pump propagator and as an oracle for
the integrator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .phasespace import (
    ModeTriple,
    occupation,
    sample_coherent_batch,
    sample_initial_ensemble,
)

EVOLUTION_MODES = ("tw", "analytic", "clamped", "decorrelated")

DEFAULT_STEPS_PER_UNIT_R = 400


class IntegrationError(RuntimeError):
    """Raised when the integrator produces a non-finite amplitude."""

    def __init__(self, step_index: int, snapshot: ModeTriple):
        self.step_index = step_index
        self.snapshot = snapshot
        super().__init__(f"non-finite state at step {step_index}")


@dataclass
class IntegratorSpec:
    """Step control and pump treatment for evolve_tw.

    clamp_pump:      drive the alpha2/beta2 pair with the classical pump
                     amplitude sqrt(N1(0)) and leave alpha1 untouched
                     (undepleted-pump mode).
    decorrelate_pump: after full evolution, replace alpha1 by an independent
                     coherent sample of equal mean occupation (diagnostic;
                     requires a master seed for the resample stream).
    """

    steps_per_unit_r: int = DEFAULT_STEPS_PER_UNIT_R
    method: str = "rk4"
    clamp_pump: bool = False
    decorrelate_pump: bool = False

    def __post_init__(self):
        if self.steps_per_unit_r < 1:
            raise ValueError("steps_per_unit_r must be >= 1")
        if self.method != "rk4":
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class ConservationReport:
    """Worst relative drift of the two exact invariants over a run.

    Atom-number drift is relative to the per-trajectory initial total;
    Manley-Rowe drift is relative to the largest |alpha2|^2 + |beta2|^2
    reached during the run (the difference itself starts near zero, so its
    own magnitude is not a usable scale).  In clamped mode atom number is
    intentionally not conserved and its drift is reported as 0.
    """

    max_rel_drift_atoms: float = 0.0
    max_rel_drift_manley_rowe: float = 0.0


def _require_time_tag(state: ModeTriple, tag: str):
    if state.time_tag != tag:
        raise ValueError(f"expected state at {tag}, got {state.time_tag}")


def evolve_analytic(state: ModeTriple, r: float) -> ModeTriple:
    """Exact undepleted-pump (Bogoliubov) propagation from t0 to t1."""
    _require_time_tag(state, "t0")
    if r < 0 or not np.isfinite(r):
        raise ValueError("r must be finite and >= 0")
    ch, sh = np.cosh(r), np.sinh(r)
    a2 = state.alpha2 * ch + 1j * np.conj(state.beta2) * sh
    b2 = state.beta2 * ch + 1j * np.conj(state.alpha2) * sh
    return state.advanced(np.copy(state.alpha1), a2, b2, "t1")


def _rk4_rhs_full(inv_sq_n1):
    def f(a1, a2, b2):
        return (
            1j * b2 * a2 * inv_sq_n1,
            1j * a1 * np.conj(b2) * inv_sq_n1,
            1j * a1 * np.conj(a2) * inv_sq_n1,
        )

    return f


def _rk4_rhs_clamped():
    # pump replaced by its classical amplitude; the sqrt(N1(0)) factors cancel
    def f(a1, a2, b2):
        return (
            np.zeros_like(a1),
            1j * np.conj(b2),
            1j * np.conj(a2),
        )

    return f


def _integrate(a1, a2, b2, r, spec: IntegratorSpec, n_pump0: float):
    """Returns amplitudes plus raw drift extrema (combined into a report later,
    so chunked execution aggregates exactly like a single pass)."""
    n_steps = int(np.ceil(spec.steps_per_unit_r * r))
    if n_steps == 0:
        return a1, a2, b2, 0.0, 0.0, 1.0
    h = r / n_steps

    if spec.clamp_pump:
        f = _rk4_rhs_clamped()
    else:
        f = _rk4_rhs_full(1.0 / np.sqrt(n_pump0))

    tot0 = np.abs(a1) ** 2 + np.abs(a2) ** 2
    mr0 = np.abs(a2) ** 2 - np.abs(b2) ** 2
    dev_atoms = np.zeros_like(tot0)
    dev_mr = np.zeros_like(mr0)
    scale_mr = np.abs(a2) ** 2 + np.abs(b2) ** 2

    with np.errstate(invalid="ignore", over="ignore"):  # probe handles non-finites
        for step in range(n_steps):
            k1 = f(a1, a2, b2)
            k2 = f(a1 + 0.5 * h * k1[0], a2 + 0.5 * h * k1[1], b2 + 0.5 * h * k1[2])
            k3 = f(a1 + 0.5 * h * k2[0], a2 + 0.5 * h * k2[1], b2 + 0.5 * h * k2[2])
            k4 = f(a1 + h * k3[0], a2 + h * k3[1], b2 + h * k3[2])
            a1 = a1 + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            a2 = a2 + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            b2 = b2 + (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])

            probe = a1 + a2 + b2  # NaN/Inf propagate through the sum
            if not np.all(np.isfinite(probe)):
                raise IntegrationError(step, ModeTriple(a1, a2, b2, "t0"))

            n2 = np.abs(a2) ** 2
            nb = np.abs(b2) ** 2
            if not spec.clamp_pump:
                np.maximum(dev_atoms, np.abs(np.abs(a1) ** 2 + n2 - tot0), out=dev_atoms)
            np.maximum(dev_mr, np.abs(n2 - nb - mr0), out=dev_mr)
            np.maximum(scale_mr, n2 + nb, out=scale_mr)

    rel_atoms = 0.0 if spec.clamp_pump else float(np.max(dev_atoms / tot0))
    return a1, a2, b2, rel_atoms, float(np.max(dev_mr)), float(np.max(scale_mr))


def evolve_tw(
    state: ModeTriple,
    r: float,
    spec: IntegratorSpec | None = None,
    n_pump0: float | None = None,
    master_seed: int | None = None,
    n_threads: int = 1,
) -> tuple[ModeTriple, ConservationReport]:
    """Integrate the full c-number equations from t0 to t1 with fixed-step RK4.

    Parameters
    ----------
    state : ModeTriple at t0 (scalar or ensemble)
    r : squeezing parameter; the rescaled time runs from 0 to r
    spec : step control and pump treatment
    n_pump0 : nominal initial pump occupation N1(0) used for the time
        rescaling.  Defaults to the symmetric-ordering estimate from the
        state itself.
    master_seed : required when spec.decorrelate_pump is set
    n_threads : split the ensemble into contiguous chunks evolved in
        parallel.  All operations are elementwise per trajectory, so the
        result is bit-identical at any thread count.

    Returns the state at t1 and the conservation drift over the run.
    r = 0 returns the input amplitudes unchanged (zero steps).
    """
    _require_time_tag(state, "t0")
    if r < 0 or not np.isfinite(r):
        raise ValueError("r must be finite and >= 0")
    spec = spec or IntegratorSpec()
    if spec.decorrelate_pump and master_seed is None:
        raise ValueError("decorrelate_pump needs a master_seed for the resample stream")

    if n_pump0 is None:
        n_pump0 = max(occupation(state.alpha1), 1.0)

    a1 = np.atleast_1d(np.asarray(state.alpha1, dtype=np.complex128)).copy()
    a2 = np.atleast_1d(np.asarray(state.alpha2, dtype=np.complex128)).copy()
    b2 = np.atleast_1d(np.asarray(state.beta2, dtype=np.complex128)).copy()

    if n_threads > 1 and a1.size > 1:
        from concurrent.futures import ThreadPoolExecutor

        bounds = np.linspace(0, a1.size, n_threads + 1, dtype=int)
        chunks = [(a1[i:j], a2[i:j], b2[i:j]) for i, j in zip(bounds[:-1], bounds[1:]) if j > i]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(
                pool.map(lambda c: _integrate(c[0], c[1], c[2], r, spec, n_pump0), chunks)
            )
        a1 = np.concatenate([p[0] for p in parts])
        a2 = np.concatenate([p[1] for p in parts])
        b2 = np.concatenate([p[2] for p in parts])
        rel_atoms = max(p[3] for p in parts)
        dev_mr = max(p[4] for p in parts)
        scale_mr = max(p[5] for p in parts)
    else:
        a1, a2, b2, rel_atoms, dev_mr, scale_mr = _integrate(a1, a2, b2, r, spec, n_pump0)
    report = ConservationReport(
        max_rel_drift_atoms=rel_atoms,
        max_rel_drift_manley_rowe=dev_mr / max(1.0, scale_mr),
    )

    if spec.decorrelate_pump:
        mean_amp = np.sqrt(max(occupation(a1), 0.0))
        a1 = sample_coherent_batch(mean_amp, master_seed, "pump_resample", a1.size)

    if np.isscalar(state.alpha1) or np.ndim(state.alpha1) == 0:
        out = state.advanced(complex(a1[0]), complex(a2[0]), complex(b2[0]), "t1")
    else:
        out = state.advanced(a1, a2, b2, "t1")
    return out, report


@dataclass
class Ensemble:
    """A t1 trajectory ensemble plus the run metadata needed downstream.

    The same ensemble is reused across every interferometer phase (common
    random numbers): the dynamics do not depend on phi, so re-evolving per
    phase would only add sampling noise to phase differences.
    """

    state: ModeTriple
    master_seed: int
    n_total: float
    n_seed: float
    r: float
    mode: str = "tw"
    conservation: ConservationReport = field(default_factory=ConservationReport)

    @property
    def n_traj(self) -> int:
        return self.state.n_traj


def build_ensemble(
    n_total: float,
    n_seed: float,
    r: float,
    n_traj: int,
    master_seed: int,
    mode: str = "tw",
    steps_per_unit_r: int = DEFAULT_STEPS_PER_UNIT_R,
    n_threads: int = 1,
) -> Ensemble:
    """Sample an initial ensemble and propagate it through the super-radiance step.

    mode: "tw" (full dynamics), "clamped" (pump held classical),
    "analytic" (exact Bogoliubov map), or "decorrelated" (full dynamics,
    then the pump is swapped for an uncorrelated coherent state).
    """
    if mode not in EVOLUTION_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    t0 = sample_initial_ensemble(n_total, n_seed, master_seed, n_traj)
    n_pump0 = n_total - n_seed
    if mode == "analytic":
        t1, report = evolve_analytic(t0, r), ConservationReport()
    else:
        spec = IntegratorSpec(
            steps_per_unit_r=steps_per_unit_r,
            clamp_pump=(mode == "clamped"),
            decorrelate_pump=(mode == "decorrelated"),
        )
        t1, report = evolve_tw(
            t0, r, spec, n_pump0=n_pump0, master_seed=master_seed, n_threads=n_threads
        )
    return Ensemble(t1, master_seed, n_total, n_seed, r, mode, report)


def transferred_atoms(ensemble: Ensemble, n_seed: float | None = None) -> float:
    """Atoms moved into the transferred mode during the super-radiance step.

    mean(|alpha2(t1)|^2) - 1/2 - n_seed.
    """
    if ensemble.n_traj == 0:
        raise ValueError("empty ensemble")
    if n_seed is None:
        n_seed = ensemble.n_seed
    return occupation(ensemble.state.alpha2) - n_seed
