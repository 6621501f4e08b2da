"""Measurement chain after the super-radiance step.

Atoms: a Mach-Zehnder sequence of two 50/50 Raman beam splitters with the
phase to be estimated imprinted on the transferred mode between them, then
the number difference S_a = N2 - N1 at t3.

Light: the scattered mode leaves the condensate at the end of the
super-radiance step and is detected independently of the atomic
interferometer, so beta2 is measured at its t1 value.  Homodyne detection
mixes it with a strong local oscillator on a 50/50 beam splitter and takes
the photon number difference between the output ports,
S_b = |c|^2 - |d|^2 = -2 Im(beta2 conj(beta_LO)).

The combined signal S = S_a -/+ S_b / g removes the quantum noise the two
records share.  Which sign cancels (rather than doubles) the shared noise
depends on the working phase, so it is calibrated from the ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import Ensemble
from .phasespace import ModeTriple, occupation, sample_coherent_batch

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

SIGN_VALUES = {"plus": 1.0, "minus": -1.0}


@dataclass
class HomodyneSpec:
    """Local-oscillator and correction settings.

    gain_g: ratio of LO amplitude to the mean pump amplitude at t1.
    lo_amplitude: beta_LO; derived from gain_g and the ensemble when None.
    lo_sampled: include the LO's own vacuum (shot) noise.
    correction_sign: "plus", "minus", or "auto" (calibrate before combining).
    """

    gain_g: float = 100.0
    lo_amplitude: float | None = None
    lo_sampled: bool = True
    correction_sign: str = "auto"

    def __post_init__(self):
        if not (np.isfinite(self.gain_g) and self.gain_g > 0):
            raise ValueError("gain_g must be finite and > 0")
        if self.correction_sign not in ("plus", "minus", "auto"):
            raise ValueError(f"unknown correction_sign {self.correction_sign!r}")


@dataclass
class SignalSample:
    """Per-trajectory signals at one interferometer phase (array-valued)."""

    s_a: np.ndarray
    s_b: np.ndarray
    s_combined: np.ndarray
    phi: float


def beam_splitter_half(state: ModeTriple) -> ModeTriple:
    """50/50 Raman transition on the two atomic modes; the light is untouched.

    alpha1' = (alpha1 - i alpha2) / sqrt(2)
    alpha2' = (alpha2 - i alpha1) / sqrt(2)
    """
    a1 = (state.alpha1 - 1j * state.alpha2) * _INV_SQRT2
    a2 = (state.alpha2 - 1j * state.alpha1) * _INV_SQRT2
    return replace(state, alpha1=a1, alpha2=a2)


def phase_imprint(state: ModeTriple, phi: float) -> ModeTriple:
    """Multiply the transferred mode by exp(i phi)."""
    return replace(state, alpha2=state.alpha2 * np.exp(1j * phi))


def run_mzi(state: ModeTriple, phi: float) -> ModeTriple:
    """Full Mach-Zehnder: splitter, phase imprint on mode 2, splitter.

    Requires a t1 state and returns the t3 state.
    """
    if state.time_tag != "t1":
        raise ValueError(f"run_mzi needs a t1 state, got {state.time_tag}")
    out = beam_splitter_half(phase_imprint(beam_splitter_half(state), phi))
    return state.advanced(out.alpha1, out.alpha2, out.beta2, "t3")


def signal_atoms(state: ModeTriple) -> np.ndarray | float:
    """Number difference N2 - N1 at the interferometer output.

    The symmetric-ordering 1/2 offsets cancel in the difference.
    """
    if state.time_tag != "t3":
        raise ValueError(f"signal_atoms needs a t3 state, got {state.time_tag}")
    return np.abs(state.alpha2) ** 2 - np.abs(state.alpha1) ** 2


def signal_light(state: ModeTriple, spec: HomodyneSpec, lo_noise=0.0) -> np.ndarray | float:
    """Homodyne photon-number difference for the scattered light.

    The LO amplitude is spec.lo_amplitude, plus lo_noise when spec.lo_sampled
    (the caller draws it once per trajectory and reuses it across phases).
    Equal to -2 Im(beta2 conj(beta_LO)).
    """
    if spec.lo_amplitude is None:
        raise ValueError("lo_amplitude not set; call resolve_homodyne first")
    if lo_noise is None:
        lo_noise = 0.0
    beta_lo = spec.lo_amplitude + (lo_noise if spec.lo_sampled else 0.0)
    c = (state.beta2 - 1j * beta_lo) * _INV_SQRT2
    d = (beta_lo - 1j * state.beta2) * _INV_SQRT2
    return np.abs(c) ** 2 - np.abs(d) ** 2


def combine_signals(s_a, s_b, spec: HomodyneSpec):
    """S = s_a - sign * s_b / g with the resolved correction sign."""
    if spec.correction_sign == "auto":
        raise ValueError("correction_sign is unresolved; calibrate or set it explicitly")
    sign = SIGN_VALUES[spec.correction_sign]
    return s_a - sign * s_b / spec.gain_g


def resolve_homodyne(spec: HomodyneSpec, ensemble: Ensemble) -> HomodyneSpec:
    """Fill in the derived LO amplitude: beta_LO = g * sqrt(<N1(t1)>)."""
    if spec.lo_amplitude is not None:
        return spec
    n1 = max(occupation(ensemble.state.alpha1), 0.0)
    return replace(spec, lo_amplitude=spec.gain_g * np.sqrt(n1))


def lo_noise_samples(ensemble: Ensemble) -> np.ndarray:
    """Per-trajectory LO vacuum noise, reused across all phases."""
    return sample_coherent_batch(0.0, ensemble.master_seed, "local_oscillator", ensemble.n_traj)


def measure_signals(
    ensemble: Ensemble,
    phi: float,
    spec: HomodyneSpec,
    lo_noise: np.ndarray | None = None,
) -> SignalSample:
    """All three signals over the ensemble at one phase.

    The light signal is evaluated on the t1 amplitudes; only the atoms pass
    through the interferometer.  With correction_sign "auto" the combined
    signal is left as s_a (calibrate first for a corrected signal).
    """
    spec = resolve_homodyne(spec, ensemble)
    if lo_noise is None and spec.lo_sampled:
        lo_noise = lo_noise_samples(ensemble)
    s_a = np.asarray(signal_atoms(run_mzi(ensemble.state, phi)), dtype=float)
    s_b = np.asarray(signal_light(ensemble.state, spec, lo_noise), dtype=float)
    if spec.correction_sign == "auto":
        s = s_a.copy()
    else:
        s = np.asarray(combine_signals(s_a, s_b, spec), dtype=float)
    return SignalSample(s_a=s_a, s_b=s_b, s_combined=s, phi=phi)


def calibrate_correction_sign(
    ensemble: Ensemble, spec: HomodyneSpec, phi_ref: float = np.pi / 2
) -> str:
    """Pick the correction sign with the smaller V(S) at the reference phase.

    Ties break toward "plus".  At the standard working point phi = pi/2 the
    chosen sign subtracts the shared noise; a half fringe away the
    correlation flips and the opposite sign would be chosen.
    """
    if ensemble.n_traj == 0:
        raise ValueError("empty ensemble")
    spec = resolve_homodyne(spec, ensemble)
    lo_noise = lo_noise_samples(ensemble) if spec.lo_sampled else None
    sample = measure_signals(ensemble, phi_ref, replace(spec, correction_sign="auto"), lo_noise)
    var_plus = float(np.var(sample.s_a - sample.s_b / spec.gain_g, ddof=1))
    var_minus = float(np.var(sample.s_a + sample.s_b / spec.gain_g, ddof=1))
    return "plus" if var_plus <= var_minus else "minus"


def detected_photons(ensemble: Ensemble, spec: HomodyneSpec) -> float:
    """Total photons hitting the homodyne detectors: LO plus scattered light.

    Used for the photon-inclusive sensitivity bound 1/sqrt(N_atoms + N_photons).
    """
    spec = resolve_homodyne(spec, ensemble)
    return float(spec.lo_amplitude**2 + max(occupation(ensemble.state.beta2), 0.0))
