"""Two-detector coincidence counting on correlated noisy beams.

Two pieces live here.  First, the counting-rate inequality for a
fixed-window detector pair illuminated by beams whose only correlation is
in their intensity fluctuations:

    R12 < (1 + (sigma/I_s)**2) * T * R1**2,

together with its algebraic inversion: given measured R1, R12 and assumed
window T, what minimal window or minimal fluctuation ratio would make the
measurement consistent.  For typical correlated-beam data the required T
approaches 1/R1, far beyond any plausible detection window, which is the
reductio this bound exists to expose.

Second, a Monte Carlo of two free-running threshold detectors whose input
intensities share a tunable fraction of their fluctuation variance,

    I_i(t) = I_s + sqrt(c) * f_shared(t) + sqrt(1 - c) * f_i(t),

with all fluctuation processes independent realizations of the same noise
model.  Coincidences are event pairs closer than the window; the accidental
background uses the 2*w*R1*R2 convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _engine
from .first_passage import FirstPassageDetector, rate_analytic
from .noise import NoiseModel, SeedSpec, generator

__all__ = [
    "CorrelatedBeamPair",
    "CoincidenceConfig",
    "CoincidenceResult",
    "Verdict",
    "InsufficientStatisticsError",
    "coincidence_bound",
    "consistency_verdict",
    "simulate_coincidences",
]


class InsufficientStatisticsError(RuntimeError):
    """A simulated run produced too few counts to estimate rates."""


def coincidence_bound(R1: float, T: float, sigma_over_Is: float) -> float:
    """Upper bound (1 + (sigma/I_s)**2) * T * R1**2 on the coincidence rate.

    Monotone increasing in each argument.  ``sigma_over_Is`` is the relative
    fluctuation of the beam intensity within the detection window T.
    """
    if R1 < 0:
        raise ValueError(f"R1 must be nonnegative, got {R1}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if sigma_over_Is < 0:
        raise ValueError(f"sigma_over_Is must be nonnegative, got {sigma_over_Is}")
    return (1.0 + sigma_over_Is**2) * T * R1**2


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking a coincidence measurement against the rate bound.

    When the bound is violated, ``required_T_min`` is the smallest window
    (at the given fluctuation ratio) and ``required_sigma_ratio_min`` the
    smallest fluctuation ratio (at the given window) that would restore
    consistency; both are None when the data already satisfy the bound.
    Substituting either minimum back into the bound reproduces R12 exactly.
    """

    R1: float
    R12: float
    T: float
    sigma_over_Is: float
    bound: float
    consistent: bool
    required_T_min: float | None = None
    required_sigma_ratio_min: float | None = None


def consistency_verdict(R1: float, R12: float, T: float, sigma_over_Is: float) -> Verdict:
    """Check R12 < (1 + ratio**2) * T * R1**2 and invert it when violated.

    A violated bound admits two escapes: a detection window of at least
    R12 / ((1 + ratio**2) * R1**2), or a fluctuation ratio of at least
    sqrt(R12 / (T * R1**2) - 1).  R12 = 0 is always consistent.
    """
    if R12 < 0:
        raise ValueError(f"R12 must be nonnegative, got {R12}")
    b = coincidence_bound(R1, T, sigma_over_Is)
    if R12 < b or R12 == 0.0:
        return Verdict(R1, R12, T, sigma_over_Is, b, True)
    if R1 == 0:
        return Verdict(R1, R12, T, sigma_over_Is, b, False, math.inf, math.inf)
    t_min = R12 / ((1.0 + sigma_over_Is**2) * R1**2)
    ratio_min = math.sqrt(R12 / (T * R1**2) - 1.0)
    return Verdict(R1, R12, T, sigma_over_Is, b, False, t_min, ratio_min)


@dataclass(frozen=True)
class CorrelatedBeamPair:
    """Two beams with a common signal level and partially shared fluctuations.

    ``correlation`` is the fraction of the fluctuation variance common to
    both beams: 0 gives independent noise, 1 identical noise.
    """

    I_s: float
    correlation: float
    noise: NoiseModel

    def __post_init__(self):
        if self.I_s < 0:
            raise ValueError(f"I_s must be nonnegative, got {self.I_s}")
        if not 0.0 <= self.correlation <= 1.0:
            raise ValueError(f"correlation must lie in [0, 1], got {self.correlation}")


@dataclass(frozen=True)
class CoincidenceConfig:
    """Run geometry for a coincidence simulation.

    ``dt`` is the integration step of the underlying accumulation process
    and must divide the coincidence window, which keeps the pair criterion
    |t1 - t2| < window exact in integer steps.
    """

    window: float
    duration: float
    detectors: tuple[FirstPassageDetector, FirstPassageDetector]
    dt: float

    def __post_init__(self):
        if not self.window > 0:
            raise ValueError(f"window must be positive, got {self.window}")
        if not self.duration > 100.0 * self.window:
            raise ValueError(
                f"duration must exceed 100 windows, got duration={self.duration} "
                f"with window={self.window}"
            )
        if len(self.detectors) != 2:
            raise ValueError("detectors must be a pair")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        ratio = self.window / self.dt
        if abs(ratio - round(ratio)) > 1e-9 * ratio or round(ratio) < 1:
            raise ValueError(
                f"dt={self.dt} must divide window={self.window} into a whole "
                "number of steps"
            )

    @property
    def window_steps(self) -> int:
        return round(self.window / self.dt)

    @property
    def n_steps(self) -> int:
        return int(self.duration / self.dt)


@dataclass(frozen=True)
class CoincidenceResult:
    """Counting summary of a two-detector run.

    ``accidental_estimate`` uses the 2*window*R1*R2 convention for the
    chance-pair rate of independent renewal streams; ``excess`` is the
    measured coincidence rate above it.  ``excess_stderr`` propagates
    Poisson errors on the pair and singles counts.  Event times are the
    full count records, reproducible from the seed.
    """

    R1: float
    R2: float
    R12: float
    accidental_estimate: float
    excess: float
    excess_stderr: float
    n1: int
    n2: int
    n_pairs: int
    duration: float
    window: float
    event_times_1: np.ndarray
    event_times_2: np.ndarray


def _count_pairs(ev1: np.ndarray, ev2: np.ndarray, window_steps: int) -> int:
    # events in integer steps; |k1 - k2| < W means ev2 in [k1-W+1, k1+W-1]
    lo = np.searchsorted(ev2, ev1 - window_steps + 1, side="left")
    hi = np.searchsorted(ev2, ev1 + window_steps, side="left")
    return int(np.sum(hi - lo))


def simulate_coincidences(
    pair: CorrelatedBeamPair,
    config: CoincidenceConfig,
    seed: SeedSpec = SeedSpec(0),
) -> CoincidenceResult:
    """Run both accumulation detectors through the same noisy time base.

    The run consumes three dedicated substreams of ``seed`` (shared
    fluctuation, detector 1, detector 2), so repeating it with the same
    seed reproduces the event records exactly.  Each detector resets to
    zero stored energy after a count and stays blind for its dead time;
    fluctuations keep evolving while a detector is blind.
    """
    det1, det2 = config.detectors
    noise = pair.noise
    dt = config.dt
    n_steps = config.n_steps
    if n_steps < 1:
        raise ValueError("duration shorter than one step")

    # generous event capacity from the analytic singles rate; the kernel
    # reports overflow and the run is replayed with a larger buffer, which
    # is deterministic because the substreams are recreated from scratch
    cap = 1024
    for det in (det1, det2):
        if noise.effective_sigma > 0 or pair.I_s > 0:
            r = rate_analytic(
                FirstPassageDetector(det.E_m, noise.effective_sigma), pair.I_s
            )
            cap = max(cap, int(1.5 * r * config.duration) + 64)

    c = pair.correlation
    while True:
        ev1 = np.empty(cap, dtype=np.int64)
        ev2 = np.empty(cap, dtype=np.int64)
        gen_sh = generator(seed.substream(0))
        gen_1 = generator(seed.substream(1))
        gen_2 = generator(seed.substream(2))
        if noise.kind == "white":
            sig_step = noise.Sigma * math.sqrt(dt)
            n1, n2, overflow = _engine.coincidence_white(
                gen_sh, gen_1, gen_2,
                det1.E_m, det2.E_m, pair.I_s * dt,
                math.sqrt(c) * sig_step, math.sqrt(1.0 - c) * sig_step,
                n_steps,
                round(det1.dead_time / dt), round(det2.dead_time / dt),
                ev1, ev2,
            )
        else:
            decay = math.exp(-dt / noise.tau_c)
            innov_sd = noise.sigma_I * math.sqrt(-math.expm1(-2.0 * dt / noise.tau_c))
            n1, n2, overflow = _engine.coincidence_colored(
                gen_sh, gen_1, gen_2,
                det1.E_m, det2.E_m, pair.I_s * dt, dt,
                math.sqrt(c), math.sqrt(1.0 - c),
                decay, innov_sd, noise.sigma_I,
                n_steps,
                round(det1.dead_time / dt), round(det2.dead_time / dt),
                ev1, ev2,
            )
        if not overflow:
            break
        cap *= 4

    if n1 == 0 or n2 == 0:
        raise InsufficientStatisticsError(
            f"no counts on detector {'1' if n1 == 0 else '2'} in duration="
            f"{config.duration}; extend the duration or raise the noise level"
        )

    ev1 = ev1[:n1]
    ev2 = ev2[:n2]
    n_pairs = _count_pairs(ev1, ev2, config.window_steps)

    dur = config.duration
    w = config.window
    R1 = n1 / dur
    R2 = n2 / dur
    R12 = n_pairs / dur
    accidental = 2.0 * w * R1 * R2
    excess = R12 - accidental
    # Poisson errors; a floor of one pair keeps the stderr usable at zero counts
    var_r12 = max(n_pairs, 1) / dur**2
    var_acc = (2.0 * w) ** 2 * (R2**2 * n1 + R1**2 * n2) / dur**2
    excess_stderr = math.sqrt(var_r12 + var_acc)

    return CoincidenceResult(
        R1=R1, R2=R2, R12=R12,
        accidental_estimate=accidental, excess=excess, excess_stderr=excess_stderr,
        n1=int(n1), n2=int(n2), n_pairs=n_pairs,
        duration=dur, window=w,
        event_times_1=(ev1 + 1) * dt, event_times_2=(ev2 + 1) * dt,
    )
