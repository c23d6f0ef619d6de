"""Reproducible stochastic realizations of the zero-point-field intensity.

Two process families are provided: pure white-noise energy increments
(Wiener accumulation with coefficient Sigma, so the accumulated energy over
a time T has standard deviation Sigma*sqrt(T)) and an exactly-discretized
Ornstein-Uhlenbeck intensity with coherence time tau_c.  The colored process
exists so that the white-noise validity condition (coherence time much
shorter than the detection time) is itself testable.

All randomness flows through counter-based Philox substreams keyed by a
:class:`SeedSpec`, so identical seeds give bit-identical output under any
degree of parallelism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MAX_SEED = 2**64


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one independent random substream.

    Distinct ``stream_index`` values under the same ``master_seed`` yield
    statistically independent substreams.  Consumers that need many streams
    (one per Monte Carlo trial) occupy a contiguous block of stream indexes
    starting at their base ``stream_index``; see :meth:`substream`.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed < _MAX_SEED):
            raise ValueError(
                f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}"
            )
        if self.stream_index < 0:
            raise ValueError(f"stream_index must be >= 0, got {self.stream_index}")

    def substream(self, offset: int) -> "SeedSpec":
        """The seed spec ``offset`` streams after this one."""
        return SeedSpec(self.master_seed, self.stream_index + offset)


def generator(seed: SeedSpec) -> np.random.Generator:
    """Counter-based generator for the substream addressed by ``seed``.

    Philox is keyed through a SeedSequence on (master_seed, stream_index),
    so the mapping seed -> stream is pure: no global state, safe to call
    concurrently, bit-identical on every run.
    """
    ss = np.random.SeedSequence(
        entropy=seed.master_seed, spawn_key=(seed.stream_index,)
    )
    return np.random.Generator(np.random.Philox(seed=ss))


@dataclass(frozen=True)
class NoiseModel:
    """Parameters of the ZPF intensity process.

    ``kind`` selects the white-noise limit (parameter ``Sigma``, units
    energy/sqrt(time)) or the colored Ornstein-Uhlenbeck model (stationary
    intensity dispersion ``sigma_I`` and coherence time ``tau_c``).  ``I0``
    is the mean ZPF intensity; detectors subtract it before accumulating, so
    only the fluctuating part matters downstream and the field is carried
    for bookkeeping.
    """

    kind: str = "white"
    Sigma: float = 1.0
    sigma_I: float = 0.0
    tau_c: float = 1.0
    I0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("white", "colored"):
            raise ValueError(f"kind must be 'white' or 'colored', got {self.kind!r}")
        if self.Sigma < 0:
            raise ValueError(f"Sigma must be >= 0, got {self.Sigma}")
        if self.sigma_I < 0:
            raise ValueError(f"sigma_I must be >= 0, got {self.sigma_I}")
        if self.tau_c <= 0:
            raise ValueError(f"tau_c must be > 0, got {self.tau_c}")
        if self.I0 < 0:
            raise ValueError(f"I0 must be >= 0, got {self.I0}")

    @classmethod
    def white(cls, Sigma: float, I0: float = 0.0) -> "NoiseModel":
        return cls(kind="white", Sigma=Sigma, I0=I0)

    @classmethod
    def colored(cls, sigma_I: float, tau_c: float, I0: float = 0.0) -> "NoiseModel":
        return cls(kind="colored", sigma_I=sigma_I, tau_c=tau_c, I0=I0)

    @property
    def effective_sigma(self) -> float:
        """White-noise coefficient of the accumulated energy.

        For the colored model the integrated process has long-time variance
        sigma_I**2 * 2 * tau_c * T, so the effective coefficient is
        sigma_I * sqrt(2 * tau_c); for the white model it is Sigma itself.
        """
        if self.kind == "white":
            return self.Sigma
        return self.sigma_I * math.sqrt(2.0 * self.tau_c)


def wiener_increments(
    Sigma: float, dt: float, n: int, seed: SeedSpec
) -> np.ndarray:
    """Independent Gaussian energy increments of a Wiener accumulation.

    Parameters
    ----------
    Sigma : float
        Accumulated-energy dispersion coefficient (>= 0); the running sum of
        k increments has variance Sigma**2 * k * dt.
    dt : float
        Time step, > 0.
    n : int
        Number of increments, >= 1.
    seed : SeedSpec
        Substream to draw from.

    Returns
    -------
    numpy.ndarray
        n increments, each N(0, Sigma**2 * dt).
    """
    if Sigma < 0:
        raise ValueError(f"Sigma must be >= 0, got {Sigma}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = generator(seed)
    return rng.standard_normal(int(n)) * (Sigma * math.sqrt(dt))


def ou_intensity_path(
    sigma_I: float, tau_c: float, dt: float, n: int, seed: SeedSpec
) -> np.ndarray:
    """Stationary zero-mean Ornstein-Uhlenbeck intensity path.

    Uses the exact discretization (decay factor exp(-dt/tau_c), innovation
    variance sigma_I**2 * (1 - exp(-2 dt/tau_c))), not an Euler update, so
    the samples have exactly the stationary variance sigma_I**2 and
    autocorrelation exp(-lag/tau_c) at every dt.

    Parameters
    ----------
    sigma_I : float
        Stationary standard deviation of the intensity, >= 0.
    tau_c : float
        Coherence (autocorrelation) time, > 0.
    dt : float
        Sampling step, > 0.
    n : int
        Number of samples, >= 1.  Sample 0 is itself a stationary draw.
    seed : SeedSpec
        Substream to draw from.
    """
    if sigma_I < 0:
        raise ValueError(f"sigma_I must be >= 0, got {sigma_I}")
    if tau_c <= 0:
        raise ValueError(f"tau_c must be > 0, got {tau_c}")
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    rng = generator(seed)
    z = rng.standard_normal(int(n))
    a = math.exp(-dt / tau_c)
    innov_sd = sigma_I * math.sqrt(-math.expm1(-2.0 * dt / tau_c))
    if n == 1:
        return sigma_I * z

    # AR(1) recursion x[k] = a x[k-1] + innov_sd z[k], started from the
    # stationary draw sigma_I z[0]; lfilter evaluates it in C.
    from scipy.signal import lfilter

    x0 = sigma_I * z[0]
    driven, _ = lfilter([1.0], [1.0, -a], innov_sd * z[1:], zi=[a * x0])
    out = np.empty(int(n))
    out[0] = x0
    out[1:] = driven
    return out
