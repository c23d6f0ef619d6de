"""Compiled inner loops for the Monte Carlo simulators.

All kernels draw scalars from numpy Generators passed in by the caller, so
stream identity (one counter-based Philox substream per trial) lives
entirely outside this module.

The white-noise first-passage kernel accelerates long excursions far from
the threshold by drawing the exact Gaussian law of a whole block of steps
in one variate.  A block of m steps is skipped only when the drift over the
block plus ``skip_sigmas`` standard deviations of its accumulated noise
still stays below the remaining gap; by the reflection inequality
P(max_k S_k >= x) <= 2 P(S_m >= x) the probability that the skipped block
actually crossed is at most 2*Phi(-skip_sigmas), about 2.3e-19 at the
default 9.  Crossings therefore always happen in single-step mode, at full
dt resolution, with the overshoot recorded exactly as a stepwise
accumulation would.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def white_fpt_trial(gen, em, drift_dt, sig_sqdt, max_steps, skip_min, skip_sigmas, bridge):
    """One threshold-accumulation trial with i.i.d. Gaussian increments.

    Returns (steps, overshoot, censored).  ``drift_dt`` is I_s*dt,
    ``sig_sqdt`` is Sigma*sqrt(dt); both may be zero but not simultaneously.

    With ``bridge`` set, every non-crossing fine step additionally samples
    whether the continuous path touched the threshold inside the step
    (Brownian-bridge maximum law); such crossings are reported at the end
    of the step with zero overshoot.
    """
    e = 0.0
    k = 0
    b = skip_sigmas * sig_sqdt
    var_dt = sig_sqdt * sig_sqdt
    while k < max_steps:
        gap = em - e
        # largest m with drift_dt*m + skip_sigmas*sig_sqdt*sqrt(m) <= gap
        if drift_dt > 0.0:
            x = (-b + math.sqrt(b * b + 4.0 * drift_dt * gap)) / (2.0 * drift_dt)
        else:
            x = gap / b
        m = int(x * x)
        remaining = max_steps - k
        if m > remaining:
            m = remaining
        if m >= skip_min:
            e += drift_dt * m + sig_sqdt * math.sqrt(m) * gen.standard_normal()
            k += m
            if e >= em:
                # reachable only through the <= 2.3e-19 skip-bound leak
                return k, e - em, False
            continue
        e += drift_dt + sig_sqdt * gen.standard_normal()
        k += 1
        if e >= em:
            return k, e - em, False
        if bridge:
            p = math.exp(-2.0 * gap * (em - e) / var_dt)
            if p > 1e-12 and gen.random() < p:
                return k, 0.0, False
    return max_steps, 0.0, True


@njit(cache=True)
def colored_fpt_trial(gen, em, i_s_dt, dt, decay, innov_sd, x0_sd, max_steps):
    """One trial driven by an exactly-discretized Ornstein-Uhlenbeck intensity.

    The energy accumulates stepwise as (I_s + x_k)*dt; no block skipping
    (increments are correlated).  Returns (steps, overshoot, censored).
    """
    x = x0_sd * gen.standard_normal()
    e = 0.0
    for k in range(max_steps):
        e += i_s_dt + x * dt
        if e >= em:
            return k + 1, e - em, False
        x = decay * x + innov_sd * gen.standard_normal()
    return max_steps, 0.0, True


@njit(cache=True)
def coincidence_white(
    gen_sh, gen_1, gen_2,
    em1, em2, i_s_dt, sig_shared, sig_indep,
    n_steps, dead_steps1, dead_steps2,
    ev1, ev2,
):
    """Two free-running threshold detectors on correlated white-noise beams.

    ``sig_shared``/``sig_indep`` are the per-step standard deviations of the
    shared and detector-private energy-increment components.  Event step
    indexes are written into ev1/ev2; returns (n1, n2, overflow) where
    overflow means an event buffer filled before the run finished.
    """
    e1 = 0.0
    e2 = 0.0
    wait1 = 0
    wait2 = 0
    n1 = 0
    n2 = 0
    for k in range(n_steps):
        z_sh = gen_sh.standard_normal()
        z_1 = gen_1.standard_normal()
        z_2 = gen_2.standard_normal()
        d_sh = sig_shared * z_sh
        if wait1 > 0:
            wait1 -= 1
        else:
            e1 += i_s_dt + d_sh + sig_indep * z_1
            if e1 >= em1:
                if n1 >= ev1.shape[0]:
                    return n1, n2, True
                ev1[n1] = k
                n1 += 1
                e1 = 0.0
                wait1 = dead_steps1
        if wait2 > 0:
            wait2 -= 1
        else:
            e2 += i_s_dt + d_sh + sig_indep * z_2
            if e2 >= em2:
                if n2 >= ev2.shape[0]:
                    return n1, n2, True
                ev2[n2] = k
                n2 += 1
                e2 = 0.0
                wait2 = dead_steps2
    return n1, n2, False


@njit(cache=True)
def coincidence_colored(
    gen_sh, gen_1, gen_2,
    em1, em2, i_s_dt, dt, amp_shared, amp_indep,
    decay, innov_sd, x0_sd,
    n_steps, dead_steps1, dead_steps2,
    ev1, ev2,
):
    """Colored-noise variant: three OU intensity paths, variance-shared.

    Each detector sees I_s + amp_shared*x_sh + amp_indep*x_i where the x are
    independent stationary OU paths of equal variance.
    """
    x_sh = x0_sd * gen_sh.standard_normal()
    x_1 = x0_sd * gen_1.standard_normal()
    x_2 = x0_sd * gen_2.standard_normal()
    e1 = 0.0
    e2 = 0.0
    wait1 = 0
    wait2 = 0
    n1 = 0
    n2 = 0
    for k in range(n_steps):
        f_sh = amp_shared * x_sh
        if wait1 > 0:
            wait1 -= 1
        else:
            e1 += i_s_dt + (f_sh + amp_indep * x_1) * dt
            if e1 >= em1:
                if n1 >= ev1.shape[0]:
                    return n1, n2, True
                ev1[n1] = k
                n1 += 1
                e1 = 0.0
                wait1 = dead_steps1
        if wait2 > 0:
            wait2 -= 1
        else:
            e2 += i_s_dt + (f_sh + amp_indep * x_2) * dt
            if e2 >= em2:
                if n2 >= ev2.shape[0]:
                    return n1, n2, True
                ev2[n2] = k
                n2 += 1
                e2 = 0.0
                wait2 = dead_steps2
        x_sh = decay * x_sh + innov_sd * gen_sh.standard_normal()
        x_1 = decay * x_1 + innov_sd * gen_1.standard_normal()
        x_2 = decay * x_2 + innov_sd * gen_2.standard_normal()
    return n1, n2, False
