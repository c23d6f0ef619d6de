"""
Threshold crossing as a first-passage problem
=============================================

The second detector model accumulates signed energy I_s*t plus a noise
excursion and fires when the running total first reaches E_m.  The
heuristic closed form, its weak-noise series, and the Monte Carlo engine
are compared here, including the one identity the noise cannot shift: the
mean first-passage time E_m/I_s.
"""

import numpy as np

from zpfdetect import (
    FirstPassageDetector,
    SeedSpec,
    rate_analytic,
    rate_series,
    simulate_first_passage,
)

det = FirstPassageDetector(E_m=1.0, Sigma=1.0)

# Closed form vs series along the intensity axis.  The series is the
# three-term weak-noise expansion; past I_s*E_m/Sigma^2 ~ 25 they agree to
# a few parts in 10^4, at I_s = 0 they differ by exactly a factor 2.
print("I_s        R_closed       R_series       rel gap")
for i_s in (0.0, 1.0, 5.0, 25.0, 100.0, 1000.0):
    ra = rate_analytic(det, i_s)
    rs = rate_series(det, i_s)
    gap = abs(rs / ra - 1.0) if ra > 0 else float("nan")
    print(f"{i_s:8.1f}  {ra:13.6e}  {rs:13.6e}  {gap:10.2e}")

# Monte Carlo with the same detector.  The counting rate of repeated
# detections is a renewal rate, and for any noise level its mean cycle
# time obeys the optional-stopping identity E[T] = E_m/I_s, so the
# simulated rate tracks I_s/E_m rather than the heuristic curve.
print()
print("Sigma     mean FPT (sim)   E_m/I_s   heuristic rate")
for sigma in (0.25, 1.0, 2.0):
    d = FirstPassageDetector(E_m=1.0, Sigma=sigma)
    res = simulate_first_passage(d, 0.5, dt=1e-3, n_trials=4000, seed=SeedSpec(8))
    print(f"{sigma:5.2f}  {res.mean_fpt:15.4f}  {1.0 / 0.5:8.1f}  "
          f"{rate_analytic(d, 0.5):14.4f}")

# Dark counts: with no signal at all, noise alone reaches the threshold.
# The passage-time distribution is heavy-tailed (the mean diverges), so
# the meaningful location summary is the median.  The bridge correction
# samples within-step crossings, removing most of the time-step bias.
d = FirstPassageDetector(E_m=1.0, Sigma=1.0)
res = simulate_first_passage(
    d, 0.0, dt=1e-3, n_trials=20000, seed=SeedSpec(9), bridge_correction=True
)
target = (1.0 / 0.6744897501960817) ** 2
print()
print(f"driftless median passage time: {res.median_fpt:.3f} "
      f"(reflection value {target:.3f})")
print(f"censored fraction at 10^8-step bound: {res.censored_fraction:.4f}")
