"""
Fitting the rate law to counting data
=====================================

Given a measured singles-rate curve R(I_s), the fit recovers the detector
parameters (E_m, Sigma) and turns them into a falsifiable prediction: a
fundamental dark rate Sigma^2/E_m^2 that no shielding can remove.  The
slope-change diagnostic quantifies the sqrt(I_s) bending of the curve
that distinguishes the noise-threshold law from a straight line.
"""

import numpy as np

from zpfdetect import (
    FirstPassageDetector,
    RateCurve,
    RatePoint,
    SeedSpec,
    fit_rate_curve,
    rate_analytic,
    slope_change,
)

# Synthesize a plausible measured curve: 20 points over two decades with
# 1% multiplicative counting noise, inverse-variance weighted.
true = FirstPassageDetector(E_m=2.0, Sigma=0.5)
intensities = np.geomspace(0.1, 10.0, 20)
clean = rate_analytic(true, intensities)
rng = np.random.default_rng(424242)
measured = clean * (1.0 + 0.01 * rng.standard_normal(clean.size))
points = [
    RatePoint(i, r, weight=1.0 / (0.01 * r) ** 2)
    for i, r in zip(intensities, measured)
]

result = fit_rate_curve(points, model="exact")
print(f"true parameters:   E_m = {true.E_m}, Sigma = {true.Sigma}")
print(f"fitted parameters: E_m = {result.E_m:.6f}, Sigma = {result.Sigma:.6f}")
print(f"weighted residual: {result.residual_norm:.3e}")
print(f"converged in {result.iterations} evaluations: {result.converged}")

# The headline number: the dark rate this detector cannot escape.
print()
print(f"predicted dark rate (exact law):  {result.predicted_dark_rate_exact:.6f}/s")
print(f"predicted dark rate (series law): {result.predicted_dark_rate_series:.6f}/s")
print(f"true value Sigma^2/E_m^2:         {true.Sigma**2 / true.E_m**2:.6f}/s")

# Slope change between the low and high ends of the measured range.  For
# a linear detector this is zero; the sqrt(I_s) noise term makes it
# positive, by an amount the fitted parameters predict exactly.
dense = np.geomspace(0.05, 20.0, 400)
curve = RateCurve(intensities=dense, rates=rate_analytic(result.detector, dense))
change = slope_change(curve, 0.1, 10.0)
print()
print(f"fractional slope decrease between I_s = 0.1 and 10: {change:.4f}")
