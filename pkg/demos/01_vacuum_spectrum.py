"""
Vacuum and thermal spectral densities
=====================================

Walks the spectrum module: the T = 0 vacuum term, the thermal term it
dwarfs at optical frequencies, the integrated intensity over the visible
band, and the full-band thermal check against the T^4 law.
"""

import math

import numpy as np

from zpfdetect import (
    CONSTANTS,
    spectral_density_thermal,
    spectral_density_zpf,
    thermal_band_energy_density,
    zpf_band_intensity,
)

# The vacuum spectral density grows as omega^3, so at optical frequencies
# it towers over the thermal part even at room temperature.
omega = np.geomspace(1e13, 1e16, 7)
rho_vac = spectral_density_zpf(omega)
rho_th = spectral_density_thermal(omega, 300.0)

print("omega [rad/s]    rho_vacuum      rho_thermal     vacuum/thermal")
for w, rv, rt in zip(omega, rho_vac, rho_th):
    ratio = rv / rt if rt > 0 else math.inf
    print(f"{w:12.3e}  {rv:14.6e}  {rt:14.6e}  {ratio:12.3e}")

# Integrate the vacuum density over the visible band, 400-700 nm.  The
# closed form is a difference of fourth powers; quadrature must agree.
c = CONSTANTS.c
lo = 2 * math.pi * c / 700e-9
hi = 2 * math.pi * c / 400e-9
closed = zpf_band_intensity(lo, hi)
quad = zpf_band_intensity(lo, hi, method="quadrature")
print()
print(f"visible-band vacuum intensity: {closed / 1e7:.1f} kW/cm^2")
print(f"closed form vs quadrature rel gap: {abs(quad / closed - 1):.2e}")

# Ordinary detectors sit in this bath without firing: whatever model one
# adopts has to explain why kilowatt-per-cm^2 scales produce no counts.

# Sanity anchor for the thermal part: integrating over all frequencies
# must reproduce the radiation-constant T^4 law.
u = thermal_band_energy_density(0.0, math.inf, 300.0)
k, hbar = CONSTANTS.k_B, CONSTANTS.hbar
stefan = math.pi**2 * k**4 / (15 * hbar**3 * c**3) * 300.0**4
print()
print(f"thermal energy density at 300 K: {u:.6e} J/m^3")
print(f"T^4 closed form:                 {stefan:.6e} J/m^3")
print(f"relative difference:             {abs(u / stefan - 1):.2e}")
