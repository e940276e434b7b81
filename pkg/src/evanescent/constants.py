"""Physical constants and unit conversions used throughout the package.

All values are SI unless the name says otherwise.  Energies for particle
work are carried in eV or MeV, so hbar is tabulated in both.
"""

import math

# CODATA 2018, exact by definition of the SI.
C = 2.99792458e8  # m/s
C_KM_S = C / 1e3  # km/s

# CODATA 2018 (hbar / e); exact to the quoted digits.
HBAR_EV_S = 6.582119569e-16  # eV s
HBAR_MEV_S = 6.582119569e-22  # MeV s
HBAR_C_EV_M = HBAR_EV_S * C  # eV m

# CODATA 2018 Thomson cross-section, truncated to 8 significant digits.
SIGMA_THOMSON = 6.6524587e-29  # m^2

PI = math.pi

# unit helpers
PER_CM3 = 1e6  # 1 cm^-3 expressed in m^-3
KM = 1e3  # m
GEV = 1e9  # eV


def per_cm3_to_per_m3(rho_cm3):
    """Convert a number density from cm^-3 to m^-3."""
    return rho_cm3 * PER_CM3


def wavelength_from_omega(omega):
    """Vacuum wavelength (m) of light at angular frequency ``omega`` (rad/s)."""
    return 2 * PI * C / omega


def omega_from_wavelength(lam):
    """Angular frequency (rad/s) of light with vacuum wavelength ``lam`` (m)."""
    return 2 * PI * C / lam
