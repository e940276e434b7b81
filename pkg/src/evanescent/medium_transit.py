"""Feasibility conditions for superluminal transfer and the jump-corrected transit model.

SI units throughout: densities in m^-3, cross-sections in m^2, lengths in m,
angular frequencies in rad/s.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .constants import C, PI, SIGMA_THOMSON, wavelength_from_omega
from .errors import NonPositive, ParseError, Underdetermined, ValidationError
from .temporal_core import formation_path


class Condition(NamedTuple):
    holds: bool
    margin: float
    threshold: float


def _positive(**values):
    for name, v in values.items():
        if not v > 0:
            raise NonPositive(f"{name} must be positive, got {v!r}")


def free_path(rho, sigma):
    """Mean free path ``1 / (rho sigma)``."""
    _positive(rho=rho, sigma=sigma)
    return 1.0 / (rho * sigma)


def tunneling_condition(delta_omega, rho, sigma):
    """Formation path longer than the free path: ``pi c / |dw| > 1 / (rho sigma)``.

    ``margin`` is the ratio formation path / free path; ``threshold`` is the
    detuning at which the two are equal.
    """
    ell = free_path(rho, sigma)
    threshold = PI * C / ell
    if delta_omega == 0:
        return Condition(True, math.inf, threshold)
    margin = formation_path(delta_omega) / ell
    return Condition(margin > 1, margin, threshold)


def wavelength_condition(lam, rho, sigma=SIGMA_THOMSON):
    """Off-resonance condition ``lambda > 2 / (rho sigma_T)``."""
    _positive(wavelength=lam, rho=rho, sigma=sigma)
    threshold = 2.0 / (rho * sigma)
    return Condition(lam > threshold, lam / threshold, threshold)


def resonant_cross_section(lam, gamma, delta_omega):
    """Resonant cross-section ``lambda^2 Gamma^2 / (pi (dw^2 + Gamma^2/4))``, angular factors omitted."""
    _positive(wavelength=lam, gamma=gamma)
    return lam * lam * gamma * gamma / (PI * (delta_omega * delta_omega + gamma * gamma / 4))


def resonance_condition(delta_omega, rho, lam):
    """Near-resonance condition ``|dw| <= c rho lambda^2`` (valid for |dw| < Gamma)."""
    _positive(rho=rho, wavelength=lam)
    threshold = C * rho * lam * lam
    dw = abs(delta_omega)
    margin = math.inf if dw == 0 else threshold / dw
    return Condition(dw <= threshold, margin, threshold)


SIGMA_MODELS = ("explicit", "thomson", "resonant")


@dataclass(frozen=True)
class MediumSpec:
    """Scattering medium.

    ``sigma_model`` selects an explicit ``sigma``, the Thomson value, or the
    resonant formula evaluated at a probe frequency with ``omega0``/``gamma``.
    """

    rho: Optional[float] = None
    sigma: Optional[float] = None
    sigma_model: str = "explicit"
    n: float = 1.0
    omega0: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.sigma_model not in SIGMA_MODELS:
            raise ValidationError(f"sigma_model must be one of {SIGMA_MODELS}, got {self.sigma_model!r}")
        if self.rho is not None:
            _positive(rho=self.rho)
        if self.sigma is not None:
            _positive(sigma=self.sigma)
        _positive(n=self.n)
        if self.sigma_model == "resonant" and (self.omega0 is None or self.gamma is None):
            raise ValidationError("resonant sigma_model needs omega0 and gamma")

    def cross_section(self, omega=None):
        """Cross-section at probe frequency ``omega``; None when undetermined."""
        if self.sigma_model == "thomson":
            return SIGMA_THOMSON
        if self.sigma_model == "resonant":
            if omega is None:
                return None
            return resonant_cross_section(wavelength_from_omega(omega), self.gamma, omega - self.omega0)
        return self.sigma


_FLOAT_KEYS = ("rho", "sigma", "n", "omega0", "gamma")


def parse_medium(stream):
    """Parse ``key = value`` lines (``#`` comments) into a :class:`MediumSpec`.

    Keys: rho, sigma or sigma_model, n, omega0, gamma.  SI units.
    """
    kwargs = {}
    problems = []
    for lineno, line in enumerate(stream, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append((lineno, None, "expected key = value"))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _FLOAT_KEYS:
            try:
                kwargs[key] = float(value)
            except ValueError:
                problems.append((lineno, len(key), f"{key}: not a number: {value!r}"))
        elif key == "sigma_model":
            kwargs[key] = value
        else:
            problems.append((lineno, 0, f"unknown key {key!r}"))
    if problems:
        detail = "; ".join(f"line {ln}: {msg}" for ln, _, msg in problems)
        raise ParseError(f"bad medium config: {detail}", problems)
    if "sigma" in kwargs and "sigma_model" not in kwargs:
        kwargs["sigma_model"] = "explicit"
    return MediumSpec(**kwargs)


CLOSURES = ("explicit", "phase_index", "half_wavelength")
CLOSURE_ALIASES = {"paper": "phase_index"}


@dataclass(frozen=True)
class TransitPrediction:
    """Deterministic transit through a slab of length ``L``.

    Fields that need the free path are None when only the phase-index closure
    (which fixes jump/free_path = 2 pi (n - 1)) is available.
    """

    speed_ratio: float
    jump_ratio: float
    free_path: Optional[float] = None
    jump: Optional[float] = None
    group_index: Optional[float] = None
    corrected_index: Optional[float] = None
    scatter_count: Optional[float] = None
    corrected_scatter_count: Optional[float] = None
    effective_length: Optional[float] = None
    estimate: bool = False
    notes: tuple = field(default_factory=tuple)


def transit_prediction(spec, L, *, tau1=None, delta_ell=None, omega=None, closure="explicit"):
    """Group index, jump-corrected index and mean speed ratio for a medium.

    The free path comes from ``rho * sigma`` when available, otherwise from
    the rough estimate ``c / (2 omega (n - 1))`` (flagged ``estimate``).
    ``tau1`` defaults to the free-electron value ``1 / (2 omega)`` when
    ``omega`` is known, else 0.

    Closures for the jump length:

    ``explicit``          ``delta_ell`` as given (default 0)
    ``phase_index``       ``delta_ell = 2 pi (n - 1) * free_path`` (alias ``paper``)
    ``half_wavelength``   ``delta_ell = pi c / omega`` (= lambda / 2)
    """
    closure = CLOSURE_ALIASES.get(closure, closure)
    if closure not in CLOSURES:
        raise ValidationError(f"closure must be one of {CLOSURES}, got {closure!r}")
    _positive(L=L)
    notes = []
    estimate = False

    ell = None
    sigma = spec.cross_section(omega)
    if spec.rho is not None and sigma is not None:
        ell = free_path(spec.rho, sigma)
    elif omega is not None and spec.n != 1:
        _positive(omega=omega)
        if spec.n < 1:
            raise ValidationError("free-path estimate needs n > 1")
        ell = C / (2 * omega * (spec.n - 1))
        estimate = True
        notes.append("free path estimated from the phase index (group ~ phase index)")

    if tau1 is None:
        if omega is not None:
            tau1 = 1 / (2 * omega)
            estimate = True
            notes.append("tau1 = 1/(2 omega) free-electron estimate")
        else:
            tau1 = 0.0

    if closure == "phase_index":
        if spec.n < 1:
            raise ValidationError("phase-index closure needs n >= 1 (the jump would be negative)")
        ratio = 2 * PI * (spec.n - 1)
        if ell is None:
            return TransitPrediction(1 + ratio, ratio, estimate=estimate,
                                     notes=tuple(notes + ["free path undetermined; ratio-only result"]))
        jump = ratio * ell
    else:
        if ell is None:
            raise Underdetermined("free path needs rho with a cross-section, or omega with n != 1")
        if closure == "half_wavelength":
            if omega is None:
                raise Underdetermined("half_wavelength closure needs omega")
            jump = formation_path(omega)
        else:
            jump = 0.0 if delta_ell is None else delta_ell
        if jump < 0:
            raise ValidationError("jump length must be non-negative")
        ratio = jump / ell

    n_g = 1 + C * tau1 / ell
    n_g_corr = 1 + (n_g - 1) / (1 + ratio)
    n_corr = L / (ell + jump)
    if n_g < 0 or n_g_corr < 0:
        notes.append("negative group index (anomalous dispersion)")
        warnings.warn("formally negative group index", RuntimeWarning, stacklevel=2)
    return TransitPrediction(
        speed_ratio=1 + ratio,
        jump_ratio=ratio,
        free_path=ell,
        jump=jump,
        group_index=n_g,
        corrected_index=n_g_corr,
        scatter_count=L / ell,
        corrected_scatter_count=n_corr,
        effective_length=n_corr * ell,  # L - n_corr * jump without the cancellation
        estimate=estimate,
        notes=tuple(notes),
    )
