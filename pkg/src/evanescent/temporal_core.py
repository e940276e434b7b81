"""Delay and formation times of scattering processes.

A response S(omega) defines the complex temporal function

    tau = (1/i) d ln S / d omega = tau1 + i tau2

whose real part ``tau1`` is the Wigner-Smith delay and whose imaginary part
``tau2`` is the formation ("dressing") time.  Every closed form in this
module is obtained from that single definition; in particular

    (1/i) d/dw ln sin(w r) = -i r cot(w r)    ->  tau2 = -r cot(w r)

and the massive analogue with kappa = sqrt(E^2 - m^2) gives
``tau2 = -(r E / kappa) cot(kappa r)``.  The massless limit of the massive
branch therefore coincides with :func:`mixed_formation_time`.

Photon quantities take SI inputs (rad/s, m) and return seconds.  The massive
branch works in natural units (hbar = c = 1).
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special

from .constants import C, PI
from .errors import DomainError, OnShell, ParseError, PoleError, ValidationError, ZeroDetuning, ZeroResponse

POLE_EPS = 1e-9
ZERO_FLOOR = 1e-300

# coefficient of delta(omega - |k|c) in the photon delay time
PHOTON_DELTA_WEIGHT = -PI


@dataclass(frozen=True)
class TemporalPair:
    """Delay ``tau1`` and formation time ``tau2``.

    ``delta_weight`` is set when ``tau1`` additionally carries a singular part
    ``delta_weight * delta(omega - |k| c)`` supported on the light cone.
    """

    tau1: float
    tau2: float
    delta_weight: Optional[float] = None

    @property
    def complex(self):
        return complex(self.tau1, self.tau2)

    def __iter__(self):
        yield self.tau1
        yield self.tau2


@dataclass(frozen=True)
class SpectralResponse:
    """A complex response S(omega[, k]) known on ``domain`` (rad/s)."""

    func: Callable
    domain: tuple = (-math.inf, math.inf)
    k: Optional[float] = None

    def __call__(self, omega):
        if self.k is None:
            return complex(self.func(omega))
        return complex(self.func(omega, self.k))

    @classmethod
    def from_table(cls, omega, values):
        """Linear interpolation of tabulated complex samples.

        Real and imaginary parts are interpolated independently, i.e. the
        interpolation is linear in the complex plane.
        """
        omega = np.asarray(omega, dtype=float)
        values = np.asarray(values, dtype=complex)
        if omega.ndim != 1 or omega.shape != values.shape or omega.size < 2:
            raise ValidationError("table needs at least two (omega, S) samples of matching length")
        if np.any(np.diff(omega) <= 0):
            raise ValidationError("table frequencies must be strictly increasing")
        re, im = values.real.copy(), values.imag.copy()

        def interp(w):
            return complex(np.interp(w, omega, re), np.interp(w, omega, im))

        return cls(interp, (float(omega[0]), float(omega[-1])))


def load_response_table(stream):
    """Read ``omega, Re S, Im S`` rows (comma or whitespace separated).

    Blank lines and ``#`` comments are ignored.
    """
    rows = []
    problems = []
    for lineno, line in enumerate(stream, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        if len(fields) != 3:
            problems.append((lineno, None, f"expected 3 fields, got {len(fields)}"))
            continue
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            problems.append((lineno, None, str(exc)))
    if problems:
        detail = "; ".join(f"line {ln}: {msg}" for ln, _, msg in problems)
        raise ParseError(f"bad response table: {detail}", problems)
    if not rows:
        raise ParseError("response table is empty")
    data = np.array(rows)
    return SpectralResponse.from_table(data[:, 0], data[:, 1] + 1j * data[:, 2])


def _log_slope(s, omega, h, floor):
    """Central difference of ln S with the phase unwrapped across the stencil."""
    vals = np.array([s(omega - h), s(omega), s(omega + h)])
    mags = np.abs(vals)
    if mags[1] < floor:
        raise ZeroResponse(f"|S({omega})| = {mags[1]} is below the floor {floor}")
    if np.any(mags < floor):
        raise ZeroResponse(f"S vanishes on the stencil around omega={omega}")
    phase = np.unwrap(np.angle(vals))
    dlog_mag = (math.log(mags[2]) - math.log(mags[0])) / (2 * h)
    dphase = (phase[2] - phase[0]) / (2 * h)
    return complex(dlog_mag, dphase)


def temporal_pair(s, omega, step=None, *, richardson=False, floor=ZERO_FLOOR):
    """Delay and formation time of the response ``s`` at ``omega``.

    The derivative of ln S is taken by central differences with step
    ``step`` (default ``1e-6 * |omega|``).  With ``richardson=True`` the
    estimates at ``step`` and ``step/2`` are combined to cancel the
    O(step^2) term.
    """
    if step is None:
        step = 1e-6 * abs(omega) if omega != 0 else 1e-6
    if not step > 0:
        raise DomainError("step must be positive")
    lo, hi = s.domain
    if omega - step < lo or omega + step > hi:
        raise DomainError(f"stencil [{omega - step}, {omega + step}] leaves the domain [{lo}, {hi}]")

    d = _log_slope(s, omega, step, floor)
    if richardson:
        d = (4 * _log_slope(s, omega, step / 2, floor) - d) / 3
    tau = d / 1j
    return TemporalPair(tau.real, tau.imag)


def _check_off_pole(x, eps, include_zero=True):
    n = round(x / PI)
    if (n != 0 or include_zero) and abs(x - n * PI) <= eps:
        raise PoleError(f"argument {x!r} lies within {eps} of the pole {n}*pi")


def photon_propagator_times(omega, k_abs, *, form="pole", eps=POLE_EPS):
    """Temporal functions of the free photon propagator 4 pi / (w^2 - k^2 c^2).

    Off the light cone the delay vanishes and the formation time is
    ``2 w / (w^2 - k^2 c^2)``; ``form="pole"`` (default) returns its
    near-shell form ``1 / (w - |k| c)``.  Positive values are retarded
    emission, negative values advanced.  The returned pair records the
    on-shell delta weight of ``tau1``.
    """
    kc = abs(k_abs) * C
    detuning = omega - kc
    scale = max(abs(kc), abs(omega))
    if abs(detuning) <= eps * scale:
        raise OnShell(f"omega={omega} is on the light cone |k|c={kc}", delta_weight=PHOTON_DELTA_WEIGHT)
    if form == "pole":
        tau2 = 1.0 / detuning
    elif form == "full":
        tau2 = 2 * omega / (omega**2 - kc**2)
    else:
        raise ValueError(f"unknown form {form!r}")
    return TemporalPair(0.0, tau2, delta_weight=PHOTON_DELTA_WEIGHT)


def mixed_formation_time(omega, r, *, eps=POLE_EPS):
    """Formation time ``-(r/c) cot(omega r / c)`` in the (omega, r) representation."""
    x = omega * r / C
    _check_off_pole(x, eps)
    return -(r / C) * math.cos(x) / math.sin(x)


def _series_tail(x, n_terms, tol=1e-18):
    # sum_{n>N} 2x/(x^2 - pi^2 n^2) = -(2x/pi^2) sum_j q^j zeta(2j+2, N+1), q = (x/pi)^2
    q = (x / PI) ** 2
    total = 0.0
    j = 0
    while True:
        term = q**j * special.zeta(2 * j + 2, n_terms + 1)
        total += term
        j += 1
        if abs(term) <= tol * abs(total) or j > 60:
            break
    return -2 * x / PI**2 * total


def renormalized_formation_time(omega, r, n_terms=100_000, *, tail=True, eps=POLE_EPS):
    """Formation time with the Coulomb pole 1/x removed.

    Sums ``-(r/c) sum_{n=1}^{N} 2x / (x^2 - pi^2 n^2)`` with x = omega r / c,
    which converges to ``-(r/c) [cot x - 1/x]``.  With ``tail=True`` the
    remainder n > N is added from its expansion in Hurwitz zeta values.
    The first pole is at x = pi.
    """
    if n_terms < 1:
        raise ValidationError("n_terms must be at least 1")
    x = omega * r / C
    _check_off_pole(x, eps, include_zero=False)
    if abs(x) >= PI * n_terms:
        raise DomainError(f"|x| = {abs(x)} exceeds the truncated series range pi*{n_terms}")
    n = np.arange(1, n_terms + 1, dtype=float)
    total = float(np.sum(2 * x / (x * x - (PI * n) ** 2)))
    if tail:
        total += _series_tail(x, n_terms)
    return -(r / C) * total


def formation_path(delta_omega):
    """Minimal formation path ``pi c / |delta_omega|`` (m)."""
    if delta_omega == 0:
        raise ZeroDetuning("formation path diverges at zero detuning")
    return PI * C / abs(delta_omega)


@dataclass(frozen=True)
class MassiveState:
    """Energy, mass and separation in natural units."""

    energy: float
    mass: float
    r: float

    def __post_init__(self):
        if not self.energy > 0:
            raise ValidationError("energy must be positive")
        if not self.mass >= 0:
            raise ValidationError("mass must be non-negative")
        if not self.r > 0:
            raise ValidationError("r must be positive")

    @property
    def bound(self):
        """True below threshold (E < m)."""
        return self.energy < self.mass


def massive_formation_kernel(energy, kappa, r):
    """``-(r E / kappa) cot(kappa r)``, accepting complex ``kappa``.

    Real kappa gives the formation time above threshold.  At
    ``kappa = i kappa'`` the value is real and equals the below-threshold
    delay ``(r E / kappa') coth(kappa' r)``.
    """
    kappa = complex(kappa)
    z = kappa * r
    return -(r * energy / kappa) * np.cos(z) / np.sin(z)


def massive_temporal(state, *, eps=POLE_EPS):
    """Temporal pair for the massive Green function (1/2r) sin(kappa r).

    E > m: ``tau1 = 0``, ``tau2 = -(r E / kappa) cot(kappa r)``.
    E < m: ``tau1 = (r E / kappa') coth(kappa' r)``, ``tau2 = 0`` with
    kappa' = sqrt(m^2 - E^2).
    """
    E, m, r = state.energy, state.mass, state.r
    d = E * E - m * m
    if abs(d) <= eps * E * E:
        raise OnShell(f"E={E} is on the mass shell m={m}")
    if d > 0:
        kappa = math.sqrt(d)
        _check_off_pole(kappa * r, eps)
        return TemporalPair(0.0, -(r * E / kappa) * math.cos(kappa * r) / math.sin(kappa * r))
    kappa_b = math.sqrt(-d)
    return TemporalPair((r * E / kappa_b) / math.tanh(kappa_b * r), 0.0)


def massive_formation_leading(energy, mass, *, eps=POLE_EPS):
    """Leading (pole) part of the massive formation time, ``-E / (E^2 - m^2)``."""
    d = energy * energy - mass * mass
    if abs(d) <= eps * energy * energy:
        raise OnShell(f"E={energy} is on the mass shell m={mass}")
    return -energy / d
