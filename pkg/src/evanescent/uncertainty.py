"""Energy-time uncertainty relations.

Energies are in eV and times in seconds unless an ``hbar`` in other units is
passed explicitly.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .constants import HBAR_EV_S, PI
from .errors import DimensionMismatch, EmptySlice, NegativeTime, NonHermitian, NonUnitState, ParseError, ValidationError, ZeroEnergy


class ProcessKind(enum.Enum):
    """Process class and its energy-time bound in units of hbar."""

    STABLE_TRANSFER = "stable"
    DECAY = "decay"
    TRANSMUTATION = "transmutation"

    @property
    def bound(self):
        return _BOUNDS[self]


_BOUNDS = {
    ProcessKind.STABLE_TRANSFER: PI,
    ProcessKind.DECAY: PI / 4,
    ProcessKind.TRANSMUTATION: 0.5,
}


@dataclass(frozen=True)
class TimeBound:
    """Minimal time magnitude; ``advanced`` marks a negative energy deviation,
    for which the time deviation is negative as well."""

    seconds: float
    advanced: bool = False

    @property
    def signed(self):
        return -self.seconds if self.advanced else self.seconds


def minimal_time(delta_E, kind, *, hbar=HBAR_EV_S):
    """Smallest duration compatible with ``delta_E`` for the given process kind."""
    kind = ProcessKind(kind)
    if delta_E == 0:
        raise ZeroEnergy("energy deviation must be non-zero")
    return TimeBound(kind.bound * hbar / abs(delta_E), advanced=delta_E < 0)


def transition_probability(delta_E, tau, *, hbar=HBAR_EV_S):
    """Unnormalised transition density ``sin^2(dE tau / 2 hbar) / dE^2``.

    Written as ``(tau/2hbar)^2 sinc^2`` so that the dE -> 0 limit
    ``tau^2 / 4 hbar^2`` comes out without cancellation.
    """
    half = tau / (2 * hbar)
    a = delta_E * half
    return half * half * np.sinc(a / PI) ** 2


def locate_transition_maxima(delta_E, n_max=5, *, hbar=HBAR_EV_S):
    """Durations ``tau`` maximising the transition density at fixed ``delta_E``.

    Each of the first ``n_max + 1`` maxima is bracketed between consecutive
    zeros, located by golden-section search, then polished as the root of
    the analytic derivative (sin of twice the phase).  The result is
    limited only by floating point, unlike a pure value comparison which
    stalls at sqrt(eps) on a flat maximum.
    """
    if delta_E == 0:
        raise ZeroEnergy("energy deviation must be non-zero")
    scale = 2 * hbar / abs(delta_E)  # tau per radian of phase

    def neg(t):
        return -transition_probability(delta_E, t, hbar=hbar)

    def slope(t):
        return math.sin(2 * abs(delta_E) * t / (2 * hbar))

    taus = []
    for n in range(n_max + 1):
        lo, hi = n * PI * scale, (n + 1) * PI * scale
        res = optimize.minimize_scalar(neg, bracket=(lo, (n + 0.5) * PI * scale, hi), method="golden",
                                       options={"xtol": 1e-12})
        t0 = res.x
        width = 0.25 * PI * scale
        t = optimize.brentq(slope, t0 - width, t0 + width, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        taus.append(t)
    return np.array(taus)


@dataclass(frozen=True)
class RSBound:
    """Terms of the Robertson-Schroedinger inequality ``lhs >= commutator + covariance``."""

    lhs: float
    commutator_term: float
    covariance_term: float

    @property
    def rhs(self):
        return self.commutator_term + self.covariance_term

    @property
    def robertson_rhs(self):
        return self.commutator_term

    @property
    def slack(self):
        return self.lhs - self.rhs


def _check_hermitian(name, M, atol):
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.allclose(M, M.conj().T, atol=atol, rtol=0):
        raise NonHermitian(f"{name} is not Hermitian")


def rs_bound(A, B, psi, *, atol=1e-10):
    """Evaluate both sides of the Robertson-Schroedinger uncertainty relation.

    With centred vectors a = (A - <A>) psi and b = (B - <B>) psi the
    commutator and anticommutator terms are ``Im(a.b)^2`` and ``Re(a.b)^2``
    and the left side is ``|a|^2 |b|^2``, so the inequality is
    Cauchy-Schwarz and survives rounding.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    _check_hermitian("A", A, atol)
    _check_hermitian("B", B, atol)
    if A.shape != B.shape or psi.shape != (A.shape[0],):
        raise DimensionMismatch(f"shapes A{A.shape}, B{B.shape}, psi{psi.shape} do not agree")
    if abs(np.linalg.norm(psi) - 1) > atol:
        raise NonUnitState(f"|psi| = {np.linalg.norm(psi)} is not 1")

    Apsi, Bpsi = A @ psi, B @ psi
    a = Apsi - np.vdot(psi, Apsi).real * psi
    b = Bpsi - np.vdot(psi, Bpsi).real * psi
    ab = np.vdot(a, b)
    var_a = np.vdot(a, a).real
    var_b = np.vdot(b, b).real
    return RSBound(var_a * var_b, ab.imag**2, ab.real**2)


@dataclass(frozen=True)
class ProjectorBound:
    """Bounds on the survival probability <P(t)>.

    ``characteristic_time`` is the completion time (stable transfer), the
    half-decay time (decay) or the saturation time of the sinh^2 branch
    (transmutation, virtual).
    """

    lower: float
    upper: float
    virtual: bool
    characteristic_time: float

    @property
    def saturated(self):
        return self.lower >= self.upper


def mt_projector_bound(delta_H, t, kind=ProcessKind.STABLE_TRANSFER, *, virtual=None, hbar=HBAR_EV_S):
    """Mandelstam-Tamm bound on the survival probability after time ``t``.

    Real energy spread (stable transfer, decay): ``<P(t)> >= cos^2(dH t / hbar)``.
    Purely imaginary spread of magnitude ``|delta_H|`` (``virtual``, the
    default for transmutation): ``sinh^2(|dH| t / hbar) <= <P(t)> <= 1``.
    """
    kind = ProcessKind(kind)
    if t < 0:
        raise NegativeTime("t must be non-negative")
    if delta_H == 0:
        raise ZeroEnergy("energy spread must be non-zero")
    if virtual is None:
        virtual = kind is ProcessKind.TRANSMUTATION
    rate = abs(delta_H) / hbar
    if virtual:
        return ProjectorBound(math.sinh(rate * t) ** 2, 1.0, True, math.asinh(1.0) / rate)
    # cos^2 reaches 1/2 at pi/4 (decay) and returns to 1 at pi (stable)
    phase = PI / 4 if kind is ProcessKind.DECAY else PI
    return ProjectorBound(math.cos(rate * t) ** 2, 1.0, False, phase / rate)


@dataclass
class WavepacketGrid:
    """``|psi(x, y, z, s)|^2`` sampled on a rectangular grid.

    ``s`` is time or energy; ``reference`` (t0 or E0) defaults to the
    weighted mean of whichever slice is analysed.
    """

    density: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    s: np.ndarray
    reference: Optional[float] = None

    def __post_init__(self):
        self.density = np.asarray(self.density, dtype=float)
        self.x, self.y, self.z, self.s = (np.asarray(a, dtype=float).ravel() for a in (self.x, self.y, self.z, self.s))
        shape = (self.x.size, self.y.size, self.z.size, self.s.size)
        if self.density.shape != shape:
            raise DimensionMismatch(f"density shape {self.density.shape} does not match axes {shape}")
        if np.any(self.density < 0):
            raise ValidationError("density samples must be non-negative")


def _integrate(values, axis_coords, axis):
    if axis_coords.size == 1:
        return np.take(values, 0, axis=axis)
    return np.trapezoid(values, axis_coords, axis=axis)


def axis_spread(grid, z_index, reference=None):
    """RMS deviation of the spectral coordinate over the slice at ``z_index``.

    Numerator and denominator are trapezoidal integrals over x, y and s;
    length-one axes contribute their single sample.
    """
    if not -grid.z.size <= z_index < grid.z.size:
        raise ValidationError(f"z_index {z_index} out of range")
    rho = grid.density[:, :, z_index, :]

    def over_slice(f):
        v = _integrate(f, grid.s, 2)
        v = _integrate(v, grid.y, 1)
        return float(_integrate(v, grid.x, 0))

    weight = over_slice(rho)
    if not weight > 0:
        raise EmptySlice(f"slice z[{z_index}] has zero total weight")
    ref = reference if reference is not None else grid.reference
    if ref is None:
        ref = over_slice(rho * grid.s) / weight
    return math.sqrt(over_slice(rho * (grid.s - ref) ** 2) / weight)


def wigner_spreads(time_grid, z_index, energy_grid=None):
    """Position-resolved ``(delta_t(z), delta_E(z))``; ``delta_E`` is None without an energy grid."""
    dt = axis_spread(time_grid, z_index)
    dE = axis_spread(energy_grid, z_index) if energy_grid is not None else None
    return dt, dE


def load_wavepacket_grid(stream, reference=None):
    """Read a grid file.

    Layout (whitespace or comma separated, ``#`` comments ignored)::

        nx ny nz ns          # axis sizes
        x_1 ... x_nx         # axis coordinates, one line per axis
        y_1 ... y_ny
        z_1 ... z_nz
        s_1 ... s_ns
        <nx*ny*nz*ns samples, row-major (s fastest), any line breaking>
    """
    lines = []
    for lineno, line in enumerate(stream, 1):
        text = line.split("#", 1)[0].replace(",", " ").split()
        if text:
            lines.append((lineno, text))
    if len(lines) < 5:
        raise ParseError("grid file needs a size header and four axis lines")

    def floats(lineno, fields):
        try:
            return [float(f) for f in fields]
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}", [(lineno, None, str(exc))]) from None

    lineno, header = lines[0]
    try:
        sizes = [int(f) for f in header]
    except ValueError as exc:
        raise ParseError(f"line {lineno}: bad size header: {exc}", [(lineno, None, str(exc))]) from None
    if len(sizes) != 4 or min(sizes) < 1:
        raise ParseError(f"line {lineno}: header must hold four positive sizes", [(lineno, None, "bad header")])
    axes = []
    for (lineno, fields), n in zip(lines[1:5], sizes):
        vals = floats(lineno, fields)
        if len(vals) != n:
            raise ParseError(f"line {lineno}: expected {n} axis values, got {len(vals)}", [(lineno, None, "axis length")])
        axes.append(vals)
    samples = [v for lineno, fields in lines[5:] for v in floats(lineno, fields)]
    expected = sizes[0] * sizes[1] * sizes[2] * sizes[3]
    if len(samples) != expected:
        raise ParseError(f"expected {expected} samples, got {len(samples)}")
    density = np.array(samples).reshape(sizes)
    return WavepacketGrid(density, *axes, reference=reference)
