"""Transmutation uncertainty products, lifetime bounds, mass-raising
transition graphs and the neutrino mass estimate.

Masses in MeV (tables) or eV (neutrinos), times in seconds.
"""

import enum
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .constants import C_KM_S, HBAR_C_EV_M, HBAR_EV_S, HBAR_MEV_S, KM, GEV
from .errors import MissingField, NonPositive, ParseError, TieError, ValidationError


class TauKind(enum.Enum):
    SHORT_LIVED_PARTNER = "short"
    MEAN_LIFETIME = "mean"
    LOWER_BOUND_ON_DELTA_M = "bound"


@dataclass(frozen=True)
class TransmutationRecord:
    """A neutral pair with mass splitting ``delta_m`` (MeV, magnitude).

    ``mass_raising`` records the direction of the transition: the
    splitting m_initial - m_final is negative for transmutation into the
    heavier partner.
    """

    pair_name: str
    delta_m: float
    tau: Optional[float]
    tau_kind: TauKind
    mass_raising: bool = True

    @property
    def signed_delta_m(self):
        return -self.delta_m if self.mass_raising else self.delta_m


class ProductTag(enum.Enum):
    BELOW = "below"
    NEAR = "near"
    ABOVE = "above"


@dataclass(frozen=True)
class Product:
    value: float  # units of hbar
    tag: ProductTag


HALF = 0.5


def uncertainty_product(record, window=0.1, *, hbar=HBAR_MEV_S):
    """``delta_m * tau / hbar`` and its position relative to 1/2 (+- ``window``)."""
    if record.delta_m is None or record.tau is None:
        raise MissingField(f"{record.pair_name}: product needs both delta_m and tau")
    if not (record.delta_m > 0 and record.tau > 0):
        raise NonPositive(f"{record.pair_name}: delta_m and tau must be positive")
    value = record.delta_m * record.tau / hbar
    if value < HALF - window:
        tag = ProductTag.BELOW
    elif value > HALF + window:
        tag = ProductTag.ABOVE
    else:
        tag = ProductTag.NEAR
    return Product(value, tag)


def lifetime_bound(delta_m_lower, factor=HALF, *, hbar=HBAR_MEV_S):
    """Upper bound ``factor * hbar / delta_m`` on the partner lifetime (s)."""
    if not delta_m_lower > 0:
        raise NonPositive("delta_m lower bound must be positive")
    if not factor > 0:
        raise NonPositive("factor must be positive")
    return factor * hbar / delta_m_lower


# -- mass hierarchy -----------------------------------------------------------


@dataclass(frozen=True)
class MassHierarchy:
    """Species with masses (or ranks); any order on input."""

    species: tuple

    def __init__(self, species):
        object.__setattr__(self, "species", tuple((str(name), float(m)) for name, m in species))

    def ties(self):
        by_mass = {}
        for name, m in self.species:
            by_mass.setdefault(m, []).append(name)
        return [names for names in by_mass.values() if len(names) > 1]


@dataclass(frozen=True)
class TransmutationGraph:
    allowed: list = field(default_factory=list)  # (lighter, heavier)
    suppressed: list = field(default_factory=list)  # (heavier, lighter)


def allowed_transmutations(hierarchy, tie_policy="error"):
    """Mass-raising edges between every lighter and every heavier species.

    Reverse edges are returned separately as suppressed.  Species of equal
    mass raise :class:`TieError`, or get no edge between them when
    ``tie_policy="no-edge"``.
    """
    if tie_policy not in ("error", "no-edge"):
        raise ValidationError(f"unknown tie policy {tie_policy!r}")
    ties = hierarchy.ties()
    if ties and tie_policy == "error":
        raise TieError(f"equal masses for {ties}")
    ordered = sorted(hierarchy.species, key=lambda s: s[1])
    graph = TransmutationGraph()
    for i, (lo, m_lo) in enumerate(ordered):
        for hi, m_hi in ordered[i + 1:]:
            if m_hi > m_lo:
                graph.allowed.append((lo, hi))
                graph.suppressed.append((hi, lo))
    return graph


# -- neutrino estimate ----------------------------------------------------------

# Printed values of the atmospheric-neutrino chain at E ~ 1 GeV.
PRINTED_DM2_TAU = 2 / 3 * 1e-11  # eV^2 s
PRINTED_DM_TAU = 2 / 3 * 1e-15  # eV s
PRINTED_DELTA_M = 1e-4  # eV


@dataclass(frozen=True)
class Step:
    name: str
    value: float
    unit: str
    source: str  # "computed", "printed" or "audit"
    note: str = ""
    flag: bool = False


@dataclass(frozen=True)
class NeutrinoEstimate:
    delta_m2: float  # eV^2, unit-phase condition with E in GeV and L in km
    tau: float  # s, L / c
    delta_m: float  # eV, printed-chain headline
    audited_delta_m: float  # eV, (hbar/2) / tau
    audited_delta_m2: float  # eV^2, unit phase with hbar c restored
    step_log: tuple

    @property
    def flags(self):
        return [s for s in self.step_log if s.flag]


def _mismatch(a, b, rtol=0.5):
    return not math.isclose(a, b, rel_tol=rtol)


def neutrino_mass_estimate(L_km, E_GeV):
    """Follow the atmospheric-neutrino mass estimate step by step.

    The chain is reproduced as printed (the two product relations are
    printed constants at E = 1 GeV; the first is scaled linearly with E,
    since it equals 2E/c) and every step is recomputed from explicit
    constants.  Disagreements are flagged in ``step_log``.
    """
    if not (L_km > 0 and E_GeV > 0):
        raise NonPositive("L_km and E_GeV must be positive")
    log = []

    dm2 = 2 * E_GeV / L_km
    log.append(Step("delta_m2", dm2, "eV^2", "computed",
                    "unit phase dm2[eV^2] L[km] / 2E[GeV] = 1, read with the printed units"))
    tau = L_km / C_KM_S
    log.append(Step("tau", tau, "s", "computed", "tau = L / c"))

    dm2_tau_printed = PRINTED_DM2_TAU * E_GeV
    dm2_tau = dm2 * tau
    log.append(Step("dm2_tau", dm2_tau_printed, "eV^2 s", "printed",
                    f"recomputed dm2 * tau = 2E/c = {dm2_tau:.6g} eV^2 s",
                    flag=_mismatch(dm2_tau, dm2_tau_printed)))

    dm_tau_rule = HBAR_EV_S / 2
    log.append(Step("dm_tau", PRINTED_DM_TAU, "eV s", "printed",
                    f"transmutation rule gives hbar/2 = {dm_tau_rule:.6g} eV s; printed value equals hbar = {HBAR_EV_S:.6g}",
                    flag=_mismatch(dm_tau_rule, PRINTED_DM_TAU, rtol=0.2)))

    headline = PRINTED_DM_TAU / dm2_tau_printed
    log.append(Step("delta_m", headline, "eV", "printed",
                    "dm_tau / dm2_tau; dimensionally this ratio is 1/delta_m in eV^-1"))
    by_division = dm2_tau_printed / PRINTED_DM_TAU
    log.append(Step("delta_m_by_division", by_division, "eV", "computed",
                    "dm2_tau / dm_tau, the dimensionally consistent division of the printed products",
                    flag=_mismatch(by_division, headline)))

    L_m = L_km * KM
    audited_dm2 = 2 * E_GeV * GEV * HBAR_C_EV_M / L_m
    log.append(Step("audit_delta_m2", audited_dm2, "eV^2", "audit", "dm2 = 2 E hbar c / L",
                    flag=_mismatch(audited_dm2, dm2)))
    audited_dm = dm_tau_rule / tau
    log.append(Step("audit_delta_m", audited_dm, "eV", "audit", "dm = (hbar/2) / tau with tau = L/c",
                    flag=_mismatch(audited_dm, headline)))

    return NeutrinoEstimate(dm2, tau, headline, audited_dm, audited_dm2, tuple(log))


# -- table I/O --------------------------------------------------------------------

_TAU_KINDS = {k.value: k for k in TauKind}
_MISSING = ("", "-")


def _parse_row(lineno, line):
    fields = [f.strip() for f in line.split("|")]
    if len(fields) != 4:
        raise ParseError(f"line {lineno}: expected 4 '|'-separated fields, got {len(fields)}",
                         [(lineno, None, "field count")])
    name, dm_text, tau_text, kind_text = fields
    problems = []
    if not name:
        problems.append((lineno, 1, "pair_name is empty"))
    try:
        delta_m = float(dm_text)
        if not (math.isfinite(delta_m) and delta_m > 0):
            problems.append((lineno, 2, f"delta_m must be positive, got {dm_text}"))
    except ValueError:
        problems.append((lineno, 2, f"delta_m is not a number: {dm_text!r}"))
    tau = None
    if tau_text not in _MISSING:
        try:
            tau = float(tau_text)
            if not (math.isfinite(tau) and tau > 0):
                problems.append((lineno, 3, f"tau must be positive, got {tau_text}"))
        except ValueError:
            problems.append((lineno, 3, f"tau is not a number: {tau_text!r}"))
    kind = _TAU_KINDS.get(kind_text)
    if kind is None:
        problems.append((lineno, 4, f"tau_kind must be one of {sorted(_TAU_KINDS)}, got {kind_text!r}"))
    elif kind is not TauKind.LOWER_BOUND_ON_DELTA_M and tau is None and not problems:
        problems.append((lineno, 3, f"tau is required for tau_kind {kind_text!r}"))
    if problems:
        raise ParseError("; ".join(f"line {ln} column {col}: {msg}" for ln, col, msg in problems), problems)
    return TransmutationRecord(name, delta_m, tau, kind)


def load_particle_table(stream):
    """Parse ``pair_name | delta_m_MeV | tau_s | tau_kind`` rows.

    ``#`` starts a comment; ``-`` or an empty field marks a missing tau.
    All malformed rows are collected into a single :class:`ParseError`.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    records, problems = [], []
    for lineno, line in enumerate(stream, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            records.append(_parse_row(lineno, line))
        except ParseError as exc:
            problems.extend(exc.problems)
    if problems:
        detail = "; ".join(f"line {ln}" + (f" column {col}" if col else "") + f": {msg}" for ln, col, msg in problems)
        raise ParseError(f"bad particle table: {detail}", problems)
    return records


def dump_particle_table(records):
    """Serialise records in the table format; floats keep full precision."""
    lines = ["# pair_name | delta_m_MeV | tau_s | tau_kind"]
    for r in records:
        tau = "-" if r.tau is None else repr(r.tau)
        lines.append(f"{r.pair_name} | {r.delta_m!r} | {tau} | {r.tau_kind.value}")
    return "\n".join(lines) + "\n"


def bundled_table():
    """Records from the bundled ``mesons.tbl``."""
    with resources.files(__package__).joinpath("data/mesons.tbl").open(encoding="utf-8") as fh:
        return load_particle_table(fh)
