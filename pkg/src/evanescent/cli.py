"""Command-line front end.

    evanescent tau {pair,propagator,mixed,renorm,path,massive,leading} ...
    evanescent medium {free-path,tunneling,wavelength,resonant-sigma,resonance} ...
    evanescent transit ...
    evanescent mc ...
    evanescent bounds {minimal-time,probability,maxima,rs,mt,spreads} ...
    evanescent particles ...

SI units at the boundary (rad/s, m, m^-3, m^2, s, eV); the ``massive`` and
``leading`` operations take natural units.  Data goes to stdout, diagnostics
to stderr.  Exit status: 0 success, 1 invalid input, 2 unparseable input.
``--config FILE`` supplies ``key = value`` defaults (keys are option names
without dashes, e.g. ``delta_omega``); explicit flags win.  The default
output format comes from ``$EVANESCENT_FORMAT`` (json if unset).
"""

import argparse
import csv
import dataclasses
import enum
import io
import json
import math
import os
import sys

import numpy as np

from . import medium_transit as mt
from . import mc_transport
from . import particles as pt
from . import temporal_core as tc
from . import uncertainty as un
from .errors import ParseError, ValidationError

FORMATS = ("json", "csv", "text")
FORMAT_ENV = "EVANESCENT_FORMAT"

# module operation -> (subcommand, op)
OPERATIONS = {
    "temporal_core.temporal_pair": ("tau", "pair"),
    "temporal_core.photon_propagator_times": ("tau", "propagator"),
    "temporal_core.mixed_formation_time": ("tau", "mixed"),
    "temporal_core.renormalized_formation_time": ("tau", "renorm"),
    "temporal_core.formation_path": ("tau", "path"),
    "temporal_core.massive_temporal": ("tau", "massive"),
    "temporal_core.massive_formation_leading": ("tau", "leading"),
    "medium_transit.free_path": ("medium", "free-path"),
    "medium_transit.tunneling_condition": ("medium", "tunneling"),
    "medium_transit.wavelength_condition": ("medium", "wavelength"),
    "medium_transit.resonant_cross_section": ("medium", "resonant-sigma"),
    "medium_transit.resonance_condition": ("medium", "resonance"),
    "medium_transit.transit_prediction": ("transit", None),
    "mc_transport.simulate": ("mc", None),
    "mc_transport.sweep": ("mc", None),
    "uncertainty.minimal_time": ("bounds", "minimal-time"),
    "uncertainty.transition_probability": ("bounds", "probability"),
    "uncertainty.locate_transition_maxima": ("bounds", "maxima"),
    "uncertainty.rs_bound": ("bounds", "rs"),
    "uncertainty.mt_projector_bound": ("bounds", "mt"),
    "uncertainty.wigner_spreads": ("bounds", "spreads"),
    "particles.load_particle_table": ("particles", None),
    "particles.uncertainty_product": ("particles", None),
    "particles.lifetime_bound": ("particles", None),
    "particles.allowed_transmutations": ("particles", None),
    "particles.neutrino_mass_estimate": ("particles", None),
}


class Usage(Exception):
    """Command-line usage problem (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise Usage(f"{self.prog}: error: {message}\n\n{self.format_usage()}")


def _plain(obj):
    """Convert results into JSON-compatible builtins."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for extra in ("implied_group_index", "group_index_error", "rhs", "robertson_rhs", "slack", "saturated"):
            if hasattr(type(obj), extra):
                out[extra] = _plain(getattr(obj, extra))
        return out
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, Exception):
        return {"error": type(obj).__name__, "message": str(obj)}
    return obj


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            for i, item in enumerate(v):
                if isinstance(item, dict):
                    yield from _flatten(item, f"{key}.{i}.")
                else:
                    yield f"{key}.{i}", item
        else:
            yield key, v


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return "" if v is None else str(v)


def _emit(report, fmt, out):
    """Write ``report`` (a dict, optionally with a ``rows``/``columns`` table)."""
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
        return
    if "rows" in report and "columns" in report:
        header, rows = report["columns"], report["rows"]
    else:
        header, rows = ["key", "value"], [[k, v] for k, v in _flatten(report)]
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
        return
    cells = [list(map(str, header))] + [[_cell(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# -- subcommand handlers ---------------------------------------------------------


def _response(args):
    if args.table:
        with open(args.table, encoding="utf-8") as fh:
            return tc.load_response_table(fh)
    kind = args.response
    if kind == "lorentzian":
        if args.omega0 is None or args.gamma is None:
            raise ValidationError("lorentzian response needs --omega0 and --gamma")
        w0, g = args.omega0, args.gamma
        return tc.SpectralResponse(lambda w: 1 / (w - w0 + 0.5j * g))
    t0 = args.t0 or 0.0
    scale = args.scale
    if scale is not None and not scale > 0:
        raise ValidationError("--scale must be positive")
    decay = 0.0 if scale is None else 1 / scale
    return tc.SpectralResponse(lambda w: np.exp(1j * w * t0 - w * decay))


def cmd_tau(args):
    op = args.op
    if op == "pair":
        s = _response(args)
        res = tc.temporal_pair(s, args.omega, args.step, richardson=args.richardson)
        return {"op": op, "omega": args.omega, "tau1": res.tau1, "tau2": res.tau2}
    if op == "propagator":
        res = tc.photon_propagator_times(args.omega, args.k, form=args.form)
        return {"op": op, "tau1": res.tau1, "tau2": res.tau2, "tau1_delta_weight": res.delta_weight}
    if op == "mixed":
        return {"op": op, "tau2": tc.mixed_formation_time(args.omega, args.r)}
    if op == "renorm":
        value = tc.renormalized_formation_time(args.omega, args.r, args.terms, tail=not args.no_tail)
        return {"op": op, "x": args.omega * args.r / tc.C, "tau2": value}
    if op == "path":
        return {"op": op, "formation_path": tc.formation_path(args.delta_omega)}
    if op == "massive":
        res = tc.massive_temporal(tc.MassiveState(args.E, args.m, args.r))
        return {"op": op, "bound": args.E < args.m, "tau1": res.tau1, "tau2": res.tau2}
    if op == "leading":
        return {"op": op, "tau2": tc.massive_formation_leading(args.E, args.m)}
    raise Usage(f"unknown tau op {op}")


def _medium_from(args):
    if getattr(args, "medium", None):
        with open(args.medium, encoding="utf-8") as fh:
            return mt.parse_medium(fh)
    return None


def _sigma(args, spec=None):
    if args.thomson:
        return mt.SIGMA_THOMSON
    if args.sigma is not None:
        return args.sigma
    if spec is not None and spec.cross_section() is not None:
        return spec.cross_section()
    raise Usage("error: need --sigma, --thomson or a medium file with a cross-section")


def _rho(args, spec=None):
    if args.rho is not None:
        return args.rho
    if spec is not None and spec.rho is not None:
        return spec.rho
    raise Usage("error: need --rho or a medium file with rho")


def cmd_medium(args):
    op = args.op
    spec = _medium_from(args)
    if op == "free-path":
        return {"op": op, "free_path": mt.free_path(_rho(args, spec), _sigma(args, spec))}
    if op == "tunneling":
        c = mt.tunneling_condition(args.delta_omega, _rho(args, spec), _sigma(args, spec))
        return {"op": op, **c._asdict()}
    if op == "wavelength":
        sigma = args.sigma if args.sigma is not None else mt.SIGMA_THOMSON
        return {"op": op, **mt.wavelength_condition(args.lam, _rho(args, spec), sigma)._asdict()}
    if op == "resonant-sigma":
        return {"op": op, "sigma": mt.resonant_cross_section(args.lam, args.gamma, args.delta_omega)}
    if op == "resonance":
        return {"op": op, **mt.resonance_condition(args.delta_omega, _rho(args, spec), args.lam)._asdict()}
    raise Usage(f"unknown medium op {op}")


def cmd_transit(args):
    spec = _medium_from(args)
    if spec is None:
        model = args.sigma_model or ("explicit" if args.sigma is not None else "thomson" if args.rho else "explicit")
        spec = mt.MediumSpec(rho=args.rho, sigma=args.sigma, sigma_model=model, n=args.n,
                             omega0=args.omega0, gamma=args.gamma)
    elif args.n != 1.0:
        spec = dataclasses.replace(spec, n=args.n)
    pred = mt.transit_prediction(spec, args.L, tau1=args.tau1, delta_ell=args.jump, omega=args.omega,
                                 closure=args.closure)
    return {"closure": mt.CLOSURE_ALIASES.get(args.closure, args.closure), "n": spec.n, **_plain(pred)}


def cmd_mc(args):
    if args.seed is None:
        raise Usage("mc: error: --seed is required")
    if args.n:
        configs = [mc_transport.WalkConfig.from_index(n, args.ell, args.L, args.walkers, args.seed, delay=args.tau1)
                   for n in args.n]
    else:
        jumps = args.jump or [0.0]
        configs = [mc_transport.WalkConfig(args.ell, args.L, args.walkers, args.seed, jump=j, delay=args.tau1)
                   for j in jumps]
    results = mc_transport.sweep(configs, n_threads=args.threads)
    failures = [r for r in results if isinstance(r, Exception)]
    if len(failures) == len(results):
        raise failures[0]
    if args.format == "json":
        return {"results": [_plain(r) for r in results]}
    rows = [list(r.csv_row()) if not isinstance(r, Exception) else [args.seed, "error", str(r)] for r in results]
    return {"columns": list(mc_transport.CSV_COLUMNS), "rows": rows}


def _matrix(value):
    arr = np.array([[complex(x) for x in row] for row in value]) if isinstance(value[0], list) else None
    if arr is None:
        arr = np.array([complex(x) for x in value])
    return arr


def cmd_bounds(args):
    op = args.op
    if op == "minimal-time":
        res = un.minimal_time(args.dE, args.kind)
        return {"op": op, "kind": args.kind, "seconds": res.seconds, "advanced": res.advanced,
                "bound_hbar_units": un.ProcessKind(args.kind).bound}
    if op == "probability":
        return {"op": op, "W": float(un.transition_probability(args.dE, args.tau))}
    if op == "maxima":
        taus = un.locate_transition_maxima(args.dE, args.count - 1)
        phases = taus * abs(args.dE) / (2 * un.HBAR_EV_S)
        return {"op": op, "tau": taus.tolist(), "phase": phases.tolist(),
                "expected_phase": [math.pi / 2 + n * math.pi for n in range(args.count)]}
    if op == "rs":
        if args.matrices:
            with open(args.matrices, encoding="utf-8") as fh:
                try:
                    data = json.load(fh)
                    A, B, psi = _matrix(data["A"]), _matrix(data["B"]), _matrix(data["psi"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
                    raise ParseError(f"bad matrix file: {exc}") from None
        else:
            A = np.array([[0, 1], [1, 0]], dtype=complex)
            B = np.array([[0, -1j], [1j, 0]])
            psi = np.array([1, 0], dtype=complex)
        return {"op": op, **_plain(un.rs_bound(A, B, psi))}
    if op == "mt":
        res = un.mt_projector_bound(args.dH, args.t, args.kind)
        return {"op": op, "kind": args.kind, **_plain(res)}
    if op == "spreads":
        with open(args.grid, encoding="utf-8") as fh:
            tgrid = un.load_wavepacket_grid(fh)
        egrid = None
        if args.energy_grid:
            with open(args.energy_grid, encoding="utf-8") as fh:
                egrid = un.load_wavepacket_grid(fh)
        dt, dE = un.wigner_spreads(tgrid, args.z_index, egrid)
        return {"op": op, "z_index": args.z_index, "delta_t": dt, "delta_E": dE}
    raise Usage(f"unknown bounds op {op}")


def _hierarchy(items):
    species = []
    for item in items:
        name, sep, mass = item.partition("=")
        if not sep:
            raise Usage(f"particles: error: hierarchy entries look like name=mass, got {item!r}")
        try:
            species.append((name, float(mass)))
        except ValueError:
            raise Usage(f"particles: error: bad mass in {item!r}") from None
    return pt.MassHierarchy(species)


def cmd_particles(args):
    report = {}
    if args.table:
        with open(args.table, encoding="utf-8") as fh:
            records = pt.load_particle_table(fh)
    else:
        records = pt.bundled_table()
    rows = []
    for r in records:
        row = {"pair": r.pair_name, "delta_m_MeV": r.delta_m, "tau_s": r.tau, "tau_kind": r.tau_kind.value}
        if r.tau is not None:
            prod = pt.uncertainty_product(r, args.window)
            row.update(product_hbar=prod.value, tag=prod.tag.value)
        if r.tau_kind is pt.TauKind.LOWER_BOUND_ON_DELTA_M:
            row["lifetime_bound_s"] = {str(f): pt.lifetime_bound(r.delta_m, f) for f in args.factor}
        rows.append(row)
    report["records"] = rows
    if args.hierarchy:
        g = pt.allowed_transmutations(_hierarchy(args.hierarchy), args.tie_policy)
        report["transmutations"] = {"allowed": [list(e) for e in g.allowed],
                                    "suppressed": [list(e) for e in g.suppressed]}
    if args.neutrino:
        L_km, E_GeV = args.neutrino
        report["neutrino"] = _plain(pt.neutrino_mass_estimate(L_km, E_GeV))
    return report


# -- parser -------------------------------------------------------------------------


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=FORMATS, default=None, help="output format (default $%s or json)" % FORMAT_ENV)
    p.add_argument("--config", help="key = value defaults file")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="evanescent", description=__doc__.split("\n\n")[0], parents=[common])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tau = subs.add_parser("tau", parents=[common], help="delay and formation times")
    tau.add_argument("op", choices=["pair", "propagator", "mixed", "renorm", "path", "massive", "leading"])
    tau.add_argument("--omega", type=float, help="angular frequency, rad/s")
    tau.add_argument("--k", type=float, help="|k|, rad/m (propagator)")
    tau.add_argument("--form", choices=["pole", "full"], default="pole")
    tau.add_argument("--r", type=float, help="distance (m; natural units for massive)")
    tau.add_argument("--terms", type=int, default=100_000, help="series terms (renorm)")
    tau.add_argument("--no-tail", action="store_true", help="drop the tail correction (renorm)")
    tau.add_argument("--delta-omega", type=float, help="detuning, rad/s (path)")
    tau.add_argument("--E", type=float, help="energy, natural units")
    tau.add_argument("--m", type=float, help="mass, natural units")
    tau.add_argument("--table", help="tabulated response: omega, Re S, Im S per line (pair)")
    tau.add_argument("--response", choices=["exp", "lorentzian"], default="exp",
                     help="closed-form response: exp(i w t0 - w/scale) or 1/(w - omega0 + i gamma/2)")
    tau.add_argument("--t0", type=float, help="phase delay of the exp response, s")
    tau.add_argument("--scale", type=float, help="decay frequency of the exp response, rad/s")
    tau.add_argument("--omega0", type=float)
    tau.add_argument("--gamma", type=float)
    tau.add_argument("--step", type=float, help="finite-difference step, rad/s")
    tau.add_argument("--richardson", action="store_true")
    tau.set_defaults(handler=cmd_tau, required={
        "pair": ["omega"], "propagator": ["omega", "k"], "mixed": ["omega", "r"], "renorm": ["omega", "r"],
        "path": ["delta_omega"], "massive": ["E", "m", "r"], "leading": ["E", "m"]})

    med = subs.add_parser("medium", parents=[common], help="feasibility conditions")
    med.add_argument("op", choices=["free-path", "tunneling", "wavelength", "resonant-sigma", "resonance"])
    med.add_argument("--rho", type=float, help="scatterer density, m^-3")
    med.add_argument("--sigma", type=float, help="cross-section, m^2")
    med.add_argument("--thomson", action="store_true", help="use the Thomson cross-section")
    med.add_argument("--delta-omega", type=float, help="detuning, rad/s")
    med.add_argument("--lam", type=float, help="wavelength, m")
    med.add_argument("--gamma", type=float, help="resonance width, rad/s")
    med.add_argument("--medium", help="medium config file (rho, sigma | sigma_model, n, omega0, gamma)")
    med.set_defaults(handler=cmd_medium, required={
        "free-path": [], "tunneling": ["delta_omega"], "wavelength": ["lam"],
        "resonant-sigma": ["lam", "gamma", "delta_omega"], "resonance": ["delta_omega", "lam"]})

    tr = subs.add_parser("transit", parents=[common], help="deterministic transit prediction")
    tr.add_argument("--n", type=float, default=1.0, help="phase refractive index")
    tr.add_argument("--closure", choices=mt.CLOSURES + tuple(mt.CLOSURE_ALIASES), default="phase_index")
    tr.add_argument("--L", type=float, default=1.0, help="slab length, m")
    tr.add_argument("--rho", type=float)
    tr.add_argument("--sigma", type=float)
    tr.add_argument("--sigma-model", choices=mt.SIGMA_MODELS)
    tr.add_argument("--omega0", type=float)
    tr.add_argument("--gamma", type=float)
    tr.add_argument("--omega", type=float, help="probe angular frequency, rad/s")
    tr.add_argument("--tau1", type=float, help="delay per scattering, s")
    tr.add_argument("--jump", type=float, help="jump length, m (explicit closure)")
    tr.add_argument("--medium", help="medium config file")
    tr.set_defaults(handler=cmd_transit, required={})

    mc = subs.add_parser("mc", parents=[common], help="Monte Carlo transport (runs and sweeps)")
    mc.add_argument("--ell", type=float, default=1.0, help="mean free path, m")
    mc.add_argument("--jump", type=float, nargs="+", help="jump length(s), m; several values run a sweep")
    mc.add_argument("--n", type=float, nargs="+", help="phase index(es); jump = 2 pi (n-1) ell")
    mc.add_argument("--tau1", type=float, default=0.0, help="delay per scattering, s")
    mc.add_argument("--L", type=float, default=100.0, help="slab length, m")
    mc.add_argument("--walkers", type=int, default=10_000)
    mc.add_argument("--seed", type=int, help="64-bit master seed (required)")
    mc.add_argument("--threads", type=int, default=1)
    mc.set_defaults(handler=cmd_mc, required={})

    bd = subs.add_parser("bounds", parents=[common], help="energy-time uncertainty relations")
    bd.add_argument("op", choices=["minimal-time", "probability", "maxima", "rs", "mt", "spreads"])
    kinds = [k.value for k in un.ProcessKind]
    bd.add_argument("--dE", type=float, help="energy deviation, eV")
    bd.add_argument("--dH", type=float, help="energy spread, eV (magnitude for virtual)")
    bd.add_argument("--kind", choices=kinds, default="stable")
    bd.add_argument("--tau", type=float, help="duration, s")
    bd.add_argument("--t", type=float, help="time, s")
    bd.add_argument("--count", type=int, default=6, help="number of maxima")
    bd.add_argument("--matrices", help="JSON file with A, B (matrices) and psi; default Pauli x, y and |0>")
    bd.add_argument("--grid", help="|psi(x,y,z,t)|^2 grid file")
    bd.add_argument("--energy-grid", help="|psi(x,y,z,E)|^2 grid file")
    bd.add_argument("--z-index", type=int, default=0)
    bd.set_defaults(handler=cmd_bounds, required={
        "minimal-time": ["dE"], "probability": ["dE", "tau"], "maxima": ["dE"], "rs": [],
        "mt": ["dH", "t"], "spreads": ["grid"]})

    pa = subs.add_parser("particles", parents=[common], help="transmutation products and estimates")
    pa.add_argument("--table", help="particle table (default: bundled mesons.tbl)")
    pa.add_argument("--window", type=float, default=0.1, help="half-width of the 'near 1/2' band")
    pa.add_argument("--factor", type=float, nargs="+", default=[0.5, 0.775], help="lifetime-bound factors")
    pa.add_argument("--hierarchy", nargs="+", metavar="NAME=MASS")
    pa.add_argument("--tie-policy", choices=["error", "no-edge"], default="error")
    pa.add_argument("--neutrino", type=float, nargs=2, metavar=("L_KM", "E_GEV"))
    pa.set_defaults(handler=cmd_particles, required={})
    return parser


def _read_config(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"{path}:{lineno}: expected key = value")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, argv, args):
    """Re-parse with config values installed as defaults so flags still win."""
    config = _read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in config.items():
        action = known.get(key)
        if action is None:
            raise ParseError(f"{args.config}: unknown key {key!r} for {args.command}")
        if action.nargs in ("+", "*") or isinstance(action.nargs, int):
            items = raw.replace(",", " ").split()
            defaults[key] = [action.type(v) if action.type else v for v in items]
        elif action.const is True:
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = action.type(raw) if action.type else raw
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.config:
            args = _apply_config(parser, argv, args)
        args.format = args.format or os.environ.get(FORMAT_ENV) or "json"
        if args.format not in FORMATS:
            raise Usage(f"unsupported output format {args.format!r}")
        op = getattr(args, "op", None)
        missing = [name for name in args.required.get(op, []) if getattr(args, name) is None]
        if missing:
            flags = ", ".join("--" + m.replace("_", "-") for m in missing)
            raise Usage(f"{args.command} {op}: error: missing {flags}")
        report = args.handler(args)
        buf = io.StringIO()
        _emit(_plain(report), args.format, buf)
        stdout.write(buf.getvalue())
        return 0
    except (Usage, ParseError) as exc:
        stderr.write(f"{exc}\n")
        return 2
    except (ValidationError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
