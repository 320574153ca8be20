"""Command-line front end.

Exit codes: 0 pass, 1 verification counterexample, 2 input schema
violation, 3 numeric domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import background as bg
from . import phenomenology as ph
from . import pifield, schemas, spectral
from .enclosure import Interval
from .star import DarbouxChart, StarProduct, check_associativity, check_berezin, check_symmetry
from .units import Constants, UnitError

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_SCHEMA, EXIT_DOMAIN = 0, 1, 2, 3
COMMANDS = ("verify", "mdr", "sw-map", "flux", "a4", "constrain")
DEFAULTS = {"order": 4, "seed": 0, "format": "json", "samples": 200, "sw_samples": 25}


@dataclass
class RunConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    order: int = 4
    seed: int = 0
    format: str = "json"
    samples: int = 200
    sw_samples: int = 25
    corrupt_c2: bool = False
    constants_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.order < 0:
            raise ValueError("order must be non-negative")


class CLIError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# I/O helpers


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CLIError(EXIT_SCHEMA, f"$: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise CLIError(EXIT_SCHEMA, f"cannot read {path}: {exc.strerror}") from exc


def _load_input(cfg: RunConfig, default):
    doc = default if cfg.input_path is None else _load_json(cfg.input_path)
    try:
        schemas.validate(doc, schemas.BY_COMMAND[cfg.command])
    except schemas.SchemaViolation as exc:
        raise CLIError(EXIT_SCHEMA, f"schema violation at {exc.path}: {exc.message}") from exc
    return doc


def _constants(cfg: RunConfig) -> Constants | None:
    if cfg.constants_path is None:
        return None
    try:
        return Constants.load(cfg.constants_path)
    except (KeyError, ValueError, OSError) as exc:
        raise CLIError(EXIT_SCHEMA, f"bad constants file: {exc}") from exc


def _render(doc: dict, rows: list[dict] | None, fmt: str) -> str:
    if fmt == "json" or rows is None:
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    fields = list(rows[0]) if rows else []
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _cell(v) for k, v in r.items()})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


def _emit(cfg: RunConfig, text: str):
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)


def _envelope(cfg: RunConfig, **body) -> dict:
    return {"schema_version": schemas.SCHEMA_VERSION, "command": cfg.command, **body}


def _scalar_json(x):
    if isinstance(x, Interval):
        return {"lo": str(x.lo), "hi": str(x.hi), "approx": float(x)}
    if isinstance(x, Fraction):
        return str(x)
    return x


# ---------------------------------------------------------------------------
# commands


# Type-(2,0) bivector on R^4 with J = diag(eps^T, eps^T): the wedge of the
# +i eigenvectors (1, i, 0, 0) and (0, 0, 1, i) of J^T.
_PHASE_J = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
_PHASE_THETA = [
    [0, 0, 1, (0, 1)],
    [0, 0, (0, 1), -1],
    [-1, (0, -1), 0, 0],
    [(0, -1), 1, 0, 0],
]
_PHASES = [(1, 0), (0, 1), (Fraction(3, 5), Fraction(4, 5)), (Fraction(-5, 13), Fraction(12, 13)),
           (Fraction(8, 17), Fraction(-15, 17))]


def cmd_verify(cfg: RunConfig) -> tuple[int, dict, list]:
    sp = StarProduct(DarbouxChart(2), order=cfg.order, corrupt_c2=cfg.corrupt_c2)
    reports = [check_associativity(sp, cfg.samples, cfg.seed)]
    reports += [check_symmetry(sp, r, cfg.samples, cfg.seed) for r in range(cfg.order + 1)]
    reports.append(check_berezin(sp))
    reports.append(bg.check_reconstruction(cfg.sw_samples, cfg.seed))
    reports.append(bg.theta_type_check(_PHASE_J, _PHASE_THETA))
    reports.append(bg.phase_invariance_check(_PHASE_THETA, _PHASES))
    realizations = [bg.Realization.polymer(1), bg.Realization.moyal(1)]
    reports.append(bg.universality_report(realizations))
    reports.append(spectral.a4_report(realizations))
    reports.append(bg.polymer_k6_report())
    reports.append(bg.compare_theta_conventions(
        bg.BackgroundFields.build([[1, 0], [0, 1]], [[0, "1/(4*pi)"], ["-1/(4*pi)", 0]], 1)))
    reports.append(bg.bracket_scale_check(Fraction(1, 2), 3))
    failed = [r for r in reports if not r.passed]
    doc = _envelope(cfg, order=cfg.order, seed=cfg.seed, samples=cfg.samples,
                    status="fail" if failed else "pass", checks=[r.to_json() for r in reports])
    if failed:
        doc["first_counterexample"] = failed[0].to_json()
    rows = [{"check": r.check, "status": r.status, "samples": r.samples} for r in reports]
    return (EXIT_COUNTEREXAMPLE if failed else EXIT_OK), doc, rows


_DEFAULT_MDR = {
    "schema_version": 1,
    "dispersion": {"m": 0.0, "ell_star_sq": 1.0, "sigma": 1},
    "grid": {"p_min": 0.0, "p_max": 0.3, "n": 7},
    "realizations": [{"name": "polymer", "scale_sq": 1}, {"name": "moyal", "scale_sq": 1}],
}


def cmd_mdr(cfg: RunConfig):
    doc = _load_input(cfg, _DEFAULT_MDR)
    consts = _constants(cfg)
    out = _envelope(cfg)
    rows: list[dict] = []
    if "realizations" in doc:
        order = doc.get("order", max(cfg.order, 2) + max(cfg.order, 2) % 2)
        coeffs = []
        for item in doc["realizations"]:
            r = bg.Realization.from_json(item)
            disp = bg.realization_dispersion(r, order)
            mdr = bg.extract_mdr(disp)
            coeffs.append({"realization": r.name, "order": order, "dispersion": repr(disp), **mdr.to_json()})
        out["realizations"] = coeffs
    if "dispersion" in doc:
        dd = doc["dispersion"]
        d = ph.Dispersion(float(dd.get("m", 0.0)), float(dd["ell_star_sq"]), int(dd["sigma"]),
                          float(dd.get("threshold", ph.DEFAULT_THRESHOLD)))
        if "p_values" in doc:
            p = np.asarray(doc["p_values"], dtype=float)
        elif "grid" in doc:
            g = doc["grid"]
            p = np.linspace(g["p_min"], g["p_max"], g["n"])
        else:
            p = np.linspace(0.0, min(d.p_ceiling, 1.0), 11)
        rows = ph.dispersion_table(d, p, float(doc.get("travel_time", 1.0)))
        out["table"] = rows
    out["velocity_shift_10TeV"] = ph.benchmark_shift(constants=consts)
    if cfg.format == "csv" and not rows:
        rows = out.get("realizations", [])
    if cfg.format == "csv":
        b = out["velocity_shift_10TeV"]
        sys.stderr.write(f"dv/c at 10 TeV (ell_star = l_P): computed {b['computed_dv']:.3e}, "
                         f"quoted ~{b['quoted_dv_order']:.0e}, discrepancy={b['discrepancy']}\n")
    return EXIT_OK, out, rows


_DEFAULT_SW = {
    "schema_version": 1,
    "g_closed": [[1, 0], [0, 1]],
    "B": [[0, "1/(4*pi)"], ["-1/(4*pi)", 0]],
    "alpha_prime": 1,
}


def cmd_sw_map(cfg: RunConfig):
    doc = _load_input(cfg, _DEFAULT_SW)
    fields = bg.BackgroundFields.from_json(doc)
    osd = bg.seiberg_witten_map(fields)
    ok = bg.reconstruction_holds(fields, osd)
    out = _envelope(cfg, background=fields.to_json(), open_string=osd.to_json(), reconstruction=ok,
                    theta_conventions=bg.compare_theta_conventions(fields).to_json())
    rows = []
    for name, m in (("G_open", osd.G_open), ("Theta", osd.Theta)):
        for i, row in enumerate(bg.matrix_strings(m)):
            for j, v in enumerate(row):
                rows.append({"quantity": name, "i": i, "j": j, "value": v})
    rows.append({"quantity": "theta_norm_sq", "i": "", "j": "", "value": out["open_string"]["theta_norm_sq"]})
    return (EXIT_OK if ok else EXIT_COUNTEREXAMPLE), out, rows


def cmd_flux(cfg: RunConfig):
    doc = _load_input(cfg, {"schema_version": 1, "n": 1, "ell_s": 1, "ell_P": 1})
    flux = bg.FluxData(int(doc["n"]), Fraction(str(doc.get("ell_s", 1))), Fraction(str(doc.get("ell_P", 1))))
    gamma = bg.immirzi_from_flux(flux)
    alpha = doc.get("alpha_prime", 1)
    theta = bg.flux_theta(flux, alpha if isinstance(alpha, str) else Fraction(alpha))
    exact = not isinstance(gamma, Interval)
    row = {"n": flux.n, "ell_s": str(flux.ell_s), "ell_P": str(flux.ell_P),
           "gamma_exact": exact,
           "gamma_lo": str(gamma if exact else gamma.lo), "gamma_hi": str(gamma if exact else gamma.hi),
           "theta_abs": pifield.to_str(theta)}
    out = _envelope(cfg, input=flux.to_json(), gamma=_scalar_json(gamma), gamma_exact=exact,
                    theta_abs=row["theta_abs"])
    return EXIT_OK, out, [row]


def cmd_a4(cfg: RunConfig):
    doc = _load_input(cfg, {"schema_version": 1, "realizations": [{"name": "polymer", "scale_sq": 1},
                                                                 {"name": "moyal", "scale_sq": 1}]})
    rows, by_name = [], {}
    for item in doc["realizations"]:
        r = bg.Realization.from_json(item)
        res = spectral.a4_from_symbol(spectral.OperatorSymbol.from_realization(r))
        rows.append(res.to_json(r.name))
        by_name.setdefault(r.name, res.a4)
    out = _envelope(cfg, results=rows)
    if "polymer" in by_name and "moyal" in by_name:
        out["scale_matching"] = spectral.scale_matching(by_name["moyal"], by_name["polymer"]).to_json()
    return EXIT_OK, out, rows


def cmd_constrain(cfg: RunConfig):
    default = {
        "schema_version": 1,
        "energy_unit": "E_P",
        "sigma": [1, -1],
        "channels": [{
            "name": "synthetic_unit_bound",
            "distance": {"value": 299792458e17, "unit": "m"},
            "e_high": {"value": 1e-5, "unit": "E_P"},
            "e_low": {"value": 0.0, "unit": "E_P"},
            "delta_t_bound": {"value": 1e17 * 1e-10 / 2, "unit": "s"},
        }],
    }
    doc = _load_input(cfg, default)
    consts = _constants(cfg)
    unit = doc.get("energy_unit", "E_P")
    rows = []
    for idx, item in enumerate(doc["channels"]):
        try:
            ch = ph.ObservationChannel.from_json(item, unit, consts)
        except UnitError as exc:
            raise CLIError(EXIT_SCHEMA, f"schema violation at $.channels[{idx}]: {exc.args[0]}") from exc
        except ValueError as exc:
            raise CLIError(EXIT_SCHEMA, f"schema violation at $.channels[{idx}]: {exc}") from exc
        for sigma in doc.get("sigma", [1, -1]):
            res = ph.invert_bound(ch, sigma, float(doc.get("m", 0.0)),
                                  threshold=float(doc.get("threshold", ph.DEFAULT_THRESHOLD)),
                                  energy_unit=unit, constants=consts)
            rows.append(res.to_json())
    return EXIT_OK, _envelope(cfg, energy_unit=unit, bounds=rows), rows


HANDLERS = {"verify": cmd_verify, "mdr": cmd_mdr, "sw-map": cmd_sw_map, "flux": cmd_flux,
            "a4": cmd_a4, "constrain": cmd_constrain}


def run(cfg: RunConfig) -> int:
    try:
        code, doc, rows = HANDLERS[cfg.command](cfg)
    except CLIError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (ph.DomainError, ZeroDivisionError, ArithmeticError) as exc:
        sys.stderr.write(f"numeric domain error: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        sys.stderr.write(f"numeric domain error: {exc}\n")
        return EXIT_DOMAIN
    _emit(cfg, _render(doc, rows, cfg.format))
    return code


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symplectic-mdr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", dest="input_path", help="input JSON document")
        p.add_argument("--output", dest="output_path", help="write here instead of stdout")
        p.add_argument("--config", help="JSON file with default order/seed/samples/format")
        p.add_argument("--order", type=int, help="truncation order (default 4)")
        p.add_argument("--seed", type=int, help="seed for randomized checks (default 0)")
        p.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
        p.add_argument("--constants", dest="constants_path", help="physical constants JSON")
        if name == "verify":
            p.add_argument("--samples", type=int, help="random samples per property (default 200)")
            p.add_argument("--sw-samples", dest="sw_samples", type=int,
                           help="random backgrounds per dimension (default 25)")
            p.add_argument("--corrupt-c2", action="store_true", help="mutation test: break C_2")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        file_cfg = _load_json(args.config)
        try:
            schemas.validate(file_cfg, schemas.CONFIG)
        except schemas.SchemaViolation as exc:
            raise CLIError(EXIT_SCHEMA, f"config schema violation at {exc.path}: {exc.message}") from exc
        merged.update({k: v for k, v in file_cfg.items() if k != "schema_version"})
    for key in ("order", "seed", "format", "samples", "sw_samples"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if merged["order"] < 0:
        raise CLIError(EXIT_SCHEMA, "--order must be non-negative")
    if merged["samples"] < 1 or merged["sw_samples"] < 0:
        raise CLIError(EXIT_SCHEMA, "--samples must be positive and --sw-samples non-negative")
    return RunConfig(command=args.command, input_path=args.input_path, output_path=args.output_path,
                     corrupt_c2=getattr(args, "corrupt_c2", False), constants_path=args.constants_path,
                     **merged)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except CLIError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
