"""Command-line front end.

Exit codes: 0 success, 1 invariant failure, 2 usage error, 3 I/O error.
A ``--config`` JSON file supplies defaults for any flag (keys are flag names
with or without leading dashes); flags given on the command line win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .atom_optics import AtomTransition, GaussianMode
from .cavity import AbstractScenario, CavitySpec
from .checks import PERTURBABLE, run_checks
from .errors import InvalidArgumentError
from .sampling import (
    ESTIMATORS,
    KINDS,
    UNIFORM,
    LayoutSpec,
    layout_positions,
    layout_to_csv,
    monte_carlo,
    write_layout_csv,
)
from .spectra import PRESETS, scan, scenario_descriptor

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

DEFAULT_WAVELENGTH = 780e-9
DEFAULT_GAMMA = 2 * math.pi * 6.0666e6  # Rb D2 line, rad/s

KIND_ALIASES = {
    "uniform": "uniform_random",
    "antinode": "antinode_lattice",
    "node": "node_lattice",
    "bragg": "bragg_lattice",
}
ABSTRACT_KEYS = ("eta", "kappa_over_gamma")
GEOMETRIC_KEYS = ("wavelength", "waist", "length", "qsq")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: Optional[AbstractScenario] = None
    scenario_info: dict = field(default_factory=dict)
    grid: Optional[tuple] = None
    layout: Optional[LayoutSpec] = None
    wavelength: float = DEFAULT_WAVELENGTH
    estimator: Optional[str] = None
    samples: Optional[int] = None
    workers: Optional[int] = None
    perturb: dict = field(default_factory=dict)
    output: Optional[str] = None
    fmt: str = "csv"


# --- parsing ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_common(p):
    p.add_argument("--config", help="flat JSON file of flag defaults")
    p.add_argument("-o", "--output", help="output path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="atomcavity", description="Classical atom-cavity spectra and ensemble statistics.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("scan", help="write a detuning scan")
    _add_common(p)
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--eta", type=float, help="cavity cooperativity eta_c")
    p.add_argument("--kappa-over-gamma", type=float)
    p.add_argument("--lambda", dest="wavelength", type=float, help="wavelength (m)")
    p.add_argument("--waist", type=float, help="mode waist (m)")
    p.add_argument("--length", type=float, help="cavity length (m)")
    p.add_argument("--qsq", type=float, help="mirror power transmission")
    p.add_argument("--gamma", type=float, help="atomic linewidth (rad/s), geometric mode only")
    p.add_argument("--offset", type=float, help="cavity minus atom frequency (Gamma)")
    p.add_argument("--depth0", type=float, help="resonant side-beam absorption without cavity")
    p.add_argument("--dmin", type=float)
    p.add_argument("--dmax", type=float)
    p.add_argument("--dstep", type=float)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))

    p = sub.add_parser("ensemble", help="Monte-Carlo estimate of a collective factor")
    _add_common(p)
    _add_layout_flags(p)
    p.add_argument("--estimator", help=f"one of {sorted(ESTIMATORS)}")
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int)

    p = sub.add_parser("layout", help="write one layout realisation as CSV")
    _add_common(p)
    _add_layout_flags(p)
    p.add_argument("--index", type=int, help="sample index")
    p.add_argument("--lambda", dest="wavelength", type=float)

    p = sub.add_parser("check", help="run the identity suite")
    _add_common(p)
    p.add_argument("--perturb", nargs=2, action="append", metavar=("NAME", "EPS"),
                   help=f"scale a quantity by (1 + EPS); NAME in {PERTURBABLE}")
    p.add_argument("--seed", type=int)
    return parser


def _add_layout_flags(p):
    p.add_argument("--kind", help="uniform, antinode, node, bragg or commensurate")
    p.add_argument("--n", type=int, help="number of atoms")
    p.add_argument("--extent", type=float, help="uniform cube side (wavelengths)")
    p.add_argument("--per-wavelength", type=int, help="atoms per wavelength (commensurate)")
    p.add_argument("--seed", type=int)


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def _load_config(path, valid_dests):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config must be a flat JSON object")
    out = {}
    for key, value in data.items():
        dest = key.lstrip("-").replace("-", "_")
        dest = {"lambda": "wavelength", "format": "fmt"}.get(dest, dest)
        if dest not in valid_dests or dest in ("config", "command"):
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(value, (dict, list)) and dest != "perturb":
            raise UsageError(f"config key {key!r} must be a scalar")
        out[dest] = value
    return out


def parse_args(argv: Optional[Sequence[str]]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a command is required: scan, ensemble, layout or check")
    if args.config:
        sub = _subparser(parser, args.command)
        cfg = _load_config(args.config, set(vars(args)))
        sub.set_defaults(**cfg)
        args = parser.parse_args(argv)
    return args


# --- config assembly --------------------------------------------------------


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + {"wavelength": "lambda"}.get(n, n).replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing {flags}")


def _scan_config(args) -> RunConfig:
    _require(args, "output")
    given_abs = [k for k in ABSTRACT_KEYS if getattr(args, k) is not None]
    given_geo = [k for k in GEOMETRIC_KEYS if getattr(args, k) is not None]
    if given_geo and (given_abs or args.preset):
        raise UsageError("give either abstract (--eta/--kappa-over-gamma/--preset) or geometric parameters, not both")
    if args.gamma is not None and not given_geo:
        raise UsageError("--gamma only applies with geometric parameters")

    extra = {}
    if given_geo:
        _require(args, *GEOMETRIC_KEYS)
        gamma = args.gamma if args.gamma is not None else DEFAULT_GAMMA
        atom = AtomTransition.from_wavelength(args.wavelength, gamma)
        mode = GaussianMode.from_wavelength(args.wavelength, args.waist)
        cavity = CavitySpec(args.qsq, args.length)
        base = AbstractScenario.from_geometry(atom, mode, cavity)
        extra = {"wavelength": args.wavelength, "waist": args.waist, "length": args.length,
                 "q_sq": args.qsq, "gamma_rad_s": gamma}
        grid = (-5.0, 5.0, 0.01)
    elif args.preset:
        preset = PRESETS[args.preset]
        base, grid = preset.scenario, preset.grid
        extra = {"preset": args.preset}
    else:
        _require(args, *ABSTRACT_KEYS)
        base, grid = None, (-5.0, 5.0, 0.01)

    eta = args.eta if args.eta is not None else base.eta_c
    kog = args.kappa_over_gamma if args.kappa_over_gamma is not None else base.kappa_over_gamma
    offset = args.offset if args.offset is not None else (base.cavity_offset if base else 0.0)
    depth0 = args.depth0 if args.depth0 is not None else (base.depth0 if base else None)
    scenario = AbstractScenario(eta_c=eta, kappa_over_gamma=kog, cavity_offset=offset, depth0=depth0)
    grid = tuple(v if v is not None else g for v, g in zip((args.dmin, args.dmax, args.dstep), grid))
    return RunConfig(
        command="scan",
        scenario=scenario,
        scenario_info=scenario_descriptor(scenario, **extra),
        grid=grid,
        output=args.output,
        fmt=args.fmt or "csv",
    )


def _layout_spec(args, stochastic: bool) -> LayoutSpec:
    _require(args, "kind", "n")
    kind = KIND_ALIASES.get(args.kind, args.kind)
    if kind not in KINDS:
        raise UsageError(f"unknown kind {args.kind!r}")
    if stochastic or kind == UNIFORM:
        _require(args, "seed")
    kw = {"extent": args.extent} if args.extent is not None else {}
    seed = args.seed if args.seed is not None else 0
    return LayoutSpec(kind, args.n, seed=seed, n_per_wavelength=args.per_wavelength, **kw)


def _ensemble_config(args) -> RunConfig:
    _require(args, "estimator", "samples")
    if args.estimator not in ESTIMATORS:
        raise UsageError(f"unknown estimator {args.estimator!r}; choose from {sorted(ESTIMATORS)}")
    return RunConfig(
        command="ensemble",
        layout=_layout_spec(args, stochastic=True),
        estimator=args.estimator,
        samples=args.samples,
        workers=args.workers,
        output=args.output,
    )


def _layout_config(args) -> RunConfig:
    _require(args, "output")
    return RunConfig(
        command="layout",
        layout=_layout_spec(args, stochastic=False),
        samples=args.index or 0,
        wavelength=args.wavelength or DEFAULT_WAVELENGTH,
        output=args.output,
    )


def _check_config(args) -> RunConfig:
    perturb = {}
    raw = args.perturb or []
    if isinstance(raw, dict):
        raw = list(raw.items())
    for name, eps in raw:
        if name not in PERTURBABLE:
            raise UsageError(f"cannot perturb {name!r}; choose from {PERTURBABLE}")
        try:
            perturb[name] = float(eps)
        except ValueError:
            raise UsageError(f"perturbation {eps!r} is not a number") from None
    return RunConfig(command="check", perturb=perturb, samples=args.seed or 0, output=args.output)


def build_config(args: argparse.Namespace) -> RunConfig:
    builders = {"scan": _scan_config, "ensemble": _ensemble_config,
                "layout": _layout_config, "check": _check_config}
    try:
        return builders[args.command](args)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc


# --- commands ---------------------------------------------------------------


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def cmd_scan(cfg: RunConfig) -> int:
    table = scan(cfg.scenario, cfg.grid)
    table.scenario = cfg.scenario_info
    _emit(table.to_csv() if cfg.fmt == "csv" else table.to_json(), cfg.output)
    return EXIT_OK


def _expected_random(estimator, n):
    return {"F": 0.0, "F2": 1 / n, "H": 0.5, "G": 0.0, "G2": 1 / (2 * n)}[estimator]


def cmd_ensemble(cfg: RunConfig) -> int:
    spec = cfg.layout
    k = 2 * math.pi / cfg.wavelength
    est = monte_carlo(spec, k, cfg.estimator, cfg.samples, workers=cfg.workers)
    mean = est.mean
    out = {
        "kind": spec.kind,
        "n": spec.N,
        "extent": spec.extent,
        "seed": spec.seed,
        "estimator": cfg.estimator,
        "samples": est.n_samples,
        "mean": {"re": mean.real, "im": mean.imag} if isinstance(mean, complex) else mean,
        "second_moment": est.second_moment,
        "std": est.std,
        "std_error": est.std_error,
    }
    if spec.kind == UNIFORM:
        out["expected_uniform"] = _expected_random(cfg.estimator, spec.N)
    _emit(json.dumps(out, indent=1, sort_keys=True) + "\n", cfg.output)
    return EXIT_OK


def cmd_layout(cfg: RunConfig) -> int:
    k = 2 * math.pi / cfg.wavelength
    pos = layout_positions(cfg.layout, k, cfg.samples)
    if cfg.output == "-":
        sys.stdout.write(layout_to_csv(pos, k))
    else:
        write_layout_csv(cfg.output, pos, k)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    results = run_checks(cfg.perturb, seed=cfg.samples)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} identities hold")
    _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_INVARIANT if failed else EXIT_OK


COMMANDS = {"scan": cmd_scan, "ensemble": cmd_ensemble, "layout": cmd_layout, "check": cmd_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
        cfg = build_config(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return COMMANDS[cfg.command](cfg)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
