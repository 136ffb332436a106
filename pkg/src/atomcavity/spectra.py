"""Detuning scans, peak finding and the classical/quantum coupling correspondence."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.constants import epsilon_0, hbar

from . import kernels
from .atom_optics import AtomTransition, GaussianMode, beta_exact, lorentz_absorptive
from .cavity import (
    AbstractScenario,
    CavitySpec,
    cavity_emission,
    fs_emission_driven_atom,
    fs_emission_driven_cavity,
    transmission,
)
from .errors import InvalidArgumentError, PhysicsWarning, UnsupportedOperationError

COLUMNS = (
    "transmission",
    "fs_emission",
    "cavity_emission",
    "fs_emission_ratio",
    "sidebeam_T",
)
CSV_HEADER = ("delta_over_gamma", "delta_c_over_kappa") + COLUMNS
_POWER_COLUMNS = COLUMNS[:4]


def detuning_grid(dmin: float, dmax: float, step: float) -> np.ndarray:
    """Inclusive, evenly spaced grid from ``dmin`` to ``dmax``."""
    if not step > 0 or not dmax > dmin:
        raise InvalidArgumentError("need dmax > dmin and step > 0")
    n = int(round((dmax - dmin) / step)) + 1
    if n < 2:
        raise InvalidArgumentError("grid needs at least 2 points")
    return np.linspace(dmin, dmin + (n - 1) * step, n)


@dataclass(frozen=True)
class Preset:
    scenario: AbstractScenario
    grid: Tuple[float, float, float]
    description: str


PRESETS: Dict[str, Preset] = {
    "fig3": Preset(
        AbstractScenario(eta_c=10.0, kappa_over_gamma=1.0),
        (-5.0, 5.0, 0.01),
        "cavity drive, strong coupling, kappa = Gamma",
    ),
    "fig4": Preset(
        AbstractScenario(eta_c=10.0, kappa_over_gamma=10.0),
        (-20.0, 20.0, 0.01),
        "cavity drive, strong coupling, kappa = 10 Gamma",
    ),
    "fig5": Preset(
        AbstractScenario(eta_c=10.0, kappa_over_gamma=1.0),
        (-5.0, 5.0, 0.01),
        "side drive, emission into cavity and free space",
    ),
    "fig6": Preset(
        AbstractScenario(eta_c=1.0, kappa_over_gamma=0.1, depth0=0.1),
        (-2.0, 2.0, 0.01),
        "side-beam transmission window, kappa = Gamma/10",
    ),
}


def scenario_descriptor(scenario: AbstractScenario, **extra) -> dict:
    d = {
        "eta_c": scenario.eta_c,
        "kappa_over_gamma": scenario.kappa_over_gamma,
        "gamma": scenario.gamma,
        "cavity_offset": scenario.cavity_offset,
        "depth0": scenario.depth0,
    }
    d.update(extra)
    return d


@dataclass
class SpectrumTable:
    """Spectra on a grid of probe-atom detunings (units of Gamma).

    ``columns`` maps each name in :data:`COLUMNS` to an array, or None when
    the quantity does not apply to the scenario.
    """

    scenario: dict
    delta_over_gamma: np.ndarray
    delta_c_over_kappa: np.ndarray
    columns: Dict[str, Optional[np.ndarray]] = field(default_factory=dict)

    def __post_init__(self):
        d = np.asarray(self.delta_over_gamma, dtype=float)
        if d.size < 2 or np.any(np.diff(d) <= 0):
            raise InvalidArgumentError("detuning grid must be strictly increasing")
        for name in COLUMNS:
            self.columns.setdefault(name, None)
        for name in _POWER_COLUMNS:
            col = self.columns[name]
            if col is not None and np.any(col < 0):
                raise InvalidArgumentError(f"negative power ratio in {name}")
        t = self.columns["transmission"]
        if t is not None and np.any(t > 1 + 1e-12):
            raise InvalidArgumentError("transmission exceeds 1")

    def __len__(self):
        return len(self.delta_over_gamma)

    def row_at(self, delta_over_gamma: float) -> dict:
        i = int(np.argmin(np.abs(self.delta_over_gamma - delta_over_gamma)))
        row = {"delta_over_gamma": float(self.delta_over_gamma[i]),
               "delta_c_over_kappa": float(self.delta_c_over_kappa[i])}
        for name in COLUMNS:
            col = self.columns[name]
            row[name] = None if col is None else float(col[i])
        return row

    # serialisation -------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# " + json.dumps(self.scenario, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        cols = [self.delta_over_gamma, self.delta_c_over_kappa] + [self.columns[n] for n in COLUMNS]
        for i in range(len(self)):
            writer.writerow(["" if col is None else format(float(col[i]), ".12g") for col in cols])
        return buf.getvalue()

    def to_json(self) -> str:
        cols = {
            "delta_over_gamma": self.delta_over_gamma.tolist(),
            "delta_c_over_kappa": self.delta_c_over_kappa.tolist(),
        }
        for name in COLUMNS:
            col = self.columns[name]
            cols[name] = None if col is None else col.tolist()
        return json.dumps({"scenario": self.scenario, "columns": cols}, sort_keys=True, indent=1) + "\n"

    def write(self, path: Union[str, os.PathLike], fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)

    @classmethod
    def from_csv(cls, text: str) -> "SpectrumTable":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# "):
            raise InvalidArgumentError("missing scenario comment line")
        scenario = json.loads(lines[0][2:])
        reader = csv.reader(lines[1:])
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise InvalidArgumentError(f"unexpected header {header}")
        rows = list(reader)
        data = {}
        for j, name in enumerate(CSV_HEADER):
            raw = [r[j] for r in rows]
            data[name] = None if all(v == "" for v in raw) else np.array([float(v) for v in raw])
        return cls(
            scenario=scenario,
            delta_over_gamma=data["delta_over_gamma"],
            delta_c_over_kappa=data["delta_c_over_kappa"],
            columns={n: data[n] for n in COLUMNS},
        )


def scan(
    scenario: AbstractScenario,
    grid: Union[Sequence[float], np.ndarray],
    columns: Optional[Sequence[str]] = None,
    name: Optional[str] = None,
) -> SpectrumTable:
    """Evaluate the RWA spectra of ``scenario`` on a probe-detuning grid.

    ``grid`` is either ``(dmin, dmax, step)`` in units of Gamma or an explicit
    increasing array. The cavity detuning follows the probe,
    delta_c = Delta - cavity_offset. ``columns`` selects a subset of
    :data:`COLUMNS`; ``sidebeam_T`` is only available when the scenario sets
    ``depth0``.
    """
    if isinstance(grid, tuple) and len(grid) == 3:
        d = detuning_grid(*grid)
    else:
        d = np.asarray(grid, dtype=float)
    wanted = set(COLUMNS if columns is None else columns)
    unknown = wanted - set(COLUMNS)
    if unknown:
        raise InvalidArgumentError(f"unknown columns {sorted(unknown)}")
    if scenario.depth0 is None:
        if columns is not None and "sidebeam_T" in wanted:
            raise InvalidArgumentError("sidebeam_T needs a scenario with depth0")
        wanted.discard("sidebeam_T")

    gamma, kappa = scenario.gamma, scenario.kappa
    delta_a = d * gamma
    delta_c = scenario.delta_c(delta_a)
    t, fs, cav, fsr = kernels.cavity_spectra(
        delta_a, delta_c, scenario.eta_c, scenario.eta_c, gamma, kappa
    )
    values = {"transmission": t, "fs_emission": fs, "cavity_emission": cav, "fs_emission_ratio": fsr}
    if "sidebeam_T" in wanted:
        values["sidebeam_T"] = 1 - scenario.depth0 * lorentz_absorptive(delta_a, gamma) * (fsr + cav)
    extra = {"preset": name} if name else {}
    return SpectrumTable(
        scenario=scenario_descriptor(scenario, **extra),
        delta_over_gamma=d,
        delta_c_over_kappa=delta_c / kappa,
        columns={n: (values[n] if n in wanted else None) for n in COLUMNS},
    )


def scan_preset(name: str, grid=None) -> SpectrumTable:
    try:
        preset = PRESETS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return scan(preset.scenario, grid if grid is not None else preset.grid, name=name)


@dataclass(frozen=True)
class PeakReport:
    """Local maxima of one spectrum column, positions in units of Gamma.

    ``splitting`` is the separation of the two highest maxima, or None when
    fewer than two were found.
    """

    positions: Tuple[float, ...]
    heights: Tuple[float, ...]
    splitting: Optional[float]

    @property
    def resolved(self) -> bool:
        return self.splitting is not None


def find_peaks(table: SpectrumTable, column: str = "transmission") -> PeakReport:
    """3-point local maxima refined by a parabola through each maximum and its neighbours."""
    y = table.columns.get(column)
    if y is None:
        raise InvalidArgumentError(f"column {column!r} is empty")
    x = table.delta_over_gamma
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    idx = np.nonzero(inner)[0] + 1
    positions, heights = [], []
    for i in idx:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        curv = y0 - 2 * y1 + y2
        h = x[i + 1] - x[i]
        shift = 0.5 * (y0 - y2) / curv if curv < 0 else 0.0
        positions.append(float(x[i] + shift * h))
        heights.append(float(y1 - 0.25 * (y0 - y2) * shift))
    splitting = None
    if len(idx) >= 2:
        step = float(np.max(np.diff(x)))
        if step > 1 / 50:
            warnings.warn(
                f"grid step {step:g} Gamma is too coarse for a splitting measurement",
                PhysicsWarning,
                stacklevel=2,
            )
        top = sorted(np.argsort(heights)[-2:])
        splitting = abs(positions[top[1]] - positions[top[0]])
    return PeakReport(tuple(positions), tuple(heights), splitting)


def vacuum_rabi_classical(eta_c: float, kappa: float, gamma: float) -> float:
    """Normal-mode splitting 2g = sqrt(eta kappa Gamma), same units as the rates."""
    if eta_c < 0 or not kappa > 0 or not gamma > 0:
        raise InvalidArgumentError("need eta_c >= 0 and positive linewidths")
    return math.sqrt(eta_c * kappa * gamma)


def dipole_moment(atom: AtomTransition) -> float:
    """|mu| in C m from the spontaneous decay rate."""
    return math.sqrt(3 * math.pi * epsilon_0 * hbar * atom.gamma / atom.k0**3)


def g_quantum(atom: AtomTransition, mode: GaussianMode, cavity_length) -> float:
    """Single-photon coupling g (rad/s) for mode volume pi w^2 L / 4.

    ``cavity_length`` is a length in metres or a :class:`CavitySpec`.
    """
    if isinstance(cavity_length, AbstractScenario):
        raise UnsupportedOperationError("g needs a physical geometry, not an abstract scenario")
    length = cavity_length.length if isinstance(cavity_length, CavitySpec) else float(cavity_length)
    if not length > 0:
        raise InvalidArgumentError("cavity length must be positive")
    volume = math.pi * mode.w**2 * length / 4
    return dipole_moment(atom) * math.sqrt(atom.omega_a / (2 * epsilon_0 * hbar * volume))


@dataclass(frozen=True)
class RwaErrorReport:
    delta_over_gamma: np.ndarray
    errors: Dict[str, np.ndarray]

    @property
    def max_error(self) -> float:
        return float(max(np.max(e) for e in self.errors.values()))

    def max_error_at(self, delta_over_gamma: float) -> float:
        i = int(np.argmin(np.abs(self.delta_over_gamma - delta_over_gamma)))
        return float(max(e[i] for e in self.errors.values()))


def rwa_error_report(
    atom: AtomTransition,
    mode: GaussianMode,
    cavity: CavitySpec,
    grid: Union[Sequence[float], np.ndarray],
) -> RwaErrorReport:
    """Relative difference between exact-beta and RWA spectra, cavity at the atomic resonance.

    ``mode`` must be given at the atomic wavenumber; the exact path re-evaluates
    the coupling at each probe frequency.
    """
    if isinstance(grid, tuple) and len(grid) == 3:
        d = detuning_grid(*grid)
    else:
        d = np.asarray(grid, dtype=float)
    gamma, kappa = atom.gamma, cavity.kappa
    delta = d * gamma
    eta_c = cavity.eta_c(mode)
    rwa = dict(zip(_POWER_COLUMNS, kernels.cavity_spectra(delta, delta, eta_c, eta_c, gamma, kappa)))
    exact = {n: np.empty_like(d) for n in _POWER_COLUMNS}
    funcs = dict(zip(_POWER_COLUMNS, (transmission, fs_emission_driven_cavity,
                                      cavity_emission, fs_emission_driven_atom)))
    for i, dl in enumerate(delta):
        beta = beta_exact(atom.omega_a + dl, atom, mode)
        for name, f in funcs.items():
            exact[name][i] = f(beta, dl, cavity)
    errors = {n: np.abs(exact[n] - rwa[n]) / np.abs(exact[n]) for n in _POWER_COLUMNS}
    return RwaErrorReport(d, errors)
