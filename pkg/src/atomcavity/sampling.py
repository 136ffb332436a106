"""Seeded atomic layouts and Monte-Carlo averages of collective factors.

Every random layout is drawn from a Philox counter-based stream keyed by
``(seed, sample_index)``. Sample ``i`` is therefore the same whether it is
drawn alone, in a batch, or on another thread, and parallel runs reduce to
bit-identical estimates.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import kernels
from .cavity_ensemble import CavityEnsembleLayout
from .ensemble import CollectiveFactorEstimate, EnsembleLayout
from .errors import EstimatorError, InvalidArgumentError

UNIFORM = "uniform_random"
ANTINODE = "antinode_lattice"
NODE = "node_lattice"
BRAGG = "bragg_lattice"
COMMENSURATE = "commensurate"
KINDS = (UNIFORM, ANTINODE, NODE, BRAGG, COMMENSURATE)

DEFAULT_EXTENT = 10.0
X_HAT = (1.0, 0.0, 0.0)
Z_HAT = (0.0, 0.0, 1.0)
_U64 = 2**64


@dataclass(frozen=True)
class LayoutSpec:
    """How to place ``N`` atoms.

    ``extent`` (wavelengths per axis) bounds the uniform cube; lattices start
    at the origin and extend as far as ``N`` requires. ``n_per_wavelength``
    is only used by the commensurate kind, which also needs N to be a
    multiple of it so that the phasors close exactly.
    """

    kind: str
    N: int
    extent: float = DEFAULT_EXTENT
    seed: int = 0
    n_per_wavelength: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unsupported layout kind {self.kind!r}; choose from {KINDS}")
        if int(self.N) != self.N or self.N < 1:
            raise InvalidArgumentError("N must be a positive integer")
        if not self.extent > 0:
            raise InvalidArgumentError("extent must be positive")
        if not 0 <= self.seed < _U64:
            raise InvalidArgumentError("seed must fit in an unsigned 64-bit integer")
        if self.kind == COMMENSURATE:
            n = self.n_per_wavelength
            if n is None or n < 2:
                raise InvalidArgumentError("commensurate layouts need n_per_wavelength >= 2")
            if self.N % n:
                raise InvalidArgumentError("N must be a multiple of n_per_wavelength")


def sample_rng(seed: int, sample_index: int) -> np.random.Generator:
    key = np.array([seed % _U64, sample_index % _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _momentum_transfer(k, k_in_dir, k_mode_dir):
    k_in = k * np.asarray(k_in_dir, dtype=float) / np.linalg.norm(k_in_dir)
    k_mode = k * np.asarray(k_mode_dir, dtype=float) / np.linalg.norm(k_mode_dir)
    return k_in, k_mode


def layout_positions(
    spec: LayoutSpec,
    k: float,
    sample_index: int = 0,
    k_in_dir=X_HAT,
    k_mode_dir=Z_HAT,
) -> np.ndarray:
    """N x 3 positions in metres for one realisation of ``spec``."""
    wavelength = 2 * math.pi / k
    j = np.arange(spec.N, dtype=float)
    pos = np.zeros((spec.N, 3))
    if spec.kind == UNIFORM:
        pos = sample_rng(spec.seed, sample_index).random((spec.N, 3)) * (spec.extent * wavelength)
    elif spec.kind == ANTINODE:
        pos[:, 2] = j * wavelength / 2
    elif spec.kind == NODE:
        pos[:, 2] = (2 * j + 1) * wavelength / 4
    else:
        k_in, k_mode = _momentum_transfer(k, k_in_dir, k_mode_dir)
        q = k_in - k_mode
        q2 = float(q @ q)
        if q2 == 0:
            raise InvalidArgumentError("forward scattering has no lattice direction")
        step = 2 * math.pi / q2
        if spec.kind == COMMENSURATE:
            step /= spec.n_per_wavelength
        pos = np.outer(j * step, q)
    return pos


def generate(
    spec: LayoutSpec,
    k: float,
    *,
    sample_index: int = 0,
    cavity: bool = False,
    k_in_dir=X_HAT,
    k_mode_dir=Z_HAT,
    waist: Optional[float] = None,
) -> Union[EnsembleLayout, CavityEnsembleLayout]:
    """Realise ``spec`` as a free-space layout, or a cavity layout if ``cavity``.

    Cavity layouts always use the cavity along z and the side beam along x.
    """
    if cavity:
        pos = layout_positions(spec, k, sample_index)
        return CavityEnsembleLayout(pos, k, waist=waist)
    pos = layout_positions(spec, k, sample_index, k_in_dir, k_mode_dir)
    k_in, k_mode = _momentum_transfer(k, k_in_dir, k_mode_dir)
    return EnsembleLayout(pos, k_in, k_mode)


# --- Monte Carlo -------------------------------------------------------------

ESTIMATORS = {
    "F": "free-space collective factor F (complex)",
    "F2": "|F|^2",
    "H": "standing-wave weight H",
    "G": "side-beam-to-cavity factor G (complex)",
    "G2": "|G|^2",
}


def _batch_values(name, positions, k):
    if name in ("F", "F2"):
        q = k * (np.asarray(X_HAT) - np.asarray(Z_HAT))
        f = kernels.phase_sum_batch(positions, q)
        return f if name == "F" else np.abs(f) ** 2
    g, h = kernels.cavity_sums_batch(positions, k)
    if name == "H":
        return h
    return g if name == "G" else np.abs(g) ** 2


def _summarise(values: np.ndarray) -> CollectiveFactorEstimate:
    n = values.size
    mean = values.mean()
    abs2 = np.abs(values) ** 2
    second = float(abs2.mean())
    resid = np.abs(values - mean) ** 2
    std_error = math.sqrt(resid.sum() / (n - 1) / n)
    if np.iscomplexobj(values):
        mean = complex(mean)
    else:
        mean = float(mean)
    return CollectiveFactorEstimate(mean=mean, second_moment=second, std_error=std_error, n_samples=n)


def _chunks(n, workers):
    bounds = np.linspace(0, n, workers + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def monte_carlo(
    spec: LayoutSpec,
    k: float,
    estimator: Union[str, Callable],
    n_samples: int,
    *,
    workers: Optional[int] = None,
    cavity: bool = False,
) -> CollectiveFactorEstimate:
    """Average ``estimator`` over ``n_samples`` independent realisations of ``spec``.

    ``estimator`` is either one of the names in :data:`ESTIMATORS` (evaluated
    with the batched kernels) or a callable taking a layout (cavity layout if
    ``cavity``) and returning a number. ``workers`` > 1 fans samples out over
    threads; the result does not depend on it.
    """
    if n_samples < 2:
        raise InvalidArgumentError("n_samples must be >= 2")
    if isinstance(estimator, str) and estimator not in ESTIMATORS:
        raise InvalidArgumentError(f"unknown estimator {estimator!r}; choose from {sorted(ESTIMATORS)}")
    workers = workers or 1

    if isinstance(estimator, str):
        def run(indices):
            stack = np.stack([layout_positions(spec, k, i) for i in indices])
            return _batch_values(estimator, stack, k)
    else:
        def run(indices):
            out = []
            for i in indices:
                layout = generate(spec, k, sample_index=i, cavity=cavity)
                try:
                    out.append(estimator(layout))
                except Exception as exc:
                    raise EstimatorError(i, exc) from exc
            return np.asarray(out)

    chunks = _chunks(n_samples, workers)
    if workers == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    return _summarise(np.concatenate(parts))


# --- CSV ---------------------------------------------------------------------

LAYOUT_COLUMNS = ("index", "x", "y", "z")


def layout_to_csv(positions, k: float) -> str:
    """CSV text with one row per atom, coordinates in wavelengths."""
    wavelength = 2 * math.pi / k
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LAYOUT_COLUMNS)
    for i, r in enumerate(np.asarray(positions) / wavelength):
        writer.writerow([i] + [format(v + 0.0, ".17g") for v in r])  # +0.0 drops signed zeros
    return buf.getvalue()


def write_layout_csv(path: Union[str, os.PathLike], positions, k: float) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(layout_to_csv(positions, k))


def read_layout_csv(path: Union[str, os.PathLike], k: float) -> np.ndarray:
    """Positions in metres from a layout CSV."""
    wavelength = 2 * math.pi / k
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != LAYOUT_COLUMNS:
            raise InvalidArgumentError(f"expected columns {LAYOUT_COLUMNS}, got {reader.fieldnames}")
        rows = sorted(reader, key=lambda r: int(r["index"]))
    return np.array([[float(r["x"]), float(r["y"]), float(r["z"])] for r in rows]) * wavelength
