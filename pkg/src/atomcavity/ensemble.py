"""Atomic ensembles interacting with a free-space Gaussian mode.

Forward absorption and dispersion are additive over atoms and blind to their
arrangement, because the drive phase delay and the forward emission phase
advance cancel atom by atom. Scattering into any other direction is not:
it is governed by the collective factor ``F = <exp(i (k_in - k_mode) . r)>``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .atom_optics import BetaLike
from .errors import InvalidArgumentError, PhysicsWarning

OPTICALLY_THIN_LIMIT = 0.2


@dataclass(frozen=True, eq=False)
class EnsembleLayout:
    """Atom positions (N x 3, metres) with incident and mode wavevectors (rad/m)."""

    positions: np.ndarray
    k_in: np.ndarray
    k_mode: np.ndarray

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, ndmin=2)
        k_in = np.asarray(self.k_in, dtype=float)
        k_mode = np.asarray(self.k_mode, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise InvalidArgumentError("positions must be a non-empty N x 3 array")
        if k_in.shape != (3,) or k_mode.shape != (3,):
            raise InvalidArgumentError("wavevectors must be 3-vectors")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(k_in)) and np.all(np.isfinite(k_mode))):
            raise InvalidArgumentError("positions and wavevectors must be finite")
        n_in, n_mode = np.linalg.norm(k_in), np.linalg.norm(k_mode)
        if n_in == 0 or abs(n_in - n_mode) > 1e-9 * n_in:
            raise InvalidArgumentError("|k_in| must equal |k_mode| (elastic scattering)")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "k_in", k_in)
        object.__setattr__(self, "k_mode", k_mode)

    @classmethod
    def perpendicular(cls, positions, k: float) -> "EnsembleLayout":
        """Drive along +x, mode of interest along +z."""
        return cls(positions, np.array([k, 0.0, 0.0]), np.array([0.0, 0.0, k]))

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    @property
    def momentum_transfer(self) -> np.ndarray:
        return self.k_in - self.k_mode


@dataclass(frozen=True)
class CollectiveFactorEstimate:
    """Monte-Carlo sample moments of a (possibly complex) collective quantity."""

    mean: complex
    second_moment: float
    std_error: float
    n_samples: int

    @property
    def std(self) -> float:
        return self.std_error * math.sqrt(self.n_samples)

    def within(self, expected, n_sigma: float = 5.0) -> bool:
        return abs(self.mean - expected) <= n_sigma * self.std_error


def beer_transmission(n_atoms: int, beta: BetaLike) -> float:
    """Forward transmitted fraction exp(-Im(2 N beta)).

    Deliberately takes no positions: forward attenuation does not depend on
    where the atoms sit along the beam.
    """
    if n_atoms < 0:
        raise InvalidArgumentError("atom number must be >= 0")
    return math.exp(-(2 * n_atoms * complex(beta)).imag)


def ensemble_phase(n_atoms: int, beta: BetaLike) -> float:
    return (n_atoms * complex(beta)).real


def collective_F(layout: EnsembleLayout) -> complex:
    if layout.n_atoms < 1:
        raise InvalidArgumentError("empty ensemble")
    return complex(kernels.phase_sum_batch(layout.positions, layout.momentum_transfer)[0])


def check_optically_thin(n_atoms: int, beta: BetaLike) -> bool:
    """Warn when the drive is noticeably depleted across the sample."""
    depth = (2 * n_atoms * complex(beta)).imag
    if depth > OPTICALLY_THIN_LIMIT:
        warnings.warn(
            f"optical depth {depth:.3g} > {OPTICALLY_THIN_LIMIT}: ensemble is not optically thin",
            PhysicsWarning,
            stacklevel=3,
        )
        return False
    return True


def ensemble_mode_power_ratio(
    F: complex, n_atoms: int, eta_fs: float, beta: Optional[BetaLike] = None
) -> float:
    """Power scattered into one direction of the mode over single-atom free-space power.

    ``beta`` is only used to check the optically-thin assumption.
    """
    if abs(F) > 1 + 1e-12:
        raise InvalidArgumentError(f"|F| = {abs(F)} exceeds 1")
    if beta is not None:
        check_optically_thin(n_atoms, beta)
    return 0.5 * abs(F) ** 2 * n_atoms**2 * eta_fs
