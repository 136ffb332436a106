"""Atomic ensemble inside a standing-wave resonator.

The cavity axis is z and the side beam travels along x. Two collective
factors summarise the arrangement:

* ``H = <cos^2 kz>`` weights absorption and dispersion of the cavity mode;
  it only varies between 1/2 (disordered) and 1 (all at antinodes).
* ``G = <exp(ikx) cos kz>`` weights coherent scattering from the side beam
  into the cavity; it ranges from 0 (subradiant) to 1 (superradiant).

Radial offsets from the axis are ignored.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .cavity import _rwa_spectra, cavity_shift_rwa
from .ensemble import check_optically_thin
from .atom_optics import BetaLike
from .errors import InvalidArgumentError, PhysicsWarning

# slack for round-off in |G|^2 <= H and |G| <= 1
_CS_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class CavityEnsembleLayout:
    positions: np.ndarray
    k: float
    waist: Optional[float] = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, ndmin=2)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise InvalidArgumentError("positions must be a non-empty N x 3 array")
        if not np.all(np.isfinite(pos)) or not self.k > 0:
            raise InvalidArgumentError("positions must be finite and k positive")
        if self.waist is not None:
            radial = np.hypot(pos[:, 0], pos[:, 1])
            if np.any(radial > self.waist / 4):
                warnings.warn(
                    "some atoms sit more than w/4 off the cavity axis; "
                    "radial coupling variation is ignored",
                    PhysicsWarning,
                    stacklevel=3,
                )
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class CollectiveFactors:
    H: float
    G: complex
    N: int

    def __post_init__(self):
        if not (-_CS_SLACK <= self.H <= 1 + _CS_SLACK):
            raise InvalidArgumentError(f"H = {self.H} outside [0, 1]")
        object.__setattr__(self, "H", min(max(float(self.H), 0.0), 1.0))
        if abs(self.G) ** 2 > self.H * (1 + _CS_SLACK) + _CS_SLACK:
            raise InvalidArgumentError(
                f"|G|^2 = {abs(self.G) ** 2} exceeds H = {self.H}; "
                "G and H must come from the same layout"
            )


def collective_factors(layout: CavityEnsembleLayout) -> CollectiveFactors:
    """H and G from one pass over the layout."""
    if layout.n_atoms < 1:
        raise InvalidArgumentError("empty ensemble")
    g, h = kernels.cavity_sums_batch(layout.positions, layout.k)
    return CollectiveFactors(H=float(h[0]), G=complex(g[0]), N=layout.n_atoms)


def collective_H(layout: CavityEnsembleLayout) -> float:
    return collective_factors(layout).H


def collective_G(layout: CavityEnsembleLayout) -> complex:
    return collective_factors(layout).G


def _check_H(H):
    if not 0 <= H <= 1:
        raise InvalidArgumentError(f"H = {H} outside [0, 1]")


def ensemble_transmission_rwa(delta_a, delta_c, eta_c, N, H, gamma, kappa):
    _check_H(H)
    eff = H * N * eta_c
    return _rwa_spectra(delta_a, delta_c, eff, eff, gamma, kappa)[0]


def ensemble_fs_emission_rwa(delta_a, delta_c, eta_c, N, H, gamma, kappa):
    """Total free-space scattering over incident power; atoms add incoherently."""
    _check_H(H)
    eff = H * N * eta_c
    return _rwa_spectra(delta_a, delta_c, eff, eff, gamma, kappa)[1]


def ensemble_cavity_shift_rwa(delta_a, eta_c, N, H, gamma, kappa=None):
    _check_H(H)
    return cavity_shift_rwa(delta_a, H * N * eta_c, gamma, kappa)


def ensemble_cavity_scattering_rwa(
    delta_a,
    delta_c,
    eta_c,
    N,
    G: Union[complex, CollectiveFactors],
    H: Optional[float] = None,
    gamma: float = 1.0,
    kappa: float = 1.0,
    beta: Optional[BetaLike] = None,
):
    """Side-beam scattering into the cavity, P_c^(N) / P0_fs.

    Pass a :class:`CollectiveFactors` as ``G`` (preferred), or explicit ``G``
    and ``H``; an inconsistent pair with |G|^2 > H is rejected. ``beta`` of
    the side beam, when given, is used to check the sample is optically thin.
    """
    if isinstance(G, CollectiveFactors):
        factors = G
        if H is not None and H != factors.H:
            raise InvalidArgumentError("H given twice with different values")
    else:
        if H is None:
            raise InvalidArgumentError("H is required with a bare G")
        factors = CollectiveFactors(H=H, G=complex(G), N=N)
    if beta is not None:
        check_optically_thin(N, beta)
    eff = factors.H * N * eta_c
    emit = abs(factors.G) ** 2 * N**2 * eta_c
    return _rwa_spectra(delta_a, delta_c, eff, emit, gamma, kappa)[2]
