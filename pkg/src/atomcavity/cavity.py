"""Single atom at an antinode of a standing-wave resonator.

Two drive geometries are covered: the cavity driven through a mirror
(transmission, free-space loss, line shift) and the atom driven from the
side (emission into the cavity and into free space, including the backaction
of the intracavity field on the dipole).

For each quantity there is an exact-beta function taking a
:class:`~atomcavity.atom_optics.ComplexCoupling` and a :class:`CavitySpec`,
and an ``*_rwa`` function parameterised only by the cooperativity ``eta_c``
and the linewidths. The round-trip factor uses the near-resonance expansion
r^2 exp(2ikL) ~ 1 - q^2 + 2i q^2 delta_c/kappa.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.constants import c

from . import kernels
from .atom_optics import (
    AtomTransition,
    BetaLike,
    ComplexCoupling,
    GaussianMode,
    ModeAmplitude,
    bidirectional_mode_ratio,
    lorentz_absorptive,
    lorentz_dispersive,
)
from .errors import GainError, InvalidArgumentError, PhysicsWarning


@dataclass(frozen=True)
class CavitySpec:
    """Symmetric lossless two-mirror resonator.

    Parameters
    ----------
    q_sq : float
        Power transmission of each mirror.
    length : float
        Mirror separation in metres.
    """

    q_sq: float
    length: float

    def __post_init__(self):
        if not (0 < self.q_sq < 1) or not self.length > 0:
            raise InvalidArgumentError("need 0 < q_sq < 1 and length > 0")
        if self.q_sq > 0.1:
            warnings.warn(
                f"q^2 = {self.q_sq:g} is not small; round-trip expansion is inaccurate",
                PhysicsWarning,
                stacklevel=3,
            )

    @classmethod
    def from_kappa_finesse(cls, kappa: float, finesse: float) -> "CavitySpec":
        q_sq = math.pi / finesse
        return cls(q_sq, q_sq * c / kappa)

    @property
    def q(self) -> float:
        return math.sqrt(self.q_sq)

    @property
    def r(self) -> float:
        return math.sqrt(1 - self.q_sq)

    @property
    def kappa(self) -> float:
        """Energy decay rate q^2 c / L (rad/s)."""
        return self.q_sq * c / self.length

    @property
    def finesse(self) -> float:
        return math.pi / self.q_sq

    @property
    def free_spectral_range(self) -> float:
        """pi c / L in rad/s."""
        return math.pi * c / self.length

    def eta_c(self, mode: GaussianMode) -> float:
        return 4 * mode.eta_fs / self.q_sq


@dataclass(frozen=True)
class AbstractScenario:
    """Dimensionless cavity scenario.

    Frequencies are in units of ``gamma`` (1 by default). ``cavity_offset`` is
    omega_c - omega_A and ``depth0`` the resonant side-beam absorption without
    the cavity (None when the side beam is not modelled).
    """

    eta_c: float
    kappa_over_gamma: float
    gamma: float = 1.0
    cavity_offset: float = 0.0
    depth0: Optional[float] = None

    def __post_init__(self):
        if not self.eta_c >= 0:
            raise InvalidArgumentError("eta_c must be >= 0")
        if not self.kappa_over_gamma > 0 or not self.gamma > 0:
            raise InvalidArgumentError("kappa_over_gamma and gamma must be positive")
        if self.depth0 is not None and not 0 <= self.depth0 <= 0.3:
            raise InvalidArgumentError("depth0 must lie in [0, 0.3]")

    @classmethod
    def from_geometry(
        cls, atom: AtomTransition, mode: GaussianMode, cavity: CavitySpec, **kwargs
    ) -> "AbstractScenario":
        return cls(
            eta_c=cavity.eta_c(mode), kappa_over_gamma=cavity.kappa / atom.gamma, **kwargs
        )

    @property
    def kappa(self) -> float:
        return self.kappa_over_gamma * self.gamma

    def delta_c(self, delta_a):
        return np.asarray(delta_a) - self.cavity_offset


# --- exact-beta path ------------------------------------------------------


def _check_passive(beta: complex):
    if beta.imag < 0:
        raise GainError(f"Im(beta) = {beta.imag:g} < 0 implies gain")


def _round_trip_bracket(beta: complex, delta_c: float, cavity: CavitySpec) -> complex:
    _check_passive(beta)
    if abs(delta_c) > 0.1 * cavity.free_spectral_range:
        warnings.warn(
            "delta_c is not small against the free spectral range",
            PhysicsWarning,
            stacklevel=3,
        )
    bracket = 1 - 2j * delta_c / cavity.kappa - 4j * beta / cavity.q_sq
    if bracket == 0:
        raise ZeroDivisionError("round-trip denominator vanishes")
    return bracket


def intracavity_field_driven_cavity(
    beta: BetaLike, delta_c: float, cavity: CavitySpec, e_in: ModeAmplitude
) -> ModeAmplitude:
    """Traveling intracavity mode amplitude for drive through the input mirror."""
    bracket = _round_trip_bracket(complex(beta), delta_c, cavity)
    return 1j * complex(e_in) / cavity.q / bracket


def transmission(beta: BetaLike, delta_c: float, cavity: CavitySpec) -> float:
    """P_tr / P_in = q^2 |E_c|^2 / |E_in|^2."""
    e_c = intracavity_field_driven_cavity(beta, delta_c, cavity, 1.0)
    return cavity.q_sq * abs(e_c) ** 2


def fs_emission_driven_cavity(beta: BetaLike, delta_c: float, cavity: CavitySpec) -> float:
    """P_fs / P_in for the driven cavity; the atom sees 2 E_c."""
    b = complex(beta)
    e_c = intracavity_field_driven_cavity(b, delta_c, cavity, 1.0)
    p_fs = b.imag * abs(2 * e_c) ** 2
    return p_fs / 0.5


def driven_atom_fields(
    beta: BetaLike, delta_c: float, cavity: CavitySpec, e_in_side: ModeAmplitude
) -> Tuple[ModeAmplitude, ModeAmplitude]:
    """Self-consistent (E_c, E_M) for an atom driven from the side.

    The dipole is driven by E_in + 2 E_c, so the cavity field acts back on it.
    """
    b = complex(beta)
    bracket = _round_trip_bracket(b, delta_c, cavity)
    e_in = complex(e_in_side)
    e_c = 2j * b * e_in / cavity.q_sq / bracket
    e_m = 1j * b * e_in * (1 - 2j * delta_c / cavity.kappa) / bracket
    return e_c, e_m


def _eta_fs_of(beta: BetaLike) -> float:
    if isinstance(beta, ComplexCoupling) and beta.eta_fs is not None:
        return beta.eta_fs
    return bidirectional_mode_ratio(beta)


def cavity_emission(beta: BetaLike, delta_c: float, cavity: CavitySpec) -> float:
    """P_c / P0_fs: bidirectional cavity output over the cavity-free atomic emission."""
    b = complex(beta)
    e_c, _ = driven_atom_fields(beta, delta_c, cavity, 1.0)
    p0 = abs(b) ** 2 / _eta_fs_of(beta)
    return cavity.q_sq * abs(e_c) ** 2 / p0


def fs_emission_driven_atom(beta: BetaLike, delta_c: float, cavity: CavitySpec) -> float:
    """P_fs / P0_fs: free-space emission modified by the cavity backaction."""
    b = complex(beta)
    _, e_m = driven_atom_fields(beta, delta_c, cavity, 1.0)
    return abs(e_m) ** 2 / abs(b) ** 2


# --- rotating-wave path ----------------------------------------------------


def _rwa_spectra(delta_a, delta_c, eta_abs, eta_emit, gamma, kappa):
    shape_src = np.broadcast(np.asarray(delta_a), np.asarray(delta_c))
    da = np.broadcast_to(np.asarray(delta_a, dtype=float), shape_src.shape).ravel()
    dc = np.broadcast_to(np.asarray(delta_c, dtype=float), shape_src.shape).ravel()
    outs = kernels.cavity_spectra(da, dc, eta_abs, eta_emit, gamma, kappa)
    if shape_src.ndim == 0:
        return tuple(float(o[0]) for o in outs)
    return tuple(o.reshape(shape_src.shape) for o in outs)


def transmission_rwa(delta_a, delta_c, eta_c, gamma, kappa):
    return _rwa_spectra(delta_a, delta_c, eta_c, eta_c, gamma, kappa)[0]


def fs_emission_driven_cavity_rwa(delta_a, delta_c, eta_c, gamma, kappa):
    """Free-space scattering over incident power; P_fs/P_tr = 2 eta_c L_a for any delta_c."""
    return _rwa_spectra(delta_a, delta_c, eta_c, eta_c, gamma, kappa)[1]


def cavity_emission_rwa(delta_a, delta_c, eta_c, gamma, kappa):
    return _rwa_spectra(delta_a, delta_c, eta_c, eta_c, gamma, kappa)[2]


def fs_emission_driven_atom_rwa(delta_a, delta_c, eta_c, gamma, kappa):
    return _rwa_spectra(delta_a, delta_c, eta_c, eta_c, gamma, kappa)[3]


def cavity_shift_rwa(delta_a, eta_c, gamma, kappa=None):
    """Atom-induced shift of the cavity resonance in units of kappa.

    Meaningful only while absorption does not spoil the finesse
    (eta_c L_a < 1); a warning is issued otherwise.
    """
    if np.any(eta_c * np.asarray(lorentz_absorptive(delta_a, gamma)) >= 1):
        warnings.warn(
            "eta_c * L_a >= 1: absorption dominates, the line shift is ill defined",
            PhysicsWarning,
            stacklevel=2,
        )
    return -0.5 * eta_c * lorentz_dispersive(delta_a, gamma)


def sidebeam_transmission(delta_a, delta_c, eta_c, gamma, kappa, depth0):
    """Transmission of the beam driving the atom from the side.

    ``depth0`` is the resonant fractional absorption of that beam with no
    cavity present; the cavity rescales the total (free space + cavity)
    atomic emission.
    """
    if not 0 <= depth0 <= 0.3:
        raise InvalidArgumentError("depth0 must lie in [0, 0.3]")
    _, _, p_c, p_fs = _rwa_spectra(delta_a, delta_c, eta_c, eta_c, gamma, kappa)
    return 1 - depth0 * lorentz_absorptive(delta_a, gamma) * (p_fs + p_c)
