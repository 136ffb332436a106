"""Single atom coupled to a Gaussian free-space mode.

The atom is a weakly driven classical dipole oscillator sitting on the axis
of a TEM00 mode at its waist. Everything here is expressed through the
dimensionless mode coupling ``beta`` (E_M = i beta E) and the free-space
cooperativity ``eta_fs = 6 / (k w)^2``.

SI units throughout.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.constants import c, epsilon_0
from scipy.special import ellipe

from .errors import InvalidArgumentError, PhysicsWarning, ResolutionError

# Traveling-wave mode amplitude in sqrt(W); power is |E|^2 / 2.
ModeAmplitude = complex

MIN_RADIAL_POINTS = 512
MIN_RADIAL_EXTENT = 6.0          # in units of the far-field beam radius
MIN_FAR_FIELD_DISTANCE = 100.0   # in Rayleigh ranges
DEFAULT_FAR_FIELD_DISTANCE = 1.0e4


def _require_finite(**values):
    for name, v in values.items():
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class AtomTransition:
    """Two-level dipole transition: resonance ``omega_a`` and linewidth ``gamma`` (rad/s)."""

    omega_a: float
    gamma: float

    def __post_init__(self):
        _require_finite(omega_a=self.omega_a, gamma=self.gamma)
        if self.omega_a <= 0 or self.gamma <= 0:
            raise InvalidArgumentError("omega_a and gamma must be positive")
        if self.gamma / self.omega_a > 1e-3:
            warnings.warn(
                f"gamma/omega_a = {self.gamma / self.omega_a:.3g} is not small; "
                "the weak-damping picture is questionable",
                PhysicsWarning,
                stacklevel=3,
            )

    @classmethod
    def from_wavelength(cls, wavelength: float, gamma: float) -> "AtomTransition":
        return cls(2 * math.pi * c / wavelength, gamma)

    @property
    def k0(self) -> float:
        return self.omega_a / c

    @property
    def wavelength(self) -> float:
        return 2 * math.pi / self.k0


@dataclass(frozen=True)
class GaussianMode:
    """TEM00 mode with wavenumber ``k`` (rad/m) and waist ``w`` (m).

    Modes tighter than ``k w = 2 pi`` (w < lambda) are still evaluated, but
    ``paraxial`` is False and a :class:`PhysicsWarning` is emitted.
    """

    k: float
    w: float

    def __post_init__(self):
        _require_finite(k=self.k, w=self.w)
        if self.k <= 0 or self.w <= 0:
            raise InvalidArgumentError("k and w must be positive")
        if not self.paraxial:
            warnings.warn(
                f"k*w = {self.k * self.w:.3g} < 2*pi: waist below one wavelength, "
                "paraxial results are unreliable",
                PhysicsWarning,
                stacklevel=3,
            )

    @classmethod
    def from_wavelength(cls, wavelength: float, w: float) -> "GaussianMode":
        return cls(2 * math.pi / wavelength, w)

    @property
    def paraxial(self) -> bool:
        return self.k * self.w >= 2 * math.pi

    @property
    def wavelength(self) -> float:
        return 2 * math.pi / self.k

    @property
    def rayleigh_range(self) -> float:
        return math.pi * self.w**2 / self.wavelength

    @property
    def area(self) -> float:
        """Effective mode area pi w^2 / 2."""
        return math.pi * self.w**2 / 2

    @property
    def eta_fs(self) -> float:
        return 6.0 / (self.k * self.w) ** 2

    def beam_radius(self, z: float) -> float:
        return self.w * math.sqrt(1 + (z / self.rayleigh_range) ** 2)

    def at_wavenumber(self, k: float) -> "GaussianMode":
        """Same waist, different wavenumber."""
        return GaussianMode(k, self.w)


@dataclass(frozen=True)
class ComplexCoupling:
    """Mode coupling ``beta`` with the cooperativity it was computed against.

    ``eta_fs`` is None for couplings not derived from a mode geometry; the
    optical-theorem residual is then undefined.
    """

    value: complex
    eta_fs: Optional[float] = None

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def optical_theorem_residual(self) -> float:
        """Relative residual of |beta|^2 = eta_fs Im(beta)."""
        if self.eta_fs is None:
            raise InvalidArgumentError("coupling carries no eta_fs")
        lhs = abs(self.value) ** 2
        rhs = self.eta_fs * self.value.imag
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs), np.finfo(float).tiny)

    def scaled(self, factor: float) -> "ComplexCoupling":
        return ComplexCoupling(self.value * factor, self.eta_fs)


BetaLike = Union[ComplexCoupling, complex, float]


@dataclass(frozen=True)
class DetuningPair:
    """Probe detunings from the atom (``delta_a``) and the cavity (``delta_c``), rad/s."""

    delta_a: float
    delta_c: float

    def __post_init__(self):
        _require_finite(delta_a=self.delta_a, delta_c=self.delta_c)

    @classmethod
    def for_offset(cls, delta_a: float, cavity_minus_atom: float = 0.0) -> "DetuningPair":
        """delta_c = omega - omega_c for a cavity detuned by ``cavity_minus_atom`` from the atom."""
        return cls(delta_a, delta_a - cavity_minus_atom)


def lorentz_absorptive(delta, gamma):
    """Absorptive lineshape Gamma^2 / (Gamma^2 + 4 Delta^2), unity on resonance."""
    delta = np.asarray(delta, dtype=float)
    out = gamma**2 / (gamma**2 + 4 * delta**2)
    return out if out.ndim else float(out)


def lorentz_dispersive(delta, gamma):
    """Dispersive lineshape -2 Delta Gamma / (Gamma^2 + 4 Delta^2)."""
    delta = np.asarray(delta, dtype=float)
    out = -2 * delta * gamma / (gamma**2 + 4 * delta**2)
    return out if out.ndim else float(out)


def polarizability_exact(omega, atom: AtomTransition):
    """Complex polarizability in C m^2 / V, without the rotating-wave approximation."""
    _require_finite(omega=omega)
    if np.any(np.asarray(omega) <= 0):
        raise InvalidArgumentError("omega must be positive")
    wa, g = atom.omega_a, atom.gamma
    return 6 * math.pi * epsilon_0 * c**3 * (g / wa**2) / (
        wa**2 - omega**2 - 1j * (omega**3 / wa**2) * g
    )


def beta_exact(omega: float, atom: AtomTransition, mode: GaussianMode) -> ComplexCoupling:
    """beta = k alpha / (pi w^2 eps0), with k = omega/c and the mode's waist.

    The returned ``eta_fs`` is evaluated at the drive wavenumber, which is the
    one for which the optical theorem holds exactly.
    """
    alpha = polarizability_exact(omega, atom)
    k = omega / c
    beta = k / (math.pi * mode.w**2) * alpha / epsilon_0
    return ComplexCoupling(complex(beta), 6.0 / (k * mode.w) ** 2)


def beta_rwa(delta_a: float, gamma: float, eta_fs: float) -> ComplexCoupling:
    if not gamma > 0:
        raise InvalidArgumentError("gamma must be positive")
    _require_finite(delta_a=delta_a, eta_fs=eta_fs)
    la = lorentz_absorptive(delta_a, gamma)
    ld = lorentz_dispersive(delta_a, gamma)
    return ComplexCoupling(eta_fs * complex(ld, la), eta_fs)


def traveling_power(amplitude: ModeAmplitude) -> float:
    return abs(amplitude) ** 2 / 2


def scattered_power_fs(beta: BetaLike, drive: ModeAmplitude) -> float:
    """Total power radiated into 4 pi, Im(beta) |E|^2, in W."""
    b = complex(beta)
    _require_finite(beta=b, drive=complex(drive))
    return b.imag * abs(drive) ** 2


def bidirectional_mode_ratio(beta: BetaLike) -> float:
    """2 P_M / P_fs computed from |beta|^2 / Im(beta); equals eta_fs for a physical beta."""
    b = complex(beta)
    return abs(b) ** 2 / b.imag


def absorption_fraction(beta: BetaLike) -> float:
    """Fractional power absorbed from the driving mode, from energy balance: Im(2 beta)."""
    return (2 * complex(beta)).imag


def absorption_fraction_interference(beta: BetaLike, drive: ModeAmplitude = 1.0) -> float:
    """Same quantity from forward interference of E and E_M = i beta E.

    The |E_M|^2 term, smaller by (kw)^-2, is dropped.
    """
    e = complex(drive)
    em = 1j * complex(beta) * e
    return -(e * em.conjugate() + e.conjugate() * em).real / abs(e) ** 2


def cross_section(beta: BetaLike, mode: GaussianMode) -> float:
    return absorption_fraction(beta) * mode.area


def phase_shift(beta: BetaLike) -> float:
    """Forward phase shift Re(beta) of the driving mode, in radians."""
    b = complex(beta)
    if abs(b) > 0.1:
        warnings.warn(
            f"|beta| = {abs(b):.3g}: phase shift linearisation is inaccurate",
            PhysicsWarning,
            stacklevel=2,
        )
    return b.real


def farfield_projection_oracle(
    atom: AtomTransition,
    mode: GaussianMode,
    omega: float,
    radius: Optional[float] = None,
    n_radial: int = MIN_RADIAL_POINTS,
    extent: float = MIN_RADIAL_EXTENT,
    drive: ModeAmplitude = 1.0,
    alpha: Optional[complex] = None,
) -> complex:
    """Numerically project the dipole far field onto the Gaussian mode.

    Integrates ``sqrt(eps0 c) * int conj(u_M) E_rad 2 pi rho d rho`` on the
    plane z = ``radius`` (default 1e4 Rayleigh ranges) with the trapezoid
    rule. The dipole pattern sin(theta) is averaged over azimuth exactly via
    the complete elliptic integral, with the polarisation perpendicular to the
    mode axis. The mode is taken in its far-field form: spherical wavefronts,
    beam radius w(z) and Gouy phase arctan(z/z_R).

    Returns the emitted mode amplitude E_M for a drive of mode amplitude
    ``drive``. For a physical atom this should be close to ``1j*beta*drive``;
    the difference is of order (k w)^-2.

    ``alpha`` overrides the polarizability (test hook).
    """
    _require_finite(omega=omega)
    k = omega / c
    probe = mode.at_wavenumber(k)
    z_r = probe.rayleigh_range
    if radius is None:
        radius = DEFAULT_FAR_FIELD_DISTANCE * z_r
    if radius < MIN_FAR_FIELD_DISTANCE * z_r:
        raise InvalidArgumentError(
            f"radius must be >= {MIN_FAR_FIELD_DISTANCE:g} Rayleigh ranges"
        )
    if n_radial < MIN_RADIAL_POINTS or extent < MIN_RADIAL_EXTENT:
        raise ResolutionError(
            f"need >= {MIN_RADIAL_POINTS} radial points out to >= "
            f"{MIN_RADIAL_EXTENT:g} beam radii, got {n_radial} to {extent:g}"
        )
    if alpha is None:
        alpha = polarizability_exact(omega, atom)

    w_far = probe.beam_radius(radius)
    rho = np.linspace(0.0, extent * w_far, n_radial)
    dist = np.hypot(radius, rho)

    u_mode = np.sqrt(2 / (math.pi * w_far**2)) * np.exp(
        -(rho**2) / w_far**2 + 1j * k * dist - 1j * math.atan(radius / z_r)
    )
    # azimuthal mean of sin(theta) for polarisation along x
    mean_sin = (2 / math.pi) * ellipe((rho / dist) ** 2)
    field_at_atom = complex(drive) / math.sqrt(epsilon_0 * c * probe.area)
    e_rad = (
        k**2 * mean_sin / (4 * math.pi * epsilon_0)
        * np.exp(1j * k * dist) / dist * alpha * field_at_atom
    )
    integrand = np.conj(u_mode) * e_rad * 2 * math.pi * rho
    return complex(math.sqrt(epsilon_0 * c) * np.trapezoid(integrand, rho))
