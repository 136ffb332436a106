"""Cross-module identity suite run by ``atomcavity check``.

Each check evaluates one analytic identity numerically and reports the worst
residual against a fixed tolerance. ``perturb`` injects a relative error into
a named quantity so the suite can be shown to catch it; only ``"beta"`` (the
exact coupling) is wired up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .atom_optics import (
    AtomTransition,
    ComplexCoupling,
    GaussianMode,
    absorption_fraction,
    absorption_fraction_interference,
    beta_exact,
    beta_rwa,
    farfield_projection_oracle,
    lorentz_absorptive,
    lorentz_dispersive,
    scattered_power_fs,
)
from .cavity import (
    CavitySpec,
    cavity_emission_rwa,
    driven_atom_fields,
    fs_emission_driven_atom_rwa,
    fs_emission_driven_cavity_rwa,
    transmission_rwa,
)
from .cavity_ensemble import collective_factors
from .ensemble import beer_transmission, collective_F, ensemble_mode_power_ratio
from .errors import InvalidArgumentError
from .sampling import BRAGG, COMMENSURATE, UNIFORM, LayoutSpec, generate, monte_carlo
from .spectra import find_peaks, g_quantum, scan_preset, vacuum_rabi_classical

PERTURBABLE = ("beta",)
REFERENCE_WAVELENGTH = 780e-9
REFERENCE_GAMMA = 2 * math.pi * 6.0666e6


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} residual={self.residual:.3e}  tol={self.tolerance:.1e}"


class _Context:
    def __init__(self, perturb: Dict[str, float], seed: int):
        self.perturb = perturb
        self.seed = seed
        self.atom = AtomTransition.from_wavelength(REFERENCE_WAVELENGTH, REFERENCE_GAMMA)
        self.mode = GaussianMode(self.atom.k0, 30 / self.atom.k0)

    def beta(self, omega, atom, mode) -> ComplexCoupling:
        b = beta_exact(omega, atom, mode)
        return b.scaled(1 + self.perturb.get("beta", 0.0))


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))


def check_optical_theorem(ctx):
    omegas = np.linspace(0.5, 1.5, 1000) * ctx.atom.omega_a
    res = max(ctx.beta(w, ctx.atom, ctx.mode).optical_theorem_residual() for w in omegas)
    return CheckResult("optical theorem", res, 1e-9)


def check_rwa_convergence(ctx):
    atom = AtomTransition(ctx.atom.omega_a, ctx.atom.omega_a * 1e-6)
    mode = GaussianMode(atom.k0, ctx.mode.w)
    worst = 0.0
    for d in np.linspace(-1e3, 1e3, 201) * atom.gamma:
        exact = complex(ctx.beta(atom.omega_a + d, atom, mode))
        approx = complex(beta_rwa(d, atom.gamma, mode.eta_fs))
        bound = 2 * (abs(d) + atom.gamma) / atom.omega_a + 1e-6
        worst = max(worst, abs(approx - exact) / abs(exact) / bound)
    return CheckResult("RWA convergence (err/bound)", worst, 1.0)


def check_lorentzians(ctx):
    d = np.linspace(-50, 50, 2001)
    res = np.max(np.abs(lorentz_dispersive(d, 1.0) + 2 * d * lorentz_absorptive(d, 1.0)))
    return CheckResult("lorentzian identity", float(res), 1e-12)


def check_absorption_routes(ctx):
    worst = 0.0
    drive = 0.7 - 0.2j
    p_in = abs(drive) ** 2 / 2
    for w in np.linspace(0.9, 1.1, 101) * ctx.atom.omega_a:
        b = ctx.beta(w, ctx.atom, ctx.mode)
        worst = max(worst, _rel(scattered_power_fs(b, drive) / p_in, absorption_fraction(b)))
    return CheckResult("absorption consistency", float(worst), 1e-12)


def check_forward_interference(ctx):
    # the interference form loses ~eps |Re beta| / Im beta, so stay near resonance
    worst = 0.0
    drive = 0.7 - 0.2j
    for d in np.linspace(-100, 100, 201) * ctx.atom.gamma:
        b = ctx.beta(ctx.atom.omega_a + d, ctx.atom, ctx.mode)
        worst = max(worst, _rel(absorption_fraction_interference(b, drive), absorption_fraction(b)))
    return CheckResult("forward interference", float(worst), 1e-12)


def check_ratio_law(ctx):
    eta, kappa = 10.0, 1.0
    worst = 0.0
    for d in (-3.0, -0.5, 0.0, 0.7, 4.0):
        dc = np.linspace(-20, 20, 401)
        ratio = fs_emission_driven_cavity_rwa(d, dc, eta, 1.0, kappa) / transmission_rwa(d, dc, eta, 1.0, kappa)
        worst = max(worst, _rel(ratio, 2 * eta * lorentz_absorptive(d, 1.0)))
    return CheckResult("ratio law", float(worst), 1e-12)


def check_resonant_bookkeeping(ctx):
    worst = 0.0
    for eta in (0.05, 1.0, 10.0, 100.0):
        total = transmission_rwa(0.0, 0.0, eta, 1.0, 1.0) + fs_emission_driven_cavity_rwa(0.0, 0.0, eta, 1.0, 1.0)
        worst = max(worst, _rel(total, (1 + 2 * eta) / (1 + eta) ** 2))
    return CheckResult("resonant bookkeeping", float(worst), 1e-12)


def check_driven_atom_ratio(ctx):
    cavity = CavitySpec(1e-4, 1e-3)
    worst = 0.0
    for w in np.linspace(-5, 5, 21) * ctx.atom.gamma + ctx.atom.omega_a:
        b = ctx.beta(w, ctx.atom, ctx.mode)
        eta_c = 4 * b.eta_fs / cavity.q_sq
        for dc in np.linspace(-3, 3, 13) * cavity.kappa:
            e_c, e_m = driven_atom_fields(b, dc, cavity, 1.0)
            ratio = cavity.q_sq * abs(e_c) ** 2 / (abs(e_m) ** 2 / b.eta_fs)
            worst = max(worst, _rel(ratio, eta_c * cavity.kappa**2 / (cavity.kappa**2 + 4 * dc**2)))
    return CheckResult("driven-atom emission ratio", float(worst), 1e-9)


def check_symmetry(ctx):
    d = np.linspace(0, 10, 1001)
    worst = 0.0
    for f in (transmission_rwa, fs_emission_driven_cavity_rwa, cavity_emission_rwa, fs_emission_driven_atom_rwa):
        worst = max(worst, _rel(f(-d, -d, 10.0, 1.0, 3.0), f(d, d, 10.0, 1.0, 3.0)))
    return CheckResult("spectra even in detuning", float(worst), 1e-12)


def check_quadratic_vs_exponential(ctx):
    excess = max(math.exp(-2 * eta) - 1 / (1 + eta) ** 2 for eta in (5.0, 10.0, 50.0))
    return CheckResult("cavity beats Beer (margin)", max(excess, 0.0), 0.0)


def check_beer(ctx):
    worst = 0.0
    eta = 0.01
    for n in range(0, 201, 10):
        worst = max(worst, abs(beer_transmission(n, beta_rwa(0.0, 1.0, eta)) - math.exp(-2 * n * eta)))
    return CheckResult("Beer's law", worst, 1e-12)


def check_g_correspondence(ctx):
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for _ in range(20):
        lam = rng.uniform(0.4e-6, 1.6e-6)
        atom = AtomTransition.from_wavelength(lam, 2 * math.pi * rng.uniform(1e6, 3e7))
        mode = GaussianMode.from_wavelength(lam, lam * rng.uniform(5, 100))
        cavity = CavitySpec(10 ** rng.uniform(-6, -2), lam * 10 ** rng.uniform(1, 5))
        g = g_quantum(atom, mode, cavity)
        g_cl = vacuum_rabi_classical(cavity.eta_c(mode), cavity.kappa, atom.gamma) / 2
        worst = max(worst, _rel(g_cl, g))
    return CheckResult("g_cl == g", float(worst), 1e-10)


def check_far_field(ctx):
    worst = 0.0
    for kw in (20, 30, 50):
        mode = GaussianMode(ctx.atom.k0, kw / ctx.atom.k0)
        b = ctx.beta(ctx.atom.omega_a, ctx.atom, mode)
        em = farfield_projection_oracle(ctx.atom, mode, ctx.atom.omega_a)
        worst = max(worst, abs(em - 1j * complex(b)) / abs(b))
    return CheckResult("far-field projection", worst, 1e-2)


def check_collective_bounds(ctx):
    k = ctx.atom.k0
    worst = 0.0
    for i in range(200):
        spec = LayoutSpec(UNIFORM, 1 + i % 17, extent=3.0, seed=ctx.seed)
        f = collective_F(generate(spec, k, sample_index=i))
        fac = collective_factors(generate(spec, k, sample_index=i, cavity=True))
        worst = max(worst, abs(f) - 1, abs(fac.G) ** 2 - fac.H)
    return CheckResult("|F| <= 1, |G|^2 <= H", max(worst, 0.0), 1e-12)


def check_moments(ctx):
    n = 50
    spec = LayoutSpec(UNIFORM, n, seed=ctx.seed)
    k = ctx.atom.k0
    z = 0.0
    for name, expected in (("F2", 1 / n), ("H", 0.5), ("G2", 1 / (2 * n)), ("F", 0.0), ("G", 0.0)):
        est = monte_carlo(spec, k, name, 10_000)
        z = max(z, abs(est.mean - expected) / est.std_error)
    return CheckResult("ensemble moments (sigma)", z, 5.0)


def check_ordering_limits(ctx):
    k = ctx.atom.k0
    worst = 0.0
    prev = None
    for n in (4, 8, 16):
        f = collective_F(generate(LayoutSpec(BRAGG, n), k))
        fac = collective_factors(generate(LayoutSpec(BRAGG, n), k, cavity=True))
        worst = max(worst, abs(abs(f) - 1), abs(abs(fac.G) - 1), abs(fac.H - 1))
        p = ensemble_mode_power_ratio(f, n, 1e-3)
        if prev is not None:
            worst = max(worst, abs(p / prev - 4))
        prev = p
    sub = abs(collective_F(generate(LayoutSpec(COMMENSURATE, 64, n_per_wavelength=2), k)))
    return CheckResult("Bragg / commensurate limits", max(worst, sub), 1e-12)


def check_splitting(ctx):
    report = find_peaks(scan_preset("fig3"))
    ref = vacuum_rabi_classical(10.0, 1.0, 1.0)
    return CheckResult("normal-mode splitting", abs(report.splitting - ref) / ref, 0.05)


ALL_CHECKS: List[Callable] = [
    check_optical_theorem,
    check_rwa_convergence,
    check_lorentzians,
    check_absorption_routes,
    check_forward_interference,
    check_ratio_law,
    check_resonant_bookkeeping,
    check_driven_atom_ratio,
    check_symmetry,
    check_quadratic_vs_exponential,
    check_beer,
    check_g_correspondence,
    check_far_field,
    check_collective_bounds,
    check_moments,
    check_ordering_limits,
    check_splitting,
]


def run_checks(perturb: Optional[Dict[str, float]] = None, seed: int = 0) -> List[CheckResult]:
    perturb = dict(perturb or {})
    unknown = set(perturb) - set(PERTURBABLE)
    if unknown:
        raise InvalidArgumentError(f"cannot perturb {sorted(unknown)}; supported: {PERTURBABLE}")
    ctx = _Context(perturb, seed)
    return [check(ctx) for check in ALL_CHECKS]
