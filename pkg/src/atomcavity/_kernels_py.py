"""Pure numpy versions of the compiled kernels in _kernels.pyx."""
import numpy as np


def phase_sum_batch(positions, q):
    phases = positions @ np.asarray(q, dtype=float)
    return np.exp(1j * phases).mean(axis=1)


def cavity_sums_batch(positions, k):
    cz = np.cos(k * positions[:, :, 2])
    g = (np.exp(1j * k * positions[:, :, 0]) * cz).mean(axis=1)
    h = (cz * cz).mean(axis=1)
    return g, h


def cavity_spectra(delta_a, delta_c, eta_abs, eta_emit, gamma, kappa):
    delta_a = np.asarray(delta_a, dtype=float)
    den = gamma**2 + 4 * delta_a**2
    la = gamma**2 / den
    ld = -2 * delta_a * gamma / den
    x = 2 * np.asarray(delta_c, dtype=float) / kappa
    den = (1 + eta_abs * la) ** 2 + (x + eta_abs * ld) ** 2
    return 1 / den, 2 * eta_abs * la / den, eta_emit / den, (1 + x * x) / den
