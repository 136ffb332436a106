# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Must stay numerically interchangeable with _kernels_py."""
import numpy as np

from libc.math cimport cos, sin


def phase_sum_batch(const double[:, :, ::1] positions, const double[::1] q):
    cdef Py_ssize_t n_samples = positions.shape[0]
    cdef Py_ssize_t n_atoms = positions.shape[1]
    cdef Py_ssize_t s, j
    cdef double phase, re, im
    cdef double qx = q[0], qy = q[1], qz = q[2]
    out = np.empty(n_samples, dtype=np.complex128)
    cdef double complex[::1] res = out
    with nogil:
        for s in range(n_samples):
            re = 0.0
            im = 0.0
            for j in range(n_atoms):
                phase = qx * positions[s, j, 0] + qy * positions[s, j, 1] + qz * positions[s, j, 2]
                re = re + cos(phase)
                im = im + sin(phase)
            res[s] = (re + 1j * im) / n_atoms
    return out


def cavity_sums_batch(const double[:, :, ::1] positions, double k):
    cdef Py_ssize_t n_samples = positions.shape[0]
    cdef Py_ssize_t n_atoms = positions.shape[1]
    cdef Py_ssize_t s, j
    cdef double cz, kx, g_re, g_im, h
    g_out = np.empty(n_samples, dtype=np.complex128)
    h_out = np.empty(n_samples, dtype=np.float64)
    cdef double complex[::1] g_res = g_out
    cdef double[::1] h_res = h_out
    with nogil:
        for s in range(n_samples):
            g_re = 0.0
            g_im = 0.0
            h = 0.0
            for j in range(n_atoms):
                cz = cos(k * positions[s, j, 2])
                kx = k * positions[s, j, 0]
                g_re = g_re + cos(kx) * cz
                g_im = g_im + sin(kx) * cz
                h = h + cz * cz
            g_res[s] = (g_re + 1j * g_im) / n_atoms
            h_res[s] = h / n_atoms
    return g_out, h_out


def cavity_spectra(const double[::1] delta_a, const double[::1] delta_c,
                   double eta_abs, double eta_emit, double gamma, double kappa):
    cdef Py_ssize_t n = delta_a.shape[0]
    cdef Py_ssize_t i
    cdef double d, la, ld, a, b, den, x
    t_out = np.empty(n)
    fs_out = np.empty(n)
    c_out = np.empty(n)
    fsr_out = np.empty(n)
    cdef double[::1] t = t_out, fs = fs_out, cav = c_out, fsr = fsr_out
    with nogil:
        for i in range(n):
            d = delta_a[i]
            den = gamma * gamma + 4.0 * d * d
            la = gamma * gamma / den
            ld = -2.0 * d * gamma / den
            x = 2.0 * delta_c[i] / kappa
            a = 1.0 + eta_abs * la
            b = x + eta_abs * ld
            den = a * a + b * b
            t[i] = 1.0 / den
            fs[i] = 2.0 * eta_abs * la / den
            cav[i] = eta_emit / den
            fsr[i] = (1.0 + x * x) / den
    return t_out, fs_out, c_out, fsr_out
