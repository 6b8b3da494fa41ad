"""Independent reference values used by the tests.

None of these go through the spectral tables, the window FFT or the profile
matrices of the package.
"""

import math

import numpy as np

from toeplitz_trace import symplectic_core as sc


def profile_integral(A, n, L=9.0, N=401):
    """``int exp(psi2(n, v) + psi2(A v, n)) dv`` by the trapezoid rule, ``d = 1``.

    Equals ``pi 2 / sqrt(det Q) exp(n^T P_A n)``.
    """
    x = np.linspace(-L, L, N)
    h = x[1] - x[0]
    X, Y = np.meshgrid(x, x, indexing="ij")
    V = np.stack([X.ravel(), Y.ravel()], axis=-1)
    return complex(np.sum(np.exp(sc.psi2(n, V) + sc.psi2(V @ np.asarray(A).T, n))) * h * h)


def window_transform(window, s, nodes=20001):
    """``int chi(t) exp(-i s t) dt`` by the trapezoid rule on the support."""
    t = np.linspace(window.tau0 - window.eps, window.tau0 + window.eps, nodes)
    h = 2 * window.eps / (nodes - 1)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return np.exp(-1j * np.outer(s, t)) @ window.chi(t) * h


def generating_function_sum(p, lam, window, a, b, nodes=200001):
    """Spectral sum via ``sum_k (k + 1) Z^k = (1 - Z)^{-2}``.

    ``S = (1/pi) int chi(t) e^{-i lam t} (1 - Z(t))^{-2} dt`` with
    ``Z = e^{i a t}(1 - p + p e^{i b t})``.  Valid when ``|Z| < 1`` on the
    window, i.e. ``0 < p`` and ``b t`` avoids ``2 pi Z`` there.
    """
    t = np.linspace(window.tau0 - window.eps, window.tau0 + window.eps, nodes)
    h = 2 * window.eps / (nodes - 1)
    Z = np.exp(1j * a * t) * (1 - p + p * np.exp(1j * b * t))
    if np.max(np.abs(Z)) >= 1:
        raise ValueError("generating function not convergent on the window")
    f = window.chi(t) * np.exp(-1j * lam * t) / (1 - Z) ** 2
    return complex(np.sum(f) * h / math.pi)


def pole_sum(lam, window, a, smax=1.2e4):
    """Poisson-summed spectral sum at the pole for a window around ``2 pi m / a``.

    ``sum_{k in Z} (k+1) e^{i k a t} = (2 pi / a) sum_m [delta - (i/a) delta'](t - 2 pi m / a)``
    gives ``(2/a^2)(lam + a) e^{-i lam tau0}`` for a symmetric window with
    ``chi(tau0) = 1``; the ``k <= -2`` terms are then removed by hand.
    """
    full = 2.0 / a**2 * (lam + a) * np.exp(-1j * lam * window.tau0)
    k = -np.arange(2, int((smax - lam) / a))
    neg = 0j
    for chunk in np.array_split(k, max(1, k.size // 500)):
        neg += np.sum((chunk + 1) * window_transform(window, lam - chunk * a, nodes=8001))
    return complex(full - neg / math.pi)
