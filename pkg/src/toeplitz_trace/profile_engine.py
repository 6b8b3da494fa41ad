"""Leading-order kernel prediction and the phase-function machinery behind it.

The inner integration variables are ordered ``(theta, t, u, tau)`` everywhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import symplectic_core as sc
from .errors import DampingViolation, NotVeryCleanError, PreconditionError, WindowWarning


@dataclass(frozen=True)
class FixedPointDatum:
    """Linear data at a periodic point.

    Attributes
    ----------
    A : ndarray
        Differential of the base flow at time ``-tau0``.
    f0 : float
        Hamiltonian value at the point, must be positive.
    rho0 : complex
        Symbol of the Toeplitz factor at the period.
    tau0 : float
        The period.
    """

    A: np.ndarray
    f0: float
    rho0: complex = 1.0
    tau0: float = 0.0

    def __post_init__(self):
        A = sc.check_symplectic(self.A)
        object.__setattr__(self, "A", A)
        if not self.f0 > 0:
            raise PreconditionError("f0 must be positive")

    @property
    def dim_d(self) -> int:
        return self.A.shape[0] // 2


@dataclass(frozen=True)
class PhasePoint:
    theta: float
    t: float
    u: float
    tau: float

    def __post_init__(self):
        if not (self.t > 0 and self.u > 0):
            raise PreconditionError("t and u must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([self.theta, self.t, self.u, self.tau], dtype=float)


@dataclass(frozen=True)
class LeadingProfile:
    coefficient: complex
    profile: np.ndarray


def _unpack(p):
    if isinstance(p, PhasePoint):
        return p.theta, p.t, p.u, p.tau
    x = np.asarray(p, dtype=float)
    return x[..., 0], x[..., 1], x[..., 2], x[..., 3]


def upsilon(p, f0: float):
    """Phase ``theta (u - t) + tau (u f0 - 1)``; accepts a PhasePoint or ``(..., 4)`` array."""
    theta, t, u, tau = _unpack(p)
    return theta * (u - t) + tau * (u * f0 - 1.0)


def upsilon_gradient(p, f0: float) -> np.ndarray:
    theta, t, u, tau = _unpack(p)
    return np.stack([u - t, -theta, theta + tau * f0, u * f0 - 1.0], axis=-1)


def stationary_point(f0: float) -> PhasePoint:
    if not f0 > 0:
        raise PreconditionError("f0 must be positive")
    return PhasePoint(0.0, 1.0 / f0, 1.0 / f0, 0.0)


def upsilon_hessian(f0: float) -> np.ndarray:
    """Hessian of the phase; constant because the phase is quadratic."""
    return np.array(
        [
            [0.0, -1.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, f0],
            [0.0, 0.0, f0, 0.0],
        ]
    )


def displayed_hessian_inverse(f0: float) -> np.ndarray:
    """Closed-form inverse ``(1/f0) [[0,-f0,0,0],[-f0,0,0,1],[0,0,0,1],[0,1,1,0]]``."""
    return (
        np.array(
            [
                [0.0, -f0, 0.0, 0.0],
                [-f0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 1.0, 1.0, 0.0],
            ]
        )
        / f0
    )


def fd_gradient(fun, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


def fd_hessian(fun, x, h: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian of a scalar function."""
    x = np.asarray(x, dtype=float)
    m = x.size
    H = np.empty((m, m))
    E = np.eye(m) * h
    for i in range(m):
        for j in range(m):
            H[i, j] = (
                fun(x + E[i] + E[j]) - fun(x + E[i] - E[j]) - fun(x - E[i] + E[j]) + fun(x - E[i] - E[j])
            ) / (4 * h * h)
    return H


def sqrt_hessian_factor(f0: float, lam: float) -> complex:
    """``sqrt(det(sqrt(lam)/(2 pi i) H))`` on the branch giving ``lam f0 / (2 pi)^2``.

    The phase Hessian has zero signature, so the four factors of ``1/i``
    combine to ``+1`` and the determinant is ``lam^2 f0^2 / (2 pi)^4 > 0``.
    """
    if not lam > 0:
        raise PreconditionError("lambda must be positive")
    det = np.linalg.det(math.sqrt(lam) / (2j * math.pi) * upsilon_hessian(f0))
    root = np.sqrt(complex(det))
    if root.real < 0:
        root = -root
    return complex(root)


def theta_fn(p, n, v, datum: FixedPointDatum, upsf=None):
    """Amplitude exponent at the inner variables ``p``.

    ``-(t/2) theta^2 - (u/2)(theta + tau f0)^2 + t psi2(n, v)
    + u psi2(A v - tau upsf, n) + i u tau omega0(upsf, A v)``.
    Broadcasts over leading axes of ``p``, ``n`` and ``v``.
    """
    theta, t, u, tau = _unpack(p)
    A, f0 = datum.A, datum.f0
    n = np.asarray(n, dtype=float)
    v = np.asarray(v, dtype=float)
    if upsf is None:
        upsf = np.zeros(A.shape[0])
    upsf = np.asarray(upsf, dtype=float)
    Av = v @ A.T
    tau_e = np.asarray(tau)[..., None]
    return (
        -0.5 * t * theta**2
        - 0.5 * u * (theta + tau * f0) ** 2
        + t * sc.psi2(n, v)
        + u * sc.psi2(Av - tau_e * upsf, n)
        + 1j * u * tau * sc.omega0(upsf, Av)
    )


def real_theta_closed(p, n, v, datum: FixedPointDatum, upsf=None):
    """Real part of :func:`theta_fn` written out as a sum of squares."""
    theta, t, u, tau = _unpack(p)
    A, f0 = datum.A, datum.f0
    n = np.asarray(n, dtype=float)
    v = np.asarray(v, dtype=float)
    if upsf is None:
        upsf = np.zeros(A.shape[0])
    r = v @ A.T - np.asarray(tau)[..., None] * np.asarray(upsf, dtype=float) - n
    return (
        -0.5 * u * (theta + tau * f0) ** 2
        - 0.5 * t * theta**2
        - 0.5 * t * np.sum((n - v) ** 2, axis=-1)
        - 0.5 * u * np.sum(r**2, axis=-1)
    )


def _real_theta_matrix(t, u, datum, N, upsf):
    """Matrix of ``Re Theta`` in the variables ``(theta, tau, c, v)`` with ``n = N c``."""
    k = N.shape[1]
    m = datum.A.shape[0]
    dim = 2 + k + m

    def q(z):
        theta, tau = z[0], z[1]
        n = N @ z[2 : 2 + k]
        v = z[2 + k :]
        return float(real_theta_closed(np.array([theta, t, u, tau]), n, v, datum, upsf))

    E = np.eye(dim)
    diag = np.array([q(E[i]) for i in range(dim)])
    M = np.empty((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            M[i, j] = M[j, i] = diag[i] if i == j else 0.5 * (q(E[i] + E[j]) - diag[i] - diag[j])
    return M


def damping_bound(datum: FixedPointDatum, D: float = 2.0, upsf=None, grid: int = 9, n_sphere: int = 2000, seed: int = 0):
    """Constant ``a > 0`` with ``Re Theta <= -a (theta^2 + tau^2 + |n|^2 + |v|^2)``.

    ``n`` ranges over ``im(A - I)``.  At fixed ``(t, u)`` the real part is a
    quadratic form, so its maximum on the unit sphere is the top eigenvalue;
    the bound is the minimum of ``-top`` over a ``grid x grid`` net of
    ``[1/D, D]^2``.  ``n_sphere`` random unit vectors are also scanned at each
    net point so that a violation can be reported with a witness.

    Raises
    ------
    NotVeryCleanError
        If ``A`` is not very clean.
    DampingViolation
        If the sampled supremum is not negative.
    """
    if not D > 1:
        raise PreconditionError("D must exceed 1")
    A = datum.A
    if not sc.cleanliness(A).very_clean:
        raise NotVeryCleanError("damping bound needs a very clean linearisation")
    N = sc.image_subspace(A).basis
    rng = np.random.default_rng(seed)
    ts = np.geomspace(1.0 / D, D, grid)
    best = np.inf
    for t in ts:
        for u in ts:
            M = _real_theta_matrix(t, u, datum, N, upsf)
            w, V = np.linalg.eigh(M)
            Z = rng.normal(size=(n_sphere, M.shape[0]))
            Z /= np.linalg.norm(Z, axis=1, keepdims=True)
            sampled = np.einsum("si,ij,sj->s", Z, M, Z).max()
            top = max(w[-1], sampled)
            if top >= 0:
                raise DampingViolation(
                    f"Re Theta not negative at t={t:.4g}, u={u:.4g}",
                    sample={"t": t, "u": u, "direction": V[:, -1]},
                )
            best = min(best, -top)
    return float(best)


def gamma_shift(A, nprime):
    """``-i n'^T G^T Q^{-1} F n' + (1/2) n'^T G^T Q^{-1} G n'``."""
    Q, F, G = sc.q_of(A), sc.f_of(A), sc.g_of(A)
    GtQi = np.linalg.solve(Q, G).T
    return -1j * sc.quad_form(GtQi @ F, nprime) + 0.5 * sc.quad_form(GtQi @ G, nprime)


def gaussian_integral_closed(Q, xi):
    """``int exp(i s.xi - s^T Q s / 2) ds = (2 pi)^d / sqrt(det Q) exp(-xi^T Q^{-1} xi / 2)``.

    The Gaussian is even in ``xi``, so evaluating at ``F n'`` or ``-F n'``
    gives the same number.
    """
    Q = np.asarray(Q, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if not np.allclose(Q, Q.T, rtol=0, atol=1e-12 * max(1.0, np.abs(Q).max())):
        raise PreconditionError("Q must be symmetric")
    try:
        L = np.linalg.cholesky(Q)
    except np.linalg.LinAlgError as exc:
        raise PreconditionError("Q must be positive definite") from exc
    m = Q.shape[0]
    sqrt_det = np.prod(np.diag(L))
    y = np.linalg.solve(L, xi)
    return complex((2 * math.pi) ** (m / 2) / sqrt_det * math.exp(-0.5 * float(y @ y)))


def exponent_identity_check(A, n, f0: float) -> float:
    """Deviation between the completed-square exponent and ``n^T P_A n / f0``.

    Left side: ``(1/f0) [psi2(A n, n) + Gamma(n) - (1/2) n^T F^T Q^{-1} F n]``.
    """
    if not f0 > 0:
        raise PreconditionError("f0 must be positive")
    A = np.asarray(A, dtype=float)
    n = np.asarray(n, dtype=float)
    Q, F = sc.q_of(A), sc.f_of(A)
    lhs = (sc.psi2(A @ n, n) + gamma_shift(A, n) - 0.5 * sc.quad_form(F.T @ np.linalg.solve(Q, F), n)) / f0
    rhs = sc.psi2_A(A, n) / f0
    return float(abs(lhs - rhs))


def leading_profile(datum: FixedPointDatum) -> LeadingProfile:
    d = datum.dim_d
    detQ = np.linalg.det(sc.q_of(datum.A))
    coef = datum.rho0 * 2 * math.pi / datum.f0 ** (d + 1) * 2**d / math.sqrt(detQ)
    return LeadingProfile(complex(coef), sc.profile_matrix(datum.A) / datum.f0)


def predicted_kernel(datum: FixedPointDatum, lam: float, n, chi_at_tau0: complex = 1.0, window_c: float = 1.0):
    """Leading term of the smoothed kernel at ``x0 + n / sqrt(lam)``.

    ``rho0 2 pi e^{-i lam tau0} / f0^{d+1} * 2^d / sqrt(det Q) * exp(n^T P_A n / f0)
    * chi(tau0) * (lam / pi)^d``.  Broadcasts over leading axes of ``n``.
    Warns when ``|n| > window_c * lam^(1/9)``.
    """
    if not sc.cleanliness(datum.A).very_clean:
        raise NotVeryCleanError("prediction needs a very clean linearisation")
    if not lam > 0:
        raise PreconditionError("lambda must be positive")
    n = np.asarray(n, dtype=float)
    if np.any(np.linalg.norm(n, axis=-1) > window_c * lam ** (1 / 9)):
        warnings.warn("displacement outside the lam^(1/9) window", WindowWarning, stacklevel=2)
    lp = leading_profile(datum)
    d = datum.dim_d
    phase = np.exp(-1j * lam * datum.tau0)
    return lp.coefficient * phase * np.exp(sc.quad_form(lp.profile, n)) * chi_at_tau0 * (lam / math.pi) ** d


def parity_split(ns, values):
    """Even and odd parts ``(S(n) +- S(-n)) / 2`` of samples closed under ``n -> -n``.

    Returns two arrays aligned with ``ns``.
    """
    ns = np.atleast_2d(np.asarray(ns, dtype=float))
    values = np.asarray(values, dtype=complex)
    if len(values) != len(ns):
        raise PreconditionError("one value per displacement is required")
    # mirror points are matched up to rounding in the grid construction
    dist = np.linalg.norm(ns[:, None, :] + ns[None, :, :], axis=-1)
    mirror = np.argmin(dist, axis=1)
    scale = 1.0 + np.linalg.norm(ns, axis=1)
    bad = dist[np.arange(len(ns)), mirror] > 1e-9 * scale
    if np.any(bad):
        raise PreconditionError(f"missing mirror point for n={ns[np.argmax(bad)]}")
    even = 0.5 * (values + values[mirror])
    odd = 0.5 * (values - values[mirror])
    return even, odd
