"""Linear symplectic algebra behind the off-diagonal kernel profile.

Conventions used throughout the package
---------------------------------------
``R^{2d}`` is identified with ``C^d`` by ``(x, y) <-> x + iy``; multiplication
by ``i`` is the matrix ``J0 = [[0, -I], [I, 0]]``.  The standard symplectic
form is represented by ``-J0``::

    omega0(v, w) = -v^T J0 w

so that ``omega0(e_x, e_y) = +1`` in one complex dimension.  Every other
module calls :func:`omega0` rather than re-deriving this sign.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import IllConditionedError, NotVeryCleanError, PreconditionError, RankGapWarning

TOL_SYMP = 1e-10
RANK_TOL = 1e-8


def J0(d: int) -> np.ndarray:
    """Return the complex structure ``[[0, -I_d], [I_d, 0]]``."""
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, -eye], [eye, zero]])


def omega0(v, w):
    """Standard symplectic pairing ``-v^T J0 w`` (batched over leading axes)."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    d = v.shape[-1] // 2
    # -v^T J0 w = x_v . y_w - y_v . x_w
    return np.sum(v[..., :d] * w[..., d:] - v[..., d:] * w[..., :d], axis=-1)


def half_dim(A) -> int:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % 2:
        raise PreconditionError(f"expected a square 2d x 2d matrix, got shape {A.shape}")
    return A.shape[0] // 2


def symplectic_defect(A) -> float:
    """``max |A^T J0 A - J0|``."""
    A = np.asarray(A, dtype=float)
    J = J0(half_dim(A))
    return float(np.max(np.abs(A.T @ J @ A - J)))


def check_symplectic(A, tol: float = TOL_SYMP) -> np.ndarray:
    """Validate and return ``A`` as a float array.

    The defect is compared with ``tol * (1 + |A|_2^2)``: the roundoff in
    ``A^T J0 A`` grows with the square of the norm.
    """
    A = np.asarray(A, dtype=float)
    scale = 1.0 + np.linalg.norm(A, 2) ** 2
    defect = symplectic_defect(A)
    if defect > tol * scale:
        raise PreconditionError(f"matrix is not symplectic: defect {defect:.3e}")
    return A


def random_symplectic(d: int, spread: float, seed: int) -> np.ndarray:
    """``exp(J0 S)`` for a seeded symmetric ``S`` with entries in ``[-spread, spread]``.

    ``J0 S`` is Hamiltonian, so the exponential lies in the symplectic group
    up to roundoff; ``spread`` tunes the conditioning.
    """
    if d < 1:
        raise PreconditionError("half-dimension must be >= 1")
    if spread < 0:
        raise PreconditionError("spread must be nonnegative")
    rng = np.random.default_rng(seed)
    M = rng.uniform(-spread, spread, size=(2 * d, 2 * d))
    S = 0.5 * (M + M.T)
    return scipy.linalg.expm(J0(d) @ S)


def random_unitary_symplectic(d: int, seed: int) -> np.ndarray:
    """Seeded orthogonal-symplectic matrix, i.e. a ``U(d)`` element in real form."""
    rng = np.random.default_rng(seed)
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    U, R = np.linalg.qr(Z)
    U = U * (np.diag(R) / np.abs(np.diag(R)))
    X, Y = U.real, U.imag
    return np.block([[X, -Y], [Y, X]])


@dataclass(frozen=True)
class PolarFactors:
    orthogonal: np.ndarray
    symmetric: np.ndarray


def polar_decompose(A) -> PolarFactors:
    """Polar factors ``A = O P`` with ``P = (A^T A)^{1/2}``.

    For symplectic ``A`` both factors are again symplectic.

    Raises
    ------
    IllConditionedError
        If the smallest eigenvalue of ``A^T A`` is below ``1e-14``.
    """
    A = np.asarray(A, dtype=float)
    w, V = np.linalg.eigh(A.T @ A)
    if w.min() < 1e-14:
        raise IllConditionedError(f"A^T A has eigenvalue {w.min():.3e}")
    root = np.sqrt(w)
    P = (V * root) @ V.T
    P = 0.5 * (P + P.T)
    O = A @ ((V / root) @ V.T)
    return PolarFactors(orthogonal=O, symmetric=P)


def q_of(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return np.eye(A.shape[0]) + A.T @ A


def f_of(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    return J0(n // 2) @ (np.linalg.inv(A) - np.eye(n))


def g_of(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    return A.T @ (A - np.eye(A.shape[0]))


def _sym(M):
    return 0.5 * (M + M.T)


def _imaginary_block(A, Q, F, G):
    return G.T @ np.linalg.solve(Q, F) - A.T @ J0(A.shape[0] // 2)


def profile_matrix(A) -> np.ndarray:
    """Symmetrised complex matrix of the profile form, built from polar factors.

    ``-(A^T - I) O Q^{-1} O^T (A - I) - i (G^T Q^{-1} F - A^T J0)``, with
    ``Q, F, G`` from :func:`q_of`, :func:`f_of`, :func:`g_of`.  Only the
    symmetric part affects ``v^T M v``, so that is what is stored.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    I = np.eye(n)
    O = polar_decompose(A).orthogonal
    Q, F, G = q_of(A), f_of(A), g_of(A)
    real = -(A.T - I) @ O @ np.linalg.solve(Q, O.T @ (A - I))
    return _sym(real - 1j * _imaginary_block(A, Q, F, G))


def profile_matrix_alt(A) -> np.ndarray:
    """Same form assembled without polar factors.

    ``-1/2 [(A^T - I)(A - I) + F^T Q^{-1} F - G^T Q^{-1} G] - i (G^T Q^{-1} F - A^T J0)``
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    I = np.eye(n)
    Q, F, G = q_of(A), f_of(A), g_of(A)
    real = -0.5 * ((A.T - I) @ (A - I) + F.T @ np.linalg.solve(Q, F) - G.T @ np.linalg.solve(Q, G))
    return _sym(real - 1j * _imaginary_block(A, Q, F, G))


def psi2(v, w):
    """Universal near-diagonal exponent ``-i omega0(v, w) - |v - w|^2 / 2``."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    diff = v - w
    return -1j * omega0(v, w) - 0.5 * np.sum(diff * diff, axis=-1)


def quad_form(M, n):
    """``n^T M n`` batched over the leading axes of ``n``."""
    n = np.asarray(n, dtype=float)
    return np.einsum("...i,ij,...j->...", n, M, n)


def psi2_A(A, n):
    """Profile exponent ``n^T P_A n`` for the linearisation ``A``."""
    return quad_form(profile_matrix(A), n)


@dataclass(frozen=True)
class Subspace:
    basis: np.ndarray  # columns, orthonormal

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _split(A, tol):
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    U, s, Vt = np.linalg.svd(A - np.eye(n))
    smax = s[0]
    if smax == 0.0:
        return np.eye(n), np.zeros((n, 0))
    thr = tol * smax
    near = (s > thr / 10) & (s < thr * 10) & (s > 0)
    if np.any(near):
        warnings.warn(
            f"singular value(s) {s[near]} within a factor 10 of rank threshold {thr:.3e}",
            RankGapWarning,
            stacklevel=3,
        )
    kernel = Vt[s <= thr].T
    image = U[:, s > thr]
    return kernel, image


def fixed_subspace(A, tol: float = RANK_TOL) -> Subspace:
    """``ker(A - I)`` from the right singular vectors below ``tol * sigma_max``."""
    return Subspace(_split(A, tol)[0])


def image_subspace(A, tol: float = RANK_TOL) -> Subspace:
    """``im(A - I)`` from the left singular vectors above ``tol * sigma_max``."""
    return Subspace(_split(A, tol)[1])


@dataclass(frozen=True)
class CleanlinessReport:
    ker_dim: int
    im_dim: int
    intersection_dim: int
    ker_symplectic: bool

    @property
    def very_clean(self) -> bool:
        return self.intersection_dim == 0 and self.ker_symplectic


def cleanliness(A, tol: float = RANK_TOL) -> CleanlinessReport:
    kernel, image = _split(A, tol)
    if kernel.shape[1] and image.shape[1]:
        angles = scipy.linalg.subspace_angles(kernel, image)
        inter = int(np.sum(angles < np.sqrt(tol)))
    else:
        inter = 0
    k = kernel.shape[1]
    if k == 0:
        ker_symp = True
    else:
        d = kernel.shape[0] // 2
        gram = -kernel.T @ J0(d) @ kernel
        ker_symp = bool(np.linalg.svd(gram, compute_uv=False).min() > tol)
    return CleanlinessReport(k, image.shape[1], inter, ker_symp)


def negdef_on_image(A, tol: float = RANK_TOL) -> float:
    """Largest eigenvalue of ``Re P_A`` restricted to ``im(A - I)``.

    Negative whenever ``ker(A - I)`` and ``im(A - I)`` meet only in zero.
    """
    report = cleanliness(A, tol)
    if report.intersection_dim:
        raise NotVeryCleanError("ker(A - I) meets im(A - I) nontrivially")
    N = image_subspace(A, tol).basis
    if N.shape[1] == 0:
        raise PreconditionError("im(A - I) is trivial")
    R = N.T @ profile_matrix(A).real @ N
    return float(np.linalg.eigvalsh(0.5 * (R + R.T)).max())
