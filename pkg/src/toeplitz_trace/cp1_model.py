"""Brute-force model: a torus-generated Hamiltonian on the projective line.

The circle bundle is the unit sphere ``S^3 = {|z0|^2 + |z1|^2 = 1}`` with
contact form ``alpha = Im(conj(z) . dz)`` and Kahler form ``omega = dalpha / 2``
on the base; the projective line then has area ``pi`` and the invariant
measure on the sphere is ``alpha ^ dalpha / (4 pi) = dsigma / (2 pi)``.
Level ``k`` of the Hardy space is spanned by the monomials
``z0^(k-j) z1^j``; with ``p = |z1|^2`` their squared moduli, once normalised,
are ``(k+1)/pi`` times binomial probabilities ``C(k, j) (1-p)^(k-j) p^j``.

The Hamiltonian ``f = a + b |z1|^2`` lifts to the contact flow
``z -> (e^{-i alpha0 t} z0, e^{-i alpha1 t} z1)``; the quantised flow acts on
the monomial ``(k, j)`` by ``e^{i t mu_kj}`` with ``mu_kj = (k-j) alpha0 + j alpha1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.special import gammaln

from . import profile_engine as pe
from .errors import ConventionError, PreconditionError, TailCoverageError

OMEGA_MAX = 1000.0  # |K| < 1e-15 beyond this frequency
ENVELOPE_C = 8.0  # |K(w)| <= ENVELOPE_C w^(-3/4) exp(-sqrt(w)) for w >= 20


@dataclass(frozen=True)
class RotationHamiltonian:
    """``f = a + b |z1|^2 / |z|^2``, positive when ``a > 0`` and ``a + b > 0``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.a + self.b > 0):
            raise PreconditionError("need a > 0 and a + b > 0 for a positive Hamiltonian")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.sum(np.abs(z) ** 2, axis=-1)
        return self.a + self.b * np.abs(z[..., 1]) ** 2 / r


def _complex_gradient(F, z, h=1e-5):
    """``2 dF/d conj(z)`` of a real function on ``C^2`` by central differences."""
    g = np.zeros(2, dtype=complex)
    for j in range(2):
        e = np.zeros(2, dtype=complex)
        e[j] = h
        dx = (F(z + e) - F(z - e)) / (2 * h)
        dy = (F(z + 1j * e) - F(z - 1j * e)) / (2 * h)
        g[j] = dx + 1j * dy
    return g


def contact_vector_field(ham: RotationHamiltonian, z):
    """Contact lift at ``z`` on the unit sphere.

    Horizontal part ``-(i/2) P g`` with ``g = 2 dF/d conj(z)`` and ``P`` the
    projection onto the complex orthocomplement of ``z``, minus ``f`` times the
    fiber generator ``i z``.
    """
    z = np.asarray(z, dtype=complex)
    g = _complex_gradient(ham, z)
    Pg = g - np.vdot(z, g) * z
    return -0.5j * Pg - ham(z) * 1j * z


def _flow_ode(ham, z0, t1):
    def rhs(_, y):
        z = y[:2] + 1j * y[2:]
        dz = contact_vector_field(ham, z)
        return np.concatenate([dz.real, dz.imag])

    y0 = np.concatenate([z0.real, z0.imag])
    sol = solve_ivp(rhs, (0.0, t1), y0, method="DOP853", rtol=1e-12, atol=1e-13)
    y = sol.y[:, -1]
    return y[:2] + 1j * y[2:]


def contact_lift_phases(ham: RotationHamiltonian, check: bool = True, seeds: int = 20, seed: int = 0, tol: float = 1e-6):
    """Rotation rates ``(alpha0, alpha1)`` of the lifted flow.

    The closed form is ``alpha0 = a`` and ``alpha1 = a + b``.  With ``check``
    the contact vector field is integrated for unit time from ``seeds`` random
    points and compared with the closed form.

    Returns
    -------
    (alpha0, alpha1, max_deviation)

    Raises
    ------
    ConventionError
        If the integrated flow deviates from the closed form by more than ``tol``.
    """
    alpha0, alpha1 = ham.a, ham.a + ham.b
    dev = 0.0
    if check:
        rng = np.random.default_rng(seed)
        for _ in range(seeds):
            z = rng.normal(size=2) + 1j * rng.normal(size=2)
            z /= np.linalg.norm(z)
            end = _flow_ode(ham, z, 1.0)
            closed = np.array([np.exp(-1j * alpha0) * z[0], np.exp(-1j * alpha1) * z[1]])
            dev = max(dev, float(np.max(np.abs(end - closed))))
        if dev > tol:
            raise ConventionError(f"contact flow deviates from closed form by {dev:.3e}")
    return alpha0, alpha1, dev


@dataclass(frozen=True)
class SpectralModel:
    ham: RotationHamiltonian
    kmax: int
    alpha0: float
    alpha1: float

    def mu(self, k, j):
        k = np.asarray(k)
        j = np.asarray(j)
        return (k - j) * self.alpha0 + j * self.alpha1

    @staticmethod
    def log_c(k, j):
        """Log of the normalising constant ``(k+1)! / (pi (k-j)! j!)``."""
        k = np.asarray(k, dtype=float)
        j = np.asarray(j, dtype=float)
        return gammaln(k + 2) - gammaln(k - j + 1) - gammaln(j + 1) - math.log(math.pi)

    @property
    def min_slope(self) -> float:
        return min(self.alpha0, self.alpha1)

    def tables(self):
        """Dense ``(mu, c)`` tables indexed ``[k, j]``, NaN above the diagonal."""
        k, j = np.meshgrid(np.arange(self.kmax + 1), np.arange(self.kmax + 1), indexing="ij")
        mask = j <= k
        mu = np.where(mask, self.mu(k, j), np.nan)
        c = np.where(mask, np.exp(self.log_c(k, np.minimum(j, k))), np.nan)
        return mu, c


def build_spectral_model(ham: RotationHamiltonian, kmax: int, check: bool = True) -> SpectralModel:
    """Model with eigenphases from :func:`contact_lift_phases`.

    Every level ``k >= 1`` has ``mu_kj > 0``; the constant level ``k = 0`` has
    ``mu = 0`` and is kept.
    """
    if kmax < 1:
        raise PreconditionError("kmax must be >= 1")
    alpha0, alpha1, _ = contact_lift_phases(ham, check=check)
    model = SpectralModel(ham, int(kmax), alpha0, alpha1)
    if model.min_slope <= 0:
        raise PreconditionError("eigenphases must be positive on levels k >= 1")
    return model


def level_diagonal_integral(model: SpectralModel, k: int, nodes: int = 256) -> float:
    """Integral of the level-``k`` diagonal kernel over the sphere.

    Hopf coordinates ``z = (cos e e^{i x1}, sin e e^{i x2})`` give
    ``dsigma = cos e sin e de dx1 dx2``; the angular integrals contribute
    ``(2 pi)^2`` and the measure is ``dsigma / (2 pi)``.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    eta = 0.25 * math.pi * (x + 1)
    w = 0.25 * math.pi * w
    j = np.arange(k + 1)
    logc = model.log_c(k, j)
    cos2, sin2 = np.cos(eta) ** 2, np.sin(eta) ** 2
    with np.errstate(divide="ignore"):
        logs = logc[None, :] + (k - j)[None, :] * np.log(cos2)[:, None] + j[None, :] * np.log(sin2)[:, None]
    diag = np.exp(logs).sum(axis=1)
    return float(2 * math.pi * np.dot(w, diag * np.cos(eta) * np.sin(eta)))


def contact_volume_density(z) -> float:
    """``alpha ^ dalpha / (4 pi)`` on an orthonormal oriented frame at ``z``.

    The frame is ``(i z, u, i u)`` with ``u`` a unit vector complex-orthogonal
    to ``z``; the result is the density of the model measure relative to the
    round volume.
    """
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z)
    u = np.array([-np.conj(z[1]), np.conj(z[0])])

    def alpha(v):
        return float(np.imag(np.vdot(z, v)))

    def dalpha(v, w):
        return float(2 * np.sum(v.real * w.imag - v.imag * w.real))

    e1, e2, e3 = 1j * z, u, 1j * u
    # alpha vanishes on e2, e3
    vol = alpha(e1) * dalpha(e2, e3) - alpha(e2) * dalpha(e1, e3) + alpha(e3) * dalpha(e1, e2)
    return vol / (4 * math.pi)


@lru_cache(maxsize=1)
def _bump_transform():
    """Spline of ``K(w) = int_{-1}^{1} exp(1 - 1/(1-x^2)) cos(w x) dx`` on ``[0, OMEGA_MAX]``.

    The trapezoid rule is spectrally accurate for this bump; one real FFT
    evaluates it on a fine frequency grid.
    """
    h = 1.0 / 2048
    N = 2**22
    m = int(round(1 / h))
    x = np.arange(-m + 1, m) * h
    b = np.exp(1.0 - 1.0 / (1.0 - x * x))
    arr = np.zeros(N)
    arr[:m] = b[m - 1 :]
    arr[N - m + 1 :] = b[: m - 1]
    K = h * np.fft.rfft(arr).real
    om = 2 * math.pi * np.arange(K.size) / (N * h)
    keep = om <= OMEGA_MAX + 1.0
    return CubicSpline(om[keep], K[keep])


def bump_transform(w):
    """``K(w)``, even in ``w`` and set to zero beyond ``OMEGA_MAX``."""
    w = np.abs(np.asarray(w, dtype=float))
    out = _bump_transform()(np.minimum(w, OMEGA_MAX))
    return np.where(w <= OMEGA_MAX, out, 0.0)


@lru_cache(maxsize=4)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def bump_transform_direct(w, nodes: int = 4000):
    """Gauss-Legendre reference for :func:`bump_transform`."""
    x, wt = _legendre(nodes)
    b = np.exp(1.0 - 1.0 / (1.0 - x * x))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    return np.cos(np.outer(w, x)) @ (wt * b)


@dataclass(frozen=True)
class Window:
    """Bump ``chi(t) = exp(1 - 1/(1 - ((t - tau0)/eps)^2))`` on ``(tau0 - eps, tau0 + eps)``."""

    tau0: float
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise PreconditionError("eps must be positive")

    def chi(self, t):
        x = (np.asarray(t, dtype=float) - self.tau0) / self.eps
        inside = np.abs(x) < 1
        safe = np.where(inside, x, 0.0)
        return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)

    def transform(self, s):
        """``W(s) = int chi(t) e^{-i s t} dt = e^{-i s tau0} eps K(eps s)``."""
        s = np.asarray(s, dtype=float)
        return np.exp(-1j * s * self.tau0) * self.eps * bump_transform(self.eps * s)


@dataclass(frozen=True)
class ModelPoint:
    z0: complex
    z1: complex

    def __post_init__(self):
        r = math.hypot(abs(self.z0), abs(self.z1))
        if not abs(r - 1) < 1e-12:
            raise PreconditionError("homogeneous pair must be normalised")

    @classmethod
    def from_chart(cls, w: complex, pole: int = 0) -> "ModelPoint":
        """Point ``[1 : w]`` (``pole=0``) or ``[w : 1]`` (``pole=1``)."""
        r = math.sqrt(1 + abs(w) ** 2)
        return cls(1 / r, w / r) if pole == 0 else cls(w / r, 1 / r)

    @property
    def p(self) -> float:
        return abs(self.z1) ** 2


@dataclass(frozen=True)
class ToeplitzSymbol:
    """Real symbol ``radial(|z1|^2) + Re(mixing z0 conj(z1))``.

    ``radial`` is a number or a vectorised callable on ``[0, 1]``.  The radial
    part is diagonal in the monomial basis; the mixing part couples ``j`` and
    ``j + 1`` within a level.
    """

    radial: float | Callable = 1.0
    mixing: complex = 0.0

    def __call__(self, point: ModelPoint) -> float:
        rad = self.radial if np.isscalar(self.radial) else float(self.radial(np.array(point.p)))
        return float(rad + np.real(self.mixing * point.z0 * np.conj(point.z1)))

    def at_pole(self) -> float:
        return self(ModelPoint(1.0, 0.0))

    def diagonal(self, k, j, nodes: int = 128):
        """``<e_kj, g e_kj>``: expectation of ``radial`` under ``Beta(j+1, k-j+1)``."""
        k = np.asarray(k, dtype=float)
        j = np.asarray(j, dtype=float)
        if np.isscalar(self.radial):
            return np.full(np.broadcast(k, j).shape, float(self.radial))
        return beta_expectation(self.radial, j + 1, k - j + 1, nodes)

    def superdiagonal(self, k, j):
        """``<g e_{k,j+1}, e_kj> = (mixing/2) sqrt((k-j)(j+1)) / (k+2)``."""
        k = np.asarray(k, dtype=float)
        j = np.asarray(j, dtype=float)
        return 0.5 * self.mixing * np.sqrt((k - j) * (j + 1)) / (k + 2)


def beta_expectation(fn, a, b, nodes: int = 128, width: float = 40.0):
    """``E fn(T)`` for ``T ~ Beta(a, b)``, vectorised over ``a, b``.

    Gauss-Legendre on ``[mean - width sd, mean + width sd]`` clipped to ``[0, 1]``,
    which holds all but a negligible part of the mass.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    mean = a / (a + b)
    sd = np.sqrt(a * b / ((a + b) ** 2 * (a + b + 1)))
    lo = np.clip(mean - width * sd, 0.0, 1.0)
    hi = np.clip(mean + width * sd, 0.0, 1.0)
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (hi - lo)[:, None] * (x + 1)[None, :] + lo[:, None]
    with np.errstate(divide="ignore"):
        logd = (
            (a - 1)[:, None] * np.log(t)
            + (b - 1)[:, None] * np.log1p(-t)
            - (gammaln(a) + gammaln(b) - gammaln(a + b))[:, None]
        )
    dens = np.exp(logd) * (0.5 * (hi - lo))[:, None] * w[None, :]
    return np.sum(dens * fn(t), axis=1)


def required_kmax(model_or_ham, lam: float, window: Window) -> int:
    """Smallest level cutoff with ``eps (mu - lam) > OMEGA_MAX`` for every omitted level."""
    if isinstance(model_or_ham, SpectralModel):
        slope = model_or_ham.min_slope
    else:
        slope = min(model_or_ham.a, model_or_ham.a + model_or_ham.b)
    return max(1, math.ceil((max(lam, 0.0) + OMEGA_MAX / window.eps) / slope))


def tail_bound(model: SpectralModel, lam: float, window: Window, symbol_sup: float = 1.0) -> float:
    """Bound on the omitted levels from the transform envelope."""
    k = np.arange(model.kmax + 1, model.kmax + 200000)
    om = window.eps * (k * model.min_slope - lam)
    om = om[om > 20]
    k = k[-om.size :] if om.size else k[:0]
    env = ENVELOPE_C * om ** (-0.75) * np.exp(-np.sqrt(om))
    return float(symbol_sup * window.eps / math.pi * np.sum((k + 1) * env))


def _level_pairs(kmax: int, p: float):
    """Flattened ``(k, j)`` pairs carrying non-negligible binomial mass at ``p``."""
    k = np.arange(kmax + 1)
    if p <= 0.0:
        return k, np.zeros_like(k)
    if p >= 1.0:
        return k, k.copy()
    mean = k * p
    sd = np.sqrt(k * p * (1 - p))
    lo = np.clip(np.floor(mean - 15 * sd - 25), 0, k).astype(int)
    hi = np.clip(np.ceil(mean + 15 * sd + 25), 0, k).astype(int)
    counts = hi - lo + 1
    kk = np.repeat(k, counts)
    start = np.repeat(np.cumsum(counts) - counts, counts)
    jj = np.repeat(lo, counts) + np.arange(kk.size) - start
    return kk, jj


def _log_binom(k, j, p):
    if p <= 0.0:
        return np.where(j == 0, 0.0, -np.inf)
    if p >= 1.0:
        return np.where(j == k, 0.0, -np.inf)
    return gammaln(k + 1) - gammaln(j + 1) - gammaln(k - j + 1) + j * math.log(p) + (k - j) * math.log1p(-p)


def brute_force_S(model: SpectralModel, point: ModelPoint, lam: float, window: Window, symbol: ToeplitzSymbol | None = None) -> complex:
    """Diagonal value of the smoothed, compressed flow at ``point``.

    ``sum_k sum_{j, j'} T_{j j'} W(lam - mu_{k j'}) e_kj(x) conj(e_kj'(x))``
    with ``T`` the Toeplitz matrix of ``symbol`` (identity when ``None``).

    Raises
    ------
    TailCoverageError
        If ``model.kmax`` stops short of :func:`required_kmax`.
    """
    need = required_kmax(model, lam, window)
    if model.kmax < need:
        raise TailCoverageError(f"kmax={model.kmax} below the required {need} at lam={lam}")
    p = point.p
    k, j = _level_pairs(model.kmax, p)
    logB = _log_binom(k, j, p)
    pref = (k + 1) / math.pi
    Wj = window.transform(lam - model.mu(k, j))
    diag = 1.0 if symbol is None else symbol.diagonal(k, j)
    total = np.sum(pref * diag * np.exp(logB) * Wj)
    if symbol is not None and symbol.mixing != 0 and 0.0 < p < 1.0:
        sel = j < k
        k1, j1 = k[sel], j[sel]
        root = np.exp(0.5 * (logB[sel] + _log_binom(k1, j1 + 1, p)))
        T = symbol.superdiagonal(k1, j1)
        Wnext = window.transform(lam - model.mu(k1, j1 + 1))
        ph = point.z0 * np.conj(point.z1)
        ph = ph / abs(ph)
        total += np.sum(pref[sel] * root * (T * Wnext * ph + np.conj(T) * Wj[sel] * np.conj(ph)))
    return complex(total)


def model_for(ham: RotationHamiltonian, lam_max: float, window: Window, check: bool = True) -> SpectralModel:
    """Spectral model truncated exactly where ``lam_max`` needs it."""
    return build_spectral_model(ham, required_kmax(ham, lam_max, window), check=check)


def rotation(beta: float) -> np.ndarray:
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, -s], [s, c]])


def pole_period(ham: RotationHamiltonian, which_period: int = 1) -> float:
    if which_period < 1:
        raise PreconditionError("which_period must be >= 1")
    return 2 * math.pi * which_period / ham.a


def pole_linearisation_ode(ham: RotationHamiltonian, tau: float, delta: float = 1e-2) -> np.ndarray:
    """Differential at the pole of the base flow at time ``tau``, from the contact ODE.

    Starting points ``[1 : delta e_i]`` are flowed on the sphere and read back
    in the chart ``w = z1 / z0``; the chart map is linear in this model, so
    the difference quotient is exact up to integration error, and a
    moderate ``delta`` keeps the finite-difference gradient error relatively small.
    """
    cols = []
    for w in (delta, 1j * delta):
        z = np.array([1.0, w], dtype=complex)
        z /= np.linalg.norm(z)
        end = _flow_ode(ham, z, tau)
        wt = end[1] / end[0] / delta
        cols.append([wt.real, wt.imag])
    return np.array(cols).T


def fixed_point_datum_at_pole(ham: RotationHamiltonian, which_period: int = 1, symbol: ToeplitzSymbol | None = None, check: bool = True) -> pe.FixedPointDatum:
    """Linear data at the pole ``[1 : 0]`` for its ``which_period``-th fiber return.

    The base flow in the chart is ``w -> e^{-i b t} w``, so the differential at
    time ``-tau0`` is the rotation by ``beta = b tau0``.
    """
    tau0 = pole_period(ham, which_period)
    beta = ham.b * tau0
    if abs(math.remainder(beta, 2 * math.pi)) < 1e-9:
        if ham.b == 0:
            raise PreconditionError("constant Hamiltonian: every point is periodic, fixed locus is everything")
        raise PreconditionError("resonant period: the linearisation is the identity")
    A = rotation(beta)
    if check:
        A_ode = pole_linearisation_ode(ham, -tau0)
        if np.max(np.abs(A_ode - A)) > 1e-6:
            raise ConventionError("rotation angle disagrees with the integrated flow")
    rho0 = 1.0 if symbol is None else symbol.at_pole()
    return pe.FixedPointDatum(A=A, f0=ham.a, rho0=rho0, tau0=tau0)


def _section(zeta, c2=0.0, c3=0.0):
    w = zeta + c2 * zeta**2
    phase = np.exp(1j * np.imag(c3 * zeta**3))
    return phase * np.array([1.0, w]) / math.sqrt(1 + abs(w) ** 2)


def _alpha_on_chart(x, y, c2=0.0, c3=0.0, delta=1e-5):
    """Pulled-back contact form components ``(alpha_x, alpha_y)`` at ``x + iy``."""
    z = _section(x + 1j * y, c2, c3)
    out = []
    for e in (1.0, 1j):
        st = [(_section(x + 1j * y + m * delta * e, c2, c3)) for m in (-2, -1, 1, 2)]
        dz = (st[0] - 8 * st[1] + 8 * st[2] - st[3]) / (12 * delta)
        out.append(float(np.imag(np.vdot(z, dz))))
    return out


def kahler_form_at_origin(c2=0.0, c3=0.0, h=1e-3) -> float:
    """``omega(d/dx, d/dy) = dalpha(d/dx, d/dy) / 2`` at the chart origin, by fourth-order differences."""
    ay = [_alpha_on_chart(m * h, 0.0, c2, c3)[1] for m in (-2, -1, 1, 2)]
    ax = [_alpha_on_chart(0.0, m * h, c2, c3)[0] for m in (-2, -1, 1, 2)]
    d = lambda f: (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    return 0.5 * (d(ay) - d(ax))


@lru_cache(maxsize=1)
def chart_scale() -> float:
    """Factor ``kappa`` making the pulled-back Kahler form standard at the origin."""
    return 1.0 / math.sqrt(kahler_form_at_origin())


def heisenberg_displace(n, lam: float, kappa: float | None = None) -> ModelPoint:
    """Point ``[1 : w]`` with ``w = kappa (n1 + i n2) / sqrt(lam)``."""
    n = np.asarray(n, dtype=float)
    k = chart_scale() if kappa is None else kappa
    w = k * complex(n[0], n[1]) / math.sqrt(lam)
    if abs(w) >= 0.5:
        raise PreconditionError("displacement leaves the chart domain")
    return ModelPoint.from_chart(w)


def horizontal_lift_holonomy(n, s_values, c2: complex = 0.0, c3: complex = 0.0):
    """Fiber angle of the horizontal lift along ``s -> s n`` relative to a local frame.

    The chart is ``w = zeta + c2 zeta^2`` with frame
    ``e^{i Im(c3 zeta^3)} (1, w) / |(1, w)|``; both agree with the standard
    ones to first order at the origin.  The lift solves
    ``z' = z0 (Z' - <z, Z'> z)`` with ``Z = (1, w(s n))``.
    """
    n = complex(n[0], n[1]) if not np.isscalar(n) else complex(n)
    s_values = np.asarray(s_values, dtype=float)

    def rhs(s, y):
        z = y[:2] + 1j * y[2:]
        zeta = s * n
        dZ = np.array([0.0, n + 2 * c2 * zeta * n])
        dz = z[0] * (dZ - np.vdot(z, dZ) * z)
        return np.concatenate([dz.real, dz.imag])

    z0 = _section(0.0, c2, c3)
    sol = solve_ivp(
        rhs,
        (0.0, float(s_values.max())),
        np.concatenate([z0.real, z0.imag]),
        method="DOP853",
        rtol=1e-13,
        atol=1e-16,
        t_eval=s_values,
    )
    out = []
    for s, y in zip(sol.t, sol.y.T):
        z = y[:2] + 1j * y[2:]
        out.append(np.angle(np.vdot(_section(s * n, c2, c3), z)))
    return np.array(out)


def profile_scan(model: SpectralModel, datum: pe.FixedPointDatum, lam: float, n_grid, window: Window, symbol: ToeplitzSymbol | None = None):
    """Brute-force and predicted values on a symmetric displacement grid.

    Returns a dict with arrays ``n, brute, predicted, even, odd``.
    """
    n_grid = np.atleast_2d(np.asarray(n_grid, dtype=float))
    brute = np.array([brute_force_S(model, heisenberg_displace(n, lam), lam, window, symbol) for n in n_grid])
    chi0 = complex(window.chi(datum.tau0))
    pred = np.array([complex(pe.predicted_kernel(datum, lam, n, chi0)) for n in n_grid])
    even, odd = pe.parity_split(n_grid, brute)
    return {"n": n_grid, "brute": brute, "predicted": pred, "even": even, "odd": odd}


def gaussian_width_fit(n_grid, values, value0) -> float:
    """Least-squares slope through the origin of ``log|S(n)/S(0)|`` against ``|n|^2``."""
    r2 = np.sum(np.asarray(n_grid, float) ** 2, axis=1)
    y = np.log(np.abs(np.asarray(values) / value0))
    sel = r2 > 0
    return float(np.dot(r2[sel], y[sel]) / np.dot(r2[sel], r2[sel]))


def odd_even_ratio(even, odd) -> float:
    return float(np.linalg.norm(odd) / np.linalg.norm(even))


def off_locus_scan(model: SpectralModel, chart_points, lams, window: Window):
    """``|S|`` at chart points (``(w, pole)`` pairs) for each ``lam``; rows follow ``chart_points``."""
    table = np.empty((len(chart_points), len(lams)))
    for i, (w, pole) in enumerate(chart_points):
        if w == 0:
            raise PreconditionError("off-locus points must avoid the poles")
        pt = ModelPoint.from_chart(w, pole)
        for m, lam in enumerate(lams):
            table[i, m] = abs(brute_force_S(model, pt, lam, window))
    return table
