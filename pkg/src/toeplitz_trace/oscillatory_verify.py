"""Direct quadrature of the rescaled oscillatory integral at an isolated periodic point.

The inner integral over ``(theta, t, u, tau)`` has phase ``sqrt(lam) * upsilon``
and amplitude ``t^d u^d exp(Theta)``.  At an isolated fixed point the flow
vector vanishes, and the substitution ``sigma = theta + f0 tau`` turns the
phase into ``theta (1/f0 - t) + sigma (u - 1/f0)`` while the Gaussian part of
``Theta`` becomes ``-(t/2) theta^2 - (u/2) sigma^2``.  The ``(theta, sigma)``
integral therefore splits into two one-dimensional oscillatory Gaussian
integrals, one attached to ``t`` and one to ``u``; each is computed by
Gauss-Legendre on a truncated interval with at least ``nodes_per_oscillation``
nodes per period.  The remaining ``(t, u)`` integral uses composite
Gauss-Legendre panels clustered at ``1/f0``, and the outer ``v`` integral
uses Gauss-Hermite nodes mapped to the Gaussian envelope at ``t = u = 1/f0``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import profile_engine as pe
from . import symplectic_core as sc
from .errors import ConvergenceError, PreconditionError

PANEL_ORDER = 32  # Gauss-Legendre order on each composite panel


@lru_cache(maxsize=64)
def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=64)
def _hermite(n: int):
    # probabilists' weight exp(-x^2 / 2)
    return np.polynomial.hermite_e.hermegauss(n)


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretisation of the inner and outer integrals.

    Attributes
    ----------
    lam : float
        Asymptotic parameter.
    nodes_per_axis : int
        Gauss-Legendre nodes per ``(t, u)`` panel and minimum per ``theta`` axis.
    box_radius_thetatau : float or None
        Truncation radius for ``theta`` and ``sigma``; ``None`` means
        ``min(8 / sqrt(a), 8 sqrt(D))`` with ``a`` from :func:`profile_engine.damping_bound`.
    D : float or None
        ``(t, u)`` range is ``(1/D, D)``; ``None`` means ``6 max(f0, 1/f0)``.
    hermite_order : int
        Gauss-Hermite order per real ``v`` axis.
    nodes_per_oscillation : float
    """

    lam: float
    nodes_per_axis: int = 16
    box_radius_thetatau: float | None = None
    D: float | None = None
    hermite_order: int = 16
    nodes_per_oscillation: float = 10.0

    def __post_init__(self):
        if self.nodes_per_axis < 16:
            raise PreconditionError("nodes_per_axis must be >= 16")
        if self.D is not None and not self.D > 1:
            raise PreconditionError("D must exceed 1")
        if not self.lam > 0:
            raise PreconditionError("lambda must be positive")
        if self.hermite_order < 2:
            raise PreconditionError("hermite_order must be >= 2")

    def doubled(self) -> "QuadratureSpec":
        return replace(
            self,
            nodes_per_axis=2 * self.nodes_per_axis,
            hermite_order=2 * self.hermite_order,
            nodes_per_oscillation=2 * self.nodes_per_oscillation,
        )


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    est_error: float
    wall_time: float


def default_D(f0: float) -> float:
    return 6.0 * max(f0, 1.0 / f0)


def box_radius(datum: pe.FixedPointDatum, spec: QuadratureSpec) -> float:
    """Truncation radius for ``theta`` and ``sigma``.

    ``8 / sqrt(a)`` from the damping constant, capped at ``8 sqrt(D)``: after
    factorisation each axis carries ``exp(-c x^2 / 2)`` with ``c >= 1/D``,
    so the cap already leaves a tail below ``e^{-32}``.
    """
    if spec.box_radius_thetatau is not None:
        return spec.box_radius_thetatau
    D = spec.D or default_D(datum.f0)
    a = pe.damping_bound(datum, D=D)
    return min(8.0 / math.sqrt(a), 8.0 * math.sqrt(D))


def tu_nodes(f0: float, lam: float, D: float, per_panel: int):
    """Composite Gauss-Legendre nodes on ``[1/D, D]`` clustered at ``1/f0``.

    Panel edges sit at ``1/f0 +- w 2^k`` with ``w = sqrt(1/(f0 lam)) / 2``,
    the natural width of the peak.
    """
    c = 1.0 / f0
    lo, hi = 1.0 / D, D
    if not lo < c < hi:
        raise PreconditionError("1/f0 must lie inside (1/D, D)")
    w = 0.5 * math.sqrt(c / lam)
    steps = w * 2.0 ** np.arange(0, 40)
    left = c - steps[c - steps > lo]
    right = c + steps[c + steps < hi]
    edges = np.concatenate([[lo], left[::-1], [c], right, [hi]])
    x, wt = _legendre(per_panel)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (b - a) * x + 0.5 * (a + b)).ravel()
    weights = (0.5 * (b - a) * wt).ravel()
    return nodes, weights


def oscillatory_gaussian(c, freq, radius, spec: QuadratureSpec, phase: bool = True):
    """Gauss-Legendre value of ``int_{-R}^{R} exp(-c x^2 / 2 + i freq x) dx`` per entry.

    ``c`` and ``freq`` are 1-d arrays of equal length.  The node count for
    each entry covers ``nodes_per_oscillation`` nodes per period of the phase
    and enough nodes to resolve the Gaussian envelope.
    """
    c = np.asarray(c, dtype=float)
    freq = np.asarray(freq, dtype=float)
    out = np.empty(c.shape, dtype=complex)
    R = radius
    x0, w0 = _legendre(PANEL_ORDER)
    for i in range(c.size):
        periods = abs(freq[i]) * 2 * R / (2 * math.pi) if phase else 0.0
        widths = 2 * R * math.sqrt(c[i])
        m = max(spec.nodes_per_axis, math.ceil(spec.nodes_per_oscillation * periods + 4 * widths))
        panels = -(-m // PANEL_ORDER)
        h = 2 * R / panels
        mids = -R + h * (np.arange(panels) + 0.5)
        x = (mids[:, None] + 0.5 * h * x0).ravel()
        w = np.tile(0.5 * h * w0, panels)
        expo = -0.5 * c[i] * x * x
        if phase:
            expo = expo + 1j * freq[i] * x
        out.flat[i] = np.dot(w, np.exp(expo))
    return out


def _prefactor(datum: pe.FixedPointDatum, lam: float) -> complex:
    d = datum.dim_d
    return datum.rho0 / (2 * math.pi**d) * (lam / math.pi) ** (1 + d) * np.exp(-1j * lam * datum.tau0)


def _tu_tables(datum, spec, phase=True):
    """Nodes, weights and the one-dimensional factors for the ``t`` and ``u`` axes."""
    f0, lam = datum.f0, spec.lam
    D = spec.D or default_D(f0)
    R = box_radius(datum, spec)
    nodes, weights = tu_nodes(f0, lam, D, spec.nodes_per_axis)
    rl = math.sqrt(lam)
    # theta pairs with t, sigma = theta + f0 tau pairs with u; d tau = d sigma / f0
    gt = oscillatory_gaussian(nodes, rl * (1.0 / f0 - nodes), R, spec, phase)
    gu = oscillatory_gaussian(nodes, rl * (nodes - 1.0 / f0), R, spec, phase) / f0
    d = datum.dim_d
    return nodes, weights * nodes**d * gt, weights * nodes**d * gu


def _exponent_coeffs(datum, n, v):
    """Coefficients of ``t`` and ``u`` in ``Theta`` after the Gaussian factors are removed."""
    A = datum.A
    return sc.psi2(n, v), sc.psi2(np.asarray(v) @ A.T, n)


def _inner_sum(datum, n, v, spec, phase=True):
    nodes, wt, wu = _tu_tables(datum, spec, phase)
    a, b = _exponent_coeffs(datum, n, v)
    a = np.atleast_1d(a)
    b = np.atleast_1d(b)
    T = np.exp(np.outer(a, nodes)) @ wt
    U = np.exp(np.outer(b, nodes)) @ wu
    return _prefactor(datum, spec.lam) * T * U


def _doubling(fn, datum, spec):
    t0 = time.perf_counter()
    coarse = fn(spec)
    fine = fn(spec.doubled())
    err = float(abs(fine - coarse))
    if err > 0.1 * abs(fine):
        raise ConvergenceError(f"node doubling moved the value by {err / abs(fine):.2%}")
    return IntegralResult(complex(fine), err, time.perf_counter() - t0)


def inner_integral(datum: pe.FixedPointDatum, n, v, spec: QuadratureSpec, phase: bool = True) -> IntegralResult:
    """Inner ``(theta, t, u, tau)`` integral at fixed ``(n, v)``, leading amplitude only.

    With ``phase=False`` the oscillating factor is dropped, leaving a positive
    Gaussian-type integral used as a sanity reference.
    """
    n = np.asarray(n, dtype=float)
    v = np.asarray(v, dtype=float)
    return _doubling(lambda s: _inner_sum(datum, n, v[None, :], s, phase)[0], datum, spec)


def inner_integral_reference(datum: pe.FixedPointDatum, n, v, spec: QuadratureSpec, phase: bool = True) -> complex:
    """Same integral with the one-dimensional Gaussian factors in closed form.

    The ``theta`` and ``sigma`` integrals over the truncation interval
    ``[-R, R]`` are replaced by the whole-line values
    ``sqrt(2 pi / c) exp(-freq^2 / (2 c))``; with ``phase=False`` the exact
    truncated value ``sqrt(2 pi / c) erf(R sqrt(c / 2))`` is used.
    """
    from scipy.special import erf

    f0, lam = datum.f0, spec.lam
    D = spec.D or default_D(f0)
    nodes, weights = tu_nodes(f0, lam, D, 4 * spec.nodes_per_axis)
    d = datum.dim_d
    if phase:
        gt = np.sqrt(2 * np.pi / nodes) * np.exp(-lam * (1 / f0 - nodes) ** 2 / (2 * nodes))
        gu = np.sqrt(2 * np.pi / nodes) * np.exp(-lam * (nodes - 1 / f0) ** 2 / (2 * nodes)) / f0
    else:
        R = box_radius(datum, spec)
        g = np.sqrt(2 * np.pi / nodes) * erf(R * np.sqrt(nodes / 2))
        gt, gu = g, g / f0
    a, b = _exponent_coeffs(datum, np.asarray(n, float), np.asarray(v, float))
    T = np.dot(weights * nodes**d * gt, np.exp(a * nodes))
    U = np.dot(weights * nodes**d * gu, np.exp(b * nodes))
    return complex(_prefactor(datum, lam) * T * U)


def hermite_v_nodes(datum: pe.FixedPointDatum, n, order: int):
    """Gauss-Hermite nodes and weights in ``v`` for the envelope at ``t = u = 1/f0``.

    There the real part of the exponent is ``-(1/(2 f0)) (v - c)^T Q (v - c)``
    up to a constant, with ``Q = I + A^T A``; the nodes are mapped through a
    Cholesky factor of ``Q / f0``.  Weights include the Jacobian and the
    reciprocal of the Hermite weight, so ``sum w g(v)`` approximates
    ``int g(v) dv``.
    """
    A, f0 = datum.A, datum.f0
    m = A.shape[0]
    Q = sc.q_of(A)
    n = np.asarray(n, dtype=float)
    centre = np.linalg.solve(Q, n + A.T @ n)
    L = np.linalg.cholesky(Q / f0)
    x, w = _hermite(order)
    grids = np.meshgrid(*([x] * m), indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=-1)
    W = np.ones(X.shape[0])
    for g in np.meshgrid(*([w] * m), indexing="ij"):
        W = W * g.ravel()
    V = centre + np.linalg.solve(L.T, X.T).T
    jac = 1.0 / np.prod(np.diag(L))
    W = W * jac * np.exp(0.5 * np.sum(X * X, axis=1))
    return V, W


def full_profile_integral(datum: pe.FixedPointDatum, n, spec: QuadratureSpec, phase: bool = True) -> IntegralResult:
    """``int I_lam(n, v) dv`` with the inner integral from :func:`inner_integral`.

    No extra normalisation is applied: the prefactor of the inner integral
    already reproduces the leading coefficient of the kernel.
    """
    n = np.asarray(n, dtype=float)

    def fn(s):
        V, W = hermite_v_nodes(datum, n, s.hermite_order)
        return np.dot(W, _inner_sum(datum, n, V, s, phase))

    return _doubling(fn, datum, spec)


def stationary_reduce(datum: pe.FixedPointDatum, n, v, lam: float):
    """Stationary-phase value of the inner integral at ``(n, v)``.

    ``2 pi rho0 / pi^d (lam/pi)^d e^{-i lam tau0} / f0^{2d+1}
    * exp((psi2(n, v) + psi2(A v, n)) / f0)``; broadcasts over ``v``.
    """
    d = datum.dim_d
    a, b = _exponent_coeffs(datum, np.asarray(n, float), np.asarray(v, float))
    coef = 2 * math.pi * datum.rho0 / math.pi**d * (lam / math.pi) ** d * np.exp(-1j * lam * datum.tau0)
    return coef / datum.f0 ** (2 * d + 1) * np.exp((a + b) / datum.f0)


def integrated_stationary_reduce(datum: pe.FixedPointDatum, n, lam: float, order: int = 24) -> complex:
    """Gauss-Hermite integral over ``v`` of :func:`stationary_reduce`."""
    V, W = hermite_v_nodes(datum, n, order)
    return complex(np.dot(W, stationary_reduce(datum, n, V, lam)))


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def convergence_table(datum: pe.FixedPointDatum, lams, n=None, spec_kwargs=None):
    """Ratio of the quadrature value to the leading prediction for each ``lam``.

    Returns a list of dicts with keys ``lam, value, predicted, ratio, error, est_error``.
    """
    spec_kwargs = spec_kwargs or {}
    if n is None:
        n = np.zeros(datum.A.shape[0])
    rows = []
    for lam in lams:
        spec = QuadratureSpec(lam=lam, **spec_kwargs)
        res = full_profile_integral(datum, n, spec)
        pred = complex(pe.predicted_kernel(datum, lam, n, 1.0))
        ratio = res.value / pred
        rows.append(
            {
                "lam": lam,
                "value": res.value,
                "predicted": pred,
                "ratio": ratio,
                "error": abs(ratio - 1),
                "est_error": res.est_error / abs(pred),
                "wall_time": res.wall_time,
            }
        )
    return rows
