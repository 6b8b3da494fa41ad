"""Verification experiments shared by the command line and the acceptance tests.

Each suite returns ``(rows, extra)``: a list of :class:`reports.ReportRow`
and a dict of values that do not fit the row format.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg

from . import cp1_model as cp
from . import oscillatory_verify as ov
from . import profile_engine as pe
from . import symplectic_core as sc
from .reports import ReportRow

IDENTITY_DEFAULTS = {
    "d_values": [1, 2, 3],
    "samples": 1000,
    "spread": 1.0,
    "unitary_samples": 500,
    "v_per_sample": 100,
    "negdef_samples": 300,
    "tol_profile_identity": 1e-9,
    "tol_unitary": 1e-10,
    "tol_f_identity": 1e-10,
}

STATIONARY_DEFAULTS = {
    "f0_values": [0.5, 1.0, 2.0, 5.0],
    "tol_gradient": 1e-8,
    "tol_hessian": 1e-6,
    "tol_det": 1e-8,
    "tol_inverse": 1e-12,
    "grid_points": 10000,
    "D": 2.0,
}

GAUSSIAN_DEFAULTS = {
    "gaussian_d_values": [1, 2],
    "gaussian_count": 50,
    "gaussian_order": 24,
    "tol_gaussian": 1e-8,
}

EXPONENT_DEFAULTS = {"exponent_count": 10000, "exponent_spread": 1.0, "tol_exponent": 1e-9}

OSCILLATORY_DEFAULTS = {
    "lambda_grid": [50.0, 100.0, 200.0, 400.0],
    "f0": 1.0,
    "nodes_per_axis": 16,
    "hermite_order": 16,
    "tol_ratio": 0.08,
    "slope_target": -0.5,
    "tol_slope": 0.2,
    "tol_decay": 0.2,
}

CP1_PROFILE_DEFAULTS = {
    "a": 1.0,
    "b": 0.37,
    "which_period": 1,
    "eps": 0.3,
    "lambda_profile": 400.0,
    "lambda_parity": [100.0, 400.0],
    "radii": [0.5, 1.0, 1.5],
    "angles": 8,
    "g_pole": 1.5,
    "mixing": 0.8,
    "tol_ratio": 0.05,
    "tol_width": 0.05,
    "tol_toeplitz": 0.05,
    "tol_parity": 0.2,
    "tol_pairs": 0.05,
}

CP1_NEGATIVE_DEFAULTS = {
    "a": 1.0,
    "b": 0.37,
    "which_period": 1,
    "eps": 1.0,
    "lambda": 200.0,
    "points": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.5], [0.7, -0.7]],
    "tol_ratio": 1e-8,
}

CP1_DECAY_DEFAULTS = {
    "a": 1.0,
    "b": 0.37,
    "which_period": 1,
    "eps": 0.3,
    "lambda_grid": [float(x) for x in np.geomspace(100.0, 400.0, 9)],
    "r": 0.5,
    "slope_max": -3.0,
    "tol_relative": 1e-3,
}

CP1_CALIBRATE_DEFAULTS = {
    "a": 1.0,
    "b": 0.37,
    "kmax": 50,
    "tol_dimension": 1e-8,
    "tol_kahler": 1e-8,
    "holonomy_s": [1e-3, 1e-1],
    "holonomy_points": 9,
    "chart_c2": [0.25, 0.2],
    "chart_c3": [0.0, 0.3],
    "holonomy_direction": [1.0, 0.5],
    "tol_holonomy_slope": 0.1,
    "tol_ode": 1e-8,
}


def _scaled(cfg, key, tol_scale):
    return cfg[key] * tol_scale


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


# --- linear identities ------------------------------------------------------


def profile_identity_deviation(d: int, samples: int, spread: float, seed: int) -> float:
    """Max over samples of ``max|P_A - R_A| / (1 + |A|^2)``."""
    worst = 0.0
    for s in range(samples):
        A = sc.random_symplectic(d, spread, seed * 100003 + 1000 * d + s)
        dev = np.max(np.abs(sc.profile_matrix(A) - sc.profile_matrix_alt(A)))
        worst = max(worst, dev / (1 + np.linalg.norm(A, 2) ** 2))
    return float(worst)


def unitary_deviation(samples: int, v_per_sample: int, seed: int, d_values=(1, 2, 3)) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for s in range(samples):
        d = d_values[s % len(d_values)]
        A = sc.random_unitary_symplectic(d, seed * 7919 + s)
        v = rng.normal(size=(v_per_sample, 2 * d))
        worst = max(worst, float(np.max(np.abs(sc.psi2_A(A, v) - sc.psi2(v @ A.T, v)))))
    return worst


def f_identity_deviation(samples: int, spread: float, seed: int, d_values=(1, 2, 3)) -> float:
    worst = 0.0
    for s in range(samples):
        d = d_values[s % len(d_values)]
        A = sc.random_symplectic(d, spread, seed * 31 + s)
        other = -A.T @ sc.J0(d) @ (A - np.eye(2 * d))
        worst = max(worst, float(np.max(np.abs(sc.f_of(A) - other)) / (1 + np.linalg.norm(A, 2) ** 2)))
    return worst


def partially_fixed_symplectic(d: int, fixed: int, spread: float, seed: int) -> np.ndarray:
    """``exp(J0 S)`` with ``S`` vanishing on the first ``fixed`` complex coordinates."""
    rng = np.random.default_rng(seed)
    M = rng.uniform(-spread, spread, size=(2 * d, 2 * d))
    S = 0.5 * (M + M.T)
    idx = list(range(fixed)) + [d + i for i in range(fixed)]
    S[idx, :] = 0.0
    S[:, idx] = 0.0
    return scipy.linalg.expm(sc.J0(d) @ S)


def negdef_samples(count: int, spread: float, seed: int):
    """Very clean matrices with nontrivial image: generic, partially fixed and unitary."""
    out = []
    for s in range(count):
        kind = s % 3
        d = 1 + (s // 3) % 3
        if kind == 0:
            A = sc.random_symplectic(d, spread, seed * 17 + s)
        elif kind == 1:
            d = max(d, 2)
            A = partially_fixed_symplectic(d, 1 + s % (d - 1), spread, seed * 19 + s)
        else:
            A = sc.random_unitary_symplectic(d, seed * 23 + s)
        rep = sc.cleanliness(A)
        if rep.very_clean and rep.im_dim > 0:
            out.append(A)
    return out


def identities_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0):
    """Profile-matrix identities and negativity on the image of ``A - I``."""
    rows = []
    for d in cfg["d_values"]:
        dev, wt = _timed(profile_identity_deviation, d, cfg["samples"], cfg["spread"], seed)
        rows.append(
            ReportRow(f"profile_identity_d{d}", {"d": d, "samples": cfg["samples"], "spread": cfg["spread"], "seed": seed}, dev, 0.0, dev, _scaled(cfg, "tol_profile_identity", tol_scale), wt)
        )
    dev, wt = _timed(unitary_deviation, cfg["unitary_samples"], cfg["v_per_sample"], seed)
    rows.append(
        ReportRow("unitary_reduction", {"samples": cfg["unitary_samples"], "v_per_sample": cfg["v_per_sample"], "seed": seed}, dev, 0.0, dev, _scaled(cfg, "tol_unitary", tol_scale), wt)
    )
    dev, wt = _timed(f_identity_deviation, cfg["samples"], cfg["spread"], seed)
    rows.append(ReportRow("f_identity", {"samples": cfg["samples"], "seed": seed}, dev, 0.0, dev, _scaled(cfg, "tol_f_identity", tol_scale), wt))
    t0 = time.perf_counter()
    mats = negdef_samples(cfg["negdef_samples"], cfg["spread"], seed)
    top = max(sc.negdef_on_image(A) for A in mats)
    rows.append(
        ReportRow("negdef_on_image", {"samples": len(mats), "seed": seed}, top, 0.0, top, 0.0, time.perf_counter() - t0, strict=True)
    )
    return rows, {"negdef_count": len(mats)}


# --- stationary phase data --------------------------------------------------


def stationary_checks(f0: float) -> dict:
    x0 = pe.stationary_point(f0).as_array()
    fun = lambda x: float(pe.upsilon(x, f0))
    grad = pe.fd_gradient(fun, x0, 1e-5)
    H = pe.upsilon_hessian(f0)
    H_fd = pe.fd_hessian(fun, x0, 1e-4)
    inv = pe.displayed_hessian_inverse(f0)
    return {
        "gradient": float(np.max(np.abs(grad))),
        "hessian": float(np.max(np.abs(H_fd - H))),
        "det": float(abs(np.linalg.det(H) - f0**2)),
        "inverse": float(max(np.max(np.abs(H @ inv - np.eye(4))), np.max(np.abs(inv @ H - np.eye(4))))),
    }


def spurious_stationary_count(f0: float, D: float, points: int, seed: int = 0) -> int:
    """Random points of the box with ``|grad| < 1e-6`` farther than 0.05 from the stationary point."""
    rng = np.random.default_rng(seed)
    x = np.column_stack(
        [
            rng.uniform(-1, 1, points),
            rng.uniform(1 / D, D, points),
            rng.uniform(1 / D, D, points),
            rng.uniform(-1, 1, points),
        ]
    )
    g = np.linalg.norm(pe.upsilon_gradient(x, f0), axis=1)
    far = np.linalg.norm(x - pe.stationary_point(f0).as_array(), axis=1) > 0.05
    return int(np.sum(far & (g < 1e-6)))


def stationary_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0):
    """Stationary data of the reduced phase against finite differences."""
    rows = []
    for f0 in cfg["f0_values"]:
        if not f0 > 0:
            raise ValueError(f"f0 must be positive, got {f0}")
        checks, wt = _timed(stationary_checks, f0)
        for key, tol in (("gradient", "tol_gradient"), ("hessian", "tol_hessian"), ("det", "tol_det"), ("inverse", "tol_inverse")):
            rows.append(ReportRow(f"{key}_f0_{f0:g}", {"f0": f0}, checks[key], 0.0, checks[key], _scaled(cfg, tol, tol_scale), wt))
        lam = 100.0
        val = pe.sqrt_hessian_factor(f0, lam)
        ref = lam * f0 / (2 * math.pi) ** 2
        rows.append(ReportRow(f"sqrt_det_f0_{f0:g}", {"f0": f0, "lam": lam}, val, ref, abs(val - ref) / ref, 1e-12 * tol_scale))
        D = max(cfg["D"], 2 * max(f0, 1 / f0))
        n_bad = spurious_stationary_count(f0, D, cfg["grid_points"], seed)
        rows.append(ReportRow(f"unique_stationary_f0_{f0:g}", {"f0": f0, "D": D, "points": cfg["grid_points"], "seed": seed}, n_bad, 0.0, n_bad, 0.0))
    return rows, {}


# --- Gaussian closed form and exponent collapse -----------------------------


def gaussian_quadrature_tensor(Q, xi, order: int) -> complex:
    """Tensor Gauss-Hermite value of ``int exp(i s.xi - s^T Q s / 2) ds``.

    Nodes are mapped through the eigenbasis of ``Q`` and the full integrand
    is evaluated at every node of the tensor grid.
    """
    m = Q.shape[0]
    lam, U = np.linalg.eigh(Q)
    T = U / np.sqrt(lam)  # s = T x
    x, w = np.polynomial.hermite_e.hermegauss(order)
    X = np.stack([g.ravel() for g in np.meshgrid(*([x] * m), indexing="ij")], axis=-1)
    W = np.prod(np.stack([g.ravel() for g in np.meshgrid(*([w] * m), indexing="ij")], axis=-1), axis=1)
    S = X @ T.T
    f = np.exp(1j * (S @ xi) - 0.5 * np.sum((S @ Q) * S, axis=1) + 0.5 * np.sum(X * X, axis=1))
    return complex(np.dot(W, f) * abs(np.linalg.det(T)))


def random_spd(m: int, rng) -> np.ndarray:
    M = rng.normal(size=(m, m))
    Q = M @ M.T / m + 0.5 * np.eye(m)
    return 0.5 * (Q + Q.T)


def gaussian_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0):
    """Closed-form Gaussian integral against tensor Gauss-Hermite quadrature."""
    rng = np.random.default_rng(seed)
    rows = []
    for d in cfg["gaussian_d_values"]:
        t0 = time.perf_counter()
        worst = 0.0
        for _ in range(cfg["gaussian_count"]):
            Q = random_spd(2 * d, rng)
            xi = rng.normal(size=2 * d)
            closed = pe.gaussian_integral_closed(Q, xi)
            quad = gaussian_quadrature_tensor(Q, xi, cfg["gaussian_order"])
            worst = max(worst, abs(quad - closed) / abs(closed))
        rows.append(
            ReportRow(f"gaussian_d{d}", {"d": d, "count": cfg["gaussian_count"], "order": cfg["gaussian_order"], "seed": seed}, worst, 0.0, worst, _scaled(cfg, "tol_gaussian", tol_scale), time.perf_counter() - t0)
        )
    return rows, {}


def exponent_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0):
    """Completed-square exponent against the profile quadratic form."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    worst = 0.0
    for s in range(cfg["exponent_count"]):
        d = 1 + s % 3
        A = sc.random_symplectic(d, cfg["exponent_spread"], seed * 1009 + s)
        n = rng.normal(size=2 * d) * rng.uniform(0.1, 3.0)
        f0 = rng.uniform(0.2, 5.0)
        worst = max(worst, pe.exponent_identity_check(A, n, f0) / (1 + n @ n))
    return [ReportRow("exponent_collapse", {"count": cfg["exponent_count"], "seed": seed}, worst, 0.0, worst, _scaled(cfg, "tol_exponent", tol_scale), time.perf_counter() - t0)], {}


# --- oscillatory integral ---------------------------------------------------


def oscillatory_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0, threads: int = 1):
    """Quadrature of the oscillatory integral at ``A = -I`` against the leading term."""
    f0 = cfg["f0"]
    datum = pe.FixedPointDatum(A=-np.eye(2), f0=f0)
    lams = [float(x) for x in cfg["lambda_grid"]]
    kw = {"nodes_per_axis": cfg["nodes_per_axis"], "hermite_order": cfg["hermite_order"]}

    def one(lam):
        return ov.convergence_table(datum, [lam], spec_kwargs=kw)[0]

    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        table = list(ex.map(one, lams))
    rows = []
    for r in table:
        lam = r["lam"]
        inputs = {"A": "-I", "d": 1, "f0": f0, "lam": lam, "n": [0.0, 0.0]}
        rows.append(ReportRow(f"ratio_lam_{lam:g}", inputs, r["ratio"], 1.0, r["error"], _scaled(cfg, "tol_ratio", tol_scale), r["wall_time"]))
        rows.append(ReportRow(f"doubling_lam_{lam:g}", inputs, r["est_error"], 0.0, r["est_error"], 0.1))
    extra = {"ratios": {f"{r['lam']:g}": [r["ratio"].real, r["ratio"].imag] for r in table}}
    if len(lams) >= 2:
        slope = ov.loglog_slope(lams, [r["error"] for r in table])
        target = cfg["slope_target"]
        rows.append(ReportRow("error_slope", {"lams": lams}, slope, target, abs(slope - target), _scaled(cfg, "tol_slope", tol_scale)))
        extra["slope"] = slope
    else:
        extra["slope"] = "n/a"
    # profile factor: Re psi2_A(n) = -4 at |n| = sqrt(2) for A = -I
    lam = lams[-1]
    n = np.array([math.sqrt(2.0), 0.0])
    spec = ov.QuadratureSpec(lam=lam, **kw)
    v0 = ov.full_profile_integral(datum, np.zeros(2), spec).value
    vn = ov.full_profile_integral(datum, n, spec).value
    bound = math.exp(-4.0) * abs(v0) * (1 + cfg["tol_decay"])
    rows.append(ReportRow("profile_decay", {"lam": lam, "n": n.tolist()}, abs(vn), bound, abs(vn) - bound, 0.0))
    return rows, extra


# --- projective-line model --------------------------------------------------


def _model_setup(cfg, lam_max):
    ham = cp.RotationHamiltonian(cfg["a"], cfg["b"])
    datum0 = cp.fixed_point_datum_at_pole(ham, cfg["which_period"])
    window = cp.Window(datum0.tau0, cfg["eps"])
    model = cp.model_for(ham, lam_max, window)
    return ham, datum0, window, model


def symmetric_grid(radii, angles: int):
    pts = [[0.0, 0.0]]
    for r in radii:
        for m in range(angles):
            ang = 2 * math.pi * m / angles
            pts.append([r * math.cos(ang), r * math.sin(ang)])
    g = np.array(pts)
    g[np.abs(g) < 1e-14] = 0.0
    return g


def cp1_profile_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0, threads: int = 1):
    """Brute-force sum against the leading prediction on a displacement grid at the pole."""
    lam = float(cfg["lambda_profile"])
    lam_par = [float(x) for x in cfg["lambda_parity"]]
    ham, datum, window, model = _model_setup(cfg, max([lam] + lam_par))
    grid = symmetric_grid(cfg["radii"], cfg["angles"])
    rows = []
    t0 = time.perf_counter()
    scan = cp.profile_scan(model, datum, lam, grid, window)
    wt = time.perf_counter() - t0
    S0, P0 = scan["brute"][0], scan["predicted"][0]
    base = {"a": cfg["a"], "b": cfg["b"], "eps": cfg["eps"], "lam": lam}
    ratio0 = S0 / P0
    rows.append(ReportRow("ratio_n0", base, ratio0, 1.0, abs(ratio0 - 1), _scaled(cfg, "tol_ratio", tol_scale), wt))
    fit = cp.gaussian_width_fit(grid, scan["brute"], S0)
    expected = float(sc.psi2_A(datum.A, [1.0, 0.0]).real / datum.f0)
    rows.append(ReportRow("width_fit", dict(base, radii=cfg["radii"], angles=cfg["angles"]), fit, expected, abs(fit / expected - 1), _scaled(cfg, "tol_width", tol_scale)))
    for i, (n, b, p) in enumerate(zip(grid, scan["brute"], scan["predicted"])):
        rows.append(ReportRow(f"pair_{i:03d}", dict(base, n=n.tolist()), b, p, abs(b / p - 1), _scaled(cfg, "tol_pairs", tol_scale)))
    g = cp.ToeplitzSymbol(lambda t: cfg["g_pole"] + 0.8 * t * (1 - t) + 0.3 * t * t)
    Sg = cp.brute_force_S(model, cp.heisenberg_displace([0, 0], lam), lam, window, g)
    scale = Sg / S0
    rows.append(ReportRow("toeplitz_scaling", dict(base, g_pole=cfg["g_pole"]), scale, cfg["g_pole"], abs(scale / cfg["g_pole"] - 1), _scaled(cfg, "tol_toeplitz", tol_scale)))
    # parity needs a symbol that is not invariant under the flow's torus
    mix = cp.ToeplitzSymbol(1.0, mixing=cfg["mixing"])
    ratios = []
    for lp in lam_par:
        sp = cp.profile_scan(model, datum, lp, grid, window, mix)
        ratios.append(cp.odd_even_ratio(sp["even"], sp["odd"]))
        rows.append(ReportRow(f"parity_lam_{lp:g}", dict(base, lam=lp, mixing=cfg["mixing"]), ratios[-1], 0.0, ratios[-1], _scaled(cfg, "tol_parity", tol_scale)))
    if len(ratios) >= 2:
        rows.append(ReportRow("parity_decreasing", {"lams": lam_par}, ratios[-1], ratios[0], ratios[-1] - ratios[0], 0.0, strict=True))
    inv = cp.profile_scan(model, datum, lam_par[-1], grid, window)
    inv_ratio = cp.odd_even_ratio(inv["even"], inv["odd"])
    extra = {
        "beta": float(math.atan2(datum.A[1, 0], datum.A[0, 0])),
        "tau0": datum.tau0,
        "kmax": model.kmax,
        "odd_even_invariant_symbol": inv_ratio,
        "parity_ratios": dict(zip([f"{x:g}" for x in lam_par], ratios)),
    }
    return rows, extra


def cp1_negative_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0, threads: int = 1):
    """Relative size of the sum at negative frequency."""
    lam = float(cfg["lambda"])
    ham, datum, window, model = _model_setup(cfg, lam)
    rows = []
    for i, n in enumerate(cfg["points"]):
        t0 = time.perf_counter()
        pt = cp.heisenberg_displace(n, lam)
        neg = cp.brute_force_S(model, pt, -lam, window)
        pos = cp.brute_force_S(model, pt, lam, window)
        r = abs(neg) / abs(pos)
        rows.append(ReportRow(f"negative_{i}", {"n": list(n), "lam": lam, "eps": cfg["eps"]}, r, 0.0, r, _scaled(cfg, "tol_ratio", tol_scale), time.perf_counter() - t0))
    return rows, {"tail_bound": cp.tail_bound(model, -lam, window)}


def cp1_decay_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0, threads: int = 1):
    """Decay of the sum in lambda at points off the periodic locus."""
    lams = [float(x) for x in cfg["lambda_grid"]]
    hi = lams[-1]
    ham, datum, window, model = _model_setup(cfg, hi)
    r = cfg["r"]
    points = [(complex(r), 0), (complex(0, r), 0), (complex(r), 1)]

    def one(pt):
        return cp.off_locus_scan(model, [pt], lams, window)[0]

    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        table = list(ex.map(one, points))
    wt = time.perf_counter() - t0
    rows = []
    slopes = {}
    for (w, pole), vals in zip(points, table):
        tag = f"pole{pole}_w{w.real:g}{w.imag:+g}i"
        if len(lams) < 2:
            slopes[tag] = "n/a"
            continue
        slope = ov.loglog_slope(lams, vals)
        slopes[tag] = slope
        rows.append(ReportRow(f"slope_{tag}", {"w": [w.real, w.imag], "pole": pole, "lams": lams, "eps": cfg["eps"]}, slope, cfg["slope_max"], slope - cfg["slope_max"], 0.0, wt))
    S_pole = cp.brute_force_S(model, cp.ModelPoint(1.0, 0.0), hi, window)
    rel = table[0][-1] / abs(S_pole)
    rows.append(ReportRow("relative_to_pole", {"r": r, "lam": hi}, rel, 0.0, rel, _scaled(cfg, "tol_relative", tol_scale)))
    return rows, {"slopes": slopes, "table": {f"{lam:.6g}": [float(t[m]) for t in table] for m, lam in enumerate(lams)}}


def cp1_calibrate_suite(cfg: dict, seed: int = 0, tol_scale: float = 1.0, threads: int = 1):
    """Flow lift, level dimensions, chart normalisation and chart-change holonomy."""
    ham = cp.RotationHamiltonian(cfg["a"], cfg["b"])
    rows = []
    (a0, a1, dev), wt = _timed(cp.contact_lift_phases, ham)
    rows.append(ReportRow("contact_ode", {"a": ham.a, "b": ham.b, "seeds": 20}, dev, 0.0, dev, _scaled(cfg, "tol_ode", tol_scale), wt))
    model = cp.build_spectral_model(ham, cfg["kmax"], check=False)
    t0 = time.perf_counter()
    worst = max(abs(cp.level_diagonal_integral(model, k) - (k + 1)) for k in range(cfg["kmax"] + 1))
    rows.append(ReportRow("dimension", {"kmax": cfg["kmax"]}, worst, 0.0, worst, _scaled(cfg, "tol_dimension", tol_scale), time.perf_counter() - t0))
    om = cp.kahler_form_at_origin()
    rows.append(ReportRow("kahler_origin", {}, om, 1.0, abs(om - 1), _scaled(cfg, "tol_kahler", tol_scale)))
    s = np.geomspace(cfg["holonomy_s"][0], cfg["holonomy_s"][1], cfg["holonomy_points"])
    c2 = complex(*cfg["chart_c2"])
    c3 = complex(*cfg["chart_c3"])
    t0 = time.perf_counter()
    th = cp.horizontal_lift_holonomy(cfg["holonomy_direction"], s, c2, c3)
    slope = ov.loglog_slope(s, np.abs(th))
    rows.append(
        ReportRow("holonomy_slope", {"c2": cfg["chart_c2"], "c3": cfg["chart_c3"], "n": cfg["holonomy_direction"], "s": list(s)}, slope, 3.0, abs(slope - 3), _scaled(cfg, "tol_holonomy_slope", tol_scale), time.perf_counter() - t0)
    )
    flat = float(np.max(np.abs(cp.horizontal_lift_holonomy(cfg["holonomy_direction"], s))))
    return rows, {"holonomy_standard_chart": flat}
