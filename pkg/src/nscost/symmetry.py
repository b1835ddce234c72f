"""Symmetry-reduced linear programs for simulation costs at large blocklength.

Two families of channels admit an exact reduction of the cost SDP to a small
LP. Classical channels reduce because all Choi matrices involved commute, and
n-fold depolarizing channels reduce because J_{D_p}^{(x) n} is a mixture of
permutation-symmetric projectors: with q1 = d(1-p) + p/d and q2 = p/d, the
spectrum takes the value p_k = q1^k q2^(n-k) on a sector of relative weight

    w_k = C(n, k) (1/d)^k (d - 1/d)^(n-k),

so the n-use cost program collapses to n+1 variable pairs. Everything here is
assembled in the log domain: the weights and spectra span thousands of orders
of magnitude long before n reaches 300, and the optimal level s itself can lie
far below the range of double precision even though d^n s stays moderate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .conic import HermitianProgram, SolverFailure, dump_problem, solve
from .programs import CostResult, cost_result_from_trv

_NORMALIZATION_TOL = 1e-9
_MASS_FLOOR = 1e-18
_APRON = 6
_MAX_LOG2_TRV = 1020.0


@dataclass(frozen=True)
class LPReduction:
    """Sector data of the n-fold depolarizing simulation LP.

    Attributes:
        n: blocklength.
        d: local dimension.
        log_weights: natural logs of the sector weights w_k, k = 0..n.
        log_spectrum: natural logs of the sector eigenvalues p_k, k = 0..n.
            Entries are -inf where the eigenvalue vanishes (p = 0 or 1).
    """

    n: int
    d: int
    log_weights: np.ndarray
    log_spectrum: np.ndarray


def depolarizing_reduction(n: int, d: int, p: float) -> LPReduction:
    """Sector weights and spectrum of J_{D_p}^{(x) n} in the log domain.

    The sector masses w_k p_k form a binomial distribution with success
    probability q1/d, which is checked to sum to 1 within 1e-9.
    """
    n, d, p = _check_dp_args(n, d, p)
    q1 = d * (1.0 - p) + p / d
    q2 = p / d
    k = np.arange(n + 1, dtype=float)
    log_binom = np.array(
        [
            math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
            for j in range(n + 1)
        ]
    )
    log_weights = log_binom - k * math.log(d) + (n - k) * math.log(d - 1.0 / d)
    log_q1 = math.log(q1) if q1 > 0.0 else -math.inf
    log_q2 = math.log(q2) if q2 > 0.0 else -math.inf
    with np.errstate(invalid="ignore"):
        log_spectrum = k * log_q1 + (n - k) * log_q2
    # 0 * (-inf) from the arange endpoints must read as an absent factor.
    log_spectrum[np.isnan(log_spectrum)] = -math.inf
    if q2 == 0.0:
        log_spectrum[:n] = -math.inf
        log_spectrum[n] = n * log_q1
    total = logsumexp(log_weights + log_spectrum)
    if abs(total) > _NORMALIZATION_TOL:
        raise ValueError(f"sector masses sum to exp({total}), expected 1")
    return LPReduction(n=n, d=d, log_weights=log_weights, log_spectrum=log_spectrum)


def _check_dp_args(n, d, p):
    if int(n) != n or n < 1:
        raise ValueError(f"blocklength must be a positive integer, got {n}")
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    return int(n), int(d), p


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"error tolerance must lie in [0, 1], got {eps}")
    return eps


def _coarse_cut(log_mass: np.ndarray, eps: float) -> int:
    """Index of the sector where the eps-tail of the mass lands.

    Walks the sector masses downward from k = n and returns the first index
    whose cumulative mass exceeds eps. This is a deliberately coarse estimate
    (no interpolation inside the cut sector); it only anchors the rescaling
    of the LP, never the reported optimum.
    """
    cum = 0.0
    for k in range(len(log_mass) - 1, -1, -1):
        cum += math.exp(log_mass[k])
        if cum > eps:
            return k
    return 0


def depolarizing_cost_lp(
    n: int,
    d: int,
    p: float,
    eps: float,
    *,
    gap_tol: float = 1e-8,
    feas_tol: float = 1e-8,
    max_iter: int = 200,
    dump_path: str | None = None,
) -> CostResult:
    """Simulation cost of n uses of the depolarizing channel, via the sector LP.

    Solves, over sector variables r_k (retained spectrum) and y_k (clipping
    slack),

        min s  s.t.  y_k - r_k + p_k >= 0,  y_k >= 0,  0 <= r_k <= s,
                     sum_k w_k r_k = 1,  sum_k w_k y_k <= eps,

    and reports tr V = d^n s. The rescaled variables rt_k = w_k r_k and
    yt_k = w_k y_k keep the equality row at unit coefficients, and s is
    solved as a multiple of a coarse waterfilling estimate so the LP works
    near 1 even when s underflows double precision. Sectors carrying mass
    below 1e-18 are dropped, except for a six-sector apron below the
    estimated clipping cut: those sectors can carry displaced mass even when
    their own mass vanishes (at p = 0 every sector but k = n is massless, yet
    the eps-ball still buys a (1 - eps) saving through them).

    At eps = 0 no optimization is needed: the equality row pins r_k = p_k,
    so s = max_k p_k = q1^n and tr V = (d q1)^n.

    Raises:
        ValueError: on invalid arguments, or when log2 tr V would exceed the
            range representable in double precision.
        SolverFailure: when no anchor in the retry ladder reaches optimality.
    """
    n, d, p = _check_dp_args(n, d, p)
    eps = _check_eps(eps)
    red = depolarizing_reduction(n, d, p)
    q1 = d * (1.0 - p) + p / d
    log2_cap = n * (math.log2(d) + math.log2(q1))
    if log2_cap > _MAX_LOG2_TRV:
        raise ValueError(
            f"log2 tr V can reach {log2_cap:.1f} bits at these parameters, "
            "beyond double-precision range"
        )
    if eps == 0.0:
        return cost_result_from_trv(2.0**log2_cap, log2_trv=log2_cap)

    log_mass = red.log_weights + red.log_spectrum
    cut = _coarse_cut(log_mass, eps)
    keep = np.flatnonzero(
        (log_mass >= math.log(_MASS_FLOOR)) | (np.arange(n + 1) >= cut - _APRON)
    )
    masses = np.exp(log_mass[keep])
    log_w = red.log_weights[keep]
    # s = lam * sigma with lam the spectrum value at the cut sector, tracked
    # only through its log so the LP sees sigma near 1. A massless cut sector
    # (eps = 1 at p = 0) gets the tr V = 1 scale as anchor instead.
    lam_log = float(red.log_spectrum[cut])
    if not math.isfinite(lam_log):
        lam_log = -n * math.log(d)

    solver_kw = {
        "gap_tol": gap_tol,
        "feas_tol": feas_tol,
        "max_iter": max_iter,
        "dump_path": dump_path,
    }
    # Re-anchor and retry on two kinds of bad outcome: an optimal sigma far
    # from 1 (the anchor guess was off, accuracy suffers), and a stalled or
    # broken-down solve (a handful of blocklengths sit at degenerate vertices
    # where one anchor stalls while a nearby one converges in few steps). The
    # offsets are fixed, so repeated runs take identical paths.
    log_s = None
    offsets = (0.0, 1.1, -1.1, 2.2)
    stalls = 0
    for _ in range(6):
        sol = _solve_sector_lp(masses, log_w, lam_log, eps, **solver_kw)
        solver_kw["dump_path"] = None
        if sol is not None and sol.status == "optimal":
            sigma_opt = float(sol.primal_value)
            log_s = lam_log + math.log(max(sigma_opt, 1e-300))
            if 0.05 <= sigma_opt <= 20.0:
                break
            lam_log = log_s
        else:
            estimate = 1.0 if sol is None else float(sol.primal_value)
            if not math.isfinite(estimate) or estimate <= 0.0:
                estimate = 1.0
            lam_log += math.log(estimate) + offsets[min(stalls, len(offsets) - 1)]
            stalls += 1
    if log_s is None:
        raise SolverFailure(
            "sector LP did not reach optimality after anchor retries",
            status="max_iter",
        )
    log2_trv = n * math.log2(d) + log_s / math.log(2.0)
    return cost_result_from_trv(2.0**log2_trv, log2_trv=log2_trv)


def _solve_sector_lp(
    masses: np.ndarray,
    log_w: np.ndarray,
    lam_log: float,
    eps: float,
    *,
    gap_tol: float,
    feas_tol: float,
    max_iter: int,
    dump_path: str | None,
):
    """Solve the rescaled sector LP once; sigma = s / exp(lam_log).

    Returns the conic solution, or None when the solve breaks down
    numerically. The caller owns re-anchoring and retries.
    """
    m = len(masses)
    hp = HermitianProgram()
    rt = hp.add_nonneg(m)
    yt = hp.add_nonneg(m)
    sigma = hp.add_nonneg(1)
    unit = np.zeros(m)
    for k in range(m):
        unit[:] = 0.0
        unit[k] = 1.0
        hp.add_le({rt: unit.copy(), yt: -unit}, float(masses[k]))
        # Capacity row rt_k <= w_k lam sigma, scaled so its largest
        # coefficient is exactly 1. The exponent is clamped to +-30: rows
        # further than e^30 from binding move the optimum only below the
        # 1e-12 scale, while their raw coefficients would make the normal
        # matrix numerically singular.
        lc = min(max(log_w[k] + lam_log, -30.0), 30.0)
        hp.add_le(
            {
                rt: math.exp(-max(lc, 0.0)) * unit,
                sigma: np.array([-math.exp(min(lc, 0.0))]),
            },
            0.0,
        )
    hp.add_eq({rt: np.ones(m)}, 1.0)
    hp.add_le({yt: np.ones(m)}, eps)
    hp.set_objective({sigma: np.ones(1)})
    problem = hp.build()
    if dump_path is not None:
        dump_problem(problem, dump_path)
    try:
        return solve(problem, gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
    except (SolverFailure, ValueError, RuntimeError, FloatingPointError):
        return None


def classical_cost_lp(
    channel: np.ndarray,
    eps: float,
    *,
    gap_tol: float = 1e-8,
    feas_tol: float = 1e-8,
    max_iter: int = 200,
    dump_path: str | None = None,
) -> CostResult:
    """Simulation cost of a classical channel N(y|x) under NS correlations.

    The conditional distributions are rows of the input matrix. The cost LP
    optimizes a simulating channel Nt together with envelope values V_y,

        min sum_y V_y  s.t.  Nt(y|x) <= V_y,  Y_xy >= Nt(y|x) - N(y|x),
                             Y_xy >= 0,  sum_y Y_xy <= eps per input x,
                             Nt row-stochastic,

    and reports tr V = sum_y V_y. At eps = 0 the simulator is forced to
    equal the channel and the optimum is sum_y max_x N(y|x) directly.

    Raises:
        ValueError: if the matrix is not row-stochastic or eps is out of range.
    """
    mat = np.asarray(channel, dtype=float)
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError(f"channel must be a 2-D matrix, got shape {mat.shape}")
    if np.min(mat) < -1e-12:
        raise ValueError("channel matrix has negative entries")
    row_sums = mat.sum(axis=1)
    if np.max(np.abs(row_sums - 1.0)) > 1e-10:
        raise ValueError(f"channel rows must sum to 1, got sums {row_sums}")
    eps = _check_eps(eps)
    n_in, n_out = mat.shape

    if eps == 0.0:
        return cost_result_from_trv(float(np.sum(np.max(mat, axis=0))))

    hp = HermitianProgram()
    nt = hp.add_nonneg(n_in * n_out)
    v = hp.add_nonneg(n_out)
    y = hp.add_nonneg(n_in * n_out)

    def entry(x_idx, y_idx):
        e = np.zeros(n_in * n_out)
        e[x_idx * n_out + y_idx] = 1.0
        return e

    for x_idx in range(n_in):
        row = np.zeros(n_in * n_out)
        row[x_idx * n_out : (x_idx + 1) * n_out] = 1.0
        hp.add_eq({nt: row}, 1.0)
        hp.add_le({y: row}, eps)
        for y_idx in range(n_out):
            e_v = np.zeros(n_out)
            e_v[y_idx] = 1.0
            hp.add_le({nt: entry(x_idx, y_idx), v: -e_v}, 0.0)
            hp.add_le(
                {nt: entry(x_idx, y_idx), y: -entry(x_idx, y_idx)},
                float(mat[x_idx, y_idx]),
            )
    hp.set_objective({v: np.ones(n_out)})
    problem = hp.build()
    if dump_path is not None:
        dump_problem(problem, dump_path)
    sol = solve(problem, gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
    if sol.status != "optimal":
        raise SolverFailure(
            f"classical cost LP finished with status '{sol.status}'",
            status=sol.status,
        )
    return cost_result_from_trv(float(sol.primal_value))


def depolarizing_mutual_info(d: int, p: float) -> float:
    """Mutual information I(A:B) of the depolarizing channel, in bits.

    Evaluated on the maximally entangled input, which is optimal by
    covariance: I = log2 d^2 + l1 log2 l1 + (d^2 - 1) l2 log2 l2 with
    l1 = 1 - p + p/d^2 and l2 = p/d^2. Half of this value is the
    entanglement-assisted quantum capacity, the asymptote of the per-use
    simulation cost.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"local dimension must be an integer >= 2, got {d}")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing parameter must lie in [0, 1], got {p}")
    d2 = d * d
    lam1 = 1.0 - p + p / d2
    lam2 = p / d2

    def xlog2x(x: float) -> float:
        return x * math.log2(x) if x > 0.0 else 0.0

    return math.log2(d2) + xlog2x(lam1) + (d2 - 1) * xlog2x(lam2)
