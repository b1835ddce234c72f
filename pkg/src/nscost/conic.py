"""Block-structured conic solver: SDP and LP cones, primal-dual interior point.

Problems are stated in standard form over a block-diagonal cone (PSD blocks
and nonnegative-orthant blocks),

    minimize  <C, X>  subject to  <A_i, X> = b_i  (or <= b_i),  X in cone,

and solved with a Nesterov-Todd scaled Mehrotra predictor-corrector method.
Inequality rows are converted internally to equalities with one nonnegative
slack each. Complex Hermitian programs are handled by the real symmetric
embedding (see :func:`embed_hermitian`); the builder :class:`HermitianProgram`
applies the embedding per block, halves the objective to undo the embedding's
factor-2 trace distortion, and doubles constraint rows consistently, so the
solver itself only ever sees real data.

The solver is deterministic: no randomness anywhere, so identical inputs give
bitwise-identical iterate sequences.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

__all__ = [
    "Block",
    "ConicProblem",
    "ConicSolution",
    "Constraint",
    "HermitianProgram",
    "IterateRecord",
    "SolverFailure",
    "embed_hermitian",
    "problem_from_json",
    "problem_to_json",
    "solution_to_json",
    "solve",
    "unembed_symmetric",
]

_STEP_TO_BOUNDARY = 0.98
_BIG_STEP = 1e16
# Columns of a pure-LP constraint matrix touching at least this many rows are
# split off and handled by a low-rank (Woodbury) update so the sparse normal
# matrix keeps its fill-free structure.


class SolverFailure(RuntimeError):
    """Raised on numerical breakdown or when a required solve does not finish."""

    def __init__(self, message: str, status: str = "breakdown"):
        super().__init__(message)
        self.status = status


@dataclass(frozen=True)
class Block:
    """One cone block: 'sdp' for a PSD block, 'lp' for a nonnegative vector."""

    kind: str
    size: int

    def __post_init__(self) -> None:
        if self.kind not in ("sdp", "lp"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.size < 1:
            raise ValueError("block size must be positive")


@dataclass(frozen=True)
class Constraint:
    """One scalar constraint sum_b <coeffs[b], X_b> (sense) rhs."""

    coeffs: tuple
    rhs: float
    sense: str = "eq"

    def __post_init__(self) -> None:
        if self.sense not in ("eq", "le"):
            raise ValueError(f"unknown constraint sense {self.sense!r}")
        if not math.isfinite(self.rhs):
            raise ValueError("constraint rhs must be finite")


@dataclass(frozen=True)
class ConicProblem:
    """Standard-form block problem; see the module docstring.

    `objective` and each constraint's `coeffs` are sequences parallel to
    `blocks`; entries are (n, n) symmetric arrays for SDP blocks, length-n
    vectors for LP blocks, or None for absent blocks.
    """

    blocks: tuple
    objective: tuple
    constraints: tuple
    maximize: bool = False

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(
            self, "objective", _validated_blockmat(self.objective, blocks, "objective")
        )
        cons = []
        for i, con in enumerate(self.constraints):
            coeffs = _validated_blockmat(con.coeffs, blocks, f"constraint {i}")
            if all(c is None for c in coeffs):
                raise ValueError(f"constraint {i} has no coefficients")
            cons.append(Constraint(coeffs, float(con.rhs), con.sense))
        object.__setattr__(self, "constraints", tuple(cons))


def _validated_blockmat(entries, blocks, what: str) -> tuple:
    entries = list(entries)
    if len(entries) != len(blocks):
        raise ValueError(
            f"{what}: expected {len(blocks)} block entries, got {len(entries)}"
        )
    out = []
    for entry, block in zip(entries, blocks):
        if entry is None:
            out.append(None)
            continue
        a = np.array(entry, dtype=float)
        if block.kind == "sdp":
            if a.shape != (block.size, block.size):
                raise ValueError(f"{what}: SDP entry shape {a.shape} != block size")
            if np.max(np.abs(a - a.T)) > 1e-10 * max(1.0, np.max(np.abs(a))):
                raise ValueError(f"{what}: SDP entry is not symmetric")
            a = (a + a.T) / 2.0
        else:
            a = a.reshape(-1)
            if a.shape != (block.size,):
                raise ValueError(f"{what}: LP entry length {a.shape} != block size")
        a.setflags(write=False)
        out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class IterateRecord:
    """Per-iteration diagnostics, recorded before the step is taken."""

    iteration: int
    primal_value: float
    dual_value: float
    mu: float
    primal_residual: float
    dual_residual: float


@dataclass(frozen=True)
class ConicSolution:
    status: str
    primal_value: float
    dual_value: float
    gap: float
    primal_blocks: tuple
    dual_multipliers: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    trace: tuple = field(repr=False, default=())


def embed_hermitian(h) -> np.ndarray:
    """Real symmetric embedding [[Re h, -Im h], [Im h, Re h]] of a Hermitian h.

    Eigenvalues of the embedding are those of h with doubled multiplicity, so
    PSD-ness is preserved both ways; traces satisfy tr(embed(h)) = 2 tr(h).
    """
    a = np.asarray(h, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * max(1.0, float(np.max(np.abs(a)))):
        raise ValueError("embed_hermitian requires a Hermitian matrix")
    n = a.shape[0]
    re, im = a.real, a.imag
    out = np.empty((2 * n, 2 * n), dtype=float)
    out[:n, :n] = re
    out[n:, n:] = re
    out[:n, n:] = -im
    out[n:, :n] = im
    return (out + out.T) / 2.0


def unembed_symmetric(y) -> np.ndarray:
    """Recover a Hermitian matrix from a real symmetric 2n x 2n embedding image.

    For any symmetric Y, <embed(A), Y> = 2 <A, unembed(Y)> for all Hermitian A,
    and unembed(Y) is PSD whenever Y is.
    """
    a = np.asarray(y, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2:
        raise ValueError("expected a square matrix of even size")
    n = a.shape[0] // 2
    return (a[:n, :n] + a[n:, n:]) / 2.0 + 0.5j * (a[n:, :n] - a[:n, n:])


# ---------------------------------------------------------------------------
# Standardized internal form


class _Standardized:
    """Equality-form data: slack block appended, maximize folded into signs."""

    def __init__(self, problem: ConicProblem):
        self.sign = -1.0 if problem.maximize else 1.0
        self.blocks = list(problem.blocks)
        m = len(problem.constraints)
        le_rows = [i for i, c in enumerate(problem.constraints) if c.sense == "le"]
        self.n_user_blocks = len(self.blocks)
        self.slack_index = None
        if le_rows:
            self.slack_index = len(self.blocks)
            self.blocks.append(Block("lp", len(le_rows)))
        self.m = m
        self.b = np.array([c.rhs for c in problem.constraints], dtype=float)

        self.objective = []
        for block, entry in zip(problem.blocks, problem.objective):
            if entry is None:
                if block.kind == "sdp":
                    entry = np.zeros((block.size, block.size))
                else:
                    entry = np.zeros(block.size)
            self.objective.append(self.sign * np.asarray(entry, dtype=float))
        if self.slack_index is not None:
            self.objective.append(np.zeros(len(le_rows)))

        # Constraint stacks: dense (m, n, n) per SDP block, sparse CSR per LP.
        self.sdp_stack: dict[int, np.ndarray] = {}
        self.sdp_flat: dict[int, np.ndarray] = {}
        self.lp_mat: dict[int, scipy.sparse.csr_matrix] = {}
        for bi, block in enumerate(self.blocks):
            if block.kind == "sdp":
                stack = np.zeros((m, block.size, block.size))
                for i, con in enumerate(problem.constraints):
                    entry = con.coeffs[bi]
                    if entry is not None:
                        stack[i] = entry
                self.sdp_stack[bi] = stack
                self.sdp_flat[bi] = stack.reshape(m, block.size * block.size)
            else:
                rows, cols, vals = [], [], []
                if bi == self.slack_index:
                    for j, i in enumerate(le_rows):
                        rows.append(i)
                        cols.append(j)
                        vals.append(1.0)
                else:
                    for i, con in enumerate(problem.constraints):
                        entry = con.coeffs[bi]
                        if entry is not None:
                            nz = np.nonzero(entry)[0]
                            rows.extend([i] * len(nz))
                            cols.extend(nz.tolist())
                            vals.extend(entry[nz].tolist())
                self.lp_mat[bi] = scipy.sparse.csr_matrix(
                    (vals, (rows, cols)), shape=(m, block.size)
                )
        self.pure_lp = not self.sdp_stack
        if self.pure_lp:
            self.lp_all = scipy.sparse.hstack(
                [self.lp_mat[bi] for bi in range(len(self.blocks))], format="csr"
            )
            self.lp_all_csc = self.lp_all.tocsc()
        self.norm_b = float(np.linalg.norm(self.b)) if m else 0.0
        self.norm_c = math.sqrt(
            sum(float(np.sum(np.asarray(c) ** 2)) for c in self.objective)
        )

    # -- block-space linear maps ------------------------------------------

    def apply_A(self, x: list) -> np.ndarray:
        out = np.zeros(self.m)
        for bi, block in enumerate(self.blocks):
            if block.kind == "sdp":
                out += self.sdp_flat[bi] @ x[bi].reshape(-1)
            else:
                out += self.lp_mat[bi] @ x[bi]
        return out

    def apply_At(self, y: np.ndarray) -> list:
        out = []
        for bi, block in enumerate(self.blocks):
            if block.kind == "sdp":
                out.append(np.tensordot(y, self.sdp_stack[bi], axes=(0, 0)))
            else:
                out.append(self.lp_mat[bi].T @ y)
        return out


def _inner(block: Block, a, b) -> float:
    if block.kind == "sdp":
        return float(np.sum(a * b))
    return float(a @ b)


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def _dense_cholesky_with_jitter(mat: np.ndarray):
    scale = max(1.0, float(np.trace(mat)) / mat.shape[0])
    jitter = 0.0
    for attempt in range(9):
        try:
            return scipy.linalg.cho_factor(
                mat + jitter * np.eye(mat.shape[0]), lower=True
            )
        except scipy.linalg.LinAlgError:
            jitter = scale * 1e-14 * 10.0**attempt
    raise SolverFailure("Schur complement factorization failed")


class _NTScaling:
    """Per-block Nesterov-Todd scaling data for one iterate."""

    def __init__(self, std: _Standardized, x: list, s: list):
        self.R: dict[int, np.ndarray] = {}
        self.Rinv: dict[int, np.ndarray] = {}
        self.W: dict[int, np.ndarray] = {}
        self.lam: dict[int, np.ndarray] = {}
        self.chol_x: dict[int, np.ndarray] = {}
        self.chol_s: dict[int, np.ndarray] = {}
        self.w2: dict[int, np.ndarray] = {}
        for bi, block in enumerate(std.blocks):
            if block.kind == "sdp":
                try:
                    lx = np.linalg.cholesky(x[bi])
                    ls = np.linalg.cholesky(s[bi])
                except np.linalg.LinAlgError as exc:
                    raise SolverFailure(
                        "iterate left the PSD cone (Cholesky breakdown)"
                    ) from exc
                u, sig, vt = np.linalg.svd(ls.T @ lx)
                if sig[-1] <= 0.0:
                    raise SolverFailure("NT scaling breakdown: singular iterate")
                inv_sqrt = 1.0 / np.sqrt(sig)
                r = lx @ (vt.T * inv_sqrt)
                rinv = (inv_sqrt[:, None] * u.T) @ ls.T
                self.R[bi] = r
                self.Rinv[bi] = rinv
                self.W[bi] = r @ r.T
                self.lam[bi] = sig
                self.chol_x[bi] = lx
                self.chol_s[bi] = ls
            else:
                if np.any(x[bi] <= 0.0) or np.any(s[bi] <= 0.0):
                    raise SolverFailure("iterate left the nonnegative cone")
                self.w2[bi] = x[bi] / s[bi]
                self.lam[bi] = np.sqrt(x[bi] * s[bi])


class _SchurSolver:
    """Factorization of M = A W A^T for one iterate, shared by both solves."""

    def __init__(self, std: _Standardized, nt: _NTScaling):
        self.std = std
        self.nt = nt
        if std.pure_lp:
            self._init_sparse()
        else:
            self._init_dense()

    # Dense path: any SDP block present. Builds M explicitly.
    def _init_dense(self) -> None:
        std, nt = self.std, self.nt
        m = std.m
        mat = np.zeros((m, m))
        self._waw_flat: dict[int, np.ndarray] = {}
        for bi, block in enumerate(std.blocks):
            if block.kind == "sdp":
                w = nt.W[bi]
                waw = np.matmul(w[None, :, :], np.matmul(std.sdp_stack[bi], w))
                waw_flat = waw.reshape(m, -1)
                self._waw_flat[bi] = waw_flat
                mat += std.sdp_flat[bi] @ waw_flat.T
            else:
                a = std.lp_mat[bi]
                if a.nnz:
                    mat += (a.multiply(nt.w2[bi]) @ a.T).toarray()
        mat = (mat + mat.T) / 2.0
        self._dense_mat = mat
        self._factor = _dense_cholesky_with_jitter(mat)

    # Sparse path: pure LP. Factorizes A diag(w2) A^T with a sparse LU.
    def _init_sparse(self) -> None:
        std, nt = self.std, self.nt
        a = std.lp_all_csc
        d = np.concatenate([nt.w2[bi] for bi in range(len(std.blocks))])
        mat = (a.multiply(d) @ a.T).tocsc()
        try:
            self._lu = scipy.sparse.linalg.splu(mat)
            self._sparse_mat = mat
        except (RuntimeError, scipy.linalg.LinAlgError):
            # Fall back to a dense factorization of the full normal matrix.
            full = mat.toarray()
            full = (full + full.T) / 2.0
            self._lu = None
            self._dense_mat = full
            self._factor = _dense_cholesky_with_jitter(full)

    def _solve_once(self, rhs: np.ndarray) -> np.ndarray:
        if self.std.pure_lp and self._lu is not None:
            return self._lu.solve(rhs)
        return scipy.linalg.cho_solve(self._factor, rhs)

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        if self.std.pure_lp and self._lu is not None:
            return self._sparse_mat @ v
        return self._dense_mat @ v

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        y = self._solve_once(rhs)
        # One step of iterative refinement stabilizes the late iterations.
        residual = rhs - self._matvec(y)
        y = y + self._solve_once(residual)
        if not np.all(np.isfinite(y)):
            raise SolverFailure("Schur solve produced non-finite values")
        return y


def _max_step_sdp(chol, delta: np.ndarray) -> float:
    t = scipy.linalg.solve_triangular(chol, delta, lower=True)
    t = scipy.linalg.solve_triangular(chol, t.T, lower=True)
    lo = float(np.linalg.eigvalsh(_sym(t))[0])
    if lo >= -1e-14:
        return _BIG_STEP
    return -1.0 / lo


def _max_step_lp(x: np.ndarray, delta: np.ndarray) -> float:
    neg = delta < 0.0
    if not np.any(neg):
        return _BIG_STEP
    return float(np.min(-x[neg] / delta[neg]))


def solve(
    problem: ConicProblem,
    gap_tol: float = 1e-8,
    feas_tol: float = 1e-8,
    max_iter: int = 200,
) -> ConicSolution:
    """Solve a ConicProblem; see the module docstring for the algorithm.

    Returns a ConicSolution whose status is 'optimal' only when the relative
    duality gap is at most gap_tol and both feasibility residuals are at most
    feas_tol. Hitting the iteration cap reports 'max_iter'; primal or dual
    infeasibility certificates report 'infeasible'/'unbounded'. Numerical
    breakdown raises SolverFailure.
    """
    std = _Standardized(problem)
    if std.m == 0:
        # Nothing constrains the cone variable: unbounded below unless C = 0,
        # and even then nothing useful to report. Declared, not solved.
        sign = std.sign
        return ConicSolution(
            status="unbounded",
            primal_value=-math.inf if sign > 0 else math.inf,
            dual_value=-math.inf if sign > 0 else math.inf,
            gap=math.nan,
            primal_blocks=(),
            dual_multipliers=np.zeros(0),
            iterations=0,
            primal_residual=math.nan,
            dual_residual=math.nan,
        )

    nu = sum(b.size for b in std.blocks)
    norm_a = max(
        (
            math.sqrt(
                sum(
                    float(np.sum(np.asarray(c) ** 2))
                    for c in con.coeffs
                    if c is not None
                )
            )
            for con in problem.constraints
        ),
        default=1.0,
    )
    rho_p = max(1.0, std.norm_b / max(1.0, norm_a))
    rho_d = max(1.0, std.norm_c / math.sqrt(nu), std.norm_b / max(1.0, norm_a))
    x = []
    s = []
    for block in std.blocks:
        if block.kind == "sdp":
            x.append(rho_p * np.eye(block.size))
            s.append(rho_d * np.eye(block.size))
        else:
            x.append(rho_p * np.ones(block.size))
            s.append(rho_d * np.ones(block.size))
    y = np.zeros(std.m)

    trace: list[IterateRecord] = []
    status = "max_iter"
    iterations = max_iter
    pres = dres = math.inf
    pobj = dobj = math.nan

    for it in range(max_iter + 1):
        ax = std.apply_A(x)
        rp = std.b - ax
        aty = std.apply_At(y)
        rd = [std.objective[bi] - aty[bi] - s[bi] for bi in range(len(std.blocks))]
        pobj = sum(
            _inner(block, std.objective[bi], x[bi])
            for bi, block in enumerate(std.blocks)
        )
        dobj = float(std.b @ y)
        mu = sum(
            _inner(block, x[bi], s[bi]) for bi, block in enumerate(std.blocks)
        ) / nu
        pres = float(np.linalg.norm(rp)) / (1.0 + std.norm_b)
        dres = math.sqrt(
            sum(float(np.sum(np.asarray(r) ** 2)) for r in rd)
        ) / (1.0 + std.norm_c)
        gap = abs(pobj - dobj) / (1.0 + abs(pobj))
        trace.append(IterateRecord(it, std.sign * pobj, std.sign * dobj, mu, pres, dres))

        if gap <= gap_tol and pres <= feas_tol and dres <= feas_tol:
            status = "optimal"
            iterations = it
            break

        if it >= 3:
            certificate = _detect_certificates(std, x, s, y, feas_tol)
            if certificate is not None:
                status = certificate
                iterations = it
                break

        if it == max_iter:
            iterations = max_iter
            break

        nt = _NTScaling(std, x, s)
        schur = _SchurSolver(std, nt)

        # Predictor: target complementarity 0.
        rc_aff = []
        for bi, block in enumerate(std.blocks):
            rc_aff.append(-x[bi])
        dy_aff, dx_aff, ds_aff = _newton_step(std, nt, schur, rp, rd, rc_aff)

        ap = _max_primal_step(std, nt, x, dx_aff)
        ad = _max_dual_step(std, nt, s, ds_aff)
        mu_aff = sum(
            _inner(
                block,
                x[bi] + min(1.0, ap) * dx_aff[bi],
                s[bi] + min(1.0, ad) * ds_aff[bi],
            )
            for bi, block in enumerate(std.blocks)
        ) / nu
        mu_aff = max(mu_aff, 0.0)
        sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0

        # Corrector: target sigma*mu minus the affine cross term.
        rc_cor = []
        for bi, block in enumerate(std.blocks):
            if block.kind == "sdp":
                lam = nt.lam[bi]
                dxh = nt.Rinv[bi] @ dx_aff[bi] @ nt.Rinv[bi].T
                dsh = nt.R[bi].T @ ds_aff[bi] @ nt.R[bi]
                cross = _sym(dxh @ dsh)
                d = -cross
                d[np.diag_indices_from(d)] += sigma * mu - lam**2
                z = 2.0 * d / np.add.outer(lam, lam)
                rc_cor.append(_sym(nt.R[bi] @ z @ nt.R[bi].T))
            else:
                d = sigma * mu - x[bi] * s[bi] - dx_aff[bi] * ds_aff[bi]
                rc_cor.append(d / s[bi])
        dy, dx, ds = _newton_step(std, nt, schur, rp, rd, rc_cor)

        ap = min(1.0, _STEP_TO_BOUNDARY * _max_primal_step(std, nt, x, dx))
        ad = min(1.0, _STEP_TO_BOUNDARY * _max_dual_step(std, nt, s, ds))
        for bi, block in enumerate(std.blocks):
            if block.kind == "sdp":
                x[bi] = _sym(x[bi] + ap * dx[bi])
                s[bi] = _sym(s[bi] + ad * ds[bi])
            else:
                x[bi] = x[bi] + ap * dx[bi]
                s[bi] = s[bi] + ad * ds[bi]
        y = y + ad * dy

    user_blocks = tuple(x[bi] for bi in range(std.n_user_blocks))
    sign = std.sign
    primal_value = sign * pobj
    dual_value = sign * dobj
    if status == "infeasible":
        primal_value = math.inf if sign > 0 else -math.inf
        dual_value = primal_value
    elif status == "unbounded":
        primal_value = -math.inf if sign > 0 else math.inf
        dual_value = primal_value
    gap_out = (
        abs(pobj - dobj) / (1.0 + abs(pobj)) if math.isfinite(pobj) else math.nan
    )
    return ConicSolution(
        status=status,
        primal_value=primal_value,
        dual_value=dual_value,
        gap=gap_out,
        primal_blocks=user_blocks,
        dual_multipliers=sign * y,
        iterations=iterations,
        primal_residual=pres,
        dual_residual=dres,
        trace=tuple(trace),
    )


def _newton_step(std, nt, schur, rp, rd, rc):
    """Solve the scaled Newton system for given residual targets."""
    rhs = rp.copy()
    for bi, block in enumerate(std.blocks):
        if block.kind == "sdp":
            t = nt.W[bi] @ rd[bi] @ nt.W[bi] - rc[bi]
            rhs += std.sdp_flat[bi] @ t.reshape(-1)
        else:
            t = nt.w2[bi] * rd[bi] - rc[bi]
            rhs += std.lp_mat[bi] @ t
    dy = schur.solve(rhs)
    at_dy = std.apply_At(dy)
    dx, ds = [], []
    for bi, block in enumerate(std.blocks):
        dsb = rd[bi] - at_dy[bi]
        if block.kind == "sdp":
            dxb = _sym(rc[bi] - nt.W[bi] @ dsb @ nt.W[bi])
        else:
            dxb = rc[bi] - nt.w2[bi] * dsb
        dx.append(dxb)
        ds.append(dsb)
    return dy, dx, ds


def _max_primal_step(std, nt, x, dx) -> float:
    step = _BIG_STEP
    for bi, block in enumerate(std.blocks):
        if block.kind == "sdp":
            step = min(step, _max_step_sdp(nt.chol_x[bi], dx[bi]))
        else:
            step = min(step, _max_step_lp(x[bi], dx[bi]))
    return step


def _max_dual_step(std, nt, s, ds) -> float:
    step = _BIG_STEP
    for bi, block in enumerate(std.blocks):
        if block.kind == "sdp":
            step = min(step, _max_step_sdp(nt.chol_s[bi], ds[bi]))
        else:
            step = min(step, _max_step_lp(s[bi], ds[bi]))
    return step


def _detect_certificates(std, x, s, y, feas_tol) -> str | None:
    """Farkas-style infeasibility and unboundedness certificates."""
    bty = float(std.b @ y)
    scale_y = 1.0 + float(np.linalg.norm(y))
    if bty > 1e-8 * scale_y:
        aty = std.apply_At(y)
        res = math.sqrt(
            sum(
                float(np.sum(np.asarray(aty[bi] + s[bi]) ** 2))
                for bi in range(len(std.blocks))
            )
        )
        if res <= 1e-7 * bty:
            return "infeasible"
    ctx = sum(
        _inner(block, std.objective[bi], x[bi]) for bi, block in enumerate(std.blocks)
    )
    scale_x = 1.0 + math.sqrt(
        sum(float(np.sum(np.asarray(xb) ** 2)) for xb in x)
    )
    if ctx < -1e-8 * scale_x:
        res = float(np.linalg.norm(std.apply_A(x)))
        if res <= 1e-7 * (-ctx):
            return "unbounded"
    return None


# ---------------------------------------------------------------------------
# JSON dump/load


def problem_to_json(problem: ConicProblem) -> dict:
    """Serialize a problem to the documented {blocks, objective, constraints, sense} schema."""

    def entry_to_json(entry):
        return None if entry is None else np.asarray(entry).tolist()

    return {
        "blocks": [{"kind": b.kind, "size": b.size} for b in problem.blocks],
        "objective": [entry_to_json(e) for e in problem.objective],
        "constraints": [
            {
                "coeffs": [entry_to_json(e) for e in c.coeffs],
                "rhs": c.rhs,
                "sense": c.sense,
            }
            for c in problem.constraints
        ],
        "sense": "max" if problem.maximize else "min",
    }


def problem_from_json(doc: dict) -> ConicProblem:
    blocks = tuple(Block(b["kind"], int(b["size"])) for b in doc["blocks"])

    def entry_from_json(entry):
        return None if entry is None else np.asarray(entry, dtype=float)

    constraints = tuple(
        Constraint(
            tuple(entry_from_json(e) for e in c["coeffs"]),
            float(c["rhs"]),
            c.get("sense", "eq"),
        )
        for c in doc["constraints"]
    )
    return ConicProblem(
        blocks=blocks,
        objective=tuple(entry_from_json(e) for e in doc["objective"]),
        constraints=constraints,
        maximize=doc.get("sense", "min") == "max",
    )


def solution_to_json(sol: ConicSolution) -> dict:
    return {
        "status": sol.status,
        "primal_value": sol.primal_value,
        "dual_value": sol.dual_value,
        "gap": sol.gap,
        "iterations": sol.iterations,
        "primal_residual": sol.primal_residual,
        "dual_residual": sol.dual_residual,
        "primal_blocks": [np.asarray(b).tolist() for b in sol.primal_blocks],
        "dual_multipliers": np.asarray(sol.dual_multipliers).tolist(),
    }


def dump_problem(problem: ConicProblem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(problem_to_json(problem), fh)


# ---------------------------------------------------------------------------
# Complex Hermitian front end


class _VarRef:
    __slots__ = ("index", "kind", "size")

    def __init__(self, index: int, kind: str, size: int):
        self.index = index
        self.kind = kind
        self.size = size


class HermitianProgram:
    """Builder for conic programs over complex Hermitian PSD variables.

    Each PSD variable of complex dimension n becomes a real SDP block of size
    2n via :func:`embed_hermitian`. Constraint rows <A, X> (sense) b with
    Hermitian A become real rows <embed(A), Y> (sense) 2b, which are exactly
    equivalent; the objective is embedded and halved so reported values are
    the complex-domain ones. LP variables pass through unchanged (their
    coefficients inside mixed rows are doubled to match).
    """

    def __init__(self):
        self._blocks: list[Block] = []
        self._refs: list[_VarRef] = []
        self._rows: list[tuple[dict, float, str]] = []
        self._objective: dict[int, np.ndarray] = {}
        self._maximize = False

    def add_psd(self, dim: int) -> _VarRef:
        """Add a complex Hermitian PSD variable of dimension dim."""
        ref = _VarRef(len(self._blocks), "sdp", dim)
        self._blocks.append(Block("sdp", 2 * dim))
        self._refs.append(ref)
        return ref

    def add_nonneg(self, size: int) -> _VarRef:
        """Add a real entrywise-nonnegative vector variable."""
        ref = _VarRef(len(self._blocks), "lp", size)
        self._blocks.append(Block("lp", size))
        self._refs.append(ref)
        return ref

    def _coerce(self, ref: _VarRef, coeff) -> np.ndarray:
        if ref.kind == "sdp":
            a = np.asarray(coeff, dtype=np.complex128)
            if a.shape != (ref.size, ref.size):
                raise ValueError(
                    f"coefficient shape {a.shape} does not match variable dim {ref.size}"
                )
            return a
        a = np.asarray(coeff, dtype=float).reshape(-1)
        if a.shape != (ref.size,):
            raise ValueError(
                f"coefficient length {a.shape} does not match variable size {ref.size}"
            )
        return a

    def add_eq(self, terms: dict, rhs: float) -> None:
        self._rows.append(
            ({ref.index: self._coerce(ref, c) for ref, c in terms.items()}, float(rhs), "eq")
        )

    def add_le(self, terms: dict, rhs: float) -> None:
        self._rows.append(
            ({ref.index: self._coerce(ref, c) for ref, c in terms.items()}, float(rhs), "le")
        )

    def set_objective(self, terms: dict, maximize: bool = False) -> None:
        self._objective = {
            ref.index: self._coerce(ref, c) for ref, c in terms.items()
        }
        self._maximize = maximize

    def build(self) -> ConicProblem:
        objective = []
        for bi, block in enumerate(self._blocks):
            entry = self._objective.get(bi)
            if entry is None:
                objective.append(None)
            elif block.kind == "sdp":
                objective.append(embed_hermitian(entry) / 2.0)
            else:
                objective.append(entry)
        constraints = []
        for terms, rhs, sense in self._rows:
            coeffs = []
            for bi, block in enumerate(self._blocks):
                entry = terms.get(bi)
                if entry is None:
                    coeffs.append(None)
                elif block.kind == "sdp":
                    coeffs.append(embed_hermitian(entry))
                else:
                    coeffs.append(2.0 * entry)
            constraints.append(Constraint(tuple(coeffs), 2.0 * rhs, sense))
        return ConicProblem(
            blocks=tuple(self._blocks),
            objective=tuple(objective),
            constraints=tuple(constraints),
            maximize=self._maximize,
        )

    def extract(self, solution: ConicSolution, ref: _VarRef) -> np.ndarray:
        """Read a variable's value out of a solution of the built problem."""
        value = solution.primal_blocks[ref.index]
        if ref.kind == "sdp":
            return unembed_symmetric(value)
        return np.asarray(value)
