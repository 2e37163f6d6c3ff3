"""Solution of the equality-constrained quadratic programs produced by the
transcription.

The first-order optimality conditions form the symmetric saddle system

    [2Q  H'] [Z     ]   [-c]
    [H   0 ] [lambda] = [ b].

The system is solved through a dense singular-value factorization with one
step of iterative refinement, returning the minimum-norm solution.  That
choice is deliberate: the transcribed programs carry a structural
degeneracy — the boundary values of phi and u enter every constraint and
the cost only through their sum, so splitting that sum is free — which
makes the saddle matrix singular but consistent.  The minimum-norm solution
fixes the split deterministically and agrees with a null-space elimination
started from the minimum-norm feasible point.

Rank deficiency of the constraint rows themselves (a genuinely
overdetermined or duplicated constraint set) is an error and aborts; an
inconsistent saddle system likewise aborts rather than silently returning a
least-squares compromise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .transcribe import DiscreteQp

__all__ = [
    "QpSolution",
    "SolveReport",
    "RankDeficientError",
    "SolveError",
    "solve",
    "diagnostics",
]

#: Relative tolerance used for constraint-row rank decisions (scaled by the
#: largest matrix entry in magnitude).
RANK_TOL = 1e-10

#: Feasibility must come out no worse than this times max(1, |b|_inf).
FEASIBILITY_TOL = 1e-8


class RankDeficientError(ValueError):
    """Constraint rows are numerically dependent."""

    def __init__(self, deficiency: int, scale: float):
        self.deficiency = deficiency
        self.scale = scale
        super().__init__(
            f"constraint matrix is rank deficient by {deficiency} "
            f"(smallest singular value {scale:.3e})"
        )


class SolveError(RuntimeError):
    """The saddle system could not be solved to the required residuals."""


@dataclass(frozen=True)
class QpSolution:
    """Minimizer, multipliers and solve-time diagnostics."""

    z: np.ndarray
    j: float
    kkt_residual: float
    feasibility: float
    multipliers: np.ndarray
    kkt_condition: float
    kkt_rank_deficiency: int


@dataclass(frozen=True)
class SolveReport:
    """Independently recomputed solution-quality report."""

    feasibility: float
    stationarity: float
    objective: float
    kkt_condition: float
    kkt_rank_deficiency: int


def _min_norm_solve(k: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float, int]:
    """Minimum-norm solution of k x = rhs with one refinement step.

    Returns (x, condition estimate, rank deficiency).  Singular values below
    the usual dense-rank cutoff are treated as exact zeros.
    """
    u, s, vt = np.linalg.svd(k)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(k.shape[1]), 1.0, k.shape[0]
    cutoff = s[0] * max(k.shape) * np.finfo(float).eps
    rank = int(np.count_nonzero(s > cutoff))
    u_r, s_r, vt_r = u[:, :rank], s[:rank], vt[:rank]

    def apply_pinv(r: np.ndarray) -> np.ndarray:
        return vt_r.T @ ((u_r.T @ r) / s_r)

    x = apply_pinv(rhs)
    x = x + apply_pinv(rhs - k @ x)
    cond = float(s[0] / s_r[-1])
    return x, cond, k.shape[0] - rank


def solve(qp: DiscreteQp) -> QpSolution:
    """Solve the QP; returns the minimum-norm first-order optimal point."""
    h, b, q, c = qp.H, qp.b, qp.Q, qp.c
    for name, arr in (("H", h), ("b", b), ("Q", q), ("c", c)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"non-finite entries in {name}")
    scale_q = max(1.0, float(np.max(np.abs(q)))) if q.size else 1.0
    if q.size and float(np.max(np.abs(q - q.T))) > 1e-12 * scale_q:
        raise ValueError("cost matrix must be symmetric")
    n_rows = h.shape[0]
    if n_rows > 0:
        s_h = np.linalg.svd(h, compute_uv=False)
        tol = RANK_TOL * float(np.max(np.abs(h)))
        rank_h = int(np.count_nonzero(s_h > tol))
        if rank_h < n_rows:
            raise RankDeficientError(n_rows - rank_h, float(s_h[-1]))

    n = q.shape[0]
    kkt = np.zeros((n + n_rows, n + n_rows))
    kkt[:n, :n] = 2.0 * q
    kkt[:n, n:] = h.T
    kkt[n:, :n] = h
    rhs = np.concatenate([-c, b])
    sol, cond, deficiency = _min_norm_solve(kkt, rhs)

    residual = kkt @ sol - rhs
    rhs_scale = max(1.0, float(np.max(np.abs(rhs)))) if rhs.size else 1.0
    if float(np.max(np.abs(residual), initial=0.0)) > 1e-7 * rhs_scale:
        raise SolveError(
            "saddle system is inconsistent "
            f"(residual {float(np.max(np.abs(residual))):.3e})"
        )
    z, lam = sol[:n], sol[n:]
    feasibility = float(np.max(np.abs(h @ z - b), initial=0.0))
    b_scale = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0
    if feasibility > FEASIBILITY_TOL * b_scale:
        raise SolveError(f"constraints violated beyond tolerance ({feasibility:.3e})")
    stationarity = float(np.max(np.abs(2.0 * q @ z + c + h.T @ lam), initial=0.0))
    j = float(z @ q @ z + c @ z + qp.j0)
    return QpSolution(
        z=z,
        j=j,
        kkt_residual=stationarity,
        feasibility=feasibility,
        multipliers=lam,
        kkt_condition=cond,
        kkt_rank_deficiency=deficiency,
    )


def diagnostics(sol: QpSolution, qp: DiscreteQp) -> SolveReport:
    """Recompute solution quality from scratch (no reuse of solve results)."""
    feasibility = float(np.max(np.abs(qp.H @ sol.z - qp.b), initial=0.0))
    stationarity = float(
        np.max(np.abs(2.0 * qp.Q @ sol.z + qp.c + qp.H.T @ sol.multipliers), initial=0.0)
    )
    objective = float(sol.z @ qp.Q @ sol.z + qp.c @ sol.z + qp.j0)
    return SolveReport(
        feasibility=feasibility,
        stationarity=stationarity,
        objective=objective,
        kkt_condition=sol.kkt_condition,
        kkt_rank_deficiency=sol.kkt_rank_deficiency,
    )
