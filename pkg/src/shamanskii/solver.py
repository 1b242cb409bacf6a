"""Frozen-Jacobian Newton iteration (Shamanskii's m-method).

Each outer iteration factors the Jacobian once and then applies ``m`` chord
updates that reuse the frozen factors, so the O(n^3) factorization cost is
paid once per outer step while the local convergence order climbs to
``m + 1``.  With ``m = 1`` this is plain Newton; as ``m`` grows the inner
sweep turns into the classic chord method.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .linalg import (
    EPS,
    NonFiniteInput,
    SingularMatrix,
    as_vector,
    lu_factor,
    lu_solve,
    norm2,
)
from .problems import DomainViolation, Problem, evaluate_f, evaluate_jacobian

__all__ = [
    "TOL_DEFAULT",
    "SolveStatus",
    "SolverConfig",
    "SolveTrace",
    "NonFiniteIterate",
    "solve",
    "outer_step",
    "newton_solve",
]

# Residual tolerance an order of magnitude above machine epsilon: about the
# smallest target a float64 residual can reliably reach.
TOL_DEFAULT = 10.0 * EPS


class SolveStatus(Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"
    SINGULAR_JACOBIAN = "SingularJacobian"
    NON_FINITE_ITERATE = "NonFiniteIterate"
    DOMAIN_VIOLATION = "DomainViolation"


class NonFiniteIterate(ArithmeticError):
    """An update or residual evaluation produced NaN or Inf."""


@dataclass(frozen=True)
class SolverConfig:
    """Run parameters.

    ``m`` is the number of chord updates per factorization.  ``max_total``
    caps the total update count and defaults to ``m * max_outer``; a sweep is
    only started when all ``m`` of its updates fit the budget, so completed
    runs always satisfy ``it_tot == m * it_inv`` unless ``inner_early_exit``
    is set.  ``inner_early_exit`` checks the residual after every inner update
    and stops the sweep as soon as the tolerance is met; by default
    convergence is tested only at the outer level.
    """

    m: int = 1
    tol: float = TOL_DEFAULT
    max_outer: int = 100
    inner_early_exit: bool = False
    max_total: int | None = None
    record_inner: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be a positive integer")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be a positive integer")
        if self.max_total is not None and self.max_total < 1:
            raise ValueError("max_total must be a positive integer when given")

    @property
    def total_cap(self) -> int:
        return self.m * self.max_outer if self.max_total is None else self.max_total


@dataclass
class SolveTrace:
    """Recorded history of one run.

    ``outer_iterates`` holds x(0)..x(it_inv), one entry per completed outer
    step plus the start point; ``residual_norms`` aligns with it.  ``it_inv``
    counts Jacobian factorizations, ``it_tot`` chord updates.  Failures land
    in ``status`` with the partial history preserved.
    """

    outer_iterates: list[np.ndarray]
    residual_norms: list[float]
    it_inv: int
    it_tot: int
    status: SolveStatus
    inner_iterates: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def x(self) -> np.ndarray:
        """Final iterate."""
        return self.outer_iterates[-1]

    @property
    def final_residual(self) -> float:
        return self.residual_norms[-1]

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED


class _SweepAbort(Exception):
    """Internal: a chord sweep stopped on a failure after ``steps`` updates.

    ``x``/``rhs`` hold the last state whose residual evaluation returned, so
    the caller can close the trace consistently.
    """

    def __init__(self, status, x, rhs, steps, cause=None):
        super().__init__(status.value)
        self.status = status
        self.x = x
        self.rhs = rhs
        self.steps = steps
        self.cause = cause


def _chord_sweep(problem, factors, x, rhs, m, tol, early_exit, inner_record=None):
    """Run up to ``m`` updates ``x <- x - solve(factors, F(x))``.

    ``rhs`` must equal F(x) on entry.  Returns ``(x, rhs, steps)``; raises
    :class:`_SweepAbort` when an update leaves the domain or goes non-finite.
    """
    steps = 0
    for _ in range(m):
        x_next = x - lu_solve(factors, rhs)
        try:
            rhs_next = evaluate_f(problem, x_next)
        except DomainViolation as exc:
            raise _SweepAbort(SolveStatus.DOMAIN_VIOLATION, x, rhs, steps, exc) from None
        steps += 1
        x, rhs = x_next, rhs_next
        if inner_record is not None:
            inner_record.append(x)
        if not (np.isfinite(x).all() and np.isfinite(rhs).all()):
            raise _SweepAbort(SolveStatus.NON_FINITE_ITERATE, x, rhs, steps)
        if early_exit and norm2(rhs) <= tol:
            break
    return x, rhs, steps


def solve(problem: Problem, config: SolverConfig | None = None) -> SolveTrace:
    """Drive the frozen-Jacobian iteration from the problem's start point.

    Loop until the residual norm drops to ``config.tol``: factor the Jacobian
    at the current outer iterate, run ``config.m`` chord updates reusing the
    factors (each followed by a residual evaluation), then record the new
    outer iterate and its residual norm.  Every failure mode (singular
    Jacobian, domain exit, non-finite values, iteration caps) terminates the
    loop with the corresponding :class:`SolveStatus`; the partial trace is
    always returned, never thrown away.
    """
    cfg = config if config is not None else SolverConfig()
    x = np.array(problem.start, dtype=np.float64)
    outer = [x]
    inner: list[np.ndarray] | None = [] if cfg.record_inner else None
    it_inv = it_tot = 0

    try:
        rhs = evaluate_f(problem, x)
    except DomainViolation:
        return SolveTrace(outer, [float("nan")], 0, 0, SolveStatus.DOMAIN_VIOLATION, inner)
    res = norm2(rhs)
    norms = [res]
    if not (np.isfinite(x).all() and np.isfinite(rhs).all()):
        return SolveTrace(outer, norms, 0, 0, SolveStatus.NON_FINITE_ITERATE, inner)

    status = None
    while res > cfg.tol:
        if it_inv >= cfg.max_outer or it_tot + cfg.m > cfg.total_cap:
            status = SolveStatus.MAX_ITERATIONS
            break
        try:
            factors = lu_factor(evaluate_jacobian(problem, x))
        except SingularMatrix:
            status = SolveStatus.SINGULAR_JACOBIAN
            break
        except DomainViolation:
            status = SolveStatus.DOMAIN_VIOLATION
            break
        except NonFiniteInput:
            status = SolveStatus.NON_FINITE_ITERATE
            break
        it_inv += 1
        try:
            x, rhs, steps = _chord_sweep(
                problem, factors, x, rhs, cfg.m, cfg.tol, cfg.inner_early_exit, inner
            )
        except _SweepAbort as abort:
            it_tot += abort.steps
            outer.append(abort.x)
            norms.append(norm2(abort.rhs))
            status = abort.status
            break
        it_tot += steps
        res = norm2(rhs)
        outer.append(x)
        norms.append(res)

    return SolveTrace(outer, norms, it_inv, it_tot, status or SolveStatus.CONVERGED, inner)


def outer_step(problem: Problem, x, m: int) -> tuple[np.ndarray, float, int]:
    """One factorization followed by an ``m``-step chord sweep from ``x``.

    Returns ``(new_x, residual_norm, inner_steps)``.  This is exactly one
    outer iteration of :func:`solve`, exposed so the sweep can be exercised
    in isolation; failures surface as exceptions here instead of trace
    statuses.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    v = as_vector(x)
    rhs = evaluate_f(problem, v)
    factors = lu_factor(evaluate_jacobian(problem, v))
    try:
        x_new, rhs_new, steps = _chord_sweep(problem, factors, v, rhs, m, 0.0, False)
    except _SweepAbort as abort:
        if abort.cause is not None:
            raise abort.cause
        raise NonFiniteIterate(
            f"non-finite iterate after {abort.steps} chord update(s)"
        ) from None
    return x_new, norm2(rhs_new), steps


def newton_solve(problem: Problem, config: SolverConfig | None = None) -> SolveTrace:
    """:func:`solve` with the update count pinned to one per factorization."""
    cfg = config if config is not None else SolverConfig()
    return solve(problem, dataclasses.replace(cfg, m=1))
