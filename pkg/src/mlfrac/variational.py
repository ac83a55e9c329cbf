"""Euler-Lagrange residuals and the two worked variational problems.

A Lagrangian containing the left Caputo-type ML-kernel derivative yields the
residual L1(s) + (right RL-type derivative of L2)(s); a right derivative in
the Lagrangian mirrors to the left.  The quadratic-potential problem is
solved as a fixed point of y -> y0 + c (AB-I-left . AB-I-right) y, with
iterates stored on a uniform grid and the integrals of the piecewise-linear
interpolant computed exactly through product-integration weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateOrder, DivergenceError, DomainError, MlfracError
from .identities import zero_mode
from .operators import (
    FracOrder,
    GridFunction,
    Side,
    abr_derivative,
    gen_ml_integral,
    opposite,
)
from .quadrature import QuadConfig, RealFunction
from .special import MLParams, ml_value


@dataclass(frozen=True)
class LagrangianEval:
    """Partial derivatives of a Lagrangian along a candidate trajectory.

    ``l1`` maps a trajectory to dL/df as a function of the time variable;
    ``l2`` maps it to dL/d(fractional derivative of f).  ``deriv_side`` says
    which side's Caputo-type derivative the Lagrangian contains.
    """

    l1: Callable[[RealFunction], RealFunction]
    l2: Callable[[RealFunction], RealFunction]
    deriv_side: Side = Side.Left


@dataclass(frozen=True)
class SolverConfig:
    grid_n: int = 200
    fp_tol: float = 1e-8
    fp_max_iter: int = 200

    def __post_init__(self) -> None:
        if self.grid_n < 8:
            raise DomainError(f"grid_n must be at least 8, got {self.grid_n}")
        if not (self.fp_tol > 0.0):
            raise DomainError(f"fp_tol must be positive, got {self.fp_tol!r}")
        if self.fp_max_iter < 1:
            raise DomainError("fp_max_iter must be at least 1")


DEFAULT_SOLVER = SolverConfig()


@dataclass(frozen=True)
class PicardResult:
    """Converged grid plus the convergence record of the fixed-point iteration."""

    grid: GridFunction
    iterations: int
    sup_changes: tuple[float, ...]
    contraction_q: float | None
    contraction_bound: float
    residual_sup: float
    converged: bool


def residual_grid(b: float, n: int = 20, start_frac: float = 0.1) -> GridFunction:
    """Skeleton grid on [start_frac*b, b]: the default residual window keeps
    clear of the anchor, where the derivative of L2 may be singular."""
    a = start_frac * b
    return GridFunction(a=a, b=b, n=n, values=np.zeros(n + 1))


def el_residual(
    lag: LagrangianEval,
    y: RealFunction,
    ord_: FracOrder,
    grid: GridFunction,
    cfg: QuadConfig | None = None,
) -> GridFunction:
    """Euler-Lagrange residual L1 + (opposite-side ABR of L2) on the grid nodes.

    Per-node operator failures are recorded as NaN entries flagged singular
    rather than raised.
    """
    l1_traj = lag.l1(y)
    l2_traj = lag.l2(y)
    side = opposite(lag.deriv_side)
    values = np.empty(grid.n + 1)
    bad: list[int] = []
    for i, t in enumerate(grid.ts):
        try:
            values[i] = l1_traj.fn(t) + abr_derivative(side, l2_traj, ord_, t, cfg)
        except MlfracError:
            values[i] = math.nan
            bad.append(i)
    return GridFunction(a=grid.a, b=grid.b, n=grid.n, values=values, singular=tuple(bad))


def natural_bc(
    l2_traj: RealFunction, ord_: FracOrder, side: Side, cfg: QuadConfig | None = None
) -> tuple[float, float]:
    """Boundary pair of the generalized ML integral of L2 at the interval ends.

    ``side`` selects the operator anchor (Right = b-anchored, Left =
    0-anchored); the value at the anchor itself is exactly 0 (empty range).
    """
    kernel = MLParams(ord_.alpha, 1.0, 1.0)
    lam = ord_.lam
    at_a = gen_ml_integral(side, kernel, lam, l2_traj, l2_traj.a, cfg)
    at_b = gen_ml_integral(side, kernel, lam, l2_traj, l2_traj.b, cfg)
    return at_a, at_b


def solve_free_particle(
    ord_: FracOrder,
    y0: float,
    b: float,
    cfg: SolverConfig | None = None,
    amplitude: float = 1.0,
) -> GridFunction:
    """Closed-form free-particle extremal y(t) = y0 + A alpha t^(alpha-1)/(B Gamma(alpha)).

    The mode is unbounded at t = 0 for alpha < 1 while the boundary condition
    still assigns y(0) = y0; the first sample reports y0 and is flagged
    singular so the tension stays visible.  ``amplitude`` scales the singular
    mode; the worked solution uses 1.
    """
    if b <= 0.0:
        raise DomainError(f"solve_free_particle needs b > 0, got {b!r}")
    cfg = cfg or DEFAULT_SOLVER
    n = cfg.grid_n
    ts = np.linspace(0.0, b, n + 1)
    values = np.empty(n + 1)
    values[0] = y0
    for i in range(1, n + 1):
        values[i] = y0 + amplitude * zero_mode(ord_, float(ts[i]))
    singular = (0,) if ord_.alpha < 1.0 else ()
    return GridFunction(a=0.0, b=b, n=n, values=values, singular=singular)


def fractional_velocity(grid: GridFunction, ord_: FracOrder) -> RealFunction:
    """Left Caputo-type ML-kernel derivative of the grid's linear interpolant.

    Exact per cell: with G(s) = s E_{alpha,2}(lam s^alpha) (an antiderivative
    of the kernel), each cell of slope s_j contributes
    s_j [G(t - x_j) - G(t - x_{j+1})].  Much faster and smoother than pushing
    the piecewise-constant slope through adaptive quadrature.
    """
    alpha = ord_.alpha
    if alpha >= 1.0:
        raise DegenerateOrder("fractional velocity needs alpha < 1")
    lam = ord_.lam
    scale = ord_.b_norm / (1.0 - alpha)
    ts = grid.ts
    slopes = np.diff(grid.values) / grid.h
    a, b, h = grid.a, grid.b, grid.h

    def g_anti(s: float) -> float:
        if s <= 0.0:
            return 0.0
        return s * ml_value(alpha, 2.0, 1.0, lam * s**alpha)

    def kernel(s: float) -> float:
        if s <= 0.0:
            return 1.0
        return ml_value(alpha, 1.0, 1.0, lam * s**alpha)

    def fn(t: float) -> float:
        if t <= a:
            return 0.0
        ncells = min(int(math.ceil((t - a) / h - 1e-12)), len(slopes))
        acc = 0.0
        for j in range(ncells):
            lo = ts[j]
            hi = min(ts[j + 1], t)
            acc += slopes[j] * (g_anti(t - lo) - g_anti(t - hi))
        return scale * acc

    def deriv(t: float) -> float:
        if t <= a:
            return scale * slopes[0]
        ncells = min(int(math.ceil((t - a) / h - 1e-12)), len(slopes))
        acc = 0.0
        for j in range(ncells):
            lo = ts[j]
            hi = ts[j + 1]
            acc += slopes[j] * (kernel(t - lo) - (kernel(t - hi) if hi < t else 0.0))
        return scale * acc

    return RealFunction(fn=fn, a=a, b=b, deriv=deriv, label="ABC-D of interpolant")


def rl_integral_matrix(alpha: float, a: float, b: float, n: int) -> np.ndarray:
    """Product-integration weights for the left RL integral on a uniform grid.

    Row i gives the exact order-alpha integral at node i of the piecewise-
    linear interpolant of the samples.  The right-sided matrix is the double
    reversal of this one.
    """
    if not (alpha > 0.0):
        raise DomainError(f"rl_integral_matrix needs alpha > 0, got {alpha!r}")
    h = (b - a) / n
    d = np.arange(0, n + 1, dtype=float)
    upper = (d * h) ** alpha
    upper1 = (d * h) ** (alpha + 1.0)
    # per-cell moments against the two hat functions, indexed by i-j
    q1 = np.zeros(n + 1)
    q2 = np.zeros(n + 1)
    dd = d[1:]
    lo_p = ((dd - 1.0) * h) ** alpha
    lo_p1 = ((dd - 1.0) * h) ** (alpha + 1.0)
    q1[1:] = (upper1[1:] - lo_p1) / (alpha + 1.0) - (dd - 1.0) * h * (upper[1:] - lo_p) / alpha
    q2[1:] = dd * h * (upper[1:] - lo_p) / alpha - (upper1[1:] - lo_p1) / (alpha + 1.0)
    w = np.zeros((n + 1, n + 1))
    for dist in range(1, n + 1):
        rows = np.arange(dist, n + 1)
        w[rows, rows - dist] += q1[dist]
        w[rows, rows - dist + 1] += q2[dist]
    return w / (math.gamma(alpha) * h)


def solve_quadratic_potential(
    ord_: FracOrder,
    c: float,
    y0: float,
    b: float,
    cfg: SolverConfig | None = None,
) -> PicardResult:
    """Picard iteration for y = y0 + c (AB-I-left . AB-I-right) y on [0, b].

    Iterates live on the uniform grid; the composed integral operator of the
    linear interpolant is applied exactly as a dense matrix.  Divergence is
    detected at run time (five consecutive growing steps, or the iteration
    budget); the a-posteriori contraction bound |c| K is reported.
    """
    if ord_.alpha >= 1.0:
        raise DegenerateOrder("the ML-kernel integral requires alpha < 1")
    if b <= 0.0:
        raise DomainError(f"solve_quadratic_potential needs b > 0, got {b!r}")
    cfg = cfg or DEFAULT_SOLVER
    n = cfg.grid_n
    w0 = (1.0 - ord_.alpha) / ord_.b_norm
    w1 = ord_.alpha / ord_.b_norm
    eye = np.eye(n + 1)
    w_left = rl_integral_matrix(ord_.alpha, 0.0, b, n)
    w_right = w_left[::-1, ::-1]
    m_left = w0 * eye + w1 * w_left
    m_right = w0 * eye + w1 * w_right
    composed = m_left @ m_right
    bound = abs(c) * float(np.max(np.sum(np.abs(composed), axis=1)))

    base = np.full(n + 1, float(y0))
    y = base.copy()
    changes: list[float] = []
    grow_run = 0
    converged = False
    iterations = 0
    for _ in range(cfg.fp_max_iter):
        y_next = base + c * (composed @ y)
        change = float(np.max(np.abs(y_next - y)))
        iterations += 1
        if changes and change > changes[-1]:
            grow_run += 1
            if grow_run >= 5:
                raise DivergenceError(
                    f"sup-norm change grew for 5 consecutive iterations "
                    f"(contraction bound |c| K = {bound:.3g})"
                )
        else:
            grow_run = 0
        changes.append(change)
        y = y_next
        if change <= cfg.fp_tol:
            converged = True
            break
    if not converged:
        raise DivergenceError(
            f"no convergence within {cfg.fp_max_iter} iterations "
            f"(last change {changes[-1]:.3g}, contraction bound {bound:.3g})"
        )
    ratios = [c2 / c1 for c1, c2 in zip(changes, changes[1:]) if c1 > 0.0]
    q = max(ratios) if ratios else None
    residual = float(np.max(np.abs(y - base - c * (composed @ y))))
    grid = GridFunction(a=0.0, b=b, n=n, values=y)
    return PicardResult(
        grid=grid,
        iterations=iterations,
        sup_changes=tuple(changes),
        contraction_q=q,
        contraction_bound=bound,
        residual_sup=residual,
        converged=True,
    )
