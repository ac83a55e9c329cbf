"""Classical and Mittag-Leffler-kernel fractional operators, left and right.

All operators are pure functions of (side, function, order, point).  The
Riemann-Liouville-type derivative with ML kernel is computed through its
relation to the Caputo-type one (Caputo part plus an anchor boundary term),
which avoids differentiating a quadrature; an independent d/dt evaluation is
provided separately for cross-checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOrder, DomainError, SingularityError
from .quadrature import (
    QuadConfig,
    RealFunction,
    adaptive_gl,
    central_diff,
    rl_weighted_quad,
    rl_weighted_quad_right,
)
from .special import MLParams, ml_one, ml_value

#: ML-kernel operators reject orders at or above this value: the kernel rate
#: -alpha/(1-alpha) would push series arguments out of the working domain.
ALPHA_KERNEL_CAP = 0.99


class Side(enum.Enum):
    """Anchor side of a fractional operator."""

    Left = enum.auto()
    Right = enum.auto()


def opposite(side: Side) -> Side:
    return Side.Right if side is Side.Left else Side.Left


@dataclass(frozen=True)
class FracOrder:
    """Fractional order alpha in (0, 1] plus the positive normalization B(alpha)."""

    alpha: float
    b_norm: float = 1.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise DomainError(f"order must lie in (0, 1], got {self.alpha!r}")
        if not (self.b_norm > 0.0):
            raise DomainError(f"normalization must be positive, got {self.b_norm!r}")

    @property
    def lam(self) -> float:
        """Kernel rate -alpha/(1-alpha)."""
        if self.alpha >= 1.0:
            raise DegenerateOrder("kernel rate is undefined at alpha = 1")
        return -self.alpha / (1.0 - self.alpha)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function at the n+1 uniform nodes of [a, b].

    ``singular`` lists indices whose true value is unbounded; the stored
    entry there is a reported stand-in (e.g. the assigned boundary value).
    """

    a: float
    b: float
    n: int
    values: np.ndarray
    singular: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not (self.a < self.b):
            raise DomainError(f"GridFunction needs a < b, got [{self.a!r}, {self.b!r}]")
        if self.n < 2:
            raise DomainError(f"GridFunction needs n >= 2, got {self.n}")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.n + 1,):
            raise DomainError(f"expected {self.n + 1} samples, got shape {vals.shape}")
        regular = np.ones(self.n + 1, dtype=bool)
        regular[list(self.singular)] = False
        if not np.all(np.isfinite(vals[regular])):
            raise DomainError("non-finite sample at an index not flagged singular")
        object.__setattr__(self, "values", vals)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n + 1)

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    def to_real_function(self, label: str = "") -> RealFunction:
        """Piecewise-linear interpolant with its piecewise-constant slope."""
        ts = self.ts
        vals = self.values
        slopes = np.diff(vals) / self.h
        a, b, n, h = self.a, self.b, self.n, self.h

        def fn(t: float) -> float:
            return float(np.interp(t, ts, vals))

        def deriv(t: float) -> float:
            i = min(max(int((t - a) / h), 0), n - 1)
            return float(slopes[i])

        return RealFunction(fn=fn, a=a, b=b, deriv=deriv, label=label)


def _require_kernel_order(ord_: FracOrder) -> None:
    if ord_.alpha >= ALPHA_KERNEL_CAP:
        raise DegenerateOrder(
            f"ML-kernel operators require alpha < {ALPHA_KERNEL_CAP}, "
            f"got {ord_.alpha:g}"
        )


def rl_integral(
    side: Side, f: RealFunction, ord_: FracOrder, t: float, cfg: QuadConfig | None = None
) -> float:
    """Classical Riemann-Liouville fractional integral of order ord_.alpha."""
    if not f.contains(t):
        raise DomainError(f"t={t!r} outside [{f.a!r}, {f.b!r}]")
    if side is Side.Left:
        return rl_weighted_quad(f, ord_.alpha, f.a, t, cfg)
    return rl_weighted_quad_right(f, ord_.alpha, t, f.b, cfg)


def ab_integral(
    side: Side, f: RealFunction, ord_: FracOrder, t: float, cfg: QuadConfig | None = None
) -> float:
    """Weighted identity plus RL integral: ((1-a)/B) f + (a/B) I^a f."""
    if ord_.alpha >= 1.0:
        raise DegenerateOrder("the ML-kernel integral requires alpha < 1")
    w0 = (1.0 - ord_.alpha) / ord_.b_norm
    w1 = ord_.alpha / ord_.b_norm
    return w0 * f.fn(t) + w1 * rl_integral(side, f, ord_, t, cfg)


def _fprime(f: RealFunction):
    if f.deriv is not None:
        return f.deriv
    return lambda x: central_diff(f, x)


def abc_derivative(
    side: Side, f: RealFunction, ord_: FracOrder, t: float, cfg: QuadConfig | None = None
) -> float:
    """Caputo-type derivative with nonsingular ML kernel applied to f'."""
    _require_kernel_order(ord_)
    if not f.contains(t):
        raise DomainError(f"t={t!r} outside [{f.a!r}, {f.b!r}]")
    lam = ord_.lam
    alpha = ord_.alpha
    scale = ord_.b_norm / (1.0 - alpha)
    fp = _fprime(f)
    if side is Side.Left:
        if t == f.a:
            return 0.0
        integrand = lambda x: fp(x) * ml_one(alpha, lam * (t - x) ** alpha)
        return scale * adaptive_gl(integrand, f.a, t, cfg)
    if t == f.b:
        return 0.0
    integrand = lambda x: fp(x) * ml_one(alpha, lam * (x - t) ** alpha)
    return -scale * adaptive_gl(integrand, t, f.b, cfg)


def abr_derivative(
    side: Side, f: RealFunction, ord_: FracOrder, t: float, cfg: QuadConfig | None = None
) -> float:
    """Riemann-Liouville-type ML-kernel derivative.

    Computed as the Caputo-type derivative plus the anchor boundary term
    (B/(1-a)) f(anchor) E_a(lam dist^a); the two forms coincide for
    differentiable f with a finite anchor value.
    """
    _require_kernel_order(ord_)
    scale = ord_.b_norm / (1.0 - ord_.alpha)
    caputo = abc_derivative(side, f, ord_, t, cfg)
    if side is Side.Left:
        dist = t - f.a
        boundary = f.fn(f.a)
    else:
        dist = f.b - t
        boundary = f.fn(f.b)
    return caputo + scale * boundary * ml_one(ord_.alpha, ord_.lam * dist**ord_.alpha)


def abr_derivative_kernel_diff(
    side: Side,
    f: RealFunction,
    ord_: FracOrder,
    t: float,
    cfg: QuadConfig | None = None,
    h: float = 5e-4,
) -> float:
    """Independent ABR evaluation: central difference of the kernel integral.

    Differentiates K(tau) = integral of f(x) E_a(lam |tau - x|^a) over the
    anchored range directly in tau.  Slower and step-limited, but shares no
    code path with :func:`abr_derivative`; used by the identity checks.
    Needs f bounded (not differentiable), so it also covers integrable
    anchor singularities.
    """
    _require_kernel_order(ord_)
    lam = ord_.lam
    alpha = ord_.alpha
    scale = ord_.b_norm / (1.0 - alpha)
    if not (f.a + h <= t <= f.b - h):
        raise DomainError(f"need a+h <= t <= b-h for the d/dt step, got t={t!r}")

    if side is Side.Left:
        def kernel_integral(tau: float) -> float:
            return adaptive_gl(
                lambda x: f.fn(x) * ml_one(alpha, lam * (tau - x) ** alpha),
                f.a,
                tau,
                cfg,
            )

        return scale * (kernel_integral(t + h) - kernel_integral(t - h)) / (2.0 * h)

    def kernel_integral(tau: float) -> float:
        return adaptive_gl(
            lambda x: f.fn(x) * ml_one(alpha, lam * (x - tau) ** alpha),
            tau,
            f.b,
            cfg,
        )

    return -scale * (kernel_integral(t + h) - kernel_integral(t - h)) / (2.0 * h)


def rl_derivative(
    side: Side, f: RealFunction, alpha: float, t: float, cfg: QuadConfig | None = None
) -> float:
    """Classical RL derivative of order alpha in (0, 1), differentiated form.

    Left: f(a)(t-a)^(-alpha)/Gamma(1-alpha) + I^(1-alpha)[f'](t); the right
    side mirrors with the -d/dt sign convention baked in.
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"rl_derivative requires alpha in (0, 1), got {alpha!r}")
    if not f.contains(t):
        raise DomainError(f"t={t!r} outside [{f.a!r}, {f.b!r}]")
    fp = RealFunction(fn=_fprime(f), a=f.a, b=f.b)
    gamma_c = math.gamma(1.0 - alpha)
    if side is Side.Left:
        fa = f.fn(f.a)
        if t == f.a:
            if fa != 0.0:
                raise SingularityError(
                    "left RL derivative is unbounded at t = a when f(a) != 0"
                )
            return 0.0
        return fa * (t - f.a) ** (-alpha) / gamma_c + rl_weighted_quad(
            fp, 1.0 - alpha, f.a, t, cfg
        )
    fb = f.fn(f.b)
    if t == f.b:
        if fb != 0.0:
            raise SingularityError(
                "right RL derivative is unbounded at t = b when f(b) != 0"
            )
        return 0.0
    return fb * (f.b - t) ** (-alpha) / gamma_c - rl_weighted_quad_right(
        fp, 1.0 - alpha, t, f.b, cfg
    )


def q_reflect(f: RealFunction) -> RealFunction:
    """Reflection (Qf)(t) = f(a+b-t) on the same interval."""
    s = f.a + f.b
    deriv = None
    if f.deriv is not None:
        fd = f.deriv
        deriv = lambda t: -fd(s - t)
    label = f"Q[{f.label}]" if f.label else "Q[f]"
    return RealFunction(fn=lambda t: f.fn(s - t), a=f.a, b=f.b, deriv=deriv, label=label)


def gen_ml_integral(
    side: Side,
    p: MLParams,
    omega: float,
    f: RealFunction,
    x: float,
    cfg: QuadConfig | None = None,
) -> float:
    """Generalized ML integral operator with kernel dist^(mu-1) E(omega dist^rho).

    For mu < 1 the weak kernel singularity is removed by the same power
    substitution used for the RL integral, applied to the factored kernel.
    """
    if not f.contains(x):
        raise DomainError(f"x={x!r} outside [{f.a!r}, {f.b!r}]")
    rho, mu, gp = p.rho, p.mu, p.gamma_p
    if side is Side.Left:
        lo, hi = f.a, x
        dist = lambda t: x - t
    else:
        lo, hi = x, f.b
        dist = lambda t: t - x
    if lo == hi:
        return 0.0

    if mu >= 1.0:
        def integrand(t: float) -> float:
            d = dist(t)
            return d ** (mu - 1.0) * ml_value(rho, mu, gp, omega * d**rho) * f.fn(t)

        return adaptive_gl(integrand, lo, hi, cfg)

    # u = dist^mu; dist^(mu-1) dt collapses to du/mu exactly.
    inv_mu = 1.0 / mu
    span = hi - lo

    def integrand_u(u: float) -> float:
        d = u**inv_mu
        if d > span:
            d = span
        t = x - d if side is Side.Left else x + d
        return ml_value(rho, mu, gp, omega * d**rho) * f.fn(t)

    return adaptive_gl(integrand_u, 0.0, span**mu, cfg) / mu
