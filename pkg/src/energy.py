"""
Action functional J of the discrete Dirichlet problem

    Δⁿ(p(k-n)Δⁿx(k-n)) + (-1)ⁿ⁺¹ f(k, x(k)) = 0,   k in Z[1, N],
    x(i) = 0 for i in Z[1-n, 0] ∪ Z[N+1, N+n],

its gradient, Hessian and the equation residual. Critical points of J are
exactly the solutions; gradient(k) = (-1)ⁿ residual(k).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .difference_calculus import (
    DifferenceMatrix,
    SpectralBounds,
    build_operator_matrix,
    embedding_constants,
    nth_diff,
    weighted_gram,
)
from .nonlinearity import (
    Antiderivative,
    Expression,
    Neg,
    as_expression,
    diff_x,
    divisors,
    evaluate,
    has_abs_of_x,
    to_text,
)
from .sequence_space import ArrayLike, InteriorVector, as_array, extend


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """
    One instance of the boundary value problem.

    Parameters:
    -----------
    n : int
        Order parameter, n >= 1
    N : int
        Interior length, N >= 2
    p : sequence of float
        N+n coefficients p(1-n), ..., p(N)
    f : Expression or str
        Nonlinearity f(k, x)
    description : str, optional
        Free text carried into reports
    """

    n: int
    N: int
    p: np.ndarray
    f: Expression
    description: Optional[str] = field(default=None)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N!r}")
        p = np.array(self.p, dtype=float)
        if p.shape != (self.N + self.n,):
            raise ValueError(f"p must have N+n={self.N + self.n} entries, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise ValueError("p must contain only finite values")
        p.setflags(write=False)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'f', as_expression(self.f))
        k = np.arange(1, self.N + 1, dtype=float)
        for divisor in divisors(self.f):
            values = evaluate(divisor, k, 0.0, strict=False)
            bad = ~np.isfinite(values) | (values == 0.0)
            if bad.any():
                raise ValueError(f"divisor {to_text(divisor)} vanishes at k={int(k[np.argmax(bad)])}")

    # ------------------------------------------------------------------
    # Derived, cached per instance
    # ------------------------------------------------------------------

    @cached_property
    def D(self) -> DifferenceMatrix:
        return build_operator_matrix(self.N, self.n)

    @cached_property
    def A(self) -> np.ndarray:
        A = weighted_gram(self.D, self.p)
        A.setflags(write=False)
        return A

    @cached_property
    def spectral_bounds(self) -> SpectralBounds:
        return embedding_constants(self.N, self.n)

    @cached_property
    def k(self) -> np.ndarray:
        return np.arange(1, self.N + 1, dtype=float)

    @cached_property
    def F(self) -> Antiderivative:
        return Antiderivative(self.f)

    @cached_property
    def df(self) -> Expression:
        return diff_x(self.f)

    @cached_property
    def hessian_approximate(self) -> bool:
        """True when abs encloses x, so the Hessian ignores kinks."""
        return has_abs_of_x(self.f)

    @property
    def p_min(self) -> float:
        return float(self.p.min())

    @property
    def p_max(self) -> float:
        return float(self.p.max())

    def negated(self) -> 'ProblemSpec':
        """The problem (-p, -f), whose energy is -J."""
        return ProblemSpec(self.n, self.N, -self.p, Neg(self.f), self.description)

    def to_dict(self) -> dict:
        return {
            'n': int(self.n),
            'N': int(self.N),
            'p': [float(v) for v in self.p],
            'f': to_text(self.f),
        }

    # ------------------------------------------------------------------
    # Array-level kernels used by the solvers
    # ------------------------------------------------------------------

    def check_dim(self, x: ArrayLike) -> np.ndarray:
        values = as_array(x)
        if values.shape != (self.N,):
            raise ValueError(f"x must have N={self.N} entries, got shape {values.shape}")
        return values

    def f_values(self, x: np.ndarray) -> np.ndarray:
        return evaluate(self.f, self.k, x)

    def energy(self, x: np.ndarray) -> float:
        x = self.check_dim(x)
        return float(0.5 * x @ self.A @ x - np.sum(self.F(self.k, x)))

    def grad(self, x: np.ndarray) -> np.ndarray:
        x = self.check_dim(x)
        return self.A @ x - self.f_values(x)

    def hess(self, x: np.ndarray) -> np.ndarray:
        x = self.check_dim(x)
        H = self.A - np.diag(evaluate(self.df, self.k, x))
        return 0.5 * (H + H.T)


def energy_J(prob: ProblemSpec, x: ArrayLike) -> float:
    """
    J(x) = ½ xᵀAx - Σ_{k=1}^{N} F(k, x(k)).

    F-terms for k <= 0 vanish since x(k) = 0 there and F(k, 0) = 0.
    """
    return prob.energy(as_array(x))


def gradient(prob: ProblemSpec, x: ArrayLike) -> InteriorVector:
    """A·x - (f(1, x(1)), ..., f(N, x(N)))."""
    return InteriorVector(prob.grad(as_array(x)))


def hessian(prob: ProblemSpec, x: ArrayLike) -> np.ndarray:
    """
    A - diag(∂f/∂x(k, x(k))).

    Approximate at kinks when prob.hessian_approximate is set.
    """
    return prob.hess(as_array(x))


def residual(prob: ProblemSpec, x: ArrayLike) -> InteriorVector:
    """
    Left side of the difference equation at k = 1..N, evaluated in the
    telescoped form Δⁿ(p(k-n)Δⁿx(k-n)) + (-1)ⁿ⁺¹ f(k, x(k)).

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance
    x : InteriorVector or sequence of float
        Interior values

    Returns:
    --------
    InteriorVector
        Zero exactly at solutions
    """
    values = prob.check_dim(as_array(x))
    weighted = prob.p * nth_diff(extend(values, prob.n), prob.n)
    # weighted lives on Z[1-n, N]; Δⁿ of it shifted by n lands on Z[1, N].
    telescoped = np.diff(weighted, prob.n)
    sign = -1.0 if prob.n % 2 == 0 else 1.0
    return InteriorVector(telescoped + sign * prob.f_values(values))


def directional_derivative(prob: ProblemSpec, x: ArrayLike, h: ArrayLike) -> float:
    """
    Gateaux derivative of J at x in direction h:

        Σ_{k=1-n}^{N} p(k)Δⁿx(k)Δⁿh(k) - Σ_{k=1}^{N} f(k, x(k)) h(k).
    """
    xv = prob.check_dim(as_array(x))
    hv = prob.check_dim(as_array(h))
    dx = nth_diff(extend(xv, prob.n), prob.n)
    dh = nth_diff(extend(hv, prob.n), prob.n)
    return float(np.sum(prob.p * dx * dh) - np.sum(prob.f_values(xv) * hv))


def quadratic_envelope(prob: ProblemSpec, x: ArrayLike) -> Tuple[float, float]:
    """
    Bounds on the quadratic part ½ Σ p(k)(Δⁿx(k))² of J from λ and 4ⁿ.

    Returns:
    --------
    tuple of float
        (lower, upper); for p >= 0 these are ½ λ min p ‖x‖² and ½ 4ⁿ max p ‖x‖²
    """
    values = prob.check_dim(as_array(x))
    sq = float(values @ values)
    bounds = prob.spectral_bounds
    lo_factor = bounds.lambda_min if prob.p_min >= 0 else bounds.upper_bound
    hi_factor = bounds.upper_bound if prob.p_max >= 0 else bounds.lambda_min
    return 0.5 * prob.p_min * lo_factor * sq, 0.5 * prob.p_max * hi_factor * sq


@dataclass(frozen=True)
class EnergyReport:
    """J, gradient and residual at one point."""

    J: float
    grad: InteriorVector
    grad_norm_inf: float
    residual_norm_inf: float

    def to_dict(self) -> dict:
        return {
            'J': self.J,
            'grad': self.grad.to_list(),
            'grad_norm': self.grad_norm_inf,
            'residual': self.residual_norm_inf,
        }


def evaluate_point(prob: ProblemSpec, x: ArrayLike) -> EnergyReport:
    """Energy, gradient and residual norms at x."""
    values = prob.check_dim(as_array(x))
    g = prob.grad(values)
    r = residual(prob, values).values
    return EnergyReport(
        J=prob.energy(values),
        grad=InteriorVector(g),
        grad_norm_inf=float(np.max(np.abs(g))),
        residual_norm_inf=float(np.max(np.abs(r))),
    )


def make_problem(n: int, N: int, p: Union[float, Sequence[float]], f: Union[str, Expression],
                 description: Optional[str] = None) -> ProblemSpec:
    """Build a ProblemSpec; a scalar p is broadcast to all N+n entries."""
    if np.isscalar(p):
        p = np.full(N + n, float(p))
    return ProblemSpec(n=n, N=N, p=p, f=f, description=description)
