"""
Numerical mountain pass by path deformation.

inf-max: a polygonal path from x_a to x_b is deformed by repeatedly pushing
its highest node downhill perpendicular to the path, so the path maximum
never rises; near a critical point the highest node is handed to Newton.
sup-min runs the same algorithm on -J.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Literal

import numpy as np

from .energy import ProblemSpec
from .nonlinearity import EvaluationError, QuadratureError
from .sequence_space import ArrayLike, as_array
from .solvers import (
    ARMIJO_C,
    DIVERGENCE_FACTOR,
    ConvergenceError,
    CriticalPoint,
    SolverConfig,
    make_point,
    newton_refine,
)

logger = logging.getLogger(__name__)


Variant = Literal['inf-max', 'sup-min']

HANDOFF_GRAD = 1e-3
STAGNATION_WINDOW = 100
STAGNATION_DROP = 1e-14
DENSE_FACTOR = 10
ESCAPE_DIRECTIONS = 64
ESCAPE_MARGIN = 1.0


class EndpointConditionError(RuntimeError):
    """The path maximum does not exceed both endpoint values."""


class StagnationError(RuntimeError):
    """The path maximum stopped decreasing without gradient convergence."""


class EscapeSearchError(RuntimeError):
    """No point with J below J(θ) - 1 (above J(θ) + 1 for sup-min) was found."""


@dataclass
class MountainPassResult:
    """
    Outcome of one path deformation.

    level_history holds the highest node value of φ = ±J (+ for inf-max,
    - for sup-min) after each sweep; it is non-increasing.
    """

    point: CriticalPoint
    variant: str
    endpoint_level: float
    initial_path_max: float
    level_history: List[float] = field(default_factory=list)
    sweeps: int = 0
    path: np.ndarray = None

    @property
    def critical_value(self) -> float:
        return self.point.J

    def to_dict(self) -> dict:
        sign = _variant_sign(self.variant)
        return {
            'variant': self.variant,
            'critical_value': self.point.J,
            'endpoint_level': sign * self.endpoint_level,
            'initial_path_extreme': sign * self.initial_path_max,
            'sweeps': self.sweeps,
        }


def _variant_sign(variant: str) -> float:
    if variant == 'inf-max':
        return 1.0
    if variant == 'sup-min':
        return -1.0
    raise ValueError(f"variant must be 'inf-max' or 'sup-min', got {variant!r}")


def _plain_tangent(prev: np.ndarray, node: np.ndarray, nxt: np.ndarray) -> np.ndarray:
    d1, d2 = node - prev, nxt - node
    n1, n2 = np.linalg.norm(d1), np.linalg.norm(d2)
    tau = (d1 / n1 if n1 > 0 else 0.0) + (d2 / n2 if n2 > 0 else 0.0)
    norm = np.linalg.norm(tau)
    return tau / norm if norm > 0 else np.zeros_like(node)


def _respace(path: np.ndarray) -> np.ndarray:
    """Redistribute nodes at equal arclength along the polyline; endpoints fixed."""
    seg = np.linalg.norm(np.diff(path, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0:
        return path.copy()
    targets = np.linspace(0.0, s[-1], len(path))
    out = np.empty_like(path)
    for j in range(path.shape[1]):
        out[:, j] = np.interp(targets, s, path[:, j])
    out[0], out[-1] = path[0], path[-1]
    return out


def initial_path_max(prob: ProblemSpec, x_a: np.ndarray, x_b: np.ndarray,
                     variant: str, nodes: int) -> float:
    """
    Max of φ = ±J over the straight segment [x_a, x_b].

    Dense sampling (10 points per path interval) locates the peak, golden
    section refines it inside the bracketing samples.
    """
    sign = _variant_sign(variant)

    def along(ti: float) -> float:
        return sign * prob.energy((1 - ti) * x_a + ti * x_b)

    t = np.linspace(0.0, 1.0, DENSE_FACTOR * (nodes - 1) + 1)
    samples = np.array([along(ti) for ti in t])
    j = int(np.argmax(samples))
    lo, hi = t[max(j - 1, 0)], t[min(j + 1, len(t) - 1)]
    ratio = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - ratio * (hi - lo), lo + ratio * (hi - lo)
    fc, fd = along(c), along(d)
    for _ in range(80):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - ratio * (hi - lo)
            fc = along(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + ratio * (hi - lo)
            fd = along(d)
    return float(max(samples[j], fc, fd))


def deform_path(prob: ProblemSpec, x_a: ArrayLike, x_b: ArrayLike, variant: str,
                cfg: SolverConfig) -> MountainPassResult:
    """
    Mountain pass between x_a and x_b.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance
    x_a, x_b : InteriorVector or sequence of float
        Path endpoints, both below the ridge (above it for sup-min)
    variant : str
        'inf-max' or 'sup-min'
    cfg : SolverConfig
        path_points, mp_step, tol_grad and max_iter are used

    Returns:
    --------
    MountainPassResult
        The critical point (origin 'mountain-pass') and the sweep history

    Raises:
    -------
    EndpointConditionError
        If no interior node of the straight path lies above both endpoints
    StagnationError
        If the path maximum drops by less than 1e-14 over 100 sweeps
    ConvergenceError
        If max_iter sweeps pass without an accepted critical point
    """
    sign = _variant_sign(variant)
    a = np.array(prob.check_dim(as_array(x_a)), dtype=float)
    b = np.array(prob.check_dim(as_array(x_b)), dtype=float)

    def phi(y: np.ndarray) -> float:
        try:
            return sign * prob.energy(y)
        except (EvaluationError, QuadratureError):
            return np.inf

    t = np.linspace(0.0, 1.0, cfg.path_points)
    path = (1 - t)[:, None] * a[None, :] + t[:, None] * b[None, :]
    values = np.array([phi(y) for y in path])
    endpoint_level = max(values[0], values[-1])
    if not values[1:-1].max() > endpoint_level:
        raise EndpointConditionError(
            f"path maximum {sign * values[1:-1].max():.10g} does not separate the endpoints "
            f"(J(x_a)={sign * values[0]:.10g}, J(x_b)={sign * values[-1]:.10g}); "
            f"x_b is not past the mountain ridge"
        )
    upper = initial_path_max(prob, a, b, variant, cfg.path_points)
    slack = 1e-9 * max(1.0, abs(upper))
    history = [float(values.max())]
    handoff_at = HANDOFF_GRAD

    for sweep in range(1, cfg.max_iter + 1):
        i = 1 + int(np.argmax(values[1:-1]))
        node = path[i]
        g = sign * prob.grad(node)
        tau = _plain_tangent(path[i - 1], node, path[i + 1])
        g_perp = g - (g @ tau) * tau
        perp_norm = float(np.max(np.abs(g_perp)))
        grad_norm = float(np.max(np.abs(g)))

        if grad_norm <= cfg.tol_grad or perp_norm <= handoff_at:
            refined, refined_gn, _ = newton_refine(prob, node, cfg)
            level = phi(refined)
            if refined_gn <= cfg.tol_grad and endpoint_level < level <= upper + slack:
                point = make_point(prob, refined, 'mountain-pass', iterations=sweep)
                logger.debug("mountain pass %s: J=%.12g after %d sweeps", variant, point.J, sweep)
                return MountainPassResult(point, variant, endpoint_level, upper,
                                          history, sweep, path)
            handoff_at = 0.1 * perp_norm

        # Armijo on φ along -g_perp, a descent direction: g·g_perp = |g_perp|²
        gg = float(g_perp @ g_perp)
        step = cfg.mp_step
        moved = False
        while gg > 0 and step > 1e-16:
            trial = node - step * g_perp
            value = phi(trial)
            if value <= values[i] - ARMIJO_C * step * gg:
                moved = True
                break
            step *= 0.5
        if moved:
            path[i] = trial
            values[i] = value
            if np.linalg.norm(trial) > DIVERGENCE_FACTOR * cfg.box_radius:
                raise ConvergenceError(
                    f"mountain pass node left the ball of radius {DIVERGENCE_FACTOR * cfg.box_radius:g}",
                    best_x=trial, grad_norm=grad_norm, iterations=sweep,
                )

        spaced = _respace(path)
        spaced_values = np.array([phi(y) for y in spaced])
        if spaced_values.max() <= values.max():
            path, values = spaced, spaced_values

        current = float(values.max())
        assert current <= history[-1], "path maximum increased during deformation"
        history.append(current)

        if len(history) > STAGNATION_WINDOW and \
                history[-STAGNATION_WINDOW - 1] - current < STAGNATION_DROP:
            raise StagnationError(
                f"path maximum {sign * current:.12g} moved less than {STAGNATION_DROP:g} "
                f"over {STAGNATION_WINDOW} sweeps (‖∇J‖∞ = {grad_norm:.3e} at the top node)"
            )

    raise ConvergenceError(
        f"mountain pass did not converge in {cfg.max_iter} sweeps",
        best_x=path[1 + int(np.argmax(values[1:-1]))], grad_norm=grad_norm, iterations=cfg.max_iter,
    )


def mountain_pass(prob: ProblemSpec, x_a: ArrayLike, x_b: ArrayLike, variant: str,
                  cfg: SolverConfig) -> CriticalPoint:
    """Critical point at the inf-max (or sup-min) level between x_a and x_b."""
    return deform_path(prob, x_a, x_b, variant, cfg).point


def find_escape_point(prob: ProblemSpec, variant: str, cfg: SolverConfig) -> np.ndarray:
    """
    A far endpoint for a mountain pass started at θ.

    Marches along seeded random directions, doubling the radius from
    box_radius/100, until J(r·d) < J(θ) - 1 (J(r·d) > J(θ) + 1 for sup-min).

    Raises:
    -------
    EscapeSearchError
        If no direction escapes before radius 1e6·box_radius
    """
    sign = _variant_sign(variant)
    theta_level = sign * prob.energy(np.zeros(prob.N))
    rng = np.random.default_rng(cfg.seed)
    limit = DIVERGENCE_FACTOR * cfg.box_radius
    for _ in range(ESCAPE_DIRECTIONS):
        d = rng.standard_normal(prob.N)
        d /= np.linalg.norm(d)
        r = cfg.box_radius / 100.0
        while r <= limit:
            try:
                level = sign * prob.energy(r * d)
            except (EvaluationError, QuadratureError):
                break
            if level < theta_level - ESCAPE_MARGIN:
                return r * d
            r *= 2.0
    raise EscapeSearchError(
        f"no escape point with J {'<' if sign > 0 else '>'} J(θ) "
        f"{'-' if sign > 0 else '+'} {ESCAPE_MARGIN:g} within radius {limit:g} "
        f"along {ESCAPE_DIRECTIONS} directions"
    )
