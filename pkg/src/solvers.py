"""
Critical points of J: descent/ascent with Newton refinement, Hessian
classification, deduplication, seeded multistart and a dense-grid Newton
census used as an oracle.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np

from .energy import ProblemSpec, residual
from .nonlinearity import EvaluationError, QuadratureError, evaluate
from .sequence_space import ArrayLike, InteriorVector, as_array

logger = logging.getLogger(__name__)


Sense = Literal['minimize', 'maximize']
Kind = Literal['minimum', 'maximum', 'saddle', 'degenerate']
Origin = Literal['descent', 'ascent', 'mountain-pass', 'newton', 'oracle']

ARMIJO_C = 1e-4
NEWTON_SWITCH = 1e-4
REGULARIZATION = 1e-8
DEGENERATE_EIG = 1e-8
DIVERGENCE_FACTOR = 1e6
POLISH_ITER = 200
GRID_STEP = 0.05
# Newton converges only linearly onto a degenerate point and stalls on the
# way, so points whose Hessian is this close to singular merge within
# DEGENERATE_RESOLUTION whatever their computed kind.
NEAR_SINGULAR_EIG = 1e-3
DEGENERATE_RESOLUTION = 1e-3
# Undamped Newton steps tried when a near-singular row stalls or only
# accepts steps shorter than BURST_STEP, followed by a short damped polish.
STALL_BURST = 30
BURST_POLISH = 20
BURST_STEP = 0.25
MAX_BURSTS = 2


class ConvergenceError(RuntimeError):
    """Iteration budget exhausted before the gradient tolerance was met."""

    def __init__(self, message: str, best_x: np.ndarray, grad_norm: float, iterations: int):
        super().__init__(message)
        self.best_x = best_x
        self.grad_norm = grad_norm
        self.iterations = iterations


class DivergenceError(RuntimeError):
    """The iterate left the ball of radius 1e6·box_radius."""


class GridBudgetError(ValueError):
    """The 0.05-step census grid has more nodes than the budget allows."""


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, budgets and seeds shared by all solvers."""

    tol_grad: float = 1e-10
    max_iter: int = 10_000
    starts: int = 200
    box_radius: float = 10.0
    seed: int = 42
    path_points: int = 41
    mp_step: float = 0.1
    dedup_tol: float = 1e-6

    def __post_init__(self):
        for name in ('tol_grad', 'box_radius', 'mp_step', 'dedup_tol'):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive real, got {value!r}")
        for name in ('max_iter', 'starts', 'path_points'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.path_points < 3:
            raise ValueError(f"path_points must be >= 3, got {self.path_points}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")

    def with_overrides(self, **overrides) -> 'SolverConfig':
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CriticalPoint:
    """A verified stationary point of J."""

    x: InteriorVector
    J: float
    grad_norm_inf: float
    residual_norm_inf: float
    kind: str
    origin: str
    iterations: int = 0
    min_abs_eig: float = field(default=np.inf, compare=False)

    def to_dict(self) -> dict:
        return {
            'x': self.x.to_list(),
            'J': self.J,
            'grad_norm': self.grad_norm_inf,
            'residual': self.residual_norm_inf,
            'kind': self.kind,
            'origin': self.origin,
        }


@dataclass
class SolutionSet:
    """Deduplicated critical points sorted by J, plus per-start diagnostics."""

    points: List[CriticalPoint] = field(default_factory=list)
    fingerprint: Optional[str] = None
    diagnostics: List[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[CriticalPoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> CriticalPoint:
        return self.points[i]

    @property
    def energies(self) -> List[float]:
        return [p.J for p in self.points]

    def of_kind(self, kind: str) -> List[CriticalPoint]:
        return [p for p in self.points if p.kind == kind]


# ============================================================================
# Classification and point construction
# ============================================================================

def classify_eigenvalues(eigenvalues: np.ndarray) -> str:
    """Inertia label; any |eigenvalue| < 1e-8 makes the point degenerate."""
    if np.any(np.abs(eigenvalues) < DEGENERATE_EIG):
        return 'degenerate'
    if np.all(eigenvalues > 0):
        return 'minimum'
    if np.all(eigenvalues < 0):
        return 'maximum'
    return 'saddle'


def classify(prob: ProblemSpec, x: ArrayLike) -> str:
    """
    Classify x by the eigenvalues of the Hessian of J.

    Advisory when x is not critical.
    """
    return classify_eigenvalues(np.linalg.eigvalsh(prob.hess(as_array(x))))


def make_point(prob: ProblemSpec, x: ArrayLike, origin: str, iterations: int = 0) -> CriticalPoint:
    """Evaluate J, gradient, residual and kind at x."""
    values = np.array(as_array(x), dtype=float)
    g = prob.grad(values)
    r = residual(prob, values).values
    eigenvalues = np.linalg.eigvalsh(prob.hess(values))
    return CriticalPoint(
        x=InteriorVector(values),
        J=prob.energy(values),
        grad_norm_inf=float(np.max(np.abs(g))),
        residual_norm_inf=float(np.max(np.abs(r))),
        kind=classify_eigenvalues(eigenvalues),
        origin=origin,
        iterations=iterations,
        min_abs_eig=float(np.min(np.abs(eigenvalues))),
    )


def dedup(points: Sequence[CriticalPoint], tol: float) -> SolutionSet:
    """
    Greedy clustering by 2-norm distance.

    Within a cluster the point with the smallest gradient norm survives (ties
    by lexicographic x). Points with a near-singular Hessian merge within
    DEGENERATE_RESOLUTION.
    Output is sorted by J, then x.
    """
    ranked = sorted(points, key=lambda p: (p.grad_norm_inf, tuple(p.x.values)))
    kept: List[CriticalPoint] = []
    for candidate in ranked:
        duplicate = False
        for rep in kept:
            radius = tol
            if min(candidate.min_abs_eig, rep.min_abs_eig) < NEAR_SINGULAR_EIG:
                radius = max(tol, DEGENERATE_RESOLUTION)
            if np.linalg.norm(candidate.x.values - rep.x.values) <= radius:
                duplicate = True
                break
        if not duplicate:
            kept.append(candidate)
    kept.sort(key=lambda p: (p.J, tuple(p.x.values)))
    return SolutionSet(points=kept)


# ============================================================================
# Batched pure Newton
# ============================================================================

def _batch_grad(prob: ProblemSpec, X: np.ndarray) -> np.ndarray:
    with np.errstate(all='ignore'):
        return X @ prob.A - evaluate(prob.f, prob.k[None, :], X, strict=False)


def _batch_hess(prob: ProblemSpec, X: np.ndarray) -> np.ndarray:
    H = np.repeat(prob.A[None, :, :], X.shape[0], axis=0)
    idx = np.arange(prob.N)
    H[:, idx, idx] -= evaluate(prob.df, prob.k[None, :], X, strict=False)
    return H


def _solve_batch(H: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    bad = ~np.all(np.isfinite(H), axis=(1, 2)) | ~np.all(np.isfinite(rhs), axis=1)
    if bad.any():
        H = H.copy()
        H[bad] = np.eye(H.shape[1])
        rhs = np.where(bad[:, None], 0.0, rhs)
    with np.errstate(all='ignore'):
        try:
            d = np.linalg.solve(H, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError:
            d = np.einsum('mij,mj->mi', np.linalg.pinv(H), rhs)
    d[bad] = np.nan
    return d


def _near_singular(prob: ProblemSpec, X: np.ndarray) -> np.ndarray:
    H = _batch_hess(prob, X)
    finite = np.all(np.isfinite(H), axis=(1, 2))
    mask = np.zeros(len(X), dtype=bool)
    if finite.any():
        eig = np.linalg.eigvalsh(H[finite])
        mask[finite] = np.min(np.abs(eig), axis=1) < NEAR_SINGULAR_EIG
    return mask


def _full_newton_burst(prob: ProblemSpec, X: np.ndarray,
                       limit: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    STALL_BURST undamped Newton steps, then BURST_POLISH damped ones.

    Along a degenerate direction a full step shrinks the offset by a third
    and leaves a second-order error that only the next step removes, so the
    gradient max-norm rises before it falls and damping crawls.

    Returns:
    --------
    tuple
        (X, grad_norm_inf per row, iterations per row)
    """
    Y = np.array(X, dtype=float, copy=True)
    with np.errstate(all='ignore'):
        for _ in range(STALL_BURST):
            Y = Y + _solve_batch(_batch_hess(prob, Y), -_batch_grad(prob, Y))
    Y, gn, iterations = batch_newton(prob, Y, BURST_POLISH, limit=limit, burst=False)
    return Y, gn, iterations + STALL_BURST


def batch_newton(prob: ProblemSpec, X0: np.ndarray, max_iter: int,
                 limit: float = np.inf, burst: bool = True) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Pure Newton on ∇J = 0 from many starts at once.

    A step (halved up to 30 times) is accepted only when it lowers the
    max-norm of the gradient; a row stops when no step does, so converged
    rows are polished until the gradient stops decreasing.

    With burst=True a row whose Hessian is near singular and that stalls,
    or accepts only steps shorter than BURST_STEP, gets up to MAX_BURSTS
    bursts of full steps. A burst is kept only where it lowers the gradient.

    Returns:
    --------
    tuple
        (X, grad_norm_inf per row, iterations per row)
    """
    X = np.array(X0, dtype=float, copy=True)
    G = _batch_grad(prob, X)
    gn = np.max(np.abs(G), axis=1)
    gn[~np.isfinite(gn)] = np.inf
    active = np.isfinite(gn)
    iterations = np.zeros(len(X), dtype=int)
    bursts = np.zeros(len(X), dtype=int)

    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        d = _solve_batch(_batch_hess(prob, X[idx]), -G[idx])
        t = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        accepted = np.zeros(len(idx), dtype=bool)
        for _ in range(30):
            trial = X[idx] + t[:, None] * d
            Gt = _batch_grad(prob, trial)
            with np.errstate(invalid='ignore'):
                gt = np.max(np.abs(Gt), axis=1)
            gt[~np.isfinite(gt)] = np.inf
            ok = pending & (gt < gn[idx])
            rows = idx[ok]
            X[rows], G[rows], gn[rows] = trial[ok], Gt[ok], gt[ok]
            accepted |= ok
            pending &= ~ok
            if not pending.any():
                break
            t[pending] *= 0.5
        iterations[idx[accepted]] += 1
        active[idx[~accepted]] = False

        if burst:
            slow = idx[(~accepted | (t < BURST_STEP)) & (bursts[idx] < MAX_BURSTS)]
            slow = slow[np.isfinite(gn[slow])]
            if len(slow):
                slow = slow[_near_singular(prob, X[slow])]
            if len(slow):
                bursts[slow] += 1
                Xb, gb, itb = _full_newton_burst(prob, X[slow], limit)
                better = gb < gn[slow]
                rows = slow[better]
                X[rows], gn[rows] = Xb[better], gb[better]
                G[rows] = _batch_grad(prob, X[rows])
                iterations[rows] += itb[better]
                active[rows] = True
        active &= np.linalg.norm(X, axis=1) <= limit
    return X, gn, iterations


def newton_refine(prob: ProblemSpec, x: ArrayLike, cfg: SolverConfig,
                  max_iter: int = None) -> Tuple[np.ndarray, float, int]:
    """
    Polish one point with pure Newton.

    Returns:
    --------
    tuple
        (x, grad_norm_inf, iterations); converged iff grad_norm_inf <= cfg.tol_grad
    """
    budget = min(cfg.max_iter, POLISH_ITER) if max_iter is None else max_iter
    X, gn, it = batch_newton(prob, as_array(x)[None, :], budget,
                             limit=DIVERGENCE_FACTOR * cfg.box_radius)
    return X[0], float(gn[0]), int(it[0])


# ============================================================================
# Local descent / ascent
# ============================================================================

def _sense_sign(sense: str) -> float:
    if sense == 'minimize':
        return 1.0
    if sense == 'maximize':
        return -1.0
    raise ValueError(f"sense must be 'minimize' or 'maximize', got {sense!r}")


def local_descent(prob: ProblemSpec, x0: ArrayLike, sense: str, cfg: SolverConfig) -> CriticalPoint:
    """
    Minimize (or maximize) J from x0.

    Armijo gradient steps until ‖∇J‖∞ < 1e-4, then Newton steps with Armijo
    backtracking; a Newton step that is not a descent direction is retried on
    H + (max(0, -λ_min) + 1e-8)·I. Once ‖∇J‖∞ <= tol_grad the point is
    polished with pure Newton.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance
    x0 : InteriorVector or sequence of float
        Start point
    sense : str
        'minimize' or 'maximize'
    cfg : SolverConfig
        Tolerances and budgets

    Returns:
    --------
    CriticalPoint
        origin 'descent' or 'ascent'

    Raises:
    -------
    ConvergenceError
        max_iter exhausted; carries the best iterate
    DivergenceError
        ‖x‖ exceeded 1e6·box_radius
    """
    s = _sense_sign(sense)
    origin = 'descent' if s > 0 else 'ascent'
    x = np.array(prob.check_dim(as_array(x0)), dtype=float)
    limit = DIVERGENCE_FACTOR * cfg.box_radius

    def phi(y: np.ndarray) -> float:
        try:
            return s * prob.energy(y)
        except (EvaluationError, QuadratureError):
            return np.inf

    def sensed_grad(y: np.ndarray) -> np.ndarray:
        return s * prob.grad(y)

    g = sensed_grad(x)
    gn = float(np.max(np.abs(g)))
    best_x, best_gn = x.copy(), gn
    it = 0
    step = 1.0

    def check_bounds(y: np.ndarray):
        if np.linalg.norm(y) > limit:
            raise DivergenceError(
                f"{origin} left the ball of radius {limit:g} after {it} iterations "
                f"(J is unbounded in this direction)"
            )

    # Gradient phase; half the budget at most so Newton always gets a turn.
    while gn >= NEWTON_SWITCH and gn > cfg.tol_grad and it < cfg.max_iter // 2:
        f0 = phi(x)
        gg = float(g @ g)
        t = 2.0 * step
        while t > 1e-300:
            trial = x - t * g
            if phi(trial) <= f0 - ARMIJO_C * t * gg:
                break
            t *= 0.5
        else:
            break
        x, step = trial, t
        it += 1
        check_bounds(x)
        g = sensed_grad(x)
        gn = float(np.max(np.abs(g)))
        if gn < best_gn:
            best_x, best_gn = x.copy(), gn

    # Newton phase
    while gn > cfg.tol_grad and it < cfg.max_iter:
        H = s * prob.hess(x)
        d = _newton_direction(H, g)
        slope = float(g @ d)
        f0 = phi(x)
        t = 1.0
        moved = False
        while t > 1e-12:
            trial = x + t * d
            f_trial = phi(trial)
            if f_trial <= f0 + ARMIJO_C * t * slope:
                moved = True
                break
            if t == 1.0 and np.isfinite(f_trial):
                # Armijo is blind below rounding of J; fall back to the gradient
                g_trial = sensed_grad(trial)
                if np.max(np.abs(g_trial)) < gn and gn < NEWTON_SWITCH:
                    moved = True
                    break
            t *= 0.5
        if not moved:
            break
        x = trial
        it += 1
        check_bounds(x)
        g = sensed_grad(x)
        gn = float(np.max(np.abs(g)))
        if gn < best_gn:
            best_x, best_gn = x.copy(), gn

    if gn > cfg.tol_grad:
        raise ConvergenceError(
            f"{origin} stopped at ‖∇J‖∞ = {best_gn:.3e} > tol {cfg.tol_grad:.1e} after {it} iterations",
            best_x=best_x, grad_norm=best_gn, iterations=it,
        )

    polished, polished_gn, extra = newton_refine(prob, x, cfg)
    if polished_gn <= gn:
        x = polished
    return make_point(prob, x, origin, iterations=it + extra)


def _newton_direction(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Newton step for the sensed objective; regularized when not a descent direction."""
    try:
        d = np.linalg.solve(H, -g)
    except np.linalg.LinAlgError:
        d = None
    if d is None or not np.all(np.isfinite(d)) or float(g @ d) >= 0:
        lam_min = float(np.linalg.eigvalsh(H)[0])
        shift = max(0.0, -lam_min) + REGULARIZATION
        d = np.linalg.solve(H + shift * np.eye(len(g)), -g)
    return d


# ============================================================================
# Multistart and census
# ============================================================================

def start_points(N: int, cfg: SolverConfig) -> np.ndarray:
    """θ, the 2N signed unit vectors scaled by box_radius/2, then seeded uniform draws."""
    axes = 0.5 * cfg.box_radius * np.vstack([np.eye(N), -np.eye(N)])
    rng = np.random.default_rng(cfg.seed)
    draws = rng.uniform(-cfg.box_radius, cfg.box_radius, size=(cfg.starts, N))
    return np.vstack([np.zeros((1, N)), axes, draws])


def multistart(prob: ProblemSpec, sense: str, cfg: SolverConfig) -> SolutionSet:
    """
    Run local_descent from every start point and deduplicate.

    Per-start failures are collected in SolutionSet.diagnostics as
    {'start', 'sense', 'error'} records; they never abort the run.
    """
    found: List[CriticalPoint] = []
    diagnostics: List[dict] = []
    for i, x0 in enumerate(start_points(prob.N, cfg)):
        try:
            found.append(local_descent(prob, x0, sense, cfg))
        except (ConvergenceError, DivergenceError, EvaluationError, QuadratureError,
                np.linalg.LinAlgError) as e:
            diagnostics.append({'start': i, 'sense': sense, 'error': f"{type(e).__name__}: {e}"})
    result = dedup(found, cfg.dedup_tol)
    result.diagnostics = diagnostics
    logger.debug("multistart %s: %d runs, %d converged, %d distinct, %d failed",
                 sense, len(found) + len(diagnostics), len(found), len(result), len(diagnostics))
    return result


def grid_points_per_axis(N: int, cfg: SolverConfig, max_nodes: int) -> int:
    """
    Nodes per axis for a step of 0.05 over [-box_radius, box_radius].

    Raises:
    -------
    GridBudgetError
        When the full grid would exceed max_nodes; the step is never coarsened.
    """
    per_axis = int(round(2 * cfg.box_radius / GRID_STEP)) + 1
    nodes = per_axis ** N
    if nodes > max_nodes:
        raise GridBudgetError(
            f"census grid at step {GRID_STEP} over box_radius={cfg.box_radius:g} needs "
            f"{per_axis}^{N} = {nodes} nodes, budget is {max_nodes}; "
            f"lower --box or raise VARBVP_ORACLE_MAX_NODES")
    return per_axis


def grid_newton_census(prob: ProblemSpec, cfg: SolverConfig, points_per_axis: int) -> SolutionSet:
    """
    Newton from every node of a uniform grid over [-box_radius, box_radius]^N.

    Returns the converged, deduplicated points with origin 'oracle'.
    """
    axis = np.linspace(-cfg.box_radius, cfg.box_radius, points_per_axis)
    mesh = np.meshgrid(*([axis] * prob.N), indexing='ij')
    X0 = np.stack([m.ravel() for m in mesh], axis=1)
    X, gn, iterations = batch_newton(prob, X0, min(cfg.max_iter, POLISH_ITER),
                                     limit=DIVERGENCE_FACTOR * cfg.box_radius)
    converged = np.flatnonzero(gn <= cfg.tol_grad)
    Xc, gc, itc = X[converged], gn[converged], iterations[converged]

    # Cluster in bulk before the per-point work; thousands of nodes land on
    # each critical point.
    reps: List[int] = []
    if len(Xc):
        eig = np.linalg.eigvalsh(_batch_hess(prob, Xc))
        near_singular = np.min(np.abs(eig), axis=1) < NEAR_SINGULAR_EIG
        wide = max(cfg.dedup_tol, DEGENERATE_RESOLUTION)
        order = np.lexsort(tuple(Xc[:, j] for j in reversed(range(prob.N))) + (gc,))
        for i in order:
            if reps:
                dist = np.linalg.norm(Xc[reps] - Xc[i], axis=1)
                radius = np.where(near_singular[reps] | near_singular[i], wide, cfg.dedup_tol)
                if np.any(dist <= radius):
                    continue
            reps.append(int(i))
    candidates = [make_point(prob, Xc[i], 'oracle', int(itc[i])) for i in reps]
    result = dedup(candidates, cfg.dedup_tol)
    step = float(axis[1] - axis[0]) if points_per_axis > 1 else 0.0
    result.diagnostics = [{
        'nodes': int(len(X0)),
        'points_per_axis': int(points_per_axis),
        'step': step,
        'converged': int(len(converged)),
    }]
    logger.debug("grid census: %d nodes (step %.4g), %d converged, %d distinct",
                 len(X0), step, len(converged), len(result))
    return result


def census(prob: ProblemSpec, cfg: SolverConfig, max_nodes: int = 200_000) -> SolutionSet:
    """
    Both senses of multistart merged with the grid Newton census.

    The grid size is checked before any solver work, so an over-budget
    census fails fast with GridBudgetError.
    """
    points_per_axis = grid_points_per_axis(prob.N, cfg, max_nodes)
    minimized = multistart(prob, 'minimize', cfg)
    maximized = multistart(prob, 'maximize', cfg)
    grid = grid_newton_census(prob, cfg, points_per_axis)
    merged = dedup(minimized.points + maximized.points + grid.points, cfg.dedup_tol)
    merged.diagnostics = minimized.diagnostics + maximized.diagnostics + grid.diagnostics
    return merged
