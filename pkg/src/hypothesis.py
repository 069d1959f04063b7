"""
Growth-condition screening and theorem applicability.

Each catalog condition is an inequality on F(k, u) (or on u·f(k, u)) for
|u| > M. Asymptotic statements cannot be decided by finite sampling, so a
screen only reports whether a log-spaced grid of samples is *consistent*
with the condition. Limit conditions (C, D, E, F) are screened through the
A/B condition they reduce to.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union, get_args

import numpy as np

from .energy import ProblemSpec
from .nonlinearity import EvaluationError, QuadratureError, evaluate

logger = logging.getLogger(__name__)


ConditionId = Literal[
    'A1', 'A2.1', 'A2.2', 'A3.1', 'A3.2',
    'B1', 'B2.1', 'B2.2', 'B3.1', 'B3.2',
    'C1', 'C2', 'C3', 'C4',
    'D1', 'D2', 'D3', 'D4',
    'E1', 'E2', 'E3', 'E4',
    'F1', 'F2', 'F3', 'F4',
]
CONDITION_IDS: Tuple[str, ...] = get_args(ConditionId)

Verdict = Literal['consistent', 'violated', 'inapplicable']

EXISTENCE_COERCIVE = 'existence-coercive'
EXISTENCE_ANTICOERCIVE = 'existence-anticoercive'
TWO_SOLUTIONS_T1 = 'two-solutions-Theorem-1'
TWO_SOLUTIONS_T2 = 'two-solutions-Theorem-2'

# Base conditions of the two multiplicity theorems.
THEOREM_1_BASE = ('A3.1', 'A3.2', 'B2.1', 'B2.2')
THEOREM_2_BASE = ('B3.1', 'B3.2', 'A2.1', 'A2.2')

DEFAULT_SAMPLE_MAX = 1e3
DEFAULT_SAMPLES = 512
GRID_FLOOR = 1e-3
RELATIVE_SLACK = 1e-12
SLOPE_SLACK = 1e-9


class ConditionParamsError(ValueError):
    """Parameters do not fit the condition (e.g. A2.2 with q >= 2)."""


class ZeroSlopeInapplicableError(ValueError):
    """f(k, 0) != 0 for some k, so f(k, u)/u has no limit at 0."""


# ============================================================================
# Catalog
# ============================================================================

@dataclass(frozen=True)
class _ConditionRule:
    family: str                 # 'coercive' or 'anticoercive'
    kind: str                   # 'sign', 'bound', 'ratio', 'excess'
    relation: str               # '<=', '>=', '<', '>'
    power: bool                 # |u|^q (True) or u^2 (False)
    alpha_rule: str             # 'positive', 'negative', 'any', 'above_t_high', 'below_t_low'
    q_rule: Optional[str] = None    # 'sub' (1 <= q < 2) or 'super' (q > 2)
    reduces_to: Optional[str] = None
    halve: bool = False         # limit equals alpha: reduce with a smaller constant


def _family(prefix: str) -> str:
    return 'coercive' if prefix in ('E', 'F') else 'anticoercive'


CATALOG: Dict[str, _ConditionRule] = {
    'A1': _ConditionRule('coercive', 'sign', '<=', False, 'positive'),
    'A2.1': _ConditionRule('coercive', 'bound', '<=', False, 'below_t_low'),
    'A2.2': _ConditionRule('coercive', 'bound', '<=', True, 'any', 'sub'),
    'A3.1': _ConditionRule('anticoercive', 'bound', '>=', False, 'above_t_high'),
    'A3.2': _ConditionRule('anticoercive', 'bound', '>=', True, 'positive', 'super'),
    'B1': _ConditionRule('anticoercive', 'sign', '>=', False, 'positive'),
    'B2.1': _ConditionRule('anticoercive', 'bound', '>=', False, 'above_t_high'),
    'B2.2': _ConditionRule('anticoercive', 'bound', '>=', True, 'any', 'sub'),
    'B3.1': _ConditionRule('coercive', 'bound', '<=', False, 'below_t_low'),
    'B3.2': _ConditionRule('coercive', 'bound', '<=', True, 'negative', 'super'),
}

for _prefix, _target, _power, _alpha_rule, _q_rule, _lower in (
    ('C', 'A3.1', False, 'above_t_high', None, True),
    ('D', 'A3.2', True, 'positive', 'super', True),
    ('E', 'B3.1', False, 'below_t_low', None, False),
    ('F', 'B3.2', True, 'negative', 'super', False),
):
    _strict, _weak = ('>', '>=') if _lower else ('<', '<=')
    CATALOG[f'{_prefix}1'] = _ConditionRule(_family(_prefix), 'ratio', _strict, _power,
                                            _alpha_rule, _q_rule, _target)
    CATALOG[f'{_prefix}2'] = _ConditionRule(_family(_prefix), 'ratio', _strict, _power,
                                            _alpha_rule, _q_rule, _target, halve=True)
    CATALOG[f'{_prefix}3'] = _ConditionRule(_family(_prefix), 'ratio', _weak, _power,
                                            _alpha_rule, _q_rule, _target)
    CATALOG[f'{_prefix}4'] = _ConditionRule(_family(_prefix), 'excess', _strict, _power,
                                            _alpha_rule, _q_rule, _target)


def condition_family(cond: str) -> str:
    """'coercive' or 'anticoercive'."""
    return _rule(cond).family


def _rule(cond: str) -> _ConditionRule:
    if cond not in CATALOG:
        raise ConditionParamsError(f"unknown condition {cond!r}; expected one of {', '.join(CONDITION_IDS)}")
    return CATALOG[cond]


# ============================================================================
# Types
# ============================================================================

@dataclass(frozen=True)
class ConditionParams:
    """
    Constants of one growth condition plus the screening range.

    Parameters:
    -----------
    alpha : float
        The condition's constant α
    q : float, optional
        Exponent for power-growth conditions
    M : float
        Only |u| > M is tested
    sample_max : float
        Largest sampled |u|
    samples : int
        Log-spaced magnitudes per sign
    """

    alpha: float
    q: Optional[float] = None
    M: float = 0.0
    sample_max: float = DEFAULT_SAMPLE_MAX
    samples: int = DEFAULT_SAMPLES

    def to_dict(self) -> dict:
        return {
            'alpha': self.alpha,
            'q': self.q,
            'M': self.M,
            'sample_max': self.sample_max,
            'samples': self.samples,
        }


@dataclass(frozen=True)
class Thresholds:
    """t_low = ½ λ min p and t_high = ½ 4ⁿ max p over Z[1-n, N]."""

    t_low: float
    t_high: float
    lambda_min: float
    upper_bound: float
    p_min: float
    p_max: float

    @property
    def theorem_1_bound(self) -> float:
        """c must stay strictly below λ·min p."""
        return self.lambda_min * self.p_min

    @property
    def theorem_2_bound(self) -> float:
        """c must stay strictly above 4ⁿ·max p."""
        return self.upper_bound * self.p_max

    def to_dict(self) -> dict:
        return {'t_low': self.t_low, 't_high': self.t_high}


@dataclass(frozen=True)
class Witness:
    """A violated sample: F(k, u) (or u·f(k, u) for sign conditions)."""

    k: int
    u: float
    value: float
    quantity: str = 'F'

    def to_dict(self) -> dict:
        return {'k': self.k, 'u': self.u, 'value': self.value, 'quantity': self.quantity}


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of screening one condition."""

    condition: str
    params: ConditionParams
    verdict: str
    witness: Optional[Witness] = None
    note: str = ''
    reduction: Optional['ConditionReport'] = None

    def __post_init__(self):
        if self.verdict == 'violated' and self.witness is None:
            raise ValueError("violated verdict requires a witness")

    @property
    def family(self) -> str:
        return condition_family(self.condition)

    @property
    def consistent(self) -> bool:
        return self.verdict == 'consistent'

    def base_condition(self) -> str:
        """The A/B condition this report stands for."""
        return self.reduction.condition if self.reduction is not None else self.condition

    def to_dict(self) -> dict:
        return {
            'condition': self.condition,
            'family': self.family,
            'params': self.params.to_dict(),
            'verdict': self.verdict,
            'witness': self.witness.to_dict() if self.witness else None,
            'note': self.note,
            'reduction': self.reduction.to_dict() if self.reduction else None,
        }


@dataclass(frozen=True)
class SlopeEstimate:
    """Estimate of lim_{u→0} f(k, u)/u."""

    k: int
    value: float
    converged: bool

    def to_dict(self) -> dict:
        return {'k': self.k, 'value': self.value, 'converged': self.converged}


@dataclass(frozen=True)
class RingEstimate:
    """
    Radius δ around θ on which J is separated from J(θ) = 0, as in the
    two-solution argument, with the guaranteed level and the sampled extreme
    of J on ‖x‖ = δ.
    """

    variant: str
    c: float
    delta: float
    guaranteed_level: float
    sampled_extreme: Optional[float]

    @property
    def separates(self) -> bool:
        if self.delta <= 0 or self.sampled_extreme is None:
            return False
        if self.variant == 'inf-max':
            return self.sampled_extreme > 0.0
        return self.sampled_extreme < 0.0

    def to_dict(self) -> dict:
        return {
            'variant': self.variant,
            'c': self.c,
            'delta': self.delta,
            'guaranteed_level': self.guaranteed_level,
            'sampled_extreme': self.sampled_extreme,
            'separates': self.separates,
        }


@dataclass(frozen=True)
class TheoremReport:
    """Aggregate verdict over the screened claims."""

    coercive_evidence: List[ConditionReport]
    anticoercive_evidence: List[ConditionReport]
    zero_slope: Optional[List[SlopeEstimate]]
    applicable: List[str]
    thresholds: Thresholds
    c: Optional[float] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'coercive_evidence': [r.to_dict() for r in self.coercive_evidence],
            'anticoercive_evidence': [r.to_dict() for r in self.anticoercive_evidence],
            'zero_slope': [s.to_dict() for s in self.zero_slope] if self.zero_slope is not None else None,
            'applicable': list(self.applicable),
            'thresholds': self.thresholds.to_dict(),
            'c': self.c,
            'notes': list(self.notes),
        }


# ============================================================================
# Thresholds
# ============================================================================

def thresholds(prob: ProblemSpec) -> Thresholds:
    """
    Spectral thresholds of the growth conditions.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance

    Returns:
    --------
    Thresholds
        t_low = ½ λ min p, t_high = ½ 4ⁿ max p
    """
    bounds = prob.spectral_bounds
    return Thresholds(
        t_low=0.5 * bounds.lambda_min * prob.p_min,
        t_high=0.5 * bounds.upper_bound * prob.p_max,
        lambda_min=bounds.lambda_min,
        upper_bound=bounds.upper_bound,
        p_min=prob.p_min,
        p_max=prob.p_max,
    )


# ============================================================================
# Screening
# ============================================================================

def validate_params(cond: str, params: ConditionParams) -> ConditionParams:
    """
    Check the constant-parameter requirements of a condition.

    Returns the params with q filled in (2 for quadratic conditions).

    Raises:
    -------
    ConditionParamsError
    """
    rule = _rule(cond)
    if not np.isfinite(params.alpha):
        raise ConditionParamsError(f"{cond}: alpha must be finite")
    if params.M < 0:
        raise ConditionParamsError(f"{cond}: M must be >= 0, got {params.M}")
    if params.samples < 1:
        raise ConditionParamsError(f"{cond}: samples must be >= 1, got {params.samples}")
    if not params.sample_max > params.M:
        raise ConditionParamsError(f"{cond}: sample_max={params.sample_max} must exceed M={params.M}")

    if rule.alpha_rule == 'positive' and not params.alpha > 0:
        raise ConditionParamsError(f"{cond} requires alpha > 0, got {params.alpha}")
    if rule.alpha_rule == 'negative' and not params.alpha < 0:
        raise ConditionParamsError(f"{cond} requires alpha < 0, got {params.alpha}")

    if rule.kind == 'sign':
        return params
    if not rule.power:
        if params.q is not None and params.q != 2:
            raise ConditionParamsError(f"{cond} is quadratic; q must be omitted or 2, got {params.q}")
        return replace(params, q=2.0)
    if params.q is None:
        raise ConditionParamsError(f"{cond} requires an exponent q")
    if rule.q_rule == 'sub' and not 1 <= params.q < 2:
        raise ConditionParamsError(f"{cond} requires 1 <= q < 2, got q={params.q}")
    if rule.q_rule == 'super' and not params.q > 2:
        raise ConditionParamsError(f"{cond} requires q > 2, got q={params.q}")
    return params


def screening_grid(params: ConditionParams, lower: float = None) -> np.ndarray:
    """
    Positive magnitudes of the screening grid, all > max(M, lower).

    512 log-spaced points from max(M, 1e-3) to sample_max by default.
    """
    cutoff = params.M if lower is None else max(params.M, lower)
    start = max(cutoff, GRID_FLOOR)
    if start >= params.sample_max:
        raise ConditionParamsError(
            f"empty screening range: start {start} >= sample_max {params.sample_max}"
        )
    mags = np.logspace(np.log10(start), np.log10(params.sample_max), params.samples)
    return mags[mags > cutoff]


def _F_on_grid(prob: ProblemSpec, mags: np.ndarray) -> np.ndarray:
    """F(k, ±mags) stacked as shape (N, 2, len(mags)); [:, 0] is +, [:, 1] is -."""
    out = np.empty((prob.N, 2, len(mags)))
    for sign_index, sign in enumerate((1.0, -1.0)):
        u = sign * mags
        if prob.F.strategy == 'closed-form':
            out[:, sign_index, :] = prob.F(prob.k[:, None], u[None, :])
        else:
            for row, k in enumerate(prob.k):
                out[row, sign_index, :] = prob.F.cumulative(k, u)
    return out


def _violations(lhs: np.ndarray, rhs: np.ndarray, relation: str) -> Tuple[np.ndarray, np.ndarray]:
    """Violation amount (positive = worse) and the violated mask."""
    gap = lhs - rhs if relation in ('<=', '<') else rhs - lhs
    if relation in ('<', '>'):
        return gap, gap >= 0
    slack = RELATIVE_SLACK * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return gap, gap > slack


def _alpha_note(cond: str, rule: _ConditionRule, alpha: float, th: Thresholds) -> Optional[str]:
    if rule.alpha_rule == 'above_t_high' and not alpha > th.t_high:
        return f"{cond} needs alpha > t_high = ½·4ⁿ·max p = {th.t_high:.10g}; got {alpha:.10g}"
    if rule.alpha_rule == 'below_t_low' and not alpha < th.t_low:
        return f"{cond} needs alpha < t_low = ½·λ·min p = {th.t_low:.10g}; got {alpha:.10g}"
    return None


def _reduced_alpha(rule: _ConditionRule, alpha: float, th: Thresholds) -> float:
    if not rule.halve:
        return alpha
    if rule.alpha_rule == 'above_t_high':
        return 0.5 * (alpha + th.t_high)
    if rule.alpha_rule == 'below_t_low':
        return 0.5 * (alpha + th.t_low)
    return 0.5 * alpha


def screen_condition(prob: ProblemSpec, cond: str, params: ConditionParams) -> ConditionReport:
    """
    Screen one growth condition on the sampling grid.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance
    cond : str
        Condition id, e.g. 'A3.2'
    params : ConditionParams
        α, q, M and the grid range

    Returns:
    --------
    ConditionReport
        'consistent' when no sample violates, 'violated' with the worst sample
        as witness, 'inapplicable' when α misses a problem-dependent threshold
        or f cannot be evaluated on the grid

    Raises:
    -------
    ConditionParamsError
        If the constants do not fit the condition
    """
    rule = _rule(cond)
    params = validate_params(cond, params)
    th = thresholds(prob)

    note = _alpha_note(cond, rule, params.alpha, th)
    if note is not None:
        logger.debug("%s inapplicable: %s", cond, note)
        return ConditionReport(cond, params, 'inapplicable', note=note)

    lower = params.alpha if rule.kind == 'sign' else None
    mags = screening_grid(params, lower)
    try:
        if rule.kind == 'sign':
            u = np.stack([mags, -mags])
            lhs = u[None, :, :] * evaluate(prob.f, prob.k[:, None, None], u[None, :, :])
            rhs = np.zeros_like(lhs)
            quantity = 'x*f'
        else:
            F = _F_on_grid(prob, mags)
            u = np.stack([mags, -mags])
            growth = np.abs(u) ** params.q
            quantity = 'F'
            if rule.kind == 'bound':
                lhs, rhs = F, params.alpha * growth[None, :, :]
            elif rule.kind == 'ratio':
                # a limit equal to alpha only pins the ratio beyond the reduced constant
                limit = _reduced_alpha(rule, params.alpha, th)
                lhs, rhs = F / growth[None, :, :], np.full_like(F, limit)
            else:
                lhs, rhs = F - params.alpha * growth[None, :, :], np.zeros_like(F)
    except (EvaluationError, QuadratureError) as e:
        note = f"f cannot be integrated on the screening grid up to {params.sample_max:g}: {e}"
        logger.warning("%s inapplicable: %s", cond, note)
        return ConditionReport(cond, params, 'inapplicable', note=note)

    gap, violated = _violations(lhs, rhs, rule.relation)
    n_checked = violated.size
    if violated.any():
        masked = np.where(violated, gap, -np.inf)
        row, sign_index, col = np.unravel_index(int(np.argmax(masked)), masked.shape)
        u_w = float(u[sign_index, col])
        if rule.kind == 'sign':
            value = float(lhs[row, sign_index, col])
        else:
            value = float(F[row, sign_index, col])
        witness = Witness(k=int(prob.k[row]), u=u_w, value=value, quantity=quantity)
        note = (f"{int(violated.sum())} of {n_checked} samples violate {cond} "
                f"({rule.relation} fails); worst at k={witness.k}, u={u_w:.6g}")
        logger.debug(note)
        return ConditionReport(cond, params, 'violated', witness=witness, note=note)

    note = f"no violation in {n_checked} samples with {max(params.M, lower or 0.0):g} < |u| <= {params.sample_max:g}"
    if rule.reduces_to is None:
        return ConditionReport(cond, params, 'consistent', note=note)

    reduced = replace(params, alpha=_reduced_alpha(rule, params.alpha, th))
    reduction = screen_condition(prob, rule.reduces_to, reduced)
    verdict = reduction.verdict
    note = f"{note}; reduces to {rule.reduces_to}(alpha={reduced.alpha:.10g}): {reduction.verdict}"
    witness = reduction.witness if verdict == 'violated' else None
    return ConditionReport(cond, params, verdict, witness=witness, note=note, reduction=reduction)


def screen_claims(prob: ProblemSpec,
                  claims: Sequence[Tuple[str, ConditionParams]]) -> List[ConditionReport]:
    """Screen every (condition, params) claim in order."""
    return [screen_condition(prob, cond, params) for cond, params in claims]


# ============================================================================
# Slope at zero
# ============================================================================

def zero_limit_slope(prob: ProblemSpec) -> List[SlopeEstimate]:
    """
    Estimate lim_{u→0} f(k, u)/u for every k.

    Ratios at u = ±10^-j, j = 3..8, are averaged over the two signs and
    Richardson-extrapolated in h² between consecutive j.

    Raises:
    -------
    ZeroSlopeInapplicableError
        If f(k, 0) != 0 for some k
    """
    at_zero = evaluate(prob.f, prob.k, 0.0)
    if np.any(at_zero != 0.0):
        bad = int(prob.k[np.argmax(at_zero != 0.0)])
        raise ZeroSlopeInapplicableError(
            f"f(k, 0) = {float(at_zero[bad - 1]):g} != 0 at k={bad}; lim f(k,u)/u does not exist"
        )

    h = 10.0 ** -np.arange(3, 9)
    right = evaluate(prob.f, prob.k[:, None], h[None, :]) / h[None, :]
    left = evaluate(prob.f, prob.k[:, None], -h[None, :]) / -h[None, :]
    symmetric = 0.5 * (right + left)
    # s(h) = s0 + b h² + O(h⁴), h shrinking by 10 per step
    extrapolated = (100.0 * symmetric[:, 1:] - symmetric[:, :-1]) / 99.0

    estimates = []
    for row, k in enumerate(prob.k):
        last, prev = extrapolated[row, -1], extrapolated[row, -2]
        scale = max(1.0, abs(last))
        settled = abs(last - prev) <= 1e-6 * scale
        one_sided = abs(right[row, -1] - left[row, -1]) <= 1e-6 * scale
        estimates.append(SlopeEstimate(k=int(k), value=float(last), converged=bool(settled and one_sided)))
    return estimates


def mountain_ring(prob: ProblemSpec, c: float, variant: str = 'inf-max',
                  samples: int = 1101, directions: int = 256, seed: int = 42) -> RingEstimate:
    """
    Ring around θ that separates it from the far endpoint of a mountain pass.

    For 'inf-max': largest sampled δ with f(k, u)/u <= (λ min p + c)/2 for
    0 < |u| < δ, guaranteed level (λ min p - c)/4·δ² and the sampled minimum
    of J on ‖x‖ = δ. 'sup-min' mirrors this with 4ⁿ max p and the maximum.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance with f(k, 0) = 0
    c : float
        Slope constant of the two-solution theorem
    variant : str
        'inf-max' or 'sup-min'
    samples : int
        Log-spaced magnitudes in [1e-8, 1e3]
    directions : int
        Random unit directions (plus the 2N axes) used to sample the sphere
    seed : int
        Seed of the direction generator
    """
    if variant not in ('inf-max', 'sup-min'):
        raise ValueError(f"variant must be 'inf-max' or 'sup-min', got {variant!r}")
    th = thresholds(prob)
    if variant == 'inf-max':
        bound = th.theorem_1_bound
        cap = 0.5 * (bound + c)
    else:
        bound = th.theorem_2_bound
        cap = 0.5 * (bound + c)

    mags = np.logspace(-8, 3, samples)
    try:
        ratio_pos = evaluate(prob.f, prob.k[:, None], mags[None, :]) / mags[None, :]
        ratio_neg = evaluate(prob.f, prob.k[:, None], -mags[None, :]) / -mags[None, :]
    except EvaluationError:
        # overflow far out; keep the magnitudes that evaluate
        ratio_pos, ratio_neg = _ratios_until_overflow(prob, mags)

    if variant == 'inf-max':
        ok = (ratio_pos <= cap) & (ratio_neg <= cap)
    else:
        ok = (ratio_pos >= cap) & (ratio_neg >= cap)
    ok_all = np.all(ok, axis=0)
    first_bad = int(np.argmin(ok_all)) if not ok_all.all() else len(mags)
    delta = float(mags[first_bad - 1]) if first_bad > 0 else 0.0
    level = 0.25 * (bound - c) * delta ** 2

    sampled = None
    if delta > 0:
        rng = np.random.default_rng(seed)
        dirs = rng.standard_normal((directions, prob.N))
        dirs = np.vstack([np.eye(prob.N), -np.eye(prob.N), dirs])
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        values = [prob.energy(delta * d) for d in dirs]
        sampled = float(min(values) if variant == 'inf-max' else max(values))
    return RingEstimate(variant=variant, c=float(c), delta=delta,
                        guaranteed_level=float(level), sampled_extreme=sampled)


def _ratios_until_overflow(prob: ProblemSpec, mags: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    pos = np.full((prob.N, len(mags)), np.nan)
    neg = np.full((prob.N, len(mags)), np.nan)
    for j, m in enumerate(mags):
        try:
            pos[:, j] = evaluate(prob.f, prob.k, m) / m
            neg[:, j] = evaluate(prob.f, prob.k, -m) / -m
        except EvaluationError:
            break
    return pos, neg


# ============================================================================
# Applicability
# ============================================================================

ClaimLike = Union[ConditionReport, Tuple[str, ConditionParams]]


def _supports(report: ConditionReport, bases: Sequence[str]) -> bool:
    return report.consistent and report.base_condition() in bases


def applicability(prob: ProblemSpec, claims: Sequence[ClaimLike],
                  c: Optional[float] = None) -> TheoremReport:
    """
    Decide which existence and multiplicity results the screened claims support.

    Parameters:
    -----------
    prob : ProblemSpec
        Problem instance
    claims : sequence
        ConditionReports, or (condition, params) pairs to screen first
    c : float, optional
        Slope constant of the two-solution theorems; defaults to the max
        (Theorem 1) or min (Theorem 2) estimated zero slope

    Returns:
    --------
    TheoremReport
        Evidence split by family and the applicable result labels
    """
    reports = [
        claim if isinstance(claim, ConditionReport) else screen_condition(prob, claim[0], claim[1])
        for claim in claims
    ]
    th = thresholds(prob)
    coercive = [r for r in reports if r.family == 'coercive']
    anticoercive = [r for r in reports if r.family == 'anticoercive']
    notes: List[str] = []
    applicable: List[str] = []

    if any(r.consistent for r in coercive):
        applicable.append(EXISTENCE_COERCIVE)
    if any(r.consistent for r in anticoercive):
        applicable.append(EXISTENCE_ANTICOERCIVE)

    slopes: Optional[List[SlopeEstimate]] = None
    try:
        slopes = zero_limit_slope(prob)
    except ZeroSlopeInapplicableError as e:
        notes.append(str(e))

    t1_base = any(_supports(r, THEOREM_1_BASE) for r in reports)
    t2_base = any(_supports(r, THEOREM_2_BASE) for r in reports)
    if slopes is not None and (t1_base or t2_base):
        if not all(s.converged for s in slopes):
            notes.append("zero slope estimate did not converge for some k; multiplicity not claimed")
        else:
            values = np.array([s.value for s in slopes])
            if t1_base:
                c1 = float(values.max()) if c is None else float(c)
                if values.max() <= c1 + SLOPE_SLACK and c1 < th.theorem_1_bound:
                    applicable.append(TWO_SOLUTIONS_T1)
                else:
                    notes.append(
                        f"Theorem 1 needs max slope {values.max():.10g} <= c = {c1:.10g} "
                        f"< λ·min p = {th.theorem_1_bound:.10g}"
                    )
            if t2_base:
                c2 = float(values.min()) if c is None else float(c)
                if values.min() >= c2 - SLOPE_SLACK and c2 > th.theorem_2_bound:
                    applicable.append(TWO_SOLUTIONS_T2)
                else:
                    notes.append(
                        f"Theorem 2 needs min slope {values.min():.10g} >= c = {c2:.10g} "
                        f"> 4ⁿ·max p = {th.theorem_2_bound:.10g}"
                    )

    logger.debug("applicable: %s", applicable)
    return TheoremReport(
        coercive_evidence=coercive,
        anticoercive_evidence=anticoercive,
        zero_slope=slopes,
        applicable=applicable,
        thresholds=th,
        c=c,
        notes=notes,
    )
