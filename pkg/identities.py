"""
Symbol identities as checked rewrite rules.

Each rule rewrites one factor (or a run of adjacent factors) of a BrauerExpr
and records its witnesses, so that a DerivationTrace can be replayed.

Rules:
- split: [(b, 0, ..., 0), b) and [0, b) are the trivial class
- as-shift: [w, b) = [w + F(tau) - tau, b)
- norm-twist: [w, b) = [w, b * g^(p^m)) (only p^m-th power norms)
- pad / unpad: [w, b)_{p^m} = [(0, w), b)_{p^(m+1)}
- raise: [w, b)_{p^m} = [(w, 0), b^p)_{p^(m+1)}
- merge-beta: [w, b) * [v, b) = [w + v, b)
- merge-omega: [w, b) * [w, c) = [w, b c), or one factor absorbing a split partner
- prop-shift: [w, b) = [w * [1 + x^(p^m)/b] * pi, b + x^(p^m))
- neat: [w, b)_{p^m} * [a, g)_p = [tau, d)_{p^m} * [d, g)_p
- merge-step: [tau, d)_{p^m} * [d, g)_p = [(d, tau), d g^(p^m))_{p^(m+1)}
- mul-p: p adjacent copies of [w, b)_{p^m} = [F(w) truncated, b)_{p^(m-1)}

Usage:
    from identities import apply_identity, validate_trace

    expr, step = apply_identity(RuleId.AS_SHIFT, expr, 0, {"tau": tau})
    report = validate_trace(trace)
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from derham import PiSolution, solve_pi
from exceptions import (
    DegenerateDeltaError,
    DegenerateShiftError,
    NotAPowerError,
    PatternMismatchError,
    SymbolEngineError,
    UnsupportedWitnessError,
)
from ring_base import FieldElem
from symbols import BrauerExpr, CyclicSymbol, DerivationTrace, RewriteStep, RuleId
from witt import (
    WittVector,
    extend,
    mul_by_p,
    teichmuller,
    unshift,
    verschiebung,
    wp_map,
)

logger = logging.getLogger(__name__)

Witnesses = Mapping[str, Any]
RuleResult = Tuple[List[CyclicSymbol], int, Dict[str, Any]]


# =============================================================================
# Symbol-level helpers
# =============================================================================

def is_split_pattern(s: CyclicSymbol) -> bool:
    """True for [(b, 0, ..., 0), b) and for [0, b)."""
    return s.omega.is_zero or s.omega == teichmuller(s.beta, s.level)


def p_multiple(s: CyclicSymbol) -> Optional[CyclicSymbol]:
    """p * [w, b)_{p^m} as a symbol of level m - 1, or None for the split class."""
    if s.level == 1:
        return None
    return CyclicSymbol(unshift(mul_by_p(s.omega)), s.beta)


def shift_symbol(s: CyclicSymbol, x: FieldElem) -> Tuple[CyclicSymbol, PiSolution]:
    """Move beta to beta + x^(p^m), correcting omega by a Teichmüller twist and pi."""
    solution = solve_pi(s.beta, x, s.p, s.level)
    twist = teichmuller(solution.shifted / s.beta, s.level)
    return CyclicSymbol(s.omega * twist * solution.pi, solution.shifted), solution


@dataclass(frozen=True)
class NeatData:
    """Shared-slot data for a level-m symbol and a level-1 symbol."""
    x: FieldElem
    delta: FieldElem
    tau: WittVector
    y: FieldElem
    pi: WittVector


def neat_data(a: CyclicSymbol, b: CyclicSymbol) -> NeatData:
    """
    x = alpha - beta, delta = beta + x^(p^m), tau = omega [delta/beta] pi and
    y = x + x^p + ... + x^(p^(m-1)) with F(y) - y = delta - alpha.

    Raises:
        DegenerateDeltaError: delta = 0
    """
    if b.level != 1:
        raise PatternMismatchError("Second factor must have level 1", rule=RuleId.NEAT.value)
    alpha = b.omega.coords[0]
    x = alpha - a.beta
    try:
        shifted, solution = shift_symbol(a, x)
    except DegenerateShiftError as e:
        raise DegenerateDeltaError(context={"x": str(x)}, original_error=e)
    p = a.p
    y = a.context.zero
    for i in range(a.level):
        y = y + x ** (p ** i)
    return NeatData(x=x, delta=shifted.beta, tau=shifted.omega, y=y, pi=solution.pi)


def merged_symbol(a: CyclicSymbol, b: CyclicSymbol) -> CyclicSymbol:
    """[(d, tau), d g^(p^m))_{p^(m+1)} from [tau, d)_{p^m} and [d, g)_p."""
    if b.level != 1 or b.omega.coords[0] != a.beta:
        raise PatternMismatchError(
            "Second factor must be [(delta), gamma)_p with delta the first factor's beta",
            rule=RuleId.MERGE_STEP.value,
        )
    gamma_power = b.beta ** (a.p ** a.level)
    omega = a.omega.replace((a.beta,) + a.omega.coords)
    return CyclicSymbol(omega, a.beta * gamma_power)


# =============================================================================
# Rules
# =============================================================================

def _mismatch(rule: RuleId, target: int, message: str) -> PatternMismatchError:
    return PatternMismatchError(message, rule=rule.value, target=target)


def _factors(expr: BrauerExpr, target: int, count: int, rule: RuleId) -> Tuple[CyclicSymbol, ...]:
    if target < 0 or target + count > len(expr):
        raise _mismatch(rule, target, f"{rule.value} needs {count} factor(s) at index {target}")
    return expr.factors[target:target + count]


def _witness(witnesses: Witnesses, key: str, rule: RuleId, kind: type):
    value = witnesses.get(key)
    if not isinstance(value, kind):
        raise UnsupportedWitnessError(
            f"{rule.value} needs a '{key}' witness of type {kind.__name__}",
            context={"rule": rule.value},
        )
    return value


def _split(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.SPLIT)
    if not is_split_pattern(s):
        raise _mismatch(RuleId.SPLIT, target, f"{s} is not of the form [(b, 0, ..., 0), b)")
    return [], 1, {}


def _as_shift(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.AS_SHIFT)
    tau = _witness(witnesses, "tau", RuleId.AS_SHIFT, WittVector)
    if tau.m != s.level or tau.ring != s.context:
        raise UnsupportedWitnessError("as-shift witness has the wrong length or field", context={"tau": str(tau)})
    return [CyclicSymbol(s.omega + wp_map(tau), s.beta)], 1, {"tau": tau}


def _norm_twist(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.NORM_TWIST)
    q = s.degree
    if "gamma" in witnesses:
        gamma = _witness(witnesses, "gamma", RuleId.NORM_TWIST, FieldElem)
    else:
        norm = _witness(witnesses, "norm", RuleId.NORM_TWIST, FieldElem)
        try:
            gamma = norm.root(q)
        except NotAPowerError as e:
            raise UnsupportedWitnessError(
                f"Norm {norm} is not a {q}-th power; only p^m-th power norms are supported",
                original_error=e,
            )
    if gamma.is_zero:
        raise UnsupportedWitnessError("norm-twist witness must be nonzero")
    return [CyclicSymbol(s.omega, s.beta * gamma ** q)], 1, {"gamma": gamma}


def _pad(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.PAD)
    return [CyclicSymbol(verschiebung(s.omega), s.beta)], 1, {}


def _unpad(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.UNPAD)
    if s.level < 2 or not s.omega.coords[0].is_zero:
        raise _mismatch(RuleId.UNPAD, target, f"{s} does not start with a zero coordinate")
    return [CyclicSymbol(unshift(s.omega), s.beta)], 1, {}


def _raise(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.RAISE)
    return [CyclicSymbol(extend(s.omega), s.beta.frobenius())], 1, {}


def _merge_beta(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    a, b = _factors(expr, target, 2, RuleId.MERGE_BETA)
    if a.beta != b.beta or a.level != b.level:
        raise _mismatch(RuleId.MERGE_BETA, target, "merge-beta needs equal beta and level")
    return [CyclicSymbol(a.omega + b.omega, a.beta)], 2, {}


def _merge_omega(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    if "partner" not in witnesses:
        a, b = _factors(expr, target, 2, RuleId.MERGE_OMEGA)
        if a.omega != b.omega:
            raise _mismatch(RuleId.MERGE_OMEGA, target, "merge-omega needs equal omega")
        return [CyclicSymbol(a.omega, a.beta * b.beta)], 2, {}

    s, = _factors(expr, target, 1, RuleId.MERGE_OMEGA)
    partner = _witness(witnesses, "partner", RuleId.MERGE_OMEGA, CyclicSymbol)
    times = witnesses.get("raise", 0)
    if not isinstance(times, int) or times < 0:
        raise UnsupportedWitnessError("'raise' must be a non-negative integer")
    for _ in range(times):
        s = CyclicSymbol(extend(s.omega), s.beta.frobenius())
    if not is_split_pattern(partner):
        raise _mismatch(RuleId.MERGE_OMEGA, target, f"Partner {partner} is not a split symbol")
    if partner.omega != s.omega:
        raise _mismatch(RuleId.MERGE_OMEGA, target, f"Partner omega differs from {s.omega}")
    return [CyclicSymbol(s.omega, s.beta * partner.beta)], 1, {"raise": times, "partner": partner}


def _prop_shift(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    s, = _factors(expr, target, 1, RuleId.PROP_SHIFT)
    x = _witness(witnesses, "x", RuleId.PROP_SHIFT, FieldElem)
    shifted, solution = shift_symbol(s, x)
    return [shifted], 1, {"x": x, "pi": solution.pi}


def _neat(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    a, b = _factors(expr, target, 2, RuleId.NEAT)
    data = neat_data(a, b)
    replacement = [
        CyclicSymbol(data.tau, data.delta),
        CyclicSymbol(b.omega.replace([data.delta]), b.beta),
    ]
    return replacement, 2, {"x": data.x, "delta": data.delta, "tau": data.tau, "pi": data.pi}


def _merge_step(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    a, b = _factors(expr, target, 2, RuleId.MERGE_STEP)
    return [merged_symbol(a, b)], 2, {"gamma": b.beta}


def _mul_p(expr: BrauerExpr, target: int, witnesses: Witnesses) -> RuleResult:
    p = expr.context.characteristic
    copies = _factors(expr, target, p, RuleId.MUL_P)
    if any(c != copies[0] for c in copies[1:]):
        raise _mismatch(RuleId.MUL_P, target, f"mul-p needs {p} identical adjacent factors")
    result = p_multiple(copies[0])
    return ([result] if result is not None else []), p, {}


_RULES: Dict[RuleId, Callable[[BrauerExpr, int, Witnesses], RuleResult]] = {
    RuleId.SPLIT: _split,
    RuleId.AS_SHIFT: _as_shift,
    RuleId.NORM_TWIST: _norm_twist,
    RuleId.PAD: _pad,
    RuleId.UNPAD: _unpad,
    RuleId.RAISE: _raise,
    RuleId.MERGE_BETA: _merge_beta,
    RuleId.MERGE_OMEGA: _merge_omega,
    RuleId.PROP_SHIFT: _prop_shift,
    RuleId.NEAT: _neat,
    RuleId.MERGE_STEP: _merge_step,
    RuleId.MUL_P: _mul_p,
}


def apply_identity(rule: Union[RuleId, str], expr: BrauerExpr, target: int,
                   witnesses: Optional[Witnesses] = None,
                   stage: Optional[RuleId] = None) -> Tuple[BrauerExpr, RewriteStep]:
    """
    Rewrite expr at factor index target with rule.

    Args:
        rule: Rule id (or its string value)
        expr: The expression to rewrite
        target: Index of the first factor the rule acts on
        witnesses: Rule-specific data (tau, gamma or norm, x, partner, raise)
        stage: Composite operation the step belongs to

    Returns:
        (rewritten expression, recorded step)

    Raises:
        PatternMismatchError: the factors do not match the rule's pattern
        UnsupportedWitnessError: a witness is missing or outside the supported form
    """
    rule = RuleId(rule)
    witnesses = witnesses or {}
    replacement, count, recorded = _RULES[rule](expr, target, witnesses)
    after = expr.splice(target, count, replacement)
    step = RewriteStep(rule=rule, target=target, before=expr, after=after, witnesses=recorded, stage=stage)
    logger.debug(f"{rule.value}@{target}: {len(expr)} -> {len(after)} factor(s)")
    return after, step


# =============================================================================
# Replay
# =============================================================================

@dataclass(frozen=True)
class TraceValidation:
    valid: bool
    failing_index: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.valid


def validate_step(step: RewriteStep) -> Optional[str]:
    """Reason the step fails replay, or None."""
    try:
        after, replayed = apply_identity(step.rule, step.before, step.target, step.witnesses)
    except SymbolEngineError as e:
        return f"{type(e).__name__}: {e.message}"
    if after != step.after:
        return f"replay gives {after}, step records {step.after}"
    for key, value in replayed.witnesses.items():
        if key in step.witnesses and step.witnesses[key] != value:
            return f"witness '{key}' recomputes to {value}"
    return None


def validate_trace(trace: DerivationTrace) -> TraceValidation:
    """
    Replay every step and check that consecutive steps chain.

    Returns:
        TraceValidation with the index of the first failing step, if any
    """
    previous: Optional[BrauerExpr] = None
    for index, step in enumerate(trace):
        if previous is not None and step.before != previous:
            return TraceValidation(False, index, "step does not start where the previous one ended")
        reason = validate_step(step)
        if reason is not None:
            logger.info(f"Trace step {index} ({step.rule.value}) fails: {reason}")
            return TraceValidation(False, index, reason)
        previous = step.after
    return TraceValidation(True)
