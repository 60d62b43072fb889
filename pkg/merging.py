"""
Composite symbol operations built from the checked identities.

Features:
- mul_class_by_p: the p-th tensor power of one symbol
- proposition_shift: move beta to beta + x^(p^m)
- neat_pair: give a level-m symbol and a level-1 symbol a shared slot
- merge_step: fuse [tau, d)_{p^m} * [d, g)_p into one symbol of level m + 1
- fold_prime_list: fold degree-p symbols into one cyclic symbol
- albert_reduce: the p-th power recursion for mixed levels, halting with a
  certificate where no constructive step is available

Every operation returns a DerivationTrace that validate_trace replays.

Usage:
    from merging import fold_prime_list

    symbol, trace = fold_prime_list(symbols)
"""
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from exceptions import DegenerateDeltaError, InvalidSymbolError, PatternMismatchError
from identities import apply_identity, neat_data, p_multiple
from observability import track_performance
from ring_base import FieldElem
from symbols import BrauerExpr, CyclicSymbol, DerivationTrace, RewriteStep, RuleId
from witt import WittVector, extend, teichmuller

logger = logging.getLogger(__name__)


def mul_class_by_p(s: CyclicSymbol) -> Optional[CyclicSymbol]:
    """
    The class of s^(tensor p) as a single symbol.

    p-fold merge-beta turns omega into p * omega = (0, w1^p, ..., w_{m-1}^p);
    unpad then drops the leading zero.

    Returns:
        [(w1^p, ..., w_{m-1}^p), beta)_{p^(m-1)}, or None (split) at level 1
    """
    return p_multiple(s)


def proposition_shift(s: CyclicSymbol, x: FieldElem) -> Tuple[CyclicSymbol, RewriteStep]:
    """
    [w, b)_{p^m} = [w * [1 + x^(p^m)/b] * pi, b + x^(p^m))_{p^m}.

    Raises:
        DegenerateShiftError: b + x^(p^m) = 0
    """
    after, step = apply_identity(RuleId.PROP_SHIFT, s.to_expr(), 0, {"x": x})
    return after[0], step


def neat_pair(a: CyclicSymbol, b: CyclicSymbol) -> Tuple[WittVector, FieldElem, DerivationTrace]:
    """
    Rewrite a = [w, beta)_{p^m} and b = [alpha, gamma)_p to [tau, delta) and
    [delta, gamma) with x = alpha - beta and delta = beta + x^(p^m).

    The trace has a prop-shift on factor 0 and an as-shift on factor 1 with
    witness y = x + x^p + ... + x^(p^(m-1)).

    Raises:
        DegenerateDeltaError: delta = 0
    """
    data = neat_data(a, b)
    expr = BrauerExpr((a, b), a.context)
    expr, shift = apply_identity(RuleId.PROP_SHIFT, expr, 0, {"x": data.x}, stage=RuleId.NEAT)
    expr, slot = apply_identity(
        RuleId.AS_SHIFT, expr, 1, {"tau": b.omega.replace([data.y])}, stage=RuleId.NEAT
    )
    if expr[1].omega.coords[0] != data.delta:
        raise PatternMismatchError("as-shift did not move alpha to delta", rule=RuleId.AS_SHIFT.value, target=1)
    logger.debug(f"neat_pair: x={data.x}, delta={data.delta}")
    return data.tau, data.delta, DerivationTrace((shift, slot))


def merge_step(a: CyclicSymbol, b: CyclicSymbol) -> Tuple[CyclicSymbol, DerivationTrace]:
    """
    [tau, d)_{p^m} * [d, g)_p = [(d, tau), d g^(p^m))_{p^(m+1)}.

    Steps:
        1. norm-twist factor 0 by g: [tau, d g^(p^m))_{p^m}
        2. pad factor 0: [(0, tau), d g^(p^m))_{p^(m+1)}
        3. raise factor 1 m times and absorb the split partner
           [(d, 0, ..., 0), d)_{p^(m+1)}: [(d, 0, ..., 0), d g^(p^m))_{p^(m+1)}
        4. merge-beta

    Raises:
        PatternMismatchError: b is not [(d), g)_p with d = a.beta
    """
    if b.level != 1 or b.omega.coords[0] != a.beta:
        raise PatternMismatchError(
            f"merge_step needs [(delta), gamma)_p with delta = {a.beta}, got {b}",
            rule=RuleId.MERGE_STEP.value,
            target=1,
        )
    m = a.level
    delta = a.beta
    steps: List[RewriteStep] = []
    expr = BrauerExpr((a, b), a.context)

    expr, step = apply_identity(RuleId.NORM_TWIST, expr, 0, {"gamma": b.beta}, stage=RuleId.MERGE_STEP)
    steps.append(step)
    expr, step = apply_identity(RuleId.PAD, expr, 0, stage=RuleId.MERGE_STEP)
    steps.append(step)
    partner = CyclicSymbol(teichmuller(delta, m + 1), delta)
    expr, step = apply_identity(
        RuleId.MERGE_OMEGA, expr, 1, {"raise": m, "partner": partner}, stage=RuleId.MERGE_STEP
    )
    steps.append(step)
    expr, step = apply_identity(RuleId.MERGE_BETA, expr, 0, stage=RuleId.MERGE_STEP)
    steps.append(step)
    return expr[0], DerivationTrace(tuple(steps))


@track_performance
def fold_prime_list(symbols: Sequence[CyclicSymbol]) -> Tuple[CyclicSymbol, DerivationTrace]:
    """
    Fold degree-p symbols left to right into one symbol of level len(symbols).

    Args:
        symbols: Nonempty list of level-1 symbols over one field

    Returns:
        (symbol, trace) where the trace starts at the full tensor product

    Raises:
        DegenerateDeltaError: some intermediate delta is zero (carries the step index)
    """
    symbols = list(symbols)
    if not symbols:
        raise InvalidSymbolError("fold_prime_list needs at least one symbol")
    for index, s in enumerate(symbols):
        if s.level != 1:
            raise InvalidSymbolError(f"Factor {index} has level {s.level}, expected 1", context={"index": index})

    acc = symbols[0]
    trace = DerivationTrace()
    for k in range(1, len(symbols)):
        rest = symbols[k + 1:]
        try:
            _, _, neat = neat_pair(acc, symbols[k])
        except DegenerateDeltaError as e:
            raise DegenerateDeltaError(f"Degenerate shift at fold step {k}", step_index=k, original_error=e)
        shifted = neat.result
        acc, merge = merge_step(shifted[0], shifted[1])
        trace = trace.extend(neat.embed(suffix=rest)).extend(merge.embed(suffix=rest))
    logger.info(f"Folded {len(symbols)} symbol(s) into level {acc.level} with {len(trace)} step(s)")
    return acc, trace


# =============================================================================
# The p-th power recursion
# =============================================================================

@dataclass(frozen=True)
class PowerLift:
    """One recursion level: expr^(tensor p) rewritten to the p-multiples of its factors."""
    expr: BrauerExpr
    multiples: BrauerExpr
    trace: DerivationTrace

    def to_dict(self) -> Dict[str, Any]:
        return {
            "expr": str(self.expr),
            "multiples": str(self.multiples),
            "trace": [step.to_dict(i) for i, step in enumerate(self.trace)],
        }


@dataclass(frozen=True)
class HaltReport:
    """
    Where the recursion stops.

    source is the class reached after `depth` levels, i.e. the p^depth-th
    tensor power of the input. source is Brauer equivalent to
    b_expr * cyclic_factor, and the certificate rewrites the p-th tensor
    power of b_expr to the split class. lifts go from the input down to
    source, one per level; at depth 0 there are none and source is the input.
    """
    b_expr: BrauerExpr
    cyclic_factor: CyclicSymbol
    certificate: DerivationTrace
    source: BrauerExpr
    lifts: Tuple[PowerLift, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.lifts)

    @property
    def input_expr(self) -> BrauerExpr:
        return self.lifts[0].expr if self.lifts else self.source

    @property
    def power(self) -> int:
        return self.source.context.characteristic ** self.depth

    def lifted(self, lift: PowerLift) -> "HaltReport":
        """The same halt seen one level further up."""
        return replace(self, lifts=(lift,) + self.lifts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input": str(self.input_expr),
            "depth": self.depth,
            "power": self.power,
            "source": str(self.source),
            "B": str(self.b_expr),
            "cyclic_factor": str(self.cyclic_factor),
            "certificate": [step.to_dict(i) for i, step in enumerate(self.certificate)],
            "lifts": [lift.to_dict() for lift in self.lifts],
        }


@dataclass(frozen=True)
class AlbertResult:
    cyclic: Optional[CyclicSymbol]
    trace: DerivationTrace
    halt: Optional[HaltReport] = None

    @property
    def halted(self) -> bool:
        return self.halt is not None


def _collapse_power(expr: BrauerExpr) -> Tuple[BrauerExpr, List[RewriteStep]]:
    """Rewrite expr^(tensor p) with mul-p, factor by factor; level-1 factors drop out."""
    p = expr.context.characteristic
    steps: List[RewriteStep] = []
    current = expr.tensor_power(p)
    index = 0
    while index < len(current):
        current, step = apply_identity(RuleId.MUL_P, current, index)
        steps.append(step)
        if len(step.after) + p - 1 == len(step.before):
            index += 1
    return current, steps


def _certificate(expr: BrauerExpr, omega_star: WittVector, beta_star: FieldElem,
                 inner: DerivationTrace) -> Tuple[BrauerExpr, DerivationTrace]:
    twist = CyclicSymbol(-extend(omega_star), beta_star)
    b_expr = expr + twist.to_expr()
    current, steps = _collapse_power(b_expr)

    # current = [p-multiples of expr] * [-F(omega*), beta*)
    suffix = current.factors[-1:]
    lifted = inner.embed(suffix=suffix)
    steps.extend(lifted)
    current = lifted.result if len(lifted) else current

    for rule, witnesses in (
        (RuleId.MERGE_BETA, {}),
        (RuleId.AS_SHIFT, {"tau": omega_star}),
        (RuleId.SPLIT, {}),
    ):
        current, step = apply_identity(rule, current, 0, witnesses)
        steps.append(step)
    return b_expr, DerivationTrace(tuple(steps))


def _albert(expr: BrauerExpr, depth: int) -> AlbertResult:
    if len(expr) == 1:
        return AlbertResult(cyclic=expr[0], trace=DerivationTrace())
    if expr.max_level == 1:
        symbol, trace = fold_prime_list(expr.factors)
        return AlbertResult(cyclic=symbol, trace=trace)

    multiples = BrauerExpr(
        tuple(m for m in (mul_class_by_p(s) for s in expr) if m is not None), expr.context
    )
    inner = _albert(multiples, depth + 1)
    if inner.halted:
        _, steps = _collapse_power(expr)
        lift = PowerLift(expr=expr, multiples=multiples, trace=DerivationTrace(tuple(steps)))
        return replace(inner, halt=inner.halt.lifted(lift))

    omega_star, beta_star = inner.cyclic.omega, inner.cyclic.beta
    b_expr, certificate = _certificate(expr, omega_star, beta_star, inner.trace)
    factor = CyclicSymbol(extend(omega_star), beta_star)
    logger.info(f"Recursion halts at depth {depth}: B has {len(b_expr)} factor(s)")
    return AlbertResult(
        cyclic=None,
        trace=DerivationTrace(),
        halt=HaltReport(b_expr=b_expr, cyclic_factor=factor, certificate=certificate, source=expr),
    )


@track_performance
def albert_reduce(expr: BrauerExpr) -> AlbertResult:
    """
    Reduce a tensor product of symbols towards a single cyclic symbol.

    A single symbol is returned as is and a list of level-1 symbols is folded.
    Otherwise the p-th power class is reduced recursively to [w*, b*)_{p^t},
    and the input is written as B * [(w*, 0), b*)_{p^(t+1)} with
    B = expr * [-(w*, 0), b*)_{p^(t+1)}. B has exponent dividing p, which the
    returned certificate shows; decomposing B further is not constructive.

    When the p-th power class itself halts, the report describes a p-power
    of the input: halt.source is input^(tensor halt.power), and halt.lifts
    hold the mul-p rewrite of each level down to it.

    Raises:
        InvalidSymbolError: expr is empty
    """
    if expr.is_split:
        raise InvalidSymbolError("albert_reduce needs a nonempty expression")
    return _albert(expr, 0)
