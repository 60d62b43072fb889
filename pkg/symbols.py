"""
Cyclic symbols, formal tensor products and derivation traces.

A CyclicSymbol [omega, beta)_{p^m} pairs a Witt vector omega of length m with
a nonzero field element beta. A BrauerExpr is an ordered tensor product of
symbols over one field; the empty product is the split class. Rewrites of a
BrauerExpr are recorded as RewriteSteps collected in a DerivationTrace.
"""
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from exceptions import InvalidSymbolError, MismatchedParametersError
from ring_base import FieldContext, FieldElem
from witt import WittVector

logger = logging.getLogger(__name__)


class RuleId(str, Enum):
    """Rewrite rules understood by apply_identity."""
    SPLIT = "split"
    AS_SHIFT = "as-shift"
    NORM_TWIST = "norm-twist"
    PAD = "pad"
    UNPAD = "unpad"
    RAISE = "raise"
    MERGE_OMEGA = "merge-omega"
    MERGE_BETA = "merge-beta"
    PROP_SHIFT = "prop-shift"
    NEAT = "neat"
    MERGE_STEP = "merge-step"
    MUL_P = "mul-p"


class CyclicSymbol:
    """[omega, beta)_{p^m} with m = len(omega)."""

    __slots__ = ("omega", "beta")

    def __init__(self, omega: WittVector, beta: FieldElem):
        if not isinstance(beta, FieldElem):
            raise InvalidSymbolError("beta must be a field element")
        if beta.is_zero:
            raise InvalidSymbolError("beta must be nonzero", context={"omega": str(omega)})
        if omega.ring != beta.context:
            raise MismatchedParametersError(
                "omega and beta live over different fields",
                context={"omega": str(omega), "beta": str(beta)},
            )
        self.omega = omega
        self.beta = beta

    @property
    def level(self) -> int:
        return self.omega.m

    @property
    def p(self) -> int:
        return self.omega.p

    @property
    def degree(self) -> int:
        return self.p ** self.level

    @property
    def context(self) -> FieldContext:
        return self.beta.context

    def to_expr(self) -> "BrauerExpr":
        return BrauerExpr((self,), self.context)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclicSymbol):
            return NotImplemented
        return self.omega == other.omega and self.beta == other.beta

    def __hash__(self) -> int:
        return hash((self.omega, self.beta))

    def __str__(self) -> str:
        return f"[{self.omega}, {self.beta})_{{{self.degree}}}"

    def __repr__(self) -> str:
        return f"CyclicSymbol{self}"


class BrauerExpr:
    """An ordered tensor product of CyclicSymbols; empty means split."""

    __slots__ = ("factors", "context")

    def __init__(self, factors: Sequence[CyclicSymbol], context: FieldContext):
        factors = tuple(factors)
        for factor in factors:
            if factor.context != context:
                raise MismatchedParametersError(
                    "Tensor factors must share one field",
                    context={"factor": str(factor), "field": str(context)},
                )
        self.factors: Tuple[CyclicSymbol, ...] = factors
        self.context = context

    @property
    def is_split(self) -> bool:
        return not self.factors

    @property
    def max_level(self) -> int:
        return max((f.level for f in self.factors), default=0)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[CyclicSymbol]:
        return iter(self.factors)

    def __getitem__(self, index: int) -> CyclicSymbol:
        return self.factors[index]

    def __add__(self, other: "BrauerExpr") -> "BrauerExpr":
        """Tensor product (concatenation of factor lists)."""
        if self.context != other.context:
            raise MismatchedParametersError("Tensor factors must share one field")
        return BrauerExpr(self.factors + other.factors, self.context)

    def splice(self, start: int, count: int, replacement: Sequence[CyclicSymbol]) -> "BrauerExpr":
        """Replace factors[start:start+count] by replacement."""
        return BrauerExpr(
            self.factors[:start] + tuple(replacement) + self.factors[start + count:],
            self.context,
        )

    def tensor_power(self, k: int) -> "BrauerExpr":
        """
        The k-fold tensor power, with the k copies of each factor adjacent.

        Factors commute in the Brauer group, so grouping the copies gives the
        same class as concatenating k copies of the expression.
        """
        if k < 1:
            raise InvalidSymbolError("Tensor power exponent must be positive", context={"k": k})
        return BrauerExpr(tuple(f for f in self.factors for _ in range(k)), self.context)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BrauerExpr):
            return NotImplemented
        return self.context == other.context and self.factors == other.factors

    def __hash__(self) -> int:
        return hash((self.context, self.factors))

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " * ".join(str(f) for f in self.factors)

    def __repr__(self) -> str:
        return f"BrauerExpr({self})"


# =============================================================================
# Traces
# =============================================================================

def format_witness(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_witness(v) for v in value) + "]"
    return str(value)


@dataclass(frozen=True)
class RewriteStep:
    """
    One application of a rewrite rule.

    target is the index of the (first) rewritten factor in before. stage names
    the composite operation that emitted the step, when there is one.
    """
    rule: RuleId
    target: int
    before: BrauerExpr
    after: BrauerExpr
    witnesses: Mapping[str, Any] = field(default_factory=dict, hash=False)
    stage: Optional[RuleId] = None

    def embed(self, prefix: Sequence[CyclicSymbol] = (), suffix: Sequence[CyclicSymbol] = ()) -> "RewriteStep":
        """The same step acting inside prefix * before * suffix."""
        prefix, suffix = tuple(prefix), tuple(suffix)
        context = self.before.context
        return replace(
            self,
            target=self.target + len(prefix),
            before=BrauerExpr(prefix + self.before.factors + suffix, context),
            after=BrauerExpr(prefix + self.after.factors + suffix, context),
        )

    def with_stage(self, stage: RuleId) -> "RewriteStep":
        return replace(self, stage=stage)

    def to_dict(self, index: int) -> Dict[str, Any]:
        data = {
            "index": index,
            "rule": self.rule.value,
            "target": self.target,
            "before": str(self.before),
            "after": str(self.after),
            "witnesses": {k: format_witness(v) for k, v in self.witnesses.items()},
        }
        if self.stage is not None:
            data["stage"] = self.stage.value
        return data

    def __str__(self) -> str:
        witnesses = ", ".join(f"{k}={format_witness(v)}" for k, v in self.witnesses.items())
        suffix = f" {{{witnesses}}}" if witnesses else ""
        return f"{self.rule.value}@{self.target}{suffix}: {self.before} => {self.after}"


@dataclass(frozen=True)
class DerivationTrace:
    """An immutable, ordered list of RewriteSteps."""
    steps: Tuple[RewriteStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[RewriteStep]:
        return iter(self.steps)

    def __getitem__(self, index: int) -> RewriteStep:
        return self.steps[index]

    def append(self, step: RewriteStep) -> "DerivationTrace":
        return DerivationTrace(self.steps + (step,))

    def extend(self, steps) -> "DerivationTrace":
        return DerivationTrace(self.steps + tuple(steps))

    def embed(self, prefix: Sequence[CyclicSymbol] = (), suffix: Sequence[CyclicSymbol] = ()) -> "DerivationTrace":
        return DerivationTrace(tuple(step.embed(prefix, suffix) for step in self.steps))

    @property
    def start(self) -> Optional[BrauerExpr]:
        return self.steps[0].before if self.steps else None

    @property
    def result(self) -> Optional[BrauerExpr]:
        return self.steps[-1].after if self.steps else None

    def is_chained(self) -> bool:
        return all(a.after == b.before for a, b in zip(self.steps, self.steps[1:]))

    def rules(self) -> List[str]:
        return [step.rule.value for step in self.steps]
