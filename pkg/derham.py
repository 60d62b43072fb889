"""
Reduction of de Rham-Witt 1-forms over a single generator.

A OneForm is a formal sum of terms n * c * dV^j[a] with an integer multiplier n,
a depth j, a Witt coefficient c and a field atom a. reduce_form rewrites a form
into mu * d[g] for a chosen generator g with the rules:

    R1  linearity; terms with p^(m - depth) | n vanish
    R2  Leibniz on Teichmüller monomials, d[h g^k] = k [h g^(k-1)] d[g]
    R3  constants (p^(m-v)-th powers for multipliers of valuation v) have d = 0
    R4  constant Teichmüller coefficient parts move inside V
    R5  dV^j[f^p] = p dV^(j-1)[f]
    R6  atoms that are sums expand into Teichmüller monomials plus V-carries

At depth j >= 1 a monomial h g^k with p not dividing k contributes
k V^j[h g^(k-1)] d[g].

Generators that differ by a p^m-th power share a constant-free part b, and
every reduction runs against d[b]. Coefficients over d[g] are then quotients
by the coefficient of d[g] itself, so mu(g1 -> g2) * mu(g2 -> g1) = 1.

solve_pi uses the reducer to find the correction vector pi with
pi * d[beta + x^(p^m)] = d[beta].
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from cache_utils import LRUCache
from exceptions import (
    DegenerateShiftError,
    MismatchedParametersError,
    NotReducibleError,
)
from linalg import solve
from observability import track_performance
from ring_base import FieldContext, FieldElem
from witt import (
    WittVector,
    scale,
    shifted_teichmuller,
    teichmuller,
    telescope,
    witt_inv,
    witt_one,
    witt_zero,
)

logger = logging.getLogger(__name__)

_BASIS_CACHE = LRUCache(max_size=128, name="generator-powers")


class ReductionOrder(str, Enum):
    """Admissible rule orderings for reduce_form."""
    FIFO = "fifo"
    LIFO = "lifo"
    ABSORB = "absorb"


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class FormTerm:
    """n * coefficient * dV^depth[atom]."""
    multiplier: int
    depth: int
    coefficient: WittVector
    atom: FieldElem

    def __str__(self) -> str:
        if self.depth == 0:
            operator = "d"
        elif self.depth == 1:
            operator = "dV"
        else:
            operator = f"dV^{self.depth}"
        return f"{self.multiplier} * {self.coefficient} {operator}[{self.atom}]"


@dataclass(frozen=True)
class FormStep:
    """One reducer action: the rule used, the term it acted on, the outcome."""
    rule: str
    term: str
    detail: str

    def to_dict(self) -> Dict[str, str]:
        return {"rule": self.rule, "term": self.term, "detail": self.detail}


class OneForm:
    """A formal sum of FormTerms sharing (p, m, field)."""

    def __init__(self, context: FieldContext, m: int, terms: Sequence[FormTerm] = ()):
        self.context = context
        self.p = int(context.p)
        self.m = m
        kept = []
        for term in terms:
            if term.coefficient.m != m or term.coefficient.ring != context:
                raise MismatchedParametersError(
                    "Form term does not match the form's length or field",
                    context={"term": str(term)},
                )
            if self._vanishes(term):
                continue
            kept.append(term)
        self.terms: Tuple[FormTerm, ...] = tuple(kept)

    def _vanishes(self, term: FormTerm) -> bool:
        if term.atom.is_zero or term.coefficient.is_zero:
            return True
        if term.depth >= self.m:
            return True
        return term.multiplier % self.p ** (self.m - term.depth) == 0

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def __add__(self, other: "OneForm") -> "OneForm":
        if (self.context, self.m) != (other.context, other.m):
            raise MismatchedParametersError("Forms disagree on field or length")
        return OneForm(self.context, self.m, self.terms + other.terms)

    def __neg__(self) -> "OneForm":
        return OneForm(
            self.context,
            self.m,
            [FormTerm(-t.multiplier, t.depth, t.coefficient, t.atom) for t in self.terms],
        )

    def __sub__(self, other: "OneForm") -> "OneForm":
        return self + (-other)

    def scaled_by(self, coefficient: WittVector) -> "OneForm":
        """Multiply every term's Witt coefficient by coefficient."""
        return OneForm(
            self.context,
            self.m,
            [FormTerm(t.multiplier, t.depth, t.coefficient * coefficient, t.atom) for t in self.terms],
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(t) for t in self.terms)

    def __repr__(self) -> str:
        return f"OneForm({self})"


def d_of_witt(w: WittVector) -> OneForm:
    """d(w) = sum_j dV^j[w_{j+1}] over the telescope of w."""
    unit = witt_one(w.ring, w.m, w.p)
    terms = [FormTerm(1, depth, unit, value) for depth, value in telescope(w) if not value.is_zero]
    return OneForm(w.ring, w.m, terms)


def teichmuller_differential(atom: FieldElem, m: int, depth: int = 0,
                             coefficient: Optional[WittVector] = None, multiplier: int = 1) -> OneForm:
    """The single-term form multiplier * coefficient * dV^depth[atom]."""
    context = atom.context
    if coefficient is None:
        coefficient = witt_one(context, m)
    return OneForm(context, m, [FormTerm(multiplier, depth, coefficient, atom)])


# =============================================================================
# Decomposition of atoms over powers of the generator
# =============================================================================

def _single_variable(generator: FieldElem) -> Optional[int]:
    """Index i when generator is the bare indeterminate t_i."""
    if not generator.is_polynomial or len(generator.numer) != 1:
        return None
    (exps, coeff), = generator.numer.items()
    if generator.context.coefficient(coeff) != 1 or sum(exps) != 1:
        return None
    return exps.index(1)


def _power_coordinates(generator: FieldElem, q: int) -> List[Dict[Tuple[int, ...], FieldElem]]:
    def build() -> List[Dict[Tuple[int, ...], FieldElem]]:
        table = []
        power = generator.context.one
        for _ in range(q):
            table.append(power.q_coordinates(q))
            power = power * generator
        return table

    return _BASIS_CACHE.get_or_create((generator, q), build)


def decompose(atom: FieldElem, generator: FieldElem, q: int) -> List[Tuple[int, FieldElem]]:
    """
    Write atom = sum_{k<q} h_k * generator^k with every h_k a q-th power.

    Args:
        atom: The element to decompose
        generator: The generator g
        q: A power of p

    Returns:
        The nonzero pairs (k, h_k), k ascending

    Raises:
        NotReducibleError: atom is not in F^q[g], or g is a p-th power
    """
    if atom.is_zero:
        return []
    context = atom.context
    coords = atom.q_coordinates(q)
    origin = tuple(0 for _ in context.names)
    if set(coords) <= {origin}:
        return [(0, atom)]

    index = _single_variable(generator)
    if index is not None:
        pieces = []
        for residue, value in coords.items():
            if any(k for i, k in enumerate(residue) if i != index):
                raise NotReducibleError(
                    f"Atom is not a polynomial in {generator} over the constants",
                    term=str(atom),
                )
            pieces.append((residue[index], value))
        return sorted(pieces, key=lambda piece: piece[0])

    if generator.is_pth_power():
        raise NotReducibleError(f"Generator {generator} is a p-th power", term=str(atom))

    basis = _power_coordinates(generator, q)
    residues = sorted(set(coords).union(*[set(b) for b in basis]))
    zero = context.zero
    matrix = [[basis[k].get(r, zero) for k in range(q)] for r in residues]
    rhs = [coords.get(r, zero) for r in residues]
    solution = solve(matrix, rhs, zero)
    if solution is None:
        raise NotReducibleError(
            f"Atom is not a polynomial in {generator} over the constants",
            term=str(atom),
        )
    return [(k, h) for k, h in enumerate(solution) if not h.is_zero]


# =============================================================================
# The reducer
# =============================================================================

class _Reducer:
    def __init__(self, context: FieldContext, m: int, generator: FieldElem, log: Optional[List[FormStep]]):
        self.context = context
        self.p = int(context.p)
        self.m = m
        self.generator = generator
        self.log = log

    def record(self, rule: str, term: FormTerm, detail: str) -> None:
        if self.log is not None:
            self.log.append(FormStep(rule, str(term), detail))

    def zero(self) -> WittVector:
        return witt_zero(self.context, self.m)

    def step(self, term: FormTerm) -> Tuple[WittVector, List[FormTerm]]:
        """Contribution to mu and the follow-up terms for one term."""
        p, m = self.p, self.m
        n, depth = term.multiplier, term.depth
        if n == 0 or term.atom.is_zero or term.coefficient.is_zero:
            self.record("R1", term, "zero")
            return self.zero(), []
        v = _valuation(n, p)
        if v + depth >= m:
            self.record("R1", term, f"p^{m} kills the term")
            return self.zero(), []

        q = p ** (m - v)
        pieces = decompose(term.atom, self.generator, q)
        if not pieces:
            return self.zero(), []

        if len(pieces) > 1:
            return self.zero(), self._expand_sum(term, pieces)

        k, h = pieces[0]
        g = self.generator
        if depth >= 1 and k % p == 0:
            root = (h * g ** k).pth_root()
            child = FormTerm(n * p, depth - 1, term.coefficient, root)
            self.record("R5", term, str(child))
            return self.zero(), [child]
        if k == 0:
            self.record("R3", term, "constant atom")
            return self.zero(), []

        base = h * g ** (k - 1)
        contribution = scale(n * k, shifted_teichmuller(base, depth, m)) * term.coefficient
        self.record("R2", term, f"{n * k} * V^{depth}[{base}] d[{g}]")
        return contribution, []

    def _expand_sum(self, term: FormTerm, pieces: List[Tuple[int, FieldElem]]) -> List[FormTerm]:
        g = self.generator
        inner_m = self.m - term.depth
        monomials = [h * g ** k for k, h in pieces]
        total = witt_zero(self.context, inner_m)
        for u in monomials:
            total = total + teichmuller(u, inner_m)
        children = [FormTerm(term.multiplier, term.depth, term.coefficient, u) for u in monomials]
        for i in range(1, inner_m):
            carry = total.coords[i]
            if not carry.is_zero:
                children.append(FormTerm(-term.multiplier, term.depth + i, term.coefficient, carry))
        self.record("R6", term, f"{len(monomials)} monomials, {len(children) - len(monomials)} carries")
        return children

    def absorb(self, term: FormTerm) -> List[FormTerm]:
        """Split the coefficient by telescope and move constant Teichmüller parts inside V."""
        p, m = self.p, self.m
        if term.multiplier % p ** m == 0:
            return []
        q = p ** (m - _valuation(term.multiplier, p))
        unit = witt_one(self.context, m)
        pieces = []
        for i, c in telescope(term.coefficient):
            if c.is_zero:
                continue
            if i == 0 and _is_power(c, q):
                absorbed = c ** (p ** term.depth) * term.atom
                pieces.append(FormTerm(term.multiplier, term.depth, unit, absorbed))
                self.record("R4", term, f"[{c}] absorbed")
            else:
                coefficient = shifted_teichmuller(c, i, m)
                pieces.append(FormTerm(term.multiplier, term.depth, coefficient, term.atom))
        return pieces


def _is_power(value: FieldElem, q: int) -> bool:
    p = int(value.context.p)
    while q > 1:
        if not value.is_pth_power():
            return False
        value = value.pth_root()
        q //= p
    return True


def constant_free_part(generator: FieldElem, m: int) -> FieldElem:
    """
    The generator with its p^m-th power component removed.

    g and g + c with c a p^m-th power have the same constant-free part, so
    forms over either generator are reduced against one shared element.
    """
    q = int(generator.context.p) ** m
    origin = tuple(0 for _ in generator.context.names)
    constant = generator.q_coordinates(q).get(origin)
    if constant is None:
        return generator
    return generator - constant


def _reduce_worklist(reducer: _Reducer, form: OneForm, order: ReductionOrder) -> WittVector:
    work: Deque[FormTerm] = deque()
    for term in form.terms:
        if order == ReductionOrder.ABSORB:
            work.extend(reducer.absorb(term))
        else:
            work.append(term)

    mu = reducer.zero()
    while work:
        term = work.pop() if order == ReductionOrder.LIFO else work.popleft()
        contribution, children = reducer.step(term)
        if not contribution.is_zero:
            mu = mu + contribution
        work.extend(children)
    return mu


def reduce_form(form: OneForm, generator: FieldElem,
                order: ReductionOrder = ReductionOrder.FIFO,
                log: Optional[List[FormStep]] = None) -> WittVector:
    """
    Rewrite form as mu * d[generator] and return mu.

    Terms are reduced against the constant-free part b of the generator;
    when b differs from the generator, mu is the quotient of the form's
    coefficient over d[b] by that of d[generator].

    Args:
        form: The form to reduce
        generator: Nonzero field element g
        order: Worklist discipline; all orders give the same mu
        log: Optional list receiving one FormStep per rule application

    Returns:
        mu (possibly zero)

    Raises:
        NotReducibleError: a term could not be expressed over d[generator]
    """
    if generator.is_zero:
        raise NotReducibleError("Generator must be nonzero")
    if generator.context != form.context:
        raise MismatchedParametersError("Generator and form live over different fields")

    anchor = constant_free_part(generator, form.m)
    if anchor.is_zero:
        raise NotReducibleError(f"Generator {generator} is a p^{form.m}-th power", term=str(generator))
    reducer = _Reducer(form.context, form.m, anchor, log)
    mu = _reduce_worklist(reducer, form, order)
    if anchor == generator:
        return mu

    reducer.record("R3", FormTerm(1, 0, witt_one(form.context, form.m), generator), f"reduced against d[{anchor}]")
    generator_mu = _reduce_worklist(reducer, teichmuller_differential(generator, form.m), order)
    if not generator_mu.is_unit:
        raise NotReducibleError(f"d[{generator}] is not a unit multiple of d[{anchor}]", term=str(generator))
    return mu * witt_inv(generator_mu)


# =============================================================================
# The correction vector
# =============================================================================

@dataclass(frozen=True)
class PiSolution:
    """pi with pi * d[shifted] = d[target], and mu = pi^-1."""
    pi: WittVector
    mu: WittVector
    target: FieldElem
    shifted: FieldElem
    carry: WittVector
    derivation: Tuple[FormStep, ...] = field(default_factory=tuple)

    def to_dict(self) -> Dict[str, object]:
        return {
            "pi": str(self.pi),
            "mu": str(self.mu),
            "beta": str(self.target),
            "delta": str(self.shifted),
            "carry": str(self.carry),
            "derivation": [step.to_dict() for step in self.derivation],
        }


@track_performance
def solve_pi(beta: FieldElem, x: FieldElem, p: int, m: int) -> PiSolution:
    """
    Correction vector for the shift beta -> beta + x^(p^m).

    With X = x^(p^m), [beta] + [X] = (delta, c2, ..., cm), so
    d[delta] = d[beta] + d[X] - sum_j dV^j[c_{j+1}]; reducing against beta
    gives mu with d[delta] = mu d[beta], and pi = mu^-1.

    Raises:
        DegenerateShiftError: beta = 0 or beta + x^(p^m) = 0
        NotReducibleError: the reducer stalled
    """
    context = beta.context
    if int(p) != int(context.p):
        raise MismatchedParametersError("Prime differs from the field characteristic", context={"p": p})
    if beta.is_zero:
        raise DegenerateShiftError("beta must be nonzero")
    big_x = x ** (int(p) ** m)
    delta = beta + big_x
    if delta.is_zero:
        raise DegenerateShiftError("Degenerate shift: beta + x^(p^m) = 0", context={"beta": str(beta)})

    unit = witt_one(context, m)
    carry = teichmuller(beta, m) + teichmuller(big_x, m)
    terms = [FormTerm(1, 0, unit, beta), FormTerm(1, 0, unit, big_x)]
    terms += [FormTerm(-1, depth, unit, value) for depth, value in telescope(carry)[1:]]
    form = OneForm(context, m, terms)

    log: List[FormStep] = []
    mu = reduce_form(form, beta, log=log)
    if not mu.is_unit:
        raise NotReducibleError("Reduced coefficient of d[beta] is not a unit", term=str(form))
    pi = witt_inv(mu)
    if pi.coords[0] != context.one:
        raise NotReducibleError("Correction vector does not start with 1", term=str(pi))

    residual = OneForm(context, m, [FormTerm(1, 0, pi, delta), FormTerm(-1, 0, unit, beta)])
    if not reduce_form(residual, beta).is_zero:
        raise NotReducibleError("Defining relation pi d[delta] = d[beta] fails", term=str(residual))

    logger.debug(f"solve_pi: beta={beta}, delta={delta}, pi={pi}")
    return PiSolution(pi=pi, mu=mu, target=beta, shifted=delta, carry=carry, derivation=tuple(log))
