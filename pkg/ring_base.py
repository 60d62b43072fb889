"""
Exact arithmetic in rational function fields F_p(t1, ..., tn).

This module provides:
- Prime: a checked prime characteristic
- FieldContext: the field descriptor (p, indeterminate names) over a sympy PolyRing
- FieldElem: reduced fractions with monic denominator under graded-lex order
- RationalContext: polynomials over QQ, used only as the ghost-oracle ring
- Fast evaluation of integer polynomials at field elements (Witt arithmetic)

Usage:
    from ring_base import FieldContext

    F = FieldContext(3, ("t", "s"))
    t, s = F.gens
    a = (t + s) / (t * s)
    assert a.frobenius() == a ** 3
"""
import logging
import random
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from exceptions import (
    DivisionByZeroError,
    InvalidConfigValueError,
    MismatchedParametersError,
    NotAPowerError,
    PoleError,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
IntegerTerms = Sequence[Tuple[Monomial, int]]


class Prime(int):
    """A prime characteristic; primality is checked at construction."""

    def __new__(cls, value: int):
        value = int(value)
        if value < 2 or not isprime(value):
            raise InvalidConfigValueError("prime", value, "not a prime")
        return super().__new__(cls, value)


def evaluate_terms(terms: IntegerTerms, args: Sequence, one):
    """
    Evaluate an integer polynomial, given as (exponents, coefficient) terms, at
    arbitrary ring elements supporting +, * and ** (sympy PolyElements, ints).

    Args:
        terms: Monomials with integer coefficients
        args: One ring element per variable
        one: The unit of the target ring

    Returns:
        The value in the target ring
    """
    powers: List[Dict[int, object]] = [{} for _ in args]

    def power(i: int, k: int):
        cached = powers[i].get(k)
        if cached is None:
            cached = args[i] ** k
            powers[i][k] = cached
        return cached

    total = one * 0
    for exps, coeff in terms:
        if not coeff:
            continue
        term = one * coeff
        for i, k in enumerate(exps):
            if k:
                term = term * power(i, k)
        total = total + term
    return total


class FieldContext:
    """
    The base field F = F_p(names).

    Contexts compare equal when p and the ordered name list agree. All
    FieldElems built from equal contexts interoperate.
    """

    def __init__(self, p: int, names: Iterable[str]):
        self.p = Prime(p)
        self.names: Tuple[str, ...] = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InvalidConfigValueError("names", ",".join(self.names), "duplicate indeterminate")
        self.ring = PolyRing(",".join(self.names), GF(self.p), grlex)
        self.domain = self.ring.domain
        self._zero = FieldElem(self, self.ring.zero, self.ring.one, _normalized=True)
        self._one = FieldElem(self, self.ring.one, self.ring.one, _normalized=True)

    @property
    def characteristic(self) -> int:
        return int(self.p)

    @property
    def key(self) -> Tuple[int, Tuple[str, ...]]:
        return (int(self.p), self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldContext) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FieldContext(p={int(self.p)}, names={self.names})"

    def __str__(self) -> str:
        return f"F_{int(self.p)}({', '.join(self.names)})"

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @property
    def zero(self) -> "FieldElem":
        return self._zero

    @property
    def one(self) -> "FieldElem":
        return self._one

    @property
    def gens(self) -> Tuple["FieldElem", ...]:
        return tuple(FieldElem(self, g, self.ring.one, _normalized=True) for g in self.ring.gens)

    def gen(self, name: str) -> "FieldElem":
        """The indeterminate called name."""
        from exceptions import UnknownIndeterminateError

        if name not in self.names:
            raise UnknownIndeterminateError(name, self.names)
        return self.gens[self.names.index(name)]

    def from_int(self, n: int) -> "FieldElem":
        return FieldElem(self, self.ring(int(n) % self.p), self.ring.one, _normalized=True)

    def coerce(self, value: Union["FieldElem", int]) -> "FieldElem":
        """Accept ints and FieldElems of this context."""
        if isinstance(value, FieldElem):
            if value.context != self:
                raise MismatchedParametersError(
                    "Field elements belong to different contexts",
                    context={"left": str(self), "right": str(value.context)},
                )
            return value
        if isinstance(value, int):
            return self.from_int(value)
        raise TypeError(f"Cannot coerce {type(value).__name__} into {self}")

    def poly(self, terms: Mapping[Monomial, int]) -> PolyElement:
        """Polynomial from an exponent -> integer coefficient map (reduced mod p)."""
        p = int(self.p)
        return self.ring.from_dict({m: c % p for m, c in terms.items() if c % p})

    def coefficient(self, c) -> int:
        """A GF(p) coefficient as an int in 0..p-1."""
        return int(c) % int(self.p)

    def parse(self, text: str) -> "FieldElem":
        """Parse an element in the expression grammar."""
        from expression_parser import parse_elem

        return parse_elem(text, self)

    # ------------------------------------------------------------------
    # Random sampling (property suites)
    # ------------------------------------------------------------------

    def random_poly(self, rng: random.Random, max_degree: int = 2, max_terms: int = 3) -> PolyElement:
        p = int(self.p)
        n = len(self.names)
        terms: Dict[Monomial, int] = {}
        for _ in range(rng.randint(1, max_terms)):
            exps = [0] * n
            if n:
                for _ in range(rng.randint(0, max_degree)):
                    exps[rng.randrange(n)] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + rng.randrange(1, p)
        return self.poly(terms)

    def random_element(
        self,
        rng: random.Random,
        max_degree: int = 2,
        max_terms: int = 3,
        fraction_probability: float = 0.2,
        nonzero: bool = False,
    ) -> "FieldElem":
        """
        Draw a random element: a small polynomial, sometimes a fraction.

        Args:
            rng: Seeded random source
            max_degree: Total degree bound for numerator and denominator
            max_terms: Maximum number of monomials drawn
            fraction_probability: Chance of drawing a nontrivial denominator
            nonzero: Redraw until the element is nonzero

        Returns:
            A normalized FieldElem
        """
        while True:
            numer = self.random_poly(rng, max_degree, max_terms)
            denom = self.ring.one
            if self.names and rng.random() < fraction_probability:
                candidate = self.random_poly(rng, max_degree, max_terms)
                if candidate:
                    denom = candidate
            elem = FieldElem(self, numer, denom)
            if not nonzero or not elem.is_zero:
                return elem

    # ------------------------------------------------------------------
    # Evaluation of integer polynomials (universal Witt polynomials)
    # ------------------------------------------------------------------

    def evaluate(self, terms: IntegerTerms, args: Sequence["FieldElem"]) -> "FieldElem":
        """
        Evaluate an integer polynomial at field elements, reducing mod p.

        Monomial numerators are accumulated over the common denominator
        prod(d_i ** max_exponent_i) and normalized once.

        Args:
            terms: (exponents, integer coefficient) pairs
            args: One FieldElem per variable

        Returns:
            The normalized value
        """
        p = int(self.p)
        ring = self.ring
        zero_args = [a.is_zero for a in args]

        active = []
        for exps, coeff in terms:
            c = coeff % p
            if not c:
                continue
            if any(k and zero_args[i] for i, k in enumerate(exps)):
                continue
            active.append((exps, c))
        if not active:
            return self.zero

        n = len(args)
        max_exp = [0] * n
        for exps, _ in active:
            for i, k in enumerate(exps):
                if k > max_exp[i]:
                    max_exp[i] = k

        numer_powers: List[Dict[int, PolyElement]] = [{} for _ in range(n)]
        denom_powers: List[Dict[int, PolyElement]] = [{} for _ in range(n)]

        def power(table: Dict[int, PolyElement], base: PolyElement, k: int) -> PolyElement:
            cached = table.get(k)
            if cached is None:
                cached = base ** k
                table[k] = cached
            return cached

        has_denom = [not args[i].denom.is_one for i in range(n)]
        common = ring.one
        for i in range(n):
            if max_exp[i] and has_denom[i]:
                common = common * power(denom_powers[i], args[i].denom, max_exp[i])

        total = ring.zero
        for exps, c in active:
            term = ring(c)
            for i, k in enumerate(exps):
                if not max_exp[i]:
                    continue
                if k:
                    term = term * power(numer_powers[i], args[i].numer, k)
                if has_denom[i] and max_exp[i] - k:
                    term = term * power(denom_powers[i], args[i].denom, max_exp[i] - k)
            total += term
        return FieldElem(self, total, common)


def _normalize(context: FieldContext, numer: PolyElement, denom: PolyElement) -> Tuple[PolyElement, PolyElement]:
    ring = context.ring
    if not denom:
        raise DivisionByZeroError("Division by the zero polynomial")
    if not numer:
        return ring.zero, ring.one
    if not denom.is_ground and not numer.is_ground:
        g = numer.gcd(denom)
        if not g.is_ground:
            numer = numer.exquo(g)
            denom = denom.exquo(g)
    lc = denom.LC
    if lc != context.domain.one:
        numer = numer.quo_ground(lc)
        denom = denom.monic()
    return numer, denom


def _format_monomial(names: Sequence[str], exps: Monomial) -> str:
    factors = []
    for name, k in zip(names, exps):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append(f"{name}^{k}")
    return "*".join(factors)


def format_poly(context: FieldContext, poly: PolyElement) -> str:
    """Print a polynomial in the expression grammar, graded-lex descending."""
    if not poly:
        return "0"
    parts = []
    for exps, coeff in poly.terms():
        c = context.coefficient(coeff)
        mono = _format_monomial(context.names, exps)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)


class FieldElem:
    """
    An element numer/denom of F_p(t1..tn) in normal form.

    gcd(numer, denom) = 1 and denom is monic under graded-lex order, so equal
    values have identical stored polynomials.
    """

    __slots__ = ("context", "numer", "denom")

    def __init__(self, context: FieldContext, numer: PolyElement, denom: Optional[PolyElement] = None,
                 _normalized: bool = False):
        if denom is None:
            denom = context.ring.one
        if not _normalized:
            numer, denom = _normalize(context, numer, denom)
        self.context = context
        self.numer = numer
        self.denom = denom

    # ------------------------------------------------------------------
    # Predicates
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.numer

    @property
    def is_one(self) -> bool:
        return self.numer.is_one and self.denom.is_one

    @property
    def is_constant(self) -> bool:
        """True for elements of the prime field."""
        return self.numer.is_ground and self.denom.is_ground

    @property
    def is_polynomial(self) -> bool:
        return self.denom.is_one

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _lift(self, other) -> "FieldElem":
        return self.context.coerce(other)

    def __add__(self, other) -> "FieldElem":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.denom == other.denom:
            return FieldElem(self.context, self.numer + other.numer, self.denom)
        return FieldElem(
            self.context,
            self.numer * other.denom + other.numer * self.denom,
            self.denom * other.denom,
        )

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.context, -self.numer, self.denom, _normalized=True)

    def __sub__(self, other) -> "FieldElem":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "FieldElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "FieldElem":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.context.zero
        if self.denom.is_one and other.denom.is_one:
            return FieldElem(self.context, self.numer * other.numer, self.denom, _normalized=True)
        return FieldElem(self.context, self.numer * other.numer, self.denom * other.denom)

    __rmul__ = __mul__

    def inv(self) -> "FieldElem":
        if self.is_zero:
            raise DivisionByZeroError("Inversion of zero")
        return FieldElem(self.context, self.denom, self.numer)

    def __truediv__(self, other) -> "FieldElem":
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> "FieldElem":
        return self._lift(other) * self.inv()

    def __pow__(self, exponent: int) -> "FieldElem":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inv() ** (-exponent)
        if exponent == 0:
            return self.context.one
        # coprime numer/denom stay coprime under powers
        return FieldElem(self.context, self.numer ** exponent, self.denom ** exponent, _normalized=True)

    # ------------------------------------------------------------------
    # Frobenius and p-th roots
    # ------------------------------------------------------------------

    def _map_exponents(self, poly: PolyElement, func) -> PolyElement:
        return self.context.ring.from_dict({func(m): c for m, c in poly.items()})

    def frobenius(self) -> "FieldElem":
        """a^p, computed by scaling exponents (coefficients lie in F_p)."""
        p = int(self.context.p)
        return FieldElem(
            self.context,
            self._map_exponents(self.numer, lambda m: tuple(k * p for k in m)),
            self._map_exponents(self.denom, lambda m: tuple(k * p for k in m)),
            _normalized=True,
        )

    def is_pth_power(self) -> bool:
        p = int(self.context.p)
        return all(k % p == 0 for poly in (self.numer, self.denom) for m in poly.keys() for k in m)

    def pth_root(self) -> "FieldElem":
        """The unique b with b^p = a."""
        if not self.is_pth_power():
            raise NotAPowerError(f"{self} is not a p-th power")
        p = int(self.context.p)
        return FieldElem(
            self.context,
            self._map_exponents(self.numer, lambda m: tuple(k // p for k in m)),
            self._map_exponents(self.denom, lambda m: tuple(k // p for k in m)),
            _normalized=True,
        )

    def root(self, q: int) -> "FieldElem":
        """The q-th root for q a power of p."""
        result = self
        p = int(self.context.p)
        while q > 1:
            result = result.pth_root()
            q //= p
        return result

    def q_coordinates(self, q: int) -> Dict[Monomial, "FieldElem"]:
        """
        Coordinates in the monomial basis of F over F^q.

        Returns C with self = sum_r t^r * C[r], every C[r] a q-th power and r
        ranging over exponent vectors with entries below q.
        """
        ring = self.context.ring
        numer = self.numer * self.denom ** (q - 1) if not self.denom.is_one else self.numer
        denom = self.denom ** q if not self.denom.is_one else ring.one
        groups: Dict[Monomial, Dict[Monomial, object]] = {}
        for exps, coeff in numer.items():
            residue = tuple(k % q for k in exps)
            shifted = tuple(k - r for k, r in zip(exps, residue))
            groups.setdefault(residue, {})[shifted] = coeff
        return {
            residue: FieldElem(self.context, ring.from_dict(terms), denom)
            for residue, terms in groups.items()
        }

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def specialize(self, assignment: Mapping[str, int]) -> int:
        """
        Evaluate at a point of F_p^n.

        Raises:
            PoleError: the denominator vanishes at the assignment
        """
        p = int(self.context.p)
        missing = [name for name in self.context.names if name not in assignment]
        if missing:
            raise MismatchedParametersError(
                "Assignment does not cover all indeterminates",
                context={"missing": ",".join(missing)},
            )
        point = [int(assignment[name]) % p for name in self.context.names]

        def value(poly: PolyElement) -> int:
            total = 0
            for exps, coeff in poly.items():
                term = self.context.coefficient(coeff)
                for v, k in zip(point, exps):
                    if k:
                        term = term * pow(v, k, p) % p
                total += term
            return total % p

        d = value(self.denom)
        if d == 0:
            raise PoleError(assignment=assignment)
        return value(self.numer) * pow(d, -1, p) % p

    # ------------------------------------------------------------------
    # Value semantics
    # ------------------------------------------------------------------

    def _poly_key(self, poly: PolyElement) -> Tuple:
        return tuple(sorted((m, self.context.coefficient(c)) for m, c in poly.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.context.from_int(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return (
            self.context == other.context
            and self.numer == other.numer
            and self.denom == other.denom
        )

    def __hash__(self) -> int:
        return hash((self.context.key, self._poly_key(self.numer), self._poly_key(self.denom)))

    def __str__(self) -> str:
        numer = format_poly(self.context, self.numer)
        if self.denom.is_one:
            return numer
        denom = format_poly(self.context, self.denom)
        if " + " in numer:
            numer = f"({numer})"
        if " + " in denom or "*" in denom:
            denom = f"({denom})"
        return f"{numer}/{denom}"

    def __repr__(self) -> str:
        return f"FieldElem({self}, p={int(self.context.p)})"


def fe_arith(op: str, a: FieldElem, b: Union[FieldElem, int, None] = None) -> FieldElem:
    """
    Field operation dispatch by name.

    Args:
        op: One of add, sub, mul, div, neg, inv, pow
        a: Left operand
        b: Right operand, or the exponent for pow

    Returns:
        The normalized result
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"Unknown field operation '{op}'")


class RationalContext:
    """
    Polynomials over QQ in named variables.

    Characteristic-0 coefficient ring for ghost-map checks of Witt arithmetic.
    """

    characteristic = 0

    def __init__(self, names: Iterable[str]):
        self.names: Tuple[str, ...] = tuple(names)
        self.ring = PolyRing(",".join(self.names), QQ, grlex)

    @property
    def key(self) -> Tuple[int, Tuple[str, ...]]:
        return (0, self.names)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalContext) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"RationalContext(names={self.names})"

    @property
    def zero(self) -> PolyElement:
        return self.ring.zero

    @property
    def one(self) -> PolyElement:
        return self.ring.one

    @property
    def gens(self) -> Tuple[PolyElement, ...]:
        return tuple(self.ring.gens)

    def from_int(self, n: int) -> PolyElement:
        return self.ring(int(n))

    def coerce(self, value) -> PolyElement:
        if isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, PolyElement) and value.ring == self.ring:
            return value
        raise MismatchedParametersError(
            "Value does not belong to this rational polynomial ring",
            context={"ring": repr(self)},
        )

    def evaluate(self, terms: IntegerTerms, args: Sequence[PolyElement]) -> PolyElement:
        return evaluate_terms(terms, args, self.ring.one)

    def random_element(self, rng: random.Random, max_degree: int = 2, max_terms: int = 3) -> PolyElement:
        n = len(self.names)
        terms: Dict[Monomial, int] = {}
        for _ in range(rng.randint(1, max_terms)):
            exps = [0] * n
            if n:
                for _ in range(rng.randint(0, max_degree)):
                    exps[rng.randrange(n)] += 1
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + rng.choice((-3, -2, -1, 1, 2, 3))
        return self.ring.from_dict({m: c for m, c in terms.items() if c})
