"""
Structure-constant realization of a cyclic symbol.

The algebra of [w, b)_{p^m} is generated over F by u_1..u_m and y with

    F(u) - u = w      (as Witt vectors)
    y^(p^m) = b
    y u y^-1 = u + (1, 0, ..., 0)

The u_i span the commutative algebra L = F[u]/(relations) with basis
u^e, 0 <= e_i < p. Coordinate k of F(u) - u is u_k^p - u_k + G_k(u_<k),
so u_k^p reduces to u_k + w_k - G_k(u_<k); G_k comes from the universal
difference polynomials. The full algebra has basis u^e y^j, j < p^m, and
(u^e y^i)(u^f y^j) = u^e s^i(u^f) y^(i+j), where s is conjugation by y.

Supported: level 1 for every prime, level 2 for p = 2.
"""
import itertools
import json
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from exceptions import UnsupportedRealizationError
from linalg import nullspace
from observability import track_performance
from ring_base import FieldContext, FieldElem, evaluate_terms
from symbols import CyclicSymbol
from witt import WittVector, gen_universal

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Vector = Dict[int, FieldElem]
Table = Dict[Tuple[int, int], Vector]

FULL_ASSOCIATIVITY_LIMIT = 16
SAMPLED_TRIPLES = 200


@dataclass(frozen=True)
class GeneratorPresentation:
    """The generator/relation data (p, m, omega, beta) of a symbol."""
    p: int
    m: int
    omega: WittVector
    beta: FieldElem

    @classmethod
    def from_symbol(cls, s: CyclicSymbol) -> "GeneratorPresentation":
        return cls(p=s.p, m=s.level, omega=s.omega, beta=s.beta)

    @property
    def context(self) -> FieldContext:
        return self.beta.context

    def generator_names(self) -> List[str]:
        return ["u"] if self.m == 1 else [f"u{k}" for k in range(1, self.m + 1)]


# =============================================================================
# The commutative part L
# =============================================================================

class _QuotientRing:
    """F[u_1..u_m] modulo u_k^p = R_k, with R_k in reduced form."""

    def __init__(self, context: FieldContext, p: int, m: int):
        self.context = context
        self.p = p
        self.m = m
        self.relations: Dict[int, Dict[Monomial, FieldElem]] = {}
        self._monomials: Dict[Monomial, Dict[Monomial, FieldElem]] = {}

    def basis(self) -> List[Monomial]:
        return [tuple(reversed(e)) for e in itertools.product(range(self.p), repeat=self.m)]

    def monomial(self, exps: Monomial) -> Dict[Monomial, FieldElem]:
        cached = self._monomials.get(exps)
        if cached is not None:
            return cached
        high = [k for k, e in enumerate(exps) if e >= self.p]
        if not high:
            result = {exps: self.context.one}
        else:
            k = high[-1]
            rest = exps[:k] + (exps[k] - self.p,) + exps[k + 1:]
            result = self.mul(self.monomial(rest), self.relations[k])
        self._monomials[exps] = result
        return result

    def mul(self, x: Dict[Monomial, FieldElem], y: Dict[Monomial, FieldElem]) -> Dict[Monomial, FieldElem]:
        total: Dict[Monomial, FieldElem] = {}
        for e, c in x.items():
            for f, d in y.items():
                g = tuple(a + b for a, b in zip(e, f))
                cd = c * d
                for h, v in self.monomial(g).items():
                    total[h] = total[h] + cd * v if h in total else cd * v
        return {h: v for h, v in total.items() if not v.is_zero}


class _LElement:
    """An element of L; supports the operations evaluate_terms needs."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: _QuotientRing, coeffs: Dict[Monomial, FieldElem]):
        self.ring = ring
        self.coeffs = {e: c for e, c in coeffs.items() if not c.is_zero}

    @classmethod
    def constant(cls, ring: _QuotientRing, value: FieldElem) -> "_LElement":
        return cls(ring, {tuple([0] * ring.m): value})

    @classmethod
    def generator(cls, ring: _QuotientRing, k: int) -> "_LElement":
        exps = tuple(1 if i == k else 0 for i in range(ring.m))
        return cls(ring, {exps: ring.context.one})

    def __add__(self, other: "_LElement") -> "_LElement":
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs[e] + c if e in coeffs else c
        return _LElement(self.ring, coeffs)

    def __neg__(self) -> "_LElement":
        return _LElement(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "_LElement") -> "_LElement":
        return self + (-other)

    def __mul__(self, other) -> "_LElement":
        if isinstance(other, _LElement):
            return _LElement(self.ring, self.ring.mul(self.coeffs, other.coeffs))
        return _LElement(self.ring, {e: c * other for e, c in self.coeffs.items()})

    def __pow__(self, k: int) -> "_LElement":
        result = _LElement.constant(self.ring, self.ring.context.one)
        for _ in range(k):
            result = result * self
        return result

    def substitute(self, images: Sequence["_LElement"]) -> "_LElement":
        """Apply the ring map u_k -> images[k]."""
        one = _LElement.constant(self.ring, self.ring.context.one)
        total = one * 0
        for e, c in self.coeffs.items():
            term = one * c
            for k, power in enumerate(e):
                if power:
                    term = term * images[k] ** power
            total = total + term
        return total


def _build_quotient(g: GeneratorPresentation) -> Tuple[_QuotientRing, List[_LElement]]:
    """L with its relations, and s(u_k) = (u + [1])_k for every k."""
    ring = _QuotientRing(g.context, g.p, g.m)
    polys = gen_universal(g.p, g.m)
    m = g.m
    u = [_LElement.generator(ring, k) for k in range(m)]
    zero = _LElement.constant(ring, g.context.zero)

    frobenius_u: List[_LElement] = []
    for k in range(m):
        # terms of coordinate k that do not involve a_k or b_k
        carry_terms = [
            (exps, coeff) for exps, coeff in polys.difference_terms[k]
            if not exps[k] and not exps[m + k]
        ]
        args = frobenius_u + [zero] * (m - k) + u[:k] + [zero] * (m - k)
        carry = evaluate_terms(carry_terms, args, _LElement.constant(ring, g.context.one))
        relation = u[k] + _LElement.constant(ring, g.omega.coords[k]) - carry
        ring.relations[k] = relation.coeffs
        frobenius_u.append(u[k] ** g.p)
        logger.debug(f"Relation for u{k + 1}^{g.p}: {len(relation.coeffs)} term(s)")

    one = _LElement.constant(ring, g.context.one)
    shift = [one] + [zero] * (m - 1)
    sigma = [evaluate_terms(polys.sum_terms[k], u + shift, one) for k in range(m)]
    return ring, sigma


# =============================================================================
# Structure-constant algebras
# =============================================================================

@dataclass
class StructureConstantAlgebra:
    """
    A finite-dimensional algebra over F given by its multiplication table.

    table[(i, j)] holds the coordinates of basis[i] * basis[j]; absent keys and
    absent coordinates are zero. Index 0 is the unit.
    """
    context: FieldContext
    labels: List[str]
    table: Table
    presentation: Optional[GeneratorPresentation] = None
    generator_index: Dict[str, int] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> Vector:
        return {i: self.context.one}

    def product(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), {})

    def multiply(self, x: Vector, y: Vector) -> Vector:
        total: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                ab = a * b
                for k, c in self.product(i, j).items():
                    total[k] = total[k] + ab * c if k in total else ab * c
        return {k: v for k, v in total.items() if not v.is_zero}

    def add(self, x: Vector, y: Vector) -> Vector:
        total = dict(x)
        for k, v in y.items():
            total[k] = total[k] + v if k in total else v
        return {k: v for k, v in total.items() if not v.is_zero}

    def scalar(self, value: FieldElem) -> Vector:
        return {} if value.is_zero else {0: value}

    def to_dict(self) -> Dict[str, Any]:
        constants = [
            {"i": i, "j": j, "k": k, "value": str(v)}
            for (i, j), row in sorted(self.table.items())
            for k, v in sorted(row.items())
        ]
        data: Dict[str, Any] = {
            "dimension": self.dimension,
            "field": str(self.context),
            "basis": list(self.labels),
            "structure_constants": constants,
        }
        if self.presentation is not None:
            data.update({
                "p": self.presentation.p,
                "m": self.presentation.m,
                "omega": str(self.presentation.omega),
                "beta": str(self.presentation.beta),
            })
        return data

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


class _AlgebraValue:
    """Vector wrapper with ring operators, for evaluating polynomials in the algebra."""

    __slots__ = ("algebra", "vector")

    def __init__(self, algebra: StructureConstantAlgebra, vector: Vector):
        self.algebra = algebra
        self.vector = vector

    def __add__(self, other: "_AlgebraValue") -> "_AlgebraValue":
        return _AlgebraValue(self.algebra, self.algebra.add(self.vector, other.vector))

    def __mul__(self, other) -> "_AlgebraValue":
        if isinstance(other, _AlgebraValue):
            return _AlgebraValue(self.algebra, self.algebra.multiply(self.vector, other.vector))
        scaled = {k: v * other for k, v in self.vector.items()}
        return _AlgebraValue(self.algebra, {k: v for k, v in scaled.items() if not v.is_zero})

    def __pow__(self, k: int) -> "_AlgebraValue":
        result = _AlgebraValue(self.algebra, self.algebra.scalar(self.algebra.context.one))
        for _ in range(k):
            result = result * self
        return result


def _label(names: List[str], exps: Monomial, j: int) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    if j == 1:
        parts.append("y")
    elif j > 1:
        parts.append(f"y^{j}")
    return "*".join(parts) if parts else "1"


@track_performance
def realize_symbol(s: CyclicSymbol) -> StructureConstantAlgebra:
    """
    Build the multiplication table of the cyclic algebra of s.

    Args:
        s: A symbol of level 1, or of level 2 with p = 2

    Returns:
        The algebra, of dimension p^(2m)

    Raises:
        UnsupportedRealizationError: the (p, level) pair is not supported
    """
    g = GeneratorPresentation.from_symbol(s)
    if g.m > 2 or (g.m == 2 and g.p != 2):
        raise UnsupportedRealizationError(
            f"Realization supports level 1, or level 2 with p = 2; got p={g.p}, level={g.m}",
            context={"p": g.p, "m": g.m},
        )
    ring, sigma = _build_quotient(g)
    degree = g.p ** g.m
    l_basis = ring.basis()
    index = {(e, j): n for n, (j, e) in enumerate(itertools.product(range(degree), l_basis))}

    # s^i(u^f) for every power i and every L-basis monomial f
    images = [[_LElement.generator(ring, k) for k in range(g.m)]]
    for _ in range(1, degree):
        images.append([x.substitute(sigma) for x in images[-1]])
    conjugates: Dict[Tuple[int, Monomial], _LElement] = {}
    for i in range(degree):
        for f in l_basis:
            conjugates[(i, f)] = _LElement(ring, {f: g.context.one}).substitute(images[i])

    table: Table = {}
    for (e, i), a in index.items():
        left = _LElement(ring, {e: g.context.one})
        for (f, j), b in index.items():
            product = left * conjugates[(i, f)]
            power = i + j
            scalar = g.context.one
            if power >= degree:
                power -= degree
                scalar = g.beta
            row = {index[(h, power)]: c * scalar for h, c in product.coeffs.items()}
            row = {k: v for k, v in row.items() if not v.is_zero}
            if row:
                table[(a, b)] = row

    names = g.generator_names()
    labels = [""] * len(index)
    for (e, j), n in index.items():
        labels[n] = _label(names, e, j)
    unit_exps = tuple([0] * g.m)
    generator_index = {
        name: index[(tuple(1 if i == k else 0 for i in range(g.m)), 0)] for k, name in enumerate(names)
    }
    generator_index["y"] = index[(unit_exps, 1)]
    logger.info(f"Realized {s} as an algebra of dimension {len(index)}")
    return StructureConstantAlgebra(
        context=g.context, labels=labels, table=table, presentation=g, generator_index=generator_index
    )


# =============================================================================
# Verification
# =============================================================================

def _associative(a: StructureConstantAlgebra, i: int, j: int, k: int) -> bool:
    left = a.multiply(a.product(i, j), a.basis_vector(k))
    right = a.multiply(a.basis_vector(i), a.product(j, k))
    return left == right


def _triples(d: int, rng: random.Random, samples: int):
    if d <= FULL_ASSOCIATIVITY_LIMIT:
        return itertools.product(range(d), repeat=3)
    return ((rng.randrange(d), rng.randrange(d), rng.randrange(d)) for _ in range(samples))


def check_relations(a: StructureConstantAlgebra, g: GeneratorPresentation,
                    rng: Optional[random.Random] = None, samples: int = SAMPLED_TRIPLES) -> bool:
    """
    Check the unit, the defining relations of g and associativity inside a.

    Associativity is checked on every basis triple when the dimension is at
    most 16 and on `samples` random triples otherwise.
    """
    rng = rng or random.Random(0)
    d = a.dimension
    if d != g.p ** (2 * g.m):
        logger.info(f"Dimension {d} does not match p^(2m) = {g.p ** (2 * g.m)}")
        return False
    for i in range(d):
        if a.product(0, i) != a.basis_vector(i) or a.product(i, 0) != a.basis_vector(i):
            logger.info(f"Index 0 is not a two-sided unit at basis element {i}")
            return False

    names = g.generator_names()
    try:
        u = [_AlgebraValue(a, a.basis_vector(a.generator_index[name])) for name in names]
        y = _AlgebraValue(a, a.basis_vector(a.generator_index["y"]))
    except KeyError:
        logger.info("Algebra does not record its generators")
        return False
    one = _AlgebraValue(a, a.scalar(g.context.one))
    zero = one * 0
    polys = gen_universal(g.p, g.m)

    frobenius_u = [x ** g.p for x in u]
    for k in range(g.m):
        value = evaluate_terms(polys.difference_terms[k], frobenius_u + u, one)
        if value.vector != a.scalar(g.omega.coords[k]):
            logger.info(f"Artin-Schreier-Witt relation fails in coordinate {k + 1}")
            return False

    if (y ** (g.p ** g.m)).vector != a.scalar(g.beta):
        logger.info("y^(p^m) differs from beta")
        return False

    shift = [one] + [zero] * (g.m - 1)
    for k in range(g.m):
        image = evaluate_terms(polys.sum_terms[k], u + shift, one)
        if (y * u[k]).vector != (image * y).vector:
            logger.info(f"Conjugation relation fails for {names[k]}")
            return False

    for i, j, k in _triples(d, rng, samples):
        if not _associative(a, i, j, k):
            logger.info(f"Associativity fails on basis triple ({i}, {j}, {k})")
            return False
    return True


def center_basis(a: StructureConstantAlgebra) -> List[List[FieldElem]]:
    """
    Basis of the center, as coordinate vectors.

    Solves sum_c z_c (b_c b_i - b_i b_c) = 0 for every basis element b_i.
    """
    d = a.dimension
    zero, one = a.context.zero, a.context.one
    rows: List[List[FieldElem]] = []
    for i in range(d):
        commutators: Dict[int, List[FieldElem]] = {}
        for c in range(d):
            left, right = a.product(c, i), a.product(i, c)
            for r in set(left) | set(right):
                value = left.get(r, zero) - right.get(r, zero)
                if value.is_zero:
                    continue
                commutators.setdefault(r, [zero] * d)[c] = value
        rows.extend(commutators.values())
    basis = nullspace(rows, d, zero, one)
    logger.debug(f"Center of a {d}-dimensional algebra has dimension {len(basis)}")
    return basis
