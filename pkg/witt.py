"""
Truncated Witt vectors W_m(R) of length m.

This module provides:
- Universal sum, product, negation, difference and Frobenius polynomials,
  generated once per (p, m) by solving the ghost recursion over QQ
- WittVector with ring operations, V, F, Teichmüller lifts, inversion,
  multiplication by p and the Artin-Schreier-Witt map
- The ghost map, defined over the characteristic-0 oracle ring

Coordinates are indexed from the left: coordinate 1 is coords[0], and V pads at
the front, V(a1, ..., am) = (0, a1, ..., am).

Usage:
    from ring_base import FieldContext
    from witt import WittVector, teichmuller

    F = FieldContext(2, ("b", "x"))
    b, x = F.gens
    carry = teichmuller(b, 2) + teichmuller(x ** 4, 2)   # (b + x^4, b*x^4)
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ, ZZ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from cache_utils import LRUCache
from exceptions import (
    CharacteristicError,
    MismatchedParametersError,
    NonIntegralCoefficientError,
    NonUnitError,
)
from observability import track_performance
from ring_base import FieldContext, FieldElem, Prime, RationalContext

logger = logging.getLogger(__name__)

CoefficientRing = Union[FieldContext, RationalContext]
Terms = Tuple[Tuple[Tuple[int, ...], int], ...]

_UNIVERSAL_CACHE = LRUCache(max_size=64, name="universal-witt")


# =============================================================================
# Universal polynomials
# =============================================================================

@dataclass(frozen=True)
class UniversalWittPolys:
    """
    Integer polynomials computing Witt arithmetic coordinatewise.

    sums, products, negations and differences live in ZZ[a1..am, b1..bm];
    frobenius lives in ZZ[a1..a(m+1)] and maps length m+1 to length m.
    """
    p: int
    m: int
    ring: PolyRing
    frobenius_ring: PolyRing
    sums: Tuple[PolyElement, ...]
    products: Tuple[PolyElement, ...]
    negations: Tuple[PolyElement, ...]
    differences: Tuple[PolyElement, ...]
    frobenius: Tuple[PolyElement, ...]
    sum_terms: Tuple[Terms, ...]
    product_terms: Tuple[Terms, ...]
    negation_terms: Tuple[Terms, ...]
    difference_terms: Tuple[Terms, ...]
    frobenius_terms: Tuple[Terms, ...]

    def terms_for(self, op: str) -> Tuple[Terms, ...]:
        table = {
            "add": self.sum_terms,
            "mul": self.product_terms,
            "neg": self.negation_terms,
            "sub": self.difference_terms,
        }
        if op not in table:
            raise ValueError(f"Unknown Witt operation '{op}'")
        return table[op]


def variable_names(m: int, extra: int = 0) -> Tuple[str, ...]:
    return tuple(f"a{i}" for i in range(1, m + 1 + extra))


def ghost_component(coords: Sequence, p: int, n: int):
    """w_n = sum_{i=1..n} p^(i-1) * a_i^(p^(n-i))."""
    total = 0
    for i in range(1, n + 1):
        total = total + p ** (i - 1) * coords[i - 1] ** (p ** (n - i))
    return total


def _solve_ghost(targets: List[PolyElement], p: int) -> List[PolyElement]:
    """Coordinates Z with w_n(Z) = targets[n-1] for every n."""
    coords: List[PolyElement] = []
    for n in range(1, len(targets) + 1):
        acc = targets[n - 1]
        for i in range(1, n):
            acc = acc - p ** (i - 1) * coords[i - 1] ** (p ** (n - i))
        coords.append(acc * QQ(1, p ** (n - 1)))
    return coords


def _to_integer_ring(poly: PolyElement, zring: PolyRing, label: str) -> PolyElement:
    terms = {}
    for monom, coeff in poly.items():
        if QQ.denom(coeff) != 1:
            raise NonIntegralCoefficientError(
                f"Non-integral coefficient {coeff} in {label}",
                context={"polynomial": label},
            )
        terms[monom] = int(QQ.numer(coeff))
    return zring.from_dict(terms)


def _terms(poly: PolyElement) -> Terms:
    return tuple((monom, int(coeff)) for monom, coeff in poly.items())


def _build_universal(p: int, m: int) -> UniversalWittPolys:
    names = variable_names(m) + tuple(f"b{i}" for i in range(1, m + 1))
    qring = PolyRing(",".join(names), QQ, grlex)
    zring = PolyRing(",".join(names), ZZ, grlex)
    gens = qring.gens
    xs, ys = gens[:m], gens[m:]

    ghost_x = [ghost_component(xs, p, n) for n in range(1, m + 1)]
    ghost_y = [ghost_component(ys, p, n) for n in range(1, m + 1)]

    raw = {
        "S": _solve_ghost([gx + gy for gx, gy in zip(ghost_x, ghost_y)], p),
        "M": _solve_ghost([gx * gy for gx, gy in zip(ghost_x, ghost_y)], p),
        "N": _solve_ghost([-gx for gx in ghost_x], p),
        "D": _solve_ghost([gx - gy for gx, gy in zip(ghost_x, ghost_y)], p),
    }
    integral = {
        key: tuple(_to_integer_ring(poly, zring, f"{key}{n + 1}") for n, poly in enumerate(polys))
        for key, polys in raw.items()
    }

    frob_names = variable_names(m, extra=1)
    frob_qring = PolyRing(",".join(frob_names), QQ, grlex)
    frob_zring = PolyRing(",".join(frob_names), ZZ, grlex)
    fx = frob_qring.gens
    shifted = [ghost_component(fx, p, n + 1) for n in range(1, m + 1)]
    frobenius = tuple(
        _to_integer_ring(poly, frob_zring, f"F{n + 1}")
        for n, poly in enumerate(_solve_ghost(shifted, p))
    )

    logger.info(f"Generated universal Witt polynomials for p={p}, m={m}")
    return UniversalWittPolys(
        p=p,
        m=m,
        ring=zring,
        frobenius_ring=frob_zring,
        sums=integral["S"],
        products=integral["M"],
        negations=integral["N"],
        differences=integral["D"],
        frobenius=frobenius,
        sum_terms=tuple(_terms(poly) for poly in integral["S"]),
        product_terms=tuple(_terms(poly) for poly in integral["M"]),
        negation_terms=tuple(_terms(poly) for poly in integral["N"]),
        difference_terms=tuple(_terms(poly) for poly in integral["D"]),
        frobenius_terms=tuple(_terms(poly) for poly in frobenius),
    )


@track_performance
def gen_universal(p: int, m: int) -> UniversalWittPolys:
    """
    Universal Witt polynomials for (p, m), cached.

    Args:
        p: The prime
        m: Witt length, at least 1

    Returns:
        The shared UniversalWittPolys instance for (p, m)

    Raises:
        NonIntegralCoefficientError: the recursion produced a fraction
    """
    p = int(Prime(p))
    if m < 1:
        raise MismatchedParametersError("Witt length must be at least 1", context={"m": m})
    return _UNIVERSAL_CACHE.get_or_create((p, m), lambda: _build_universal(p, m))


# =============================================================================
# Witt vectors
# =============================================================================

class WittVector:
    """
    An element (a1, ..., am) of W_m(R).

    R is either a FieldContext (characteristic p) or a RationalContext (the
    ghost oracle). Instances are immutable.
    """

    __slots__ = ("ring", "p", "coords")

    def __init__(self, coords: Sequence, p: Optional[int] = None, ring: Optional[CoefficientRing] = None):
        coords = tuple(coords)
        if not coords:
            raise MismatchedParametersError("Witt vectors have length at least 1")
        if ring is None:
            first = next((c for c in coords if isinstance(c, FieldElem)), None)
            if first is None:
                raise MismatchedParametersError("Cannot infer the coefficient ring of a Witt vector")
            ring = first.context
        if isinstance(ring, FieldContext):
            if p is not None and int(p) != int(ring.p):
                raise MismatchedParametersError(
                    "Witt prime differs from the field characteristic",
                    context={"p": p, "characteristic": int(ring.p)},
                )
            p = int(ring.p)
        elif p is None:
            raise MismatchedParametersError("A prime is required over a characteristic-0 ring")
        self.ring = ring
        self.p = int(p)
        self.coords = tuple(ring.coerce(c) for c in coords)

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coords)

    @property
    def is_unit(self) -> bool:
        return not _is_zero(self.coords[0])

    @property
    def is_one(self) -> bool:
        return self.coords[0] == self.ring.one and all(_is_zero(c) for c in self.coords[1:])

    def __len__(self) -> int:
        return self.m

    def __getitem__(self, index: int):
        return self.coords[index]

    def __iter__(self):
        return iter(self.coords)

    def _compatible(self, other: "WittVector") -> None:
        if not isinstance(other, WittVector):
            raise TypeError(f"Expected WittVector, got {type(other).__name__}")
        if self.p != other.p or self.m != other.m or self.ring != other.ring:
            raise MismatchedParametersError(
                "Witt vectors disagree on prime, length or coefficient ring",
                context={"left": (self.p, self.m), "right": (other.p, other.m)},
            )

    def __add__(self, other: "WittVector") -> "WittVector":
        return witt_arith("add", self, other)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return witt_arith("sub", self, other)

    def __mul__(self, other: "WittVector") -> "WittVector":
        return witt_arith("mul", self, other)

    def __neg__(self) -> "WittVector":
        return witt_arith("neg", self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.ring == other.ring and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.p, self.ring, self.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"WittVector{self}"

    def replace(self, coords: Sequence) -> "WittVector":
        return WittVector(coords, p=self.p, ring=self.ring)


def _is_zero(value) -> bool:
    if isinstance(value, FieldElem):
        return value.is_zero
    return not value


def witt_zero(ring: CoefficientRing, m: int, p: Optional[int] = None) -> WittVector:
    return WittVector([ring.zero] * m, p=p, ring=ring)


def witt_one(ring: CoefficientRing, m: int, p: Optional[int] = None) -> WittVector:
    return WittVector([ring.one] + [ring.zero] * (m - 1), p=p, ring=ring)


def witt_arith(op: str, a: WittVector, b: Optional[WittVector] = None) -> WittVector:
    """
    Witt ring operation by name.

    Args:
        op: One of add, sub, mul, neg
        a: Left operand
        b: Right operand (ignored for neg)

    Returns:
        The result, coordinates given by the universal polynomials mod p
    """
    if op == "neg":
        b = witt_zero(a.ring, a.m, a.p)
    else:
        a._compatible(b)
        if op == "add":
            if a.is_zero:
                return b
            if b.is_zero:
                return a
        elif op == "sub" and b.is_zero:
            return a
        elif op == "mul":
            if a.is_zero or b.is_zero:
                return witt_zero(a.ring, a.m, a.p)
            if a.is_one:
                return b
            if b.is_one:
                return a

    polys = gen_universal(a.p, a.m)
    args = a.coords + b.coords
    coords = [a.ring.evaluate(terms, args) for terms in polys.terms_for(op)]
    return a.replace(coords)


def teichmuller(a, m: int, p: Optional[int] = None, ring: Optional[CoefficientRing] = None) -> WittVector:
    """[a] = (a, 0, ..., 0) of length m."""
    if ring is None:
        if not isinstance(a, FieldElem):
            raise MismatchedParametersError("A coefficient ring is required for non-field entries")
        ring = a.context
    return WittVector([a] + [ring.zero] * (m - 1), p=p, ring=ring)


def shifted_teichmuller(a, depth: int, m: int, p: Optional[int] = None,
                        ring: Optional[CoefficientRing] = None) -> WittVector:
    """V^depth[a] truncated to length m (zero when depth >= m)."""
    if ring is None:
        ring = a.context
    coords = [ring.zero] * m
    if depth < m:
        coords[depth] = a
    return WittVector(coords, p=p, ring=ring)


def verschiebung(a: WittVector) -> WittVector:
    """V(a1, ..., am) = (0, a1, ..., am), of length m + 1."""
    return a.replace((a.ring.zero,) + a.coords)


def telescope(a: WittVector) -> List[Tuple[int, object]]:
    """The pieces (j, a_{j+1}) with a = sum_j V^j[a_{j+1}]."""
    return [(j, c) for j, c in enumerate(a.coords)]


def resum(pieces: Sequence[Tuple[int, object]], m: int, p: int, ring: CoefficientRing) -> WittVector:
    """Witt-sum the vectors V^j[c] for (j, c) in pieces."""
    total = witt_zero(ring, m, p)
    for depth, value in pieces:
        total = total + shifted_teichmuller(value, depth, m, p=p, ring=ring)
    return total


def extend(a: WittVector) -> WittVector:
    """(a1, ..., am, 0): a zero appended as the new last coordinate."""
    return a.replace(a.coords + (a.ring.zero,))


def restrict(a: WittVector, k: int) -> WittVector:
    """The projection W_m -> W_k onto the first k coordinates."""
    if not 1 <= k <= a.m:
        raise MismatchedParametersError("Cannot restrict to that length", context={"m": a.m, "k": k})
    return a.replace(a.coords[:k])


def unshift(a: WittVector) -> WittVector:
    """Inverse of V on vectors whose first coordinate is zero."""
    if not _is_zero(a.coords[0]):
        raise MismatchedParametersError("First coordinate is nonzero", context={"vector": str(a)})
    if a.m == 1:
        raise MismatchedParametersError("Cannot unshift a vector of length 1")
    return a.replace(a.coords[1:])


def _require_char_p(a: WittVector, operation: str) -> FieldContext:
    if not isinstance(a.ring, FieldContext):
        raise CharacteristicError(f"{operation} needs a coefficient field of characteristic p")
    return a.ring


def witt_frobenius(a: WittVector) -> WittVector:
    """F(a) = (a1^p, ..., am^p) in characteristic p."""
    _require_char_p(a, "witt_frobenius")
    return a.replace([c.frobenius() for c in a.coords])


def universal_frobenius(a: WittVector) -> WittVector:
    """F through the universal Frobenius polynomials: length m + 1 -> length m."""
    if a.m < 2:
        raise MismatchedParametersError("universal_frobenius needs a vector of length at least 2")
    polys = gen_universal(a.p, a.m - 1)
    return a.replace([a.ring.evaluate(terms, a.coords) for terms in polys.frobenius_terms])


def wp_map(a: WittVector) -> WittVector:
    """The Artin-Schreier-Witt map F(a) - a."""
    return witt_frobenius(a) - a


def mul_by_p(a: WittVector) -> WittVector:
    """p * a = VF(a) = (0, a1^p, ..., a_{m-1}^p)."""
    ring = _require_char_p(a, "mul_by_p")
    return a.replace((ring.zero,) + tuple(c.frobenius() for c in a.coords[:-1]))


def witt_inv(a: WittVector) -> WittVector:
    """
    Multiplicative inverse of a unit, lifted through the V-filtration.

    Coordinate k of a*y is linear in y_k with coefficient a1^(p^(k-1)) mod p, so
    each coordinate is solved from one product with the partial inverse.

    Raises:
        NonUnitError: the first coordinate is zero
    """
    ring = _require_char_p(a, "witt_inv")
    first = a.coords[0]
    if first.is_zero:
        raise NonUnitError(f"{a} is not a unit", context={"vector": str(a)})
    coords = [first.inv()] + [ring.zero] * (a.m - 1)
    for k in range(1, a.m):
        partial = a * a.replace(coords)
        coords[k] = -partial.coords[k] / first ** (a.p ** k)
    return a.replace(coords)


def int_to_witt(n: int, p: int, m: int, ring: CoefficientRing) -> WittVector:
    """
    The image of the integer n in W_m(R).

    Over F_p only n mod p^m matters; the coordinates solve the ghost equations
    w_k = n over the integers.
    """
    p = int(p)
    if isinstance(ring, FieldContext):
        n %= p ** m
    coords: List[int] = [n]
    for k in range(1, m):
        total = n - n ** (p ** k) - sum(p ** (k - i) * coords[k - i] ** (p ** i) for i in range(1, k))
        coords.append(total // p ** k)
    return WittVector([ring.from_int(c) for c in coords], p=p, ring=ring)


def scale(n: int, a: WittVector) -> WittVector:
    """n * a for an integer n."""
    if n == 1:
        return a
    return int_to_witt(n, a.p, a.m, a.ring) * a


def ghost(a: WittVector) -> Tuple:
    """
    Ghost components (w_1, ..., w_m).

    Raises:
        CharacteristicError: the coefficient ring has characteristic p
    """
    if not isinstance(a.ring, RationalContext):
        raise CharacteristicError("The ghost map is only defined over the characteristic-0 ring")
    return tuple(ghost_component(a.coords, a.p, n) for n in range(1, a.m + 1))
