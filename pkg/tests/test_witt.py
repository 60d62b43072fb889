"""
Tests for truncated Witt vector arithmetic.
"""
import random

import pytest


def _vec(ctx, *coords):
    from witt import WittVector
    return WittVector([ctx.coerce(c) for c in coords], ring=ctx)


class TestUniversalPolynomials:
    """Generation and caching of the universal polynomials."""

    def test_p2_sum_polynomials(self):
        from witt import gen_universal

        polys = gen_universal(2, 2)
        a1, a2, b1, b2 = polys.ring.gens
        assert polys.sums[0] == a1 + b1
        assert polys.sums[1] == a2 + b2 - a1 * b1

    def test_p3_sum_polynomial(self):
        from witt import gen_universal

        polys = gen_universal(3, 2)
        a1, a2, b1, b2 = polys.ring.gens
        assert polys.sums[1] == a2 + b2 - a1 ** 2 * b1 - a1 * b1 ** 2

    def test_p2_product_polynomials(self):
        from witt import gen_universal

        polys = gen_universal(2, 2)
        a1, a2, b1, b2 = polys.ring.gens
        assert polys.products[0] == a1 * b1
        assert polys.products[1] == a1 ** 2 * b2 + b1 ** 2 * a2 + 2 * a2 * b2

    def test_cached(self):
        from witt import gen_universal

        assert gen_universal(2, 3) is gen_universal(2, 3)

    def test_rejects_bad_length(self):
        from witt import gen_universal
        from exceptions import MismatchedParametersError

        with pytest.raises(MismatchedParametersError):
            gen_universal(2, 0)

    @pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2)])
    def test_frobenius_reduces_to_powers(self, p, m):
        from ring_base import FieldContext
        from witt import restrict, universal_frobenius, witt_frobenius

        ctx = FieldContext(p, ("t", "s"))
        rng = random.Random(p * 10 + m)
        a = _vec(ctx, *[ctx.random_element(rng) for _ in range(m + 1)])
        assert universal_frobenius(a) == restrict(witt_frobenius(a), m)


class TestWittArithmetic:
    """Ring operations in characteristic p."""

    def test_teichmuller_sum_carries(self, f2_ts):
        t, s = f2_ts.gens
        assert _vec(f2_ts, t, 0) + _vec(f2_ts, s, 0) == _vec(f2_ts, t + s, t * s)

    def test_symbolic_shift_carry(self, f2_bx):
        from witt import teichmuller

        beta, x = f2_bx.gens
        carry = teichmuller(beta, 2) + teichmuller(x ** 4, 2)
        assert carry == _vec(f2_bx, beta + x ** 4, beta * x ** 4)

    def test_one_plus_one_p3(self, f3_ts):
        one = _vec(f3_ts, 1, 0)
        assert one + one == _vec(f3_ts, 2, 1)

    def test_additive_identity(self, f3_ts):
        from witt import witt_zero

        t, s = f3_ts.gens
        a = _vec(f3_ts, t, s)
        assert a + witt_zero(f3_ts, 2) == a
        assert a - a == witt_zero(f3_ts, 2)

    def test_teichmuller_multiplicative(self, f2_bx):
        from witt import teichmuller, witt_one

        beta, x = f2_bx.gens
        assert teichmuller(beta, 2) * teichmuller(x ** 4, 2) == teichmuller(beta * x ** 4, 2)
        assert teichmuller(beta, 3) * teichmuller(1 / beta, 3) == witt_one(f2_bx, 3)

    def test_ring_axioms_random(self, f3_ts):
        rng = random.Random(7)
        for _ in range(5):
            a, b, c = (_vec(f3_ts, f3_ts.random_element(rng), f3_ts.random_element(rng)) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a - b + b == a

    def test_operation_dispatch(self, f2_ts):
        from witt import witt_arith, witt_zero

        t, s = f2_ts.gens
        a, b = _vec(f2_ts, t, 0), _vec(f2_ts, s, 0)
        assert witt_arith("add", a, b) == _vec(f2_ts, t + s, t * s)
        assert witt_arith("mul", a, b) == _vec(f2_ts, t * s, 0)
        assert witt_arith("sub", a, a) == witt_zero(f2_ts, 2)
        assert witt_arith("add", witt_arith("neg", a), a) == witt_zero(f2_ts, 2)

    def test_mismatched_lengths(self, f2_ts):
        from exceptions import MismatchedParametersError

        t, _ = f2_ts.gens
        with pytest.raises(MismatchedParametersError):
            _vec(f2_ts, t) + _vec(f2_ts, t, 0)

    def test_mismatched_fields(self, f2_ts, f2_t):
        from exceptions import MismatchedParametersError

        with pytest.raises(MismatchedParametersError):
            _vec(f2_ts, 1) + _vec(f2_t, 1)


class TestOperators:
    """V, F, the Artin-Schreier-Witt map, p and inverses."""

    def test_verschiebung_and_telescope(self, f2_ts):
        from witt import resum, telescope, verschiebung

        t, s = f2_ts.gens
        assert verschiebung(_vec(f2_ts, t)) == _vec(f2_ts, 0, t)
        a = _vec(f2_ts, t, s, 1)
        assert telescope(a) == [(0, t), (1, s), (2, f2_ts.one)]
        assert resum(telescope(a), 3, 2, f2_ts) == a

    def test_verschiebung_is_additive(self, f3_ts):
        from witt import verschiebung

        t, s = f3_ts.gens
        a, b = _vec(f3_ts, t, s), _vec(f3_ts, s, t + 1)
        assert verschiebung(a + b) == verschiebung(a) + verschiebung(b)

    def test_frobenius(self, f2_t):
        from witt import witt_frobenius

        (t,) = f2_t.gens
        assert witt_frobenius(_vec(f2_t, t, 0)) == _vec(f2_t, t ** 2, 0)

    def test_wp_map(self, f2_t, f3_ts):
        from witt import wp_map

        (t,) = f2_t.gens
        assert wp_map(_vec(f2_t, t, 0)) == _vec(f2_t, t ** 2 + t, t ** 3 + t ** 2)
        u, _ = f3_ts.gens
        assert wp_map(_vec(f3_ts, u)) == _vec(f3_ts, u ** 3 - u)

    def test_mul_by_p_matches_repeated_addition(self, f2_ts, f3_ts):
        from witt import mul_by_p

        t, s = f2_ts.gens
        a = _vec(f2_ts, t, s)
        assert mul_by_p(a) == _vec(f2_ts, 0, t ** 2)
        assert mul_by_p(a) == a + a

        u, v = f3_ts.gens
        b = _vec(f3_ts, u, v)
        assert mul_by_p(b) == b + b + b
        assert mul_by_p(_vec(f3_ts, u, 0)) == _vec(f3_ts, 0, u ** 3)

    def test_inverse(self, f2_bx):
        from witt import teichmuller, witt_inv, witt_one

        beta, x = f2_bx.gens
        assert witt_inv(_vec(f2_bx, 1, x ** 4)) == _vec(f2_bx, 1, x ** 4)
        assert witt_inv(teichmuller(beta, 2)) == teichmuller(1 / beta, 2)
        a = _vec(f2_bx, beta + 1, x, beta * x)
        assert a * witt_inv(a) == witt_one(f2_bx, 3)

    def test_inverse_of_non_unit(self, f2_ts):
        from witt import witt_inv
        from exceptions import NonUnitError

        with pytest.raises(NonUnitError):
            witt_inv(_vec(f2_ts, 0, 1))

    def test_int_to_witt(self, f2_ts, f3_ts):
        from witt import int_to_witt, witt_zero

        minus_one = int_to_witt(-1, 2, 2, f2_ts)
        assert minus_one + _vec(f2_ts, 1, 0) == witt_zero(f2_ts, 2)
        assert int_to_witt(2, 3, 2, f3_ts) == _vec(f3_ts, 2, 1)

    def test_unshift_and_restrict(self, f2_ts):
        from witt import extend, restrict, unshift
        from exceptions import MismatchedParametersError

        t, s = f2_ts.gens
        assert unshift(_vec(f2_ts, 0, t, s)) == _vec(f2_ts, t, s)
        assert restrict(_vec(f2_ts, t, s), 1) == _vec(f2_ts, t)
        assert extend(_vec(f2_ts, t)) == _vec(f2_ts, t, 0)
        with pytest.raises(MismatchedParametersError):
            unshift(_vec(f2_ts, t, s))

    @pytest.mark.parametrize("p", [2, 3, pytest.param(5, marks=pytest.mark.slow)])
    def test_projection_formulas(self, p):
        from ring_base import FieldContext
        from witt import (
            WittVector, mul_by_p, restrict, teichmuller, verschiebung, witt_frobenius,
        )

        ctx = FieldContext(p, ("t", "s"))
        t, s = ctx.gens
        a = WittVector([t + 1, s], ring=ctx)
        b = WittVector([s, t * s], ring=ctx)
        c = WittVector([t, s + 1, t * s], ring=ctx)
        # V(a) V(b) = p V(ab)
        assert verschiebung(a) * verschiebung(b) == mul_by_p(verschiebung(a * b))
        # [u] V(b) = V([u^p] b)
        assert teichmuller(t, 3) * verschiebung(b) == verschiebung(teichmuller(t ** p, 2) * b)
        # c V(b) = V(F(c) b)
        assert c * verschiebung(b) == verschiebung(witt_frobenius(restrict(c, 2)) * b)

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_frobenius_after_verschiebung_is_p(self, p):
        from ring_base import FieldContext
        from witt import WittVector, extend, mul_by_p, verschiebung, witt_frobenius

        ctx = FieldContext(p, ("t", "s"))
        t, s = ctx.gens
        a = WittVector([t, s + t, 1], ring=ctx)
        assert witt_frobenius(verschiebung(a)) == mul_by_p(extend(a))
        assert witt_frobenius(verschiebung(a)) == verschiebung(witt_frobenius(a))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_wp_map_is_additive(self, p):
        from ring_base import FieldContext
        from witt import WittVector, teichmuller, wp_map

        ctx = FieldContext(p, ("t", "s"))
        t, s = ctx.gens
        a = WittVector([t, s, t + s], ring=ctx)
        b = WittVector([s ** 2, 1, t], ring=ctx)
        assert wp_map(a + b) == wp_map(a) + wp_map(b)
        assert wp_map(-a) == -wp_map(a)
        assert wp_map(teichmuller(ctx.one, 3)).is_zero


class TestGhostOracle:
    """The ghost map over QQ is a ring homomorphism."""

    def test_definition(self):
        from ring_base import RationalContext
        from witt import WittVector, ghost

        ctx = RationalContext(("a1", "a2"))
        a1, a2 = ctx.gens
        assert ghost(WittVector([a1, a2], p=2, ring=ctx)) == (a1, a1 ** 2 + 2 * a2)
        assert ghost(WittVector([1, 0, 0], p=2, ring=ctx)) == (1, 1, 1)

    @pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)])
    def test_homomorphism(self, p, m):
        from ring_base import RationalContext
        from witt import WittVector, ghost

        ctx = RationalContext(("x", "y"))
        rng = random.Random(p * 100 + m)
        for _ in range(5):
            a = WittVector([ctx.random_element(rng) for _ in range(m)], p=p, ring=ctx)
            b = WittVector([ctx.random_element(rng) for _ in range(m)], p=p, ring=ctx)
            ga, gb = ghost(a), ghost(b)
            assert ghost(a + b) == tuple(x + y for x, y in zip(ga, gb))
            assert ghost(a - b) == tuple(x - y for x, y in zip(ga, gb))
            assert ghost(a * b) == tuple(x * y for x, y in zip(ga, gb))

    @pytest.mark.parametrize("p,m", [(2, 3), (3, 3), (5, 2), pytest.param(5, 3, marks=pytest.mark.slow)])
    def test_universal_identities(self, p, m):
        from ring_base import RationalContext
        from witt import WittVector, ghost, witt_one

        names = tuple(f"a{i}" for i in range(1, m + 1)) + tuple(f"b{i}" for i in range(1, m + 1))
        ctx = RationalContext(names)
        a = WittVector(ctx.gens[:m], p=p, ring=ctx)
        b = WittVector(ctx.gens[m:], p=p, ring=ctx)
        ga, gb = ghost(a), ghost(b)
        assert ghost(a + b) == tuple(x + y for x, y in zip(ga, gb))
        assert ghost(-a) == tuple(-x for x in ga)
        assert ghost(a * b) == tuple(x * y for x, y in zip(ga, gb))
        assert ghost(witt_one(ctx, m, p=p)) == tuple(ctx.one for _ in range(m))

    def test_rejects_characteristic_p(self, f2_ts):
        from witt import ghost
        from exceptions import CharacteristicError

        with pytest.raises(CharacteristicError):
            ghost(_vec(f2_ts, 1, 0))


class TestLinearAlgebra:
    """Gaussian elimination over F_p(t)."""

    def test_solve(self, f3_ts):
        from linalg import solve

        t, s = f3_ts.gens
        one, zero = f3_ts.one, f3_ts.zero
        matrix = [[one, t], [s, one]]
        rhs = [t + 1, s]
        x = solve(matrix, rhs, zero)
        assert x[0] + t * x[1] == t + 1
        assert s * x[0] + x[1] == s

    def test_inconsistent(self, f2_ts):
        from linalg import solve

        one, zero = f2_ts.one, f2_ts.zero
        assert solve([[one, one], [one, one]], [one, zero], zero) is None

    def test_rank_and_nullspace(self, f2_ts):
        from linalg import nullspace, rank

        t, _ = f2_ts.gens
        one, zero = f2_ts.one, f2_ts.zero
        matrix = [[one, t, zero], [t, t * t, zero]]
        assert rank(matrix) == 1
        basis = nullspace(matrix, 3, zero, one)
        assert len(basis) == 2
        for vector in basis:
            assert one * vector[0] + t * vector[1] == zero

    def test_empty_nullspace_is_identity(self, f2_ts):
        from linalg import nullspace

        basis = nullspace([], 2, f2_ts.zero, f2_ts.one)
        assert basis == [[f2_ts.one, f2_ts.zero], [f2_ts.zero, f2_ts.one]]
