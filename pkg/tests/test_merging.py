"""
Tests for shifts, neat pairs, merge steps, folding and the p-th power recursion.
"""
import pytest


def _sym(ctx, text):
    from expression_parser import parse_symbol
    return parse_symbol(text, ctx)


def _expr(ctx, text):
    from expression_parser import parse_expression
    return parse_expression(text, ctx)


class TestMulClassByP:
    """p-th tensor powers of one symbol."""

    def test_level_two(self, f2_six):
        from merging import mul_class_by_p

        assert mul_class_by_p(_sym(f2_six, "[(t, s), u)_{4}")) == _sym(f2_six, "[(t^2), u)_{2}")

    def test_level_one_is_split(self, f2_six):
        from merging import mul_class_by_p

        assert mul_class_by_p(_sym(f2_six, "[(t), u)_{2}")) is None

    def test_p3_level_three(self):
        from ring_base import FieldContext
        from merging import mul_class_by_p

        ctx = FieldContext(3, ("a", "b", "c", "t"))
        result = mul_class_by_p(_sym(ctx, "[(a, b, c), t)_{27}"))
        assert result.level == 2
        assert result == _sym(ctx, "[(a^3, b^3), t)_{9}")


class TestPropositionShift:
    """Moving beta by a p^m-th power."""

    def test_level_one(self, f2_six):
        from merging import proposition_shift

        t, s, _, _, w, _ = f2_six.gens
        shifted, step = proposition_shift(_sym(f2_six, "[(w), t)_{2}"), s)
        assert shifted.beta == t + s ** 2
        assert shifted.omega.coords[0] == w * (t + s ** 2) / t
        assert step.rule.value == "prop-shift"

    def test_zero_shift_is_identity(self, f2_six):
        from merging import proposition_shift

        s = _sym(f2_six, "[(w, v), t)_{4}")
        shifted, _ = proposition_shift(s, f2_six.zero)
        assert shifted == s

    def test_roundtrip(self, f2_bx):
        from merging import proposition_shift
        from symbols import CyclicSymbol
        from witt import WittVector

        beta, x = f2_bx.gens
        s =CyclicSymbol(WittVector([x, beta + 1]), beta)
        there, _ = proposition_shift(s, x)
        back, _ = proposition_shift(there, -x)
        assert there.beta == beta + x ** 4
        assert back == s

    def test_degenerate(self, f2_bx):
        from merging import proposition_shift
        from exceptions import DegenerateShiftError
        from symbols import CyclicSymbol
        from witt import WittVector

        _, x = f2_bx.gens
        with pytest.raises(DegenerateShiftError):
            proposition_shift(CyclicSymbol(WittVector([x]), x ** 2), x)


class TestNeatPair:
    """Shared slots for a level-m and a level-1 symbol."""

    def test_example(self, f2_six):
        from merging import neat_pair
        from identities import validate_trace

        t, s, _, _, w, _ = f2_six.gens
        a = _sym(f2_six, "[(w), t)_{2}")
        b = _sym(f2_six, "[(s), u)_{2}")
        tau, delta, trace = neat_pair(a, b)
        x = s + t
        assert delta == t + x ** 2
        assert tau.coords == (w * delta / t,)
        assert trace.rules() == ["prop-shift", "as-shift"]
        assert trace.result[1].omega.coords[0] == delta
        assert validate_trace(trace).valid

    def test_as_shift_witness(self, f2_six):
        from merging import neat_pair
        from witt import wp_map

        a = _sym(f2_six, "[(w), t)_{2}")
        b = _sym(f2_six, "[(s), u)_{2}")
        _, delta, trace = neat_pair(a, b)
        tau = trace[1].witnesses["tau"]
        assert b.omega + wp_map(tau) == b.omega.replace([delta])

    def test_equal_slots(self, f2_six):
        from merging import neat_pair

        a = _sym(f2_six, "[(w), t)_{2}")
        b = _sym(f2_six, "[(t), u)_{2}")
        tau, delta, _ = neat_pair(a, b)
        assert delta == f2_six.gens[0]
        assert tau == a.omega

    def test_degenerate(self, f2_six):
        from merging import neat_pair
        from exceptions import DegenerateDeltaError

        a = _sym(f2_six, "[(w), t^2)_{2}")
        b = _sym(f2_six, "[(t^2 + t), u)_{2}")
        with pytest.raises(DegenerateDeltaError):
            neat_pair(a, b)


class TestMergeStep:
    """Fusing a shared-slot pair into one symbol."""

    def test_level_one(self, f2_six):
        from merging import merge_step
        from identities import validate_trace

        t, s, u, _, _, _ = f2_six.gens
        a = _sym(f2_six, "[(s), t)_{2}")
        b = _sym(f2_six, "[(t), u)_{2}")
        merged, trace = merge_step(a, b)
        assert merged == _sym(f2_six, "[(t, s), t*u^2)_{4}")
        assert trace.rules() == ["norm-twist", "pad", "merge-omega", "merge-beta"]
        assert all(step.stage.value == "merge-step" for step in trace)
        assert validate_trace(trace).valid

    def test_unit_gamma(self, f2_six):
        from merging import merge_step

        merged, _ = merge_step(_sym(f2_six, "[(s), t)_{2}"), _sym(f2_six, "[(t), 1)_{2}"))
        assert merged == _sym(f2_six, "[(t, s), t)_{4}")

    def test_level_two(self, f2_six):
        from merging import merge_step
        from identities import validate_trace

        merged, trace = merge_step(_sym(f2_six, "[(s, v), t)_{4}"), _sym(f2_six, "[(t), u)_{2}"))
        assert merged == _sym(f2_six, "[(t, s, v), t*u^4)_{8}")
        assert validate_trace(trace).valid

    def test_slot_mismatch(self, f2_six):
        from merging import merge_step
        from exceptions import PatternMismatchError

        with pytest.raises(PatternMismatchError):
            merge_step(_sym(f2_six, "[(s), t)_{2}"), _sym(f2_six, "[(s), u)_{2}"))


class TestFoldPrimeList:
    """Left-to-right folding of degree-p symbols."""

    def test_two_symbols(self, f2_six):
        from merging import fold_prime_list
        from identities import validate_trace

        t, s, u, _, w, _ = f2_six.gens
        symbols = [_sym(f2_six, "[(w), t)_{2}"), _sym(f2_six, "[(s), u)_{2}")]
        folded, trace = fold_prime_list(symbols)
        x = s + t
        delta = t + x ** 2
        assert folded.level == 2
        assert folded.omega.coords == (delta, w * delta / t)
        assert folded.beta == delta * u ** 2
        assert len(trace) == 6
        assert trace.start == _expr(f2_six, "[(w), t)_{2} * [(s), u)_{2}")
        assert trace.result == folded.to_expr()
        assert validate_trace(trace).valid

    def test_single_symbol(self, f2_six):
        from merging import fold_prime_list

        s = _sym(f2_six, "[(w), t)_{2}")
        folded, trace = fold_prime_list([s])
        assert folded == s
        assert len(trace) == 0

    @pytest.mark.slow
    def test_three_symbols(self, f2_six):
        from merging import fold_prime_list
        from identities import validate_trace

        symbols = [
            _sym(f2_six, "[(w), t)_{2}"),
            _sym(f2_six, "[(s), u)_{2}"),
            _sym(f2_six, "[(v), z)_{2}"),
        ]
        folded, trace = fold_prime_list(symbols)
        assert folded.level == 3
        assert len(trace) == 12
        assert validate_trace(trace).valid

    def test_empty(self):
        from merging import fold_prime_list
        from exceptions import InvalidSymbolError

        with pytest.raises(InvalidSymbolError):
            fold_prime_list([])

    def test_rejects_higher_level(self, f2_six):
        from merging import fold_prime_list
        from exceptions import InvalidSymbolError

        with pytest.raises(InvalidSymbolError) as exc_info:
            fold_prime_list([_sym(f2_six, "[(w), t)_{2}"), _sym(f2_six, "[(s, v), u)_{4}")])
        assert exc_info.value.context["index"] == 1

    def test_degenerate_step_index(self, f2_six):
        from merging import fold_prime_list
        from exceptions import DegenerateDeltaError

        symbols = [_sym(f2_six, "[(w), t^2)_{2}"), _sym(f2_six, "[(t^2 + t), u)_{2}")]
        with pytest.raises(DegenerateDeltaError) as exc_info:
            fold_prime_list(symbols)
        assert exc_info.value.step_index == 1


class TestAlbertReduce:
    """The p-th power recursion."""

    def test_single_symbol(self, f2_six):
        from merging import albert_reduce

        expr = _expr(f2_six, "[(t, s), u)_{4}")
        result = albert_reduce(expr)
        assert not result.halted
        assert result.cyclic == expr[0]
        assert len(result.trace) == 0

    def test_prime_list_folds(self, f2_six):
        from merging import albert_reduce

        result = albert_reduce(_expr(f2_six, "[(w), t)_{2} * [(s), u)_{2}"))
        assert not result.halted
        assert result.cyclic.level == 2

    def test_mixed_levels_halt(self, f2_six):
        from merging import albert_reduce
        from identities import validate_trace

        expr = _expr(f2_six, "[(t, s), u)_{4} * [(v), w)_{2}")
        result = albert_reduce(expr)
        assert result.halted
        assert result.cyclic is None

        halt = result.halt
        assert halt.depth == 0
        assert halt.cyclic_factor == _sym(f2_six, "[(t^2, 0), u)_{4}")
        assert len(halt.b_expr) == 3
        assert halt.b_expr[2] == _sym(f2_six, "[(t^2, t^4), u)_{4}")

        certificate = halt.certificate
        assert certificate.start == halt.b_expr.tensor_power(2)
        assert certificate.rules() == ["mul-p"] * 3 + ["merge-beta", "as-shift", "split"]
        assert certificate.result.is_split
        assert validate_trace(certificate).valid

    def test_halt_to_dict(self, f2_six):
        from merging import albert_reduce

        data = albert_reduce(_expr(f2_six, "[(t, s), u)_{4} * [(v), w)_{2}")).halt.to_dict()
        assert set(data) == {"input", "depth", "power", "source", "B", "cyclic_factor", "certificate", "lifts"}
        assert data["depth"] == 0
        assert data["lifts"] == []
        assert data["source"] == data["input"]
        assert data["cyclic_factor"] == "[(t^2, 0), u)_{4}"
        assert data["certificate"][-1]["rule"] == "split"

    def test_halt_below_top_level(self, f2_six):
        from merging import albert_reduce
        from identities import validate_trace

        expr = _expr(f2_six, "[(t, s, z), u)_{8} * [(v, t), w)_{4}")
        halt = albert_reduce(expr).halt
        assert halt.depth == 1
        assert halt.power == 2
        assert halt.input_expr == expr
        assert halt.source == _expr(f2_six, "[(t^2, s^2), u)_{4} * [(v^2), w)_{2}")
        assert halt.cyclic_factor == _sym(f2_six, "[(t^4, 0), u)_{4}")
        assert halt.b_expr.factors[:2] == halt.source.factors
        assert halt.certificate.start == halt.b_expr.tensor_power(2)
        assert validate_trace(halt.certificate).valid

        (lift,) = halt.lifts
        assert lift.expr == expr
        assert lift.multiples == halt.source
        assert lift.trace.start == expr.tensor_power(2)
        assert lift.trace.result == halt.source
        assert set(lift.trace.rules()) == {"mul-p"}
        assert validate_trace(lift.trace).valid

    def test_deep_halt_to_dict(self, f2_six):
        from merging import albert_reduce

        data = albert_reduce(_expr(f2_six, "[(t, s, z), u)_{8} * [(v, t), w)_{4}")).halt.to_dict()
        assert data["depth"] == 1
        assert data["power"] == 2
        assert data["input"] == "[(t, s, z), u)_{8} * [(v, t), w)_{4}"
        assert len(data["lifts"]) == 1
        assert data["lifts"][0]["multiples"] == data["source"]

    def test_empty(self, f2_six):
        from merging import albert_reduce
        from exceptions import InvalidSymbolError

        with pytest.raises(InvalidSymbolError):
            albert_reduce(_expr(f2_six, "0"))
