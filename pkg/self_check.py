"""
Seeded property suites for the `check` subcommand.

Each suite draws random inputs from a per-trial random.Random seeded by
(seed, suite, index), so results do not depend on thread scheduling. Trials
run on a thread pool and are recorded by a CheckTracker.

Usage:
    from self_check import run_checks

    summary = run_checks(trials=50, seed=1)
    assert summary["ok"]
"""
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from config import get_settings
from derham import ReductionOrder, OneForm, FormTerm, reduce_form, solve_pi
from error_handling import redraw_on
from exceptions import DegenerateDeltaError, DegenerateShiftError, PoleError
from expression_parser import parse_expression
from identities import validate_trace
from merging import fold_prime_list, merge_step, neat_pair, proposition_shift
from observability import CheckTracker
from realize import GeneratorPresentation, center_basis, check_relations, realize_symbol
from ring_base import FieldContext, FieldElem, RationalContext
from symbols import BrauerExpr, CyclicSymbol
from witt import (
    WittVector,
    ghost,
    mul_by_p,
    teichmuller,
    telescope,
    witt_inv,
    witt_one,
    witt_zero,
    wp_map,
)

logger = logging.getLogger(__name__)

Trial = Callable[[random.Random], None]

NAMES = ("t", "s")


def _context(p: int, names: Iterable[str] = NAMES) -> FieldContext:
    return FieldContext(p, tuple(names))


def _witt(ctx: FieldContext, rng: random.Random, m: int, max_terms: int = 3) -> WittVector:
    return WittVector([ctx.random_element(rng, max_terms=max_terms) for _ in range(m)], ring=ctx)


def _frobenius_power(value: FieldElem, k: int) -> FieldElem:
    """value^(p^k)."""
    for _ in range(k):
        value = value.frobenius()
    return value


def generic_beta(ctx: FieldContext, rng: random.Random) -> FieldElem:
    """A random element that is not a p-th power: t + r^p."""
    return ctx.gens[0] + ctx.random_element(rng).frobenius()


def shift_pair(ctx: FieldContext, rng: random.Random, m: int) -> Tuple[FieldElem, FieldElem]:
    """
    A beta that is not a p-th power and a shift x.

    At length 3, beta = t + r^(p^3) so its constant-free part is t, and p = 5
    draws single monomials.
    """
    if m < 3:
        return generic_beta(ctx, rng), ctx.random_element(rng)
    lean = int(ctx.p) == 5
    r = ctx.random_element(rng, max_terms=1, fraction_probability=0.0)
    x = ctx.random_element(rng, max_terms=1 if lean else 3, fraction_probability=0.0 if lean else 0.2)
    return ctx.gens[0] + _frobenius_power(r, m), x


def random_symbol(ctx: FieldContext, rng: random.Random, m: int) -> CyclicSymbol:
    return CyclicSymbol(_witt(ctx, rng, m), generic_beta(ctx, rng))


# =============================================================================
# Suites
# =============================================================================

def check_field_axioms(rng: random.Random) -> None:
    ctx = _context(rng.choice((2, 3, 5)))
    a, b, c = (ctx.random_element(rng) for _ in range(3))
    assert (a + b) + c == a + (b + c), "addition is not associative"
    assert (a * b) * c == a * (b * c), "multiplication is not associative"
    assert a * b == b * a, "multiplication is not commutative"
    assert a * (b + c) == a * b + a * c, "distributivity fails"
    assert (a - a).is_zero, "a - a is not zero"
    assert (a + b).frobenius() == a.frobenius() + b.frobenius(), "frobenius is not additive"
    assert (a * b).frobenius() == a.frobenius() * b.frobenius(), "frobenius is not multiplicative"
    if not a.is_zero:
        assert (a * a.inv()).is_one, "a * inv(a) is not one"
    if not b.is_zero:
        assert (a * b) / b == a, "(a * b) / b is not a"


def check_specialize(rng: random.Random) -> None:
    ctx = _context(rng.choice((2, 3, 5)))
    a, b = ctx.random_element(rng), ctx.random_element(rng)
    p = int(ctx.p)

    @redraw_on((PoleError,), attempts=26)
    def at_random_point() -> None:
        point = {name: rng.randrange(p) for name in ctx.names}
        expected = a.specialize(point) * b.specialize(point) % p
        assert (a * b).specialize(point) == expected, "specialize is not multiplicative"
        expected = (a.specialize(point) + b.specialize(point)) % p
        assert (a + b).specialize(point) == expected, "specialize is not additive"

    try:
        at_random_point()
    except PoleError:
        logger.debug("No pole-free point found; trial skipped")


def check_witt_ring(rng: random.Random) -> None:
    p = rng.choice((2, 3, 5))
    m = rng.randint(1, 3)
    ctx = _context(p)
    # p = 5 at length 3 multiplies degree-25 polynomials
    terms = 1 if p == 5 and m == 3 else 3
    a, b, c = (_witt(ctx, rng, m, terms) for _ in range(3))
    assert (a + b) + c == a + (b + c), "Witt addition is not associative"
    assert a + b == b + a, "Witt addition is not commutative"
    assert (a * b) * c == a * (b * c), "Witt multiplication is not associative"
    assert a * (b + c) == a * b + a * c, "Witt distributivity fails"
    assert (a + (-a)).is_zero, "a + (-a) is not zero"
    total = witt_zero(ctx, m)
    for _ in range(p):
        total = total + a
    assert total == mul_by_p(a), "p-fold sum differs from VF"
    if a.is_unit:
        assert a * witt_inv(a) == witt_one(ctx, m), "witt_inv is not an inverse"


def check_ghost_oracle(rng: random.Random) -> None:
    p = rng.choice((2, 3, 5))
    m = rng.randint(1, 3)
    ring = RationalContext(("t",))
    a = WittVector([ring.random_element(rng) for _ in range(m)], p=p, ring=ring)
    b = WittVector([ring.random_element(rng) for _ in range(m)], p=p, ring=ring)
    ga, gb = ghost(a), ghost(b)
    assert ghost(a + b) == tuple(x + y for x, y in zip(ga, gb)), "ghost map is not additive"
    assert ghost(a * b) == tuple(x * y for x, y in zip(ga, gb)), "ghost map is not multiplicative"
    assert ghost(-a) == tuple(-x for x in ga), "ghost map does not commute with negation"


def check_form_orderings(rng: random.Random) -> None:
    p = rng.choice((2, 3, 5))
    m = rng.randint(1, 3)
    ctx = _context(p)
    beta, x = shift_pair(ctx, rng, m)
    big_x = _frobenius_power(x, m)
    carry = teichmuller(beta, m) + teichmuller(big_x, m)
    # constant first coordinate, so absorption has something to move
    coefficient = WittVector(
        [_frobenius_power(ctx.random_element(rng, nonzero=True), m)]
        + [ctx.random_element(rng, max_terms=1 if p == 5 else 3) for _ in range(m - 1)],
        ring=ctx,
    )
    terms = [FormTerm(1, 0, coefficient, beta), FormTerm(1, 0, coefficient, big_x)]
    terms += [FormTerm(-1, j, coefficient, value) for j, value in telescope(carry)[1:]]
    form = OneForm(ctx, m, terms)
    results = {order: reduce_form(form, beta, order) for order in ReductionOrder}
    assert len(set(results.values())) == 1, "reduction orderings disagree"


def check_inverse_pair(rng: random.Random) -> None:
    p = rng.choice((2, 3, 5))
    m = rng.randint(1, 3)
    ctx = _context(p)
    beta, x = shift_pair(ctx, rng, m)
    try:
        first = solve_pi(beta, x, p, m)
        second = solve_pi(first.shifted, -x, p, m)
    except DegenerateShiftError:
        return
    assert second.shifted == beta, "shifting back does not restore beta"
    assert first.pi * second.pi == witt_one(ctx, m), f"pi(beta, {x}) * pi(delta, -{x}) is not 1"


def check_shift_roundtrip(rng: random.Random) -> None:
    p = rng.choice((2, 3))
    m = rng.randint(1, 3 if p == 2 else 2)
    ctx = _context(p)
    s = random_symbol(ctx, rng, m)
    x = ctx.random_element(rng)
    try:
        shifted, _ = proposition_shift(s, x)
    except DegenerateShiftError:
        return
    restored, _ = proposition_shift(shifted, -x)
    assert restored == s, f"shift by {x} and back does not restore {s}"


def check_neat_pair(rng: random.Random) -> None:
    p = rng.choice((2, 3))
    m = rng.randint(1, 3 if p == 2 else 2)
    ctx = _context(p, ("t", "s", "u"))
    a = random_symbol(ctx, rng, m)
    b = random_symbol(ctx, rng, 1)
    try:
        tau, delta, trace = neat_pair(a, b)
    except DegenerateDeltaError:
        return
    alpha = b.omega.coords[0]
    x = alpha - a.beta
    assert delta == a.beta + x ** (p ** m), "delta differs from beta + x^(p^m)"
    y = sum((x ** (p ** i) for i in range(1, m)), x)
    assert wp_map(WittVector([y], ring=ctx)) == WittVector([delta - alpha], ring=ctx), "as-shift witness is wrong"
    assert validate_trace(trace).valid, "neat_pair trace does not replay"


def check_merge_trace(rng: random.Random) -> None:
    m = rng.randint(1, 2)
    ctx = _context(2, ("t", "s", "u"))
    a = random_symbol(ctx, rng, m)
    gamma = generic_beta(ctx, rng)
    b = CyclicSymbol(WittVector([a.beta], ring=ctx), gamma)
    merged, trace = merge_step(a, b)
    assert merged.omega.coords == (a.beta,) + a.omega.coords, "merged omega is not (delta, tau)"
    assert merged.beta == a.beta * gamma ** (2 ** m), "merged beta is not delta * gamma^(p^m)"
    assert validate_trace(trace).valid, "merge_step trace does not replay"


def check_fold(rng: random.Random) -> None:
    p = rng.choice((2, 3))
    ctx = _context(p, ("t", "s", "u"))
    symbols = [random_symbol(ctx, rng, 1) for _ in range(2)]
    try:
        result, trace = fold_prime_list(symbols)
    except DegenerateDeltaError:
        return
    assert result.level == 2, "fold of two symbols is not of level 2"
    assert validate_trace(trace).valid, "fold trace does not replay"


def check_print_parse(rng: random.Random) -> None:
    p = rng.choice((2, 3, 5))
    ctx = _context(p)
    factors = [random_symbol(ctx, rng, rng.randint(1, 2)) for _ in range(rng.randint(1, 3))]
    expr = BrauerExpr(tuple(factors), ctx)
    assert parse_expression(str(expr), ctx) == expr, f"print/parse round trip fails for {expr}"


def check_realization(rng: random.Random) -> None:
    p = rng.choice((2, 3))
    ctx = _context(p)
    s = random_symbol(ctx, rng, 1)
    algebra = realize_symbol(s)
    assert check_relations(algebra, GeneratorPresentation.from_symbol(s), rng), "relations fail"
    assert len(center_basis(algebra)) == 1, "center is larger than F"


# (trial function, share of the configured trial count)
SUITES: Dict[str, Tuple[Trial, float]] = {
    "field-axioms": (check_field_axioms, 1.0),
    "specialize": (check_specialize, 1.0),
    "witt-ring": (check_witt_ring, 1.0),
    "ghost-oracle": (check_ghost_oracle, 0.5),
    "form-orderings": (check_form_orderings, 0.25),
    "inverse-pair": (check_inverse_pair, 0.25),
    "shift-roundtrip": (check_shift_roundtrip, 0.25),
    "neat-pair": (check_neat_pair, 0.25),
    "merge-trace": (check_merge_trace, 0.1),
    "fold": (check_fold, 0.1),
    "print-parse": (check_print_parse, 0.5),
    "realization": (check_realization, 0.05),
}


def trial_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def run_checks(trials: Optional[int] = None, seed: Optional[int] = None,
               max_workers: Optional[int] = None, suites: Optional[List[str]] = None,
               tracker: Optional[CheckTracker] = None) -> Dict:
    """
    Run the property suites.

    Args:
        trials: Base trial count per suite (check.trials by default)
        seed: Base seed (check.seed by default)
        max_workers: Thread pool size (check.max_workers by default)
        suites: Suite names to run (all by default)
        tracker: Tracker to record into

    Returns:
        The tracker summary plus "seed" and "ok"
    """
    settings = get_settings()
    trials = settings.check.trials if trials is None else trials
    seed = settings.check.seed if seed is None else seed
    max_workers = settings.check.max_workers if max_workers is None else max_workers
    names = list(SUITES) if suites is None else suites
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"Unknown suite(s): {', '.join(unknown)}")
    tracker = tracker or CheckTracker()

    def run_one(name: str, index: int) -> None:
        trial, _ = SUITES[name]
        with tracker.track_trial(name, index):
            trial(trial_rng(seed, name, index))

    jobs = [
        (name, index)
        for name in names
        for index in range(max(1, int(trials * SUITES[name][1])))
    ]
    logger.info(f"Running {len(jobs)} trial(s) across {len(names)} suite(s) with seed {seed}")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for future in [pool.submit(run_one, name, index) for name, index in jobs]:
            future.result()

    summary = tracker.get_summary()
    summary["seed"] = seed
    summary["ok"] = summary["failed"] == 0
    return summary
