"""
Tests for the seeded property suites.
"""
import random

import pytest


class TestSuites:
    """Individual suites on a handful of seeds."""

    @pytest.mark.parametrize("name", [
        "field-axioms", "specialize", "witt-ring", "ghost-oracle", "print-parse", "merge-trace",
    ])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_quick_suites(self, name, seed):
        from self_check import SUITES, trial_rng

        trial, _ = SUITES[name]
        trial(trial_rng(seed, name, 0))

    @pytest.mark.slow
    @pytest.mark.parametrize("name", [
        "form-orderings", "inverse-pair", "shift-roundtrip", "neat-pair", "fold", "realization",
    ])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_heavy_suites(self, name, seed):
        from self_check import SUITES, trial_rng

        trial, _ = SUITES[name]
        trial(trial_rng(seed, name, 0))

    def test_generic_beta_is_not_a_power(self):
        from ring_base import FieldContext
        from self_check import generic_beta

        ctx = FieldContext(3, ("t", "s"))
        rng = random.Random(3)
        for _ in range(5):
            assert not generic_beta(ctx, rng).is_pth_power()


    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_length_three_shift_pair(self, p):
        from derham import constant_free_part
        from ring_base import FieldContext
        from self_check import shift_pair

        ctx = FieldContext(p, ("t", "s"))
        beta, x = shift_pair(ctx, random.Random(p), 3)
        assert constant_free_part(beta, 3) == ctx.gens[0]
        assert not beta.is_pth_power()


class TestRunChecks:
    """Scheduling, seeding and the summary."""

    def test_subset(self):
        from self_check import run_checks

        summary = run_checks(trials=2, seed=3, max_workers=2, suites=["field-axioms", "witt-ring"])
        assert summary["ok"]
        assert summary["seed"] == 3
        assert summary["total_trials"] == 4
        assert set(summary["suites"]) == {"field-axioms", "witt-ring"}

    def test_suite_weight_floor(self):
        from self_check import run_checks

        summary = run_checks(trials=1, seed=0, max_workers=1, suites=["merge-trace"])
        assert summary["suites"]["merge-trace"]["count"] == 1

    def test_unknown_suite(self):
        from self_check import run_checks

        with pytest.raises(KeyError):
            run_checks(trials=1, suites=["no-such-suite"])

    def test_trial_rng_is_deterministic(self):
        from self_check import trial_rng

        assert trial_rng(5, "fold", 2).random() == trial_rng(5, "fold", 2).random()
        assert trial_rng(5, "fold", 2).random() != trial_rng(5, "fold", 3).random()

    def test_failures_are_reported(self, mocker):
        import self_check
        from observability import CheckTracker

        def failing(rng):
            raise AssertionError("always fails")

        tracker = CheckTracker()
        mocker.patch.dict(self_check.SUITES, {"always-fails": (failing, 1.0)})
        summary = self_check.run_checks(trials=3, seed=0, max_workers=2,
                                        suites=["always-fails"], tracker=tracker)
        assert not summary["ok"]
        assert summary["failed"] == 3
        first = summary["suites"]["always-fails"]["first_failure"]
        assert first["index"] == 0
        assert "always fails" in first["error"]
        assert len(tracker.trials) == 3

    def test_defaults_from_settings(self, mocker):
        import self_check

        calls = []
        mocker.patch.dict(self_check.SUITES, {"field-axioms": (calls.append, 0.5)}, clear=True)
        summary = self_check.run_checks()
        # CYCLIC_CHECK_TRIALS=10 in the test environment, seed 0
        assert summary["seed"] == 0
        assert len(calls) == 5
