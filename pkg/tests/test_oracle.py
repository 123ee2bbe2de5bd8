from fractions import Fraction
from itertools import chain, combinations

import numpy as np
import pytest

from lindof.assignment import MessageAssignment, build_assignment, random_assignment
from lindof.network import (
    NetworkRealization,
    derive_seed,
    parse_realization,
    sample_realization,
)
from lindof.oracle import (
    CarrierConfig,
    exact_expected_dof,
    feasible,
    optimal_zero_forcing_dof,
)
from lindof.scheduler import dof, schedule_network

# Frozen by running the 2^9-pattern enumeration once; the oracle engine
# returns the identical value (see test_engines_agree_on_family).
EXACT_K5_F35_P05 = 2.50390625


def all_patterns(k):
    links = 2 * k - 1
    for bits in range(1 << links):
        direct = tuple(bool(bits >> i & 1) for i in range(k))
        cross = tuple(bool(bits >> (k + i) & 1) for i in range(k - 1))
        yield NetworkRealization(k, direct, cross)


def brute_force_over_configs(r, a):
    """Literal maximization over every CarrierConfig, no shortcuts."""
    best = 0
    messages = list(range(1, r.k + 1))
    for size in range(r.k, 0, -1):
        if size <= best:
            break
        for delivered in combinations(messages, size):
            choice_lists = []
            for m in delivered:
                ts = sorted(a.transmit_sets[m - 1])
                subsets = [frozenset({t}) for t in ts]
                if len(ts) == 2:
                    subsets.append(frozenset(ts))
                choice_lists.append(subsets)

            def configs(idx, acc):
                if idx == len(delivered):
                    yield acc
                    return
                for c in choice_lists[idx]:
                    yield from configs(idx + 1, acc + [c])

            for picks in configs(0, []):
                carriers = [frozenset()] * r.k
                for m, c in zip(delivered, picks):
                    carriers[m - 1] = c
                cfg = CarrierConfig(r.k, tuple(carriers), frozenset(delivered))
                if feasible(cfg, r):
                    best = max(best, size)
                    break
            if best == size:
                break
    return best


class TestFeasible:
    def test_lone_carriers_collide(self):
        r = parse_realization("2;11;1")
        cfg = CarrierConfig(
            2, (frozenset({1}), frozenset({2})), frozenset({1, 2})
        )
        assert not feasible(cfg, r)

    def test_empty_delivered_is_vacuous(self):
        r = parse_realization("2;00;0")
        cfg = CarrierConfig(2, (frozenset(), frozenset()), frozenset())
        assert feasible(cfg, r)

    def test_helper_family_config(self):
        r = parse_realization("5;11111;1111")
        cfg = CarrierConfig(
            5,
            (
                frozenset({1, 2}),
                frozenset({2}),
                frozenset(),
                frozenset({3}),
                frozenset({3, 4}),
            ),
            frozenset({1, 2, 4, 5}),
        )
        assert feasible(cfg, r)

    def test_carriers_without_delivery_rejected(self):
        r = parse_realization("3;111;11")
        cfg = CarrierConfig(
            3, (frozenset(), frozenset({1}), frozenset()), frozenset({2, 3})
        )
        assert not feasible(cfg, r)

    def test_undelivered_message_with_carriers_invalid(self):
        with pytest.raises(ValueError):
            CarrierConfig(2, (frozenset({1}), frozenset()), frozenset({2}))


class TestOptimalDof:
    def test_k5_helper_family(self):
        r = parse_realization("5;11111;1111")
        assert optimal_zero_forcing_dof(r, build_assignment(5, Fraction(3, 5))) == 4

    def test_all_absent_is_zero(self):
        r = parse_realization("3;000;00")
        assert optimal_zero_forcing_dof(r, build_assignment(3, 0)) == 0

    def test_k2_single_transmitters(self):
        r = parse_realization("2;11;1")
        a = MessageAssignment(2, (frozenset({1}), frozenset({2})))
        assert optimal_zero_forcing_dof(r, a) == 1

    def test_size_guard(self):
        r = sample_realization(11, 0.5, 0)
        a = MessageAssignment(11, tuple(frozenset({i}) for i in range(1, 12)))
        with pytest.raises(ValueError):
            optimal_zero_forcing_dof(r, a)

    def test_matches_literal_config_enumeration(self):
        rng = np.random.default_rng(31)
        for t in range(60):
            k = int(rng.integers(1, 5))
            r = sample_realization(k, float(rng.random()), derive_seed(77, t))
            a = random_assignment(k, rng)
            assert optimal_zero_forcing_dof(r, a) == brute_force_over_configs(r, a)

    def test_never_below_greedy(self):
        rng = np.random.default_rng(13)
        for t in range(400):
            k = int(rng.integers(1, 9))
            r = sample_realization(k, float(rng.random()), derive_seed(88, t))
            a = random_assignment(k, rng)
            assert optimal_zero_forcing_dof(r, a) >= dof(schedule_network(r, a))

    def test_equals_greedy_on_family(self):
        for k in (3, 4, 5, 6):
            for f in (Fraction(0), Fraction(3, 5)):
                a = build_assignment(k, f)
                for r in all_patterns(k):
                    assert optimal_zero_forcing_dof(r, a) == dof(schedule_network(r, a))

    def test_monotone_under_enrichment(self):
        rng = np.random.default_rng(41)
        for t in range(150):
            k = int(rng.integers(2, 7))
            r = sample_realization(k, float(rng.random()), derive_seed(55, t))
            a = random_assignment(k, rng)
            base = optimal_zero_forcing_dof(r, a)
            # add one transmitter to a set with spare budget, if any
            for i, ts in enumerate(a.transmit_sets):
                if len(ts) < 2:
                    extra = int(rng.integers(1, k + 1))
                    if extra in ts:
                        continue
                    sets = list(a.transmit_sets)
                    sets[i] = ts | {extra}
                    richer = MessageAssignment(k, tuple(sets))
                    assert optimal_zero_forcing_dof(r, richer) >= base
                    break


class TestExactExpectedDof:
    def test_k1_single_link(self):
        a = MessageAssignment(1, (frozenset({1}),))
        for p in (0.0, 0.25, 0.5, 1.0):
            assert exact_expected_dof(1, p, a) == pytest.approx(1 - p, abs=1e-12)

    def test_p_endpoints(self):
        a = build_assignment(5, Fraction(3, 5))
        all_present = parse_realization("5;11111;1111")
        assert exact_expected_dof(5, 0.0, a) == dof(schedule_network(all_present, a))
        assert exact_expected_dof(5, 1.0, a) == 0.0

    def test_frozen_regression_value(self):
        a = build_assignment(5, Fraction(3, 5))
        assert exact_expected_dof(5, 0.5, a) == pytest.approx(EXACT_K5_F35_P05, abs=1e-12)

    def test_engines_agree_on_family(self):
        for k in (3, 5):
            for f in (Fraction(0), Fraction(3, 5)):
                a = build_assignment(k, f)
                for p in (0.2, 0.5, 0.8):
                    assert exact_expected_dof(k, p, a, "scheduler") == pytest.approx(
                        exact_expected_dof(k, p, a, "oracle"), abs=1e-12
                    )

    def test_deactivation_noop_for_k5_family(self):
        # transmitter 5 is unused by this assignment
        a = build_assignment(5, Fraction(3, 5))
        assert exact_expected_dof(5, 0.5, a, deactivate_last=True) == pytest.approx(
            EXACT_K5_F35_P05, abs=1e-12
        )

    def test_limits_enforced(self):
        a = MessageAssignment(13, tuple(frozenset({i}) for i in range(1, 14)))
        with pytest.raises(ValueError):
            exact_expected_dof(13, 0.5, a, "scheduler")
        a8 = MessageAssignment(8, tuple(frozenset({i}) for i in range(1, 9)))
        with pytest.raises(ValueError):
            exact_expected_dof(8, 0.5, a8, "oracle")
        with pytest.raises(ValueError):
            exact_expected_dof(8, 0.5, a8, "montecarlo")
