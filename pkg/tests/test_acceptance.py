"""Acceptance suite: one test per acceptance criterion.

Every test prints one ``ACCEPTANCE <n>: PASS/FAIL`` line (run with ``-s``
to see them live) and enforces both the numeric tolerance and the runtime
budget of its criterion.
"""

import math
import time

import numpy as np
import pytest

from sensefuse import analytic as an
from sensefuse import optimize as op
from sensefuse import simulate as sim
from sensefuse.experiments import derive_seed, run_random_error_study
from sensefuse.model import CodingPolicy, SystemModel

CH_SPEC = sim.FoldedNormalSpec(target_mean=5.0, std_dev=1.5)
OB_SPEC = sim.FoldedNormalSpec(target_mean=7.0, std_dev=1.5)


class _Criterion:
    """Context manager that times a criterion and prints its verdict."""

    def __init__(self, number: int, budget_s: float):
        self.number = number
        self.budget_s = budget_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None and elapsed < self.budget_s else "FAIL"
        print(f"ACCEPTANCE {self.number:2d}: {status} "
              f"({elapsed:.2f}s / budget {self.budget_s:g}s)")
        if exc_type is None:
            assert elapsed < self.budget_s, (
                f"criterion {self.number} exceeded its {self.budget_s}s budget "
                f"({elapsed:.2f}s)")
        return False


def test_criterion_01_crossover_individual_power():
    with _Criterion(1, budget_s=1.0):
        root = an.crossover_node_count(7.0, 5.0)
        assert abs(root - 4.085714) < 1e-3
        gap = lambda k: (an.coded_homo_distortion(k, 7.0, 5.0)
                         - an.uncoded_homo_distortion(k, 7.0, 5.0))
        assert gap(4) < 0 < gap(5)


def test_criterion_02_crossover_total_power():
    with _Criterion(2, budget_s=1.0):
        root = an.crossover_node_count_total(7.0, 5.0)
        assert abs(root - 3.65483) < 1e-3


def test_criterion_03_coded_asymptote():
    with _Criterion(3, budget_s=1.0):
        got = an.coded_homo_distortion(100_000_000, 7.0, 5.0)
        assert abs(got - 1.0 / 36.0) / (1.0 / 36.0) < 1e-6


def test_criterion_04_oracle_equivalence():
    with _Criterion(4, budget_s=10.0):
        rng = np.random.default_rng(4)
        worst_gap = worst_sm = 0.0
        for i in range(1000):
            k = int(rng.integers(1, 13))
            model = sim.generate_instance(k, CH_SPEC, OB_SPEC,
                                          derive_seed(4, "model", i))
            closed = an.coded_hetero_distortion(model)
            oracle = an.blue_distortion(an.total_noise_covariance(model))
            worst_gap = max(worst_gap, abs(closed - oracle) / oracle)
            worst_sm = max(worst_sm, an.sherman_morrison_check(model))
        assert worst_gap < 1e-10
        assert worst_sm < 1e-9


def test_criterion_05_monte_carlo_validation():
    with _Criterion(5, budget_s=120.0):
        rng = np.random.Generator(np.random.Philox(derive_seed(5, "policies")))
        for i in range(20):
            k = int(rng.integers(1, 7))
            model = sim.generate_instance(k, CH_SPEC, OB_SPEC,
                                          derive_seed(5, "model", i))
            for j in range(3):
                policy = CodingPolicy(tuple(int(b) for b in rng.integers(0, 2, k)))
                expected = an.hybrid_distortion(model, policy).total
                stats = sim.empirical_distortion(model, policy, 1_000_000,
                                                 derive_seed(5, "trial", i, j))
                assert abs(stats.mean_sq_error - expected) < 3 * stats.std_error
                assert abs(stats.mean_sq_error - expected) / expected < 0.01


def test_criterion_06_fading_closed_form():
    with _Criterion(6, budget_s=120.0):
        for k in (1, 5, 10, 30):
            model = SystemModel.homogeneous(k, 7.0, 5.0)
            closed = an.fading_coded_homo_distortion(k, 7.0, 5.0, 0.9)
            stats = sim.fading_empirical_distortion(model, 0.9, 1_000_000,
                                                    derive_seed(6, "mc", k),
                                                    shared_gain=True)
            assert abs(stats.mean_sq_error - closed) / closed < 0.005


def test_criterion_07_algorithm_identities():
    with _Criterion(7, budget_s=60.0):
        rng = np.random.default_rng(7)
        for i in range(1000):
            k = int(rng.integers(1, 11))
            model = sim.generate_instance(k, CH_SPEC, OB_SPEC,
                                          derive_seed(7, "model", i))
            pure = op.pure_greedy(model)
            group1 = op.group_greedy(model, 1)
            assert group1.policy == pure.policy
            assert group1.distortion == pure.distortion
            if k <= 8:
                best = op.global_search(model)
                full = op.group_greedy(model, op.exhaustive_group_size(k))
                assert full.policy == best.policy
                assert full.distortion == best.distortion


def test_criterion_08_greedy_quality():
    with _Criterion(8, budget_s=300.0):
        n_sim, k = 2000, 10
        group_sizes = (1, 2, 4, 8, 16, 32)
        opt_d, opt_p = [], []
        pure_d, sorted_d = [], []
        group_d = {size: [] for size in group_sizes}
        group_p = {size: [] for size in group_sizes}
        for i in range(n_sim):
            model = sim.generate_instance(k, CH_SPEC, OB_SPEC,
                                          derive_seed(8, "inst", i))
            best = op.global_search(model)
            opt_d.append(best.distortion)
            opt_p.append(best.policy)
            pure_d.append(op.pure_greedy(model).distortion)
            sorted_d.append(op.sorted_greedy(model).distortion)
            for size in group_sizes:
                result = op.group_greedy(model, size)
                group_d[size].append(result.distortion)
                group_p[size].append(result.policy)
        assert op.normalized_distortion(pure_d, opt_d) <= 1.002
        assert op.normalized_distortion(sorted_d, opt_d) <= 1.002
        for size in group_sizes:
            if size >= 10:
                assert op.normalized_distortion(group_d[size], opt_d) <= 1.002
        error_rates = [op.policy_error_rate(group_p[size], opt_p)
                       for size in group_sizes]
        for earlier, later in zip(error_rates, error_rates[1:]):
            assert later <= earlier + 0.01


def test_criterion_09_random_error_study():
    with _Criterion(9, budget_s=300.0):
        rows = run_random_error_study(k=10, group_sizes=[1, 2, 4, 8, 16, 32],
                                      n_sim=800, seed=9)
        for row in rows:
            assert row["policy_error_rate"] > 0.0
            assert row["nd_flip_full"] > row["nd_group"]


def test_criterion_10_limit_tables():
    with _Criterion(10, budget_s=1.0):
        gob_sub = {"zero": 1e-9, "finite": 7.0, "inf": 1e9}
        gch_sub = {"zero": 1e-9, "finite": 5.0, "inf": 1e9}
        formulas = {"coded": an.coded_homo_distortion,
                    "uncoded": an.uncoded_homo_distortion}
        for k in (1, 4, 10):
            for scheme, formula in formulas.items():
                for ob in ("zero", "finite", "inf"):
                    for ch in ("zero", "finite", "inf"):
                        entry = an.limiting_distortion(scheme, ob, ch, k, 7.0, 5.0)
                        ch_val = gch_sub[ch]
                        if scheme == "coded" and ob == "zero" and ch == "zero":
                            # path-dependent corner: the tabulated value takes
                            # the channel limit first, so its epsilon must
                            # dominate the observation one
                            ch_val = 1e-18
                        got = formula(k, gob_sub[ob], ch_val)
                        if math.isinf(entry):
                            assert got > 1e6
                        elif entry == 0.0:
                            assert got < 1e-4
                        else:
                            assert abs(got - entry) / entry < 1e-4


def test_criterion_11_condition_consistency():
    with _Criterion(11, budget_s=30.0):
        rng = np.random.default_rng(11)
        for _ in range(100_000):
            k = int(rng.integers(1, 13))
            gob = np.abs(7.0 + 1.5 * rng.standard_normal(k))
            gch = np.abs(5.0 + 1.5 * rng.standard_normal(k))
            # raises internally if the two equivalent forms ever disagree
            an.coded_wins_hetero(SystemModel.from_snrs(gob, gch))

        grid = np.geomspace(0.1, 100.0, 50)
        for k in (3, 10, 30):
            for gob in grid:
                for gch in grid:
                    lhs = k * (1 + 2 * gch) * gob / ((1 + gch + gob) * gch)
                    rhs = (k * gob / (1 + gch + gob)) ** 2
                    if abs(lhs - rhs) < 1e-6 * max(lhs, rhs):
                        continue  # boundary exclusion
                    hetero = an.coded_wins_hetero(
                        SystemModel.homogeneous(k, float(gob), float(gch)))
                    assert hetero == an.coded_wins_homo(k, float(gob), float(gch))
