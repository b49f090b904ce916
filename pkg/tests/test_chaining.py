import math

import numpy as np
import pytest

from berncomp import (
    AdmissibleSequence,
    EntropyProfile,
    EstimatorConfig,
    InvalidInputError,
    PointSet,
    admissible_capacity,
    build_admissible_sequence,
    chaining_expectation_bound,
    composite_entropy_bound,
    composite_rate,
    covering_number,
    entropy_number,
    entropy_profile,
    entropy_profile_from_csv,
    entropy_profile_to_csv,
    gamma2_upper,
    gaussian_complexity,
    lipschitz_entropy_formula,
    metric_space_from_pointset,
    min_truncation_objective,
    sample_piecewise_linear_class,
    sequence_from_text,
    sequence_to_text,
    truncation_objective,
    uniform_metric_space,
)


def random_space(seed, n_points, k=2):
    rng = np.random.default_rng(seed)
    T = PointSet(rng.uniform(-1, 1, size=(n_points, k, 2)))
    return metric_space_from_pointset(T)


class TestCoveringNumber:
    def test_single_point(self):
        sp = random_space(0, 1)
        res = covering_number(sp, 0.5)
        assert res.upper_bound == 1 and res.exact == 1

    def test_equispaced_line(self):
        pts = np.linspace(0.0, 1.0, 101)
        sp = metric_space_from_pointset(PointSet.from_rows(pts[:, None]))
        res = covering_number(sp, 0.25)
        # centers at 0.25 and 0.75 cover everything
        assert res.exact == 2
        assert res.upper_bound >= 2

    def test_delta_at_least_diameter(self):
        sp = random_space(1, 7)
        res = covering_number(sp, sp.diameter + 1e-9)
        assert res.upper_bound == 1 and res.exact == 1

    def test_nonincreasing_in_delta_and_exact_below_greedy(self):
        sp = random_space(2, 12)
        deltas = np.linspace(0.05, sp.diameter, 8)
        last = None
        for delta in deltas:
            res = covering_number(sp, float(delta))
            assert res.exact is not None
            assert res.exact <= res.upper_bound
            if last is not None:
                assert res.exact <= last
            last = res.exact


class TestEntropyNumber:
    def test_two_point_space(self):
        sp = metric_space_from_pointset(PointSet.from_rows([[0.0], [1.0]]))
        e0 = entropy_number(sp, 0)
        assert e0.exact == pytest.approx(1.0)
        e1 = entropy_number(sp, 1)
        assert e1.upper_bound == 0.0 and e1.exact == 0.0

    def test_singleton(self):
        sp = random_space(3, 1)
        assert entropy_number(sp, 0).exact == 0.0
        assert entropy_number(sp, 3).exact == 0.0

    def test_exact_below_greedy_and_nonincreasing(self):
        sp = random_space(4, 14)
        values = []
        for m in range(4):
            res = entropy_number(sp, m)
            if res.exact is not None:
                assert res.exact <= res.upper_bound + 1e-12
            values.append(res.upper_bound)
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
        assert values[-1] == 0.0  # 2^(2^2) = 16 >= 14 points

    def test_profile_sources(self):
        sp = random_space(5, 10)
        prof = entropy_profile(sp)
        assert prof.source in ("exhaustive", "empirical-greedy")
        assert prof.values[-1] == 0.0


class TestLipschitzEntropyFormula:
    def test_level_zero(self):
        assert lipschitz_entropy_formula(0, 2.0, 1.5, 3, 4.0) == pytest.approx(12.0)

    def test_k1_level3_is_eighth(self):
        c = lipschitz_entropy_formula(0, 1.0, 1.0, 1, 4.0)
        assert lipschitz_entropy_formula(3, 1.0, 1.0, 1, 4.0) == pytest.approx(c / 8)

    def test_empirical_class_entropy_below_formula(self):
        # 200 random 1-Lipschitz piecewise-linear functions on [-1, 1],
        # uniform metric over a 64-point grid
        cls = sample_piecewise_linear_class(200, L=1.0, R=1.0, seed=42)
        grid = np.linspace(-1.0, 1.0, 64)
        space = uniform_metric_space(cls.eval_batch(grid))
        for m in range(5):
            e_m = entropy_number(space, m).upper_bound
            assert e_m <= lipschitz_entropy_formula(m, 1.0, 1.0, 1, 4.0) + 1e-12


class TestAdmissibleSequence:
    def test_singleton_space(self):
        seq = build_admissible_sequence(random_space(6, 1))
        assert seq.levels == (((0,),),)

    def test_two_point_space_forced(self):
        sp = metric_space_from_pointset(PointSet.from_rows([[0.0], [1.0]]))
        seq = build_admissible_sequence(sp)
        assert seq.levels[0] == ((0, 1),)
        assert set(seq.levels[1]) == {(0,), (1,)}

    def test_random_spaces_pass_invariants(self):
        for seed in range(30):
            n_pts = 2 + seed
            sp = random_space(seed + 10, n_pts)
            seq = build_admissible_sequence(sp)
            seq.validate(n_pts)
            assert len(seq.levels[0]) == 1
            for m, level in enumerate(seq.levels):
                cap = admissible_capacity(m)
                if cap is not None:
                    assert len(level) <= cap
            assert all(len(b) == 1 for b in seq.levels[-1])

    def test_duplicate_points_still_terminate(self):
        T = PointSet.from_rows([[1.0, 2.0]] * 5)
        seq = build_admissible_sequence(metric_space_from_pointset(T))
        seq.validate(5)
        assert all(len(b) == 1 for b in seq.levels[-1])

    def test_cardinality_cap_rejected(self):
        bad = AdmissibleSequence(levels=(((0,), (1,)),))  # two blocks at level 0
        with pytest.raises(InvalidInputError):
            bad.validate(2)

    def test_nesting_violation_rejected(self):
        bad = AdmissibleSequence(levels=(
            ((0, 1, 2),),
            ((0, 1), (2,)),
            ((0,), (1, 2)),  # {1, 2} not inside a level-1 block
        ))
        with pytest.raises(InvalidInputError):
            bad.validate(3)

    def test_text_round_trip(self, tmp_path):
        sp = random_space(7, 9)
        seq = build_admissible_sequence(sp)
        path = tmp_path / "seq.txt"
        sequence_to_text(seq, path)
        assert sequence_from_text(path).levels == seq.levels


class TestGamma2Upper:
    def test_singleton_zero(self):
        sp = random_space(8, 1)
        assert gamma2_upper(sp, build_admissible_sequence(sp)) == 0.0

    def test_two_point_space_equals_distance(self):
        sp = metric_space_from_pointset(PointSet.from_rows([[0.0], [2.5]]))
        seq = build_admissible_sequence(sp)
        # level-0 term is the distance, all later blocks are singletons
        assert gamma2_upper(sp, seq) == pytest.approx(2.5, abs=1e-12)

    def test_at_least_diameter(self):
        for seed in range(15):
            sp = random_space(seed + 40, 3 + 2 * seed)
            seq = build_admissible_sequence(sp)
            assert gamma2_upper(sp, seq) >= sp.diameter - 1e-12

    def test_invalid_sequence_rejected(self):
        sp = random_space(9, 3)
        bad = AdmissibleSequence(levels=(((0, 1),),))  # misses point 2
        with pytest.raises(InvalidInputError):
            gamma2_upper(sp, bad)

    def test_gaussian_complexity_sanity_band(self):
        # Monte Carlo Gaussian complexity never exceeds 20x the chaining value
        for seed in range(10):
            rng = np.random.default_rng(seed + 60)
            T = PointSet(rng.uniform(-1, 1, size=(20, 1, 3)))
            sp = metric_space_from_pointset(T)
            g = gaussian_complexity(T, EstimatorConfig(mc_samples=3000, seed=seed))
            g2 = gamma2_upper(sp, build_admissible_sequence(sp))
            assert g.value <= 20.0 * g2

    def test_dudley_sum_dominance(self):
        # chaining value of the built sequence vs 8x the greedy entropy sum
        for seed in range(20):
            sp = random_space(seed + 80, 4 + seed)
            seq = build_admissible_sequence(sp)
            g2 = gamma2_upper(sp, seq)
            dudley = sum(
                (2.0 ** (m / 2.0)) * entropy_number(sp, m).upper_bound
                for m in range(6)
            )
            assert g2 <= 8.0 * dudley + 1e-12


class TestCompositeEntropyBound:
    def test_zero_profile(self):
        prof = EntropyProfile((0.0, 0.0, 0.0), "lipschitz-formula")
        val, best_m = composite_entropy_bound(64, 2.0, 1.5, prof, c1=1.0)
        assert val == pytest.approx(3.0)
        assert best_m == 0

    def test_geometric_profile_minimizer_frozen(self):
        # e_m = 2^-m, n = 256: exhaustive scan gives M* = 7 and a minimum
        # close to 3.33 / sqrt(n)
        prof = EntropyProfile(tuple(2.0 ** -m for m in range(21)), "lipschitz-formula")
        val, best_m = composite_entropy_bound(256, 1.0, 0.0, prof)
        assert best_m == 7
        inner = val / 256
        assert inner * math.sqrt(256) == pytest.approx(3.3258, abs=2e-3)

    def test_scan_matches_brute_force(self):
        rng = np.random.default_rng(16)
        raw = np.sort(rng.uniform(0, 1, size=10))[::-1]
        prof = EntropyProfile(tuple(raw), "empirical-greedy")
        n, L, bT = 50, 1.5, 0.7
        val, best_m = composite_entropy_bound(n, L, bT, prof, c1=2.0)
        inners = [
            prof.values[M]
            + sum((2.0 ** (m / 2.0)) * prof.values[m] for m in range(M + 1)) / math.sqrt(n)
            for M in range(len(prof.values))
        ]
        assert val == pytest.approx(2.0 * L * bT + n * min(inners))
        assert best_m == int(np.argmin(inners))

    def test_nonincreasing_when_entropy_drops(self):
        prof_hi = EntropyProfile((1.0, 0.5, 0.25), "lipschitz-formula")
        prof_lo = EntropyProfile((1.0, 0.4, 0.25), "lipschitz-formula")
        v_hi, _ = composite_entropy_bound(16, 1.0, 1.0, prof_hi)
        v_lo, _ = composite_entropy_bound(16, 1.0, 1.0, prof_lo)
        assert v_lo <= v_hi + 1e-12


class TestTruncationObjective:
    def test_k1_band_from_scan(self):
        # frozen from the exhaustive scan: min_M h scaled by sqrt(n) stays
        # inside [2.8, 3.5] over the full grid
        for n in (16, 64, 256, 1024, 4096):
            v, _ = min_truncation_objective(1, n)
            assert 2.8 / math.sqrt(n) <= v <= 3.5 / math.sqrt(n)

    def test_k2_display_at_n1024(self):
        h = truncation_objective(10, 2, 1024)  # M = floor(log2 n)
        assert h <= 2.0 * math.log(1024) / math.sqrt(1024)

    def test_k4_bounded_ratio(self):
        v, _ = min_truncation_objective(4, 4096)
        assert 0.2 <= v / 4096 ** -0.25 <= 5.0

    def test_value_formula_spot_check(self):
        # k = 2 makes the sum exponent vanish: h = 2^(-M/2) + (M+1)/sqrt(n)
        assert truncation_objective(4, 2, 100) == pytest.approx(0.25 + 5 / 10)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidInputError):
            truncation_objective(-1, 1, 4)
        with pytest.raises(InvalidInputError):
            composite_rate(0, 1)


class TestCompositeRate:
    def test_values(self):
        assert composite_rate(100, 1) == pytest.approx(0.1)
        assert composite_rate(100, 2) == pytest.approx(math.log(100) / 10)
        assert composite_rate(256, 4) == pytest.approx(0.25)


class TestChainingExpectationBound:
    def test_kappa_one_drops_log_term(self):
        assert chaining_expectation_bound(3.0, 10.0, 1.0, 2.0) == pytest.approx(6.0)

    def test_singleton_zero(self):
        assert chaining_expectation_bound(0.0, 0.0, 5.0) == 0.0

    def test_two_point_with_kappa_e(self):
        assert chaining_expectation_bound(1.0, 1.0, math.e, 1.0) == pytest.approx(2.0)

    def test_kappa_below_one_rejected(self):
        with pytest.raises(InvalidInputError):
            chaining_expectation_bound(1.0, 1.0, 0.5)


class TestProfileSerialization:
    def test_csv_round_trip(self, tmp_path):
        prof = EntropyProfile((1.0, 0.5, 0.0), "empirical-greedy")
        path = tmp_path / "profile.csv"
        entropy_profile_to_csv(prof, path)
        back = entropy_profile_from_csv(path)
        assert back.values == prof.values and back.source == prof.source

    def test_increasing_profile_rejected(self):
        with pytest.raises(InvalidInputError):
            EntropyProfile((0.5, 1.0), "empirical-greedy")
