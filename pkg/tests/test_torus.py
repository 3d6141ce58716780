import math

import numpy as np
import pytest
from scipy.stats import chisquare

from src.exceptions import BudgetExceeded, InvalidPoint
from src.torus import (
    CENSORED,
    RandomSource,
    TorusGeometry,
    iter_positions,
    lazy_step,
    run_replicate,
    sample_hitting_time,
    sample_uniform_point,
    trajectory,
    walk_visits,
)
from tests.oracles import absorbing_tails


class TestGeometry:
    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            TorusGeometry(0, 4)
        with pytest.raises(ValueError):
            TorusGeometry(3, 1)

    def test_point_reduces_mod_n_unless_strict(self):
        geom = TorusGeometry(3, 5)
        assert geom.point([6, -1, 2]).coords == (1, 4, 2)
        with pytest.raises(InvalidPoint):
            geom.point([6, 0, 0], strict=True)
        with pytest.raises(InvalidPoint):
            geom.point([1, 2])

    def test_index_round_trip_is_row_major(self):
        geom = TorusGeometry(3, 4)
        assert geom.index_of((1, 2, 3)) == 16 + 8 + 3
        for index in (0, 5, 37, 63):
            assert geom.index_of(geom.point_of(index)) == index
        with pytest.raises(InvalidPoint):
            geom.point_of(64)

    def test_budget(self):
        TorusGeometry(3, 4).check_budget(64)
        with pytest.raises(BudgetExceeded):
            TorusGeometry(3, 5).check_budget(64)

    @pytest.mark.parametrize("d,n", [(1, 7), (2, 6), (3, 5), (3, 6), (4, 4)])
    def test_orbit_sizes_partition_the_torus(self, d, n):
        geom = TorusGeometry(d, n)
        assert sum(size for _, size in geom.orbits()) == geom.volume

    def test_canonical_folds_and_sorts(self):
        geom = TorusGeometry(3, 8)
        assert geom.canonical(geom.point([7, 0, 5])) == (0, 1, 3)
        assert geom.norm(geom.point([7, 0, 5]), ord=np.inf) == 3.0


class TestRandomSource:
    def test_same_key_same_words(self):
        assert np.array_equal(RandomSource(42, 3).words(16), RandomSource(42, 3).words(16))

    def test_distinct_keys_differ(self):
        base = RandomSource(42, 3).words(8)
        assert not np.array_equal(base, RandomSource(42, 4).words(8))
        assert not np.array_equal(base, RandomSource(43, 3).words(8))
        assert not np.array_equal(base, RandomSource(42, 3).child(0).words(8))

    def test_uniform_indices_in_range(self):
        values = RandomSource(1).uniform_indices(1000, 7)
        assert values.min() >= 0 and values.max() <= 6


class TestWalk:
    def test_lazy_step_moves_at_most_one_unit(self):
        geom = TorusGeometry(3, 5)
        rng = RandomSource(9)
        p = geom.origin
        for _ in range(100):
            q = lazy_step(p, geom, rng)
            assert geom.norm(geom.point(np.subtract(q.coords, p.coords)), ord=1) <= 1
            p = q

    def test_trajectory_matches_repeated_steps(self):
        geom = TorusGeometry(2, 6)
        start = geom.point([1, 2])
        path = trajectory(start, 50, geom, RandomSource(5))
        rng = RandomSource(5)
        p = start
        for row in path[1:]:
            p = lazy_step(p, geom, rng)
            assert p.coords == tuple(row)

    def test_step_distribution_is_half_lazy(self):
        geom = TorusGeometry(2, 9)
        path = trajectory(geom.origin, 40000, geom, RandomSource(11))
        moves = np.diff(path, axis=0) % geom.n
        axis = np.argmax(moves != 0, axis=1)
        backward = moves[np.arange(len(moves)), axis] == geom.n - 1
        labels = np.where(moves.any(axis=1), 1 + 2 * axis + backward, 0)
        counts = np.bincount(labels, minlength=5)
        expected = np.array([0.5, 0.125, 0.125, 0.125, 0.125]) * len(labels)
        assert chisquare(counts, expected).pvalue > 1e-4

    def test_blocks_concatenate_to_the_trajectory(self):
        geom = TorusGeometry(3, 7)
        start = geom.point([1, 2, 3])
        blocks = list(iter_positions(start, 250, geom, RandomSource(9, 4), chunk=32))
        assert max(len(b) for b in blocks) == 32
        path = trajectory(start, 250, geom, RandomSource(9, 4))
        assert np.array_equal(np.concatenate(blocks), path[1:])

    @pytest.mark.parametrize("chunk", [1, 13, 4096])
    def test_visits_do_not_depend_on_chunk_size(self, chunk):
        geom = TorusGeometry(3, 6)
        reference = np.zeros(geom.volume, dtype=bool)
        rng = RandomSource(5, 3)
        start = sample_uniform_point(geom, rng)
        reference[geom.indices_of(trajectory(start, 700, geom, rng))] = True
        assert np.array_equal(walk_visits(geom, 700, RandomSource(5, 3), chunk=chunk), reference)

    def test_zero_horizon_single_walk(self):
        geom = TorusGeometry(3, 4)
        obs = run_replicate(geom, 1, 0, RandomSource(1, 0))
        assert obs.vacant_count == geom.volume - 1
        assert obs.range_vector == (geom.volume - 1, 1)

    def test_range_vector_partitions_vertices(self):
        geom = TorusGeometry(3, 5)
        obs = run_replicate(geom, 3, 40, RandomSource(7, 2))
        assert obs.total == geom.volume
        assert len(obs.range_vector) == 8

    def test_replicate_is_deterministic(self):
        geom = TorusGeometry(3, 6)
        assert run_replicate(geom, 2, 100, RandomSource(3, 8)) == run_replicate(geom, 2, 100, RandomSource(3, 8))

    def test_longer_horizon_extends_same_paths(self):
        geom = TorusGeometry(2, 30)
        short = run_replicate(geom, 1, 20, RandomSource(4, 1))
        long = run_replicate(geom, 1, 60, RandomSource(4, 1))
        assert long.vacant_count <= short.vacant_count

    def test_replicate_arguments(self):
        geom = TorusGeometry(2, 4)
        with pytest.raises(ValueError):
            run_replicate(geom, 0, 5, RandomSource(0))
        with pytest.raises(ValueError):
            run_replicate(geom, 1, -1, RandomSource(0))
        with pytest.raises(BudgetExceeded):
            run_replicate(geom, 1, 5, RandomSource(0), max_vertices=8)


class TestHittingTime:
    def test_start_inside_targets(self):
        geom = TorusGeometry(1, 2)
        assert sample_hitting_time(geom, [geom.point([0]), geom.point([1])], 10, RandomSource(0)) == 0

    def test_censored_past_cap(self):
        geom = TorusGeometry(3, 9)
        results = [sample_hitting_time(geom, [geom.origin], 0, RandomSource(2, i)) for i in range(20)]
        assert all(r is CENSORED or r == 0 for r in results)

    def test_mean_hitting_time_one_dimensional_cycle(self):
        geom = TorusGeometry(1, 5)
        times = [sample_hitting_time(geom, [geom.origin], 10**6, RandomSource(8, i)) for i in range(4000)]
        assert CENSORED not in times
        # Uniform start on the 5-cycle: E tau = (2 / 5) * sum_k k (5 - k) = 8 for the lazy walk.
        mean = float(np.mean(times))
        se = float(np.std(times)) / math.sqrt(len(times))
        assert abs(mean - 8.0) < 5 * se

    @pytest.mark.slow
    def test_distribution_matches_absorbing_chain(self):
        geom = TorusGeometry(3, 3)
        targets = [geom.origin, geom.point([1, 1, 0])]
        cap = 50
        samples = 100_000
        times = [sample_hitting_time(geom, targets, cap, RandomSource(21, i)) for i in range(samples)]
        survived = np.array([cap + 1 if r is CENSORED else r for r in times])
        exact = absorbing_tails(geom, targets, cap)
        for t in (0, 1, 2, 5, 10, 50):
            p = exact[t]
            observed = float(np.mean(survived > t))
            assert abs(observed - p) <= 5.0 * math.sqrt(p * (1.0 - p) / samples)


@pytest.mark.slow
def test_uniform_point_is_uniform():
    geom = TorusGeometry(3, 3)
    rng = RandomSource(17)
    draws = 1_000_000
    counts = np.bincount(
        [geom.index_of(sample_uniform_point(geom, rng)) for _ in range(draws)], minlength=geom.volume
    )
    assert chisquare(counts, np.full(geom.volume, draws / geom.volume)).pvalue > 1e-3
