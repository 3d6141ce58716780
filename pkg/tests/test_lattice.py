import itertools
import math
from pathlib import Path

import numpy as np
import pytest

from src.config.configuration import Configuration
from src.config.methods import LatticeGreenMethod, LatticeSumMethod
from src.exceptions import DimensionUnsupported
from src.lattice import (
    BesselSolver,
    CacheEntry,
    ExtrapolationSolver,
    LatticeGreenCache,
    QuadratureSolver,
    alpha_d,
    alpha_provenance,
    build_solver,
    canonical_xi,
    green_square_sum,
    lattice_ball,
    lattice_green,
    lattice_sum_inverse_fourth,
    lazy_green_relation,
    phi_d,
    richardson_diagonal,
    simple_walk_green,
)
from src.lattice.quadrature import sphere_area
from src.lattice.sums import four_dim_partial_sum
from src.spectral import build_green_tables, green_at, moment_sum
from src.torus import TorusGeometry

WATSON = {3: 1.516386059, 4: 1.239467122, 5: 1.156308125}


def test_canonical_xi_sorts_absolute_values():
    assert canonical_xi([-2, 0, 1], 3) == (0, 1, 2)
    with pytest.raises(ValueError):
        canonical_xi([1, 2], 3)


def test_dimension_guards():
    solver = BesselSolver()
    with pytest.raises(DimensionUnsupported):
        solver.green((0, 0), 2)
    with pytest.raises(DimensionUnsupported):
        solver.green_deriv((0, 0, 0, 0), 4)


def test_richardson_is_exact_on_its_own_model():
    ns = [4, 8, 16, 32]
    exponents = [1, 3, 5]
    values = [3.0 + 2.0 * (4 / n) - (4 / n) ** 3 for n in ns]
    diagonal = richardson_diagonal(ns, values, exponents)
    assert diagonal[0] == values[0]
    assert diagonal[2] == pytest.approx(3.0, abs=1e-12)
    assert diagonal[3] == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_simple_walk_return_constants(d):
    assert simple_walk_green((0,) * d, d) == pytest.approx(WATSON[d], abs=1e-7)


def test_lazy_walk_doubles_simple_walk():
    d = 3
    g_star = simple_walk_green((1, 0, 0), d)
    green = BesselSolver().green((0, 0, 1), d)
    assert green.value == pytest.approx(lazy_green_relation(g_star, 0.0, 0.5)[0], rel=1e-10)
    # First step of the simple walk: G_*(0) = 1 + G_*(e_1).
    assert simple_walk_green((0, 0, 0), d) == pytest.approx(1.0 + g_star, rel=1e-9)


def test_lazy_relation_rejects_full_laziness():
    assert lazy_green_relation(1.0, 0.0, 0.0) == (1.0, 0.0)
    with pytest.raises(ValueError):
        lazy_green_relation(1.0, 0.0, 1.0)


def test_phi_d():
    assert phi_d([0.5, 0.5, 0.5]) == pytest.approx(1.0)
    values = phi_d(np.array([[0.5, 0.5, 0.5], [0.25, 0.5, 0.5]]))
    assert values.shape == (2,)
    assert values[1] == pytest.approx(3 / 2.5)


def test_square_sum_is_green_plus_derivative():
    total = green_square_sum(5, method="bessel", cache=False)
    green = lattice_green((0,) * 5, 5, method="bessel", cache=False)
    assert total.value > green.value > 2.0


def test_build_solver():
    assert isinstance(build_solver("bessel"), BesselSolver)
    assert isinstance(build_solver(LatticeGreenMethod.QUADRATURE), QuadratureSolver)
    assert isinstance(build_solver(), ExtrapolationSolver)
    with pytest.raises(ValueError):
        build_solver("monte-carlo")


class TestNSequence:
    def test_doubling_when_budget_allows(self):
        solver = ExtrapolationSolver(Configuration(max_vertices=2**26))
        assert solver.n_sequence(3) == [16, 32, 64, 128, 256]

    def test_arithmetic_fallback_in_high_dimension(self):
        solver = ExtrapolationSolver(Configuration(max_vertices=2**26))
        assert solver.n_sequence(5) == [16, 20, 24, 28, 32, 36]

    def test_explicit_values_win(self):
        assert ExtrapolationSolver(n_values=[6, 8]).n_sequence(3) == [6, 8]


class TestCache:
    def test_round_trip_merges_green_and_derivative(self, tmp_path):
        path = tmp_path / "lattice.csv"
        cache = LatticeGreenCache(path)
        cache.put(CacheEntry(d=5, xi=(0, 0, 0, 0, 1), method="bessel", green=0.5, green_bound=1e-9, radius=3))
        cache.put(CacheEntry(d=5, xi=(0, 0, 0, 0, 1), method="bessel", green_deriv=0.25, green_deriv_bound=1e-8))

        reloaded = LatticeGreenCache(path)
        entry = reloaded.get(5, (0, 0, 0, 0, 1), "bessel")
        assert len(reloaded) == 1
        assert entry.green == 0.5 and entry.green_deriv == 0.25
        assert entry.radius == 3
        assert entry.bound == 1e-8

    def test_newer_value_replaces_older_with_its_bound(self, tmp_path):
        path = tmp_path / "lattice.csv"
        cache = LatticeGreenCache(path)
        cache.put(CacheEntry(d=3, xi=(0, 0, 1), method="extrapolation", green=0.9, green_bound=1e-4, radius=64))
        cache.put(CacheEntry(d=3, xi=(0, 0, 1), method="extrapolation", green=0.91, green_bound=1e-7, radius=128))

        entry = LatticeGreenCache(path).get(3, (0, 0, 1), "extrapolation")
        assert entry.green == 0.91
        assert entry.green_bound == 1e-7
        assert entry.radius == 128

    def test_lookup_is_served_from_cache(self, tmp_path):
        cache = LatticeGreenCache(tmp_path / "lattice.csv")
        cache.put(CacheEntry(d=3, xi=(0, 0, 0), method="bessel", green=42.0, green_bound=0.0))
        assert lattice_green((0, 0, 0), 3, method="bessel", cache=cache).value == 42.0

    def test_unknown_header_is_ignored(self, tmp_path):
        path = tmp_path / "lattice.csv"
        path.write_text("a,b\n1,2\n", encoding="utf-8")
        assert len(LatticeGreenCache(path)) == 0

    def test_default_cache_under_cache_dir(self, configuration):
        first = lattice_green((1, 0, 0), 3, method="bessel")
        assert (Path(configuration.cache_dir) / "lattice_green.csv").is_file()
        assert lattice_green((0, 1, 0), 3, method="bessel") == first


class TestLatticeSums:
    def test_inverse_fourth_sum_in_three_dimensions(self):
        theta = lattice_sum_inverse_fourth(3)
        shell = lattice_sum_inverse_fourth(3, LatticeSumMethod.SHELL)
        assert theta.value == pytest.approx(16.5323, abs=1e-4)
        assert abs(theta.value - shell.value) <= shell.bound

    def test_unsupported_dimension(self):
        with pytest.raises(DimensionUnsupported):
            lattice_sum_inverse_fourth(5)
        with pytest.raises(DimensionUnsupported):
            alpha_d(5)

    def test_four_square_partial_sum_matches_enumeration(self):
        n = 5
        axis = range(-n, n + 1)
        brute = math.fsum(
            1.0 / sum(c * c for c in v) ** 2
            for v in itertools.product(axis, repeat=4)
            if 0 < sum(c * c for c in v) <= n * n
        )
        assert four_dim_partial_sum(n) == pytest.approx(brute, rel=1e-12)

    @pytest.mark.slow
    def test_four_dimensional_slope_is_sphere_area(self):
        assert lattice_sum_inverse_fourth(4).value == pytest.approx(2 * math.pi**2, rel=1e-2)

    def test_alpha_three_is_cached_with_provenance(self, configuration):
        expected = 9 * 16.5323 / (math.pi**4 * (2 * WATSON[3]) ** 2)
        assert alpha_d(3) == pytest.approx(expected, rel=1e-4)
        provenance = alpha_provenance(3)
        assert provenance["lattice_sum"]["method"] == "theta"
        assert provenance["green_origin"]["method"] == "bessel"
        assert (Path(configuration.cache_dir) / "constants.json").is_file()


@pytest.mark.parametrize("d,radius", [(3, 2), (3, 3), (4, 2)])
def test_lattice_ball_matches_enumeration(d, radius):
    axis = range(-radius, radius + 1)
    points = [v for v in itertools.product(axis, repeat=d) if sum(c * c for c in v) <= radius * radius]
    ball = lattice_ball(radius, d)
    assert sum(size for _, size in ball) == len(points)
    assert {rep for rep, _ in ball} == {canonical_xi(v, d) for v in points}


@pytest.mark.slow
class TestCrossChecks:
    def test_extrapolation_agrees_with_bessel(self):
        config = Configuration(lattice_tolerance=1e-4)
        solver = ExtrapolationSolver(config, n_values=[16, 32, 64, 128])
        for xi in [(0, 0, 0), (0, 1, 2)]:
            reference = BesselSolver().green(xi, 3).value
            assert solver.green(xi, 3).value == pytest.approx(reference, abs=1e-4)

    def test_quadrature_agrees_with_bessel(self):
        solver = QuadratureSolver(Configuration(), cells=81)
        estimate = solver.green((0, 0, 1), 3)
        reference = BesselSolver().green((0, 0, 1), 3).value
        assert abs(estimate.value - reference) <= max(estimate.bound, 5e-2)

    def test_derivative_extrapolation_in_five_dimensions(self):
        config = Configuration(lattice_tolerance=1e-3, max_vertices=2**26)
        solver = ExtrapolationSolver(config, n_values=[8, 12, 16, 20, 24])
        reference = BesselSolver().green_deriv((0,) * 5, 5).value
        assert solver.green_deriv((0,) * 5, 5).value == pytest.approx(reference, rel=1e-2)


def test_second_moment_is_green_plus_derivative_on_the_torus():
    geom = TorusGeometry(5, 4)
    tables = build_green_tables(geom)
    assert moment_sum(2, geom) == pytest.approx(tables.g0 + tables.gprime0, rel=1e-12)


@pytest.mark.slow
def test_torus_square_sum_approaches_lattice_value():
    lattice = green_square_sum(5, method="bessel", cache=False).value
    torus = moment_sum(2, TorusGeometry(5, 16))
    assert torus == pytest.approx(lattice, rel=0.1)


@pytest.mark.slow
@pytest.mark.parametrize("coords", [(1, 0, 0), (2, 1, 0), (3, 3, 3)])
def test_two_point_function_approaches_lattice_sum(coords):
    n = 64
    geom = TorusGeometry(3, n)
    g0, _ = green_at(geom.origin, geom)
    g_xi, _ = green_at(geom.point(coords), geom)
    solver = BesselSolver()
    lattice = solver.green((0, 0, 0), 3).value + solver.green(coords, 3).value
    assert abs((g0 + g_xi) - lattice) <= 20.0 / n


def green_far_field(d: int) -> float:
    """c in G(x) ~ c |x|^{2-d} for the lazy walk."""
    return d * math.gamma(d / 2 - 1) / math.pi ** (d / 2)


@pytest.mark.slow
@pytest.mark.parametrize("d, radius", [(6, 6), (7, 5)])
def test_square_sum_over_a_ball_approaches_green_plus_derivative(d, radius):
    solver = BesselSolver()
    parts, bound = [], 0.0
    for rep, size in lattice_ball(radius, d):
        estimate = solver.green(rep, d)
        parts.append(size * estimate.value**2)
        bound += size * 2.0 * estimate.value * estimate.bound
    ball = math.fsum(parts)
    target = green_square_sum(d, method="bessel", cache=False)

    # Lattice points with |v|^2 <= R^2 fill the ball of radius sqrt(R^2 + 1/2).
    effective = math.sqrt(radius * radius + 0.5)
    tail = sphere_area(d) * green_far_field(d) ** 2 * effective ** (4 - d) / (d - 4)
    slack = bound + target.bound
    gap = target.value - ball
    assert 0.5 * tail - slack <= gap <= 2.0 * tail + slack


@pytest.mark.slow
def test_origin_value_agrees_across_side_length_families():
    config = Configuration(lattice_tolerance=2e-6, max_vertices=2**26)
    origin = (0,) * 5
    by_fours = ExtrapolationSolver(config, n_values=[16, 20, 24, 28, 32, 36]).green(origin, 5)
    by_sixes = ExtrapolationSolver(config, n_values=[12, 18, 24, 30, 36]).green(origin, 5)
    assert abs(by_fours.value - by_sixes.value) <= 1e-5
