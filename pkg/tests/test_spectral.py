import math
from dataclasses import replace

import numpy as np
import pytest

from src.config.configuration import Configuration
from src.exceptions import FloorViolation, PoleProximity
from src.spectral import (
    build_eigen_table,
    build_green_tables,
    cached_green_tables,
    calibrate_floor,
    check_identities,
    eigenvalue,
    green_at,
    green_generating,
    green_table_columns,
    green_table_rows,
    moment_sum,
    two_point_f,
)
from src.torus import TorusGeometry
from tests.oracles import green_by_fundamental_matrix


class TestEigen:
    def test_table_matches_pointwise_eigenvalue(self):
        geom = TorusGeometry(3, 5)
        eig = build_eigen_table(geom)
        for coords in [(0, 0, 0), (1, 0, 0), (2, 4, 1), (4, 4, 4)]:
            p = geom.point(coords)
            assert eig.lam[coords] == pytest.approx(eigenvalue(p, geom), abs=1e-15)

    def test_table_is_read_only_and_in_unit_interval(self):
        eig = build_eigen_table(TorusGeometry(3, 6))
        assert eig.lam.flat[0] == 0.0
        assert eig.lam.min() >= 0.0 and eig.lam.max() <= 1.0
        with pytest.raises(ValueError):
            eig.lam[1, 1, 1] = 0.0

    def test_folded_values_are_bitwise_symmetric(self):
        eig = build_eigen_table(TorusGeometry(3, 7))
        assert eig.lam[1, 2, 3] == eig.lam[6, 5, 4]

    def test_first_moment_is_green_at_origin(self):
        geom = TorusGeometry(3, 6)
        assert moment_sum(1, geom) == pytest.approx(build_green_tables(geom).g0, rel=1e-12)
        with pytest.raises(ValueError):
            moment_sum(0, geom)


class TestGreenTables:
    @pytest.mark.parametrize("d,n", [(3, 3), (3, 4), (3, 5), (4, 3)])
    def test_match_fundamental_matrix(self, d, n):
        geom = TorusGeometry(d, n)
        g, gprime = green_by_fundamental_matrix(geom)
        tables = build_green_tables(geom)
        np.testing.assert_allclose(tables.g, g, atol=1e-10)
        np.testing.assert_allclose(tables.gprime, gprime, atol=1e-9)

    def test_fft_agrees_with_naive_sum(self):
        geom = TorusGeometry(3, 5)
        fast = build_green_tables(geom)
        slow = build_green_tables(geom, method="naive")
        np.testing.assert_allclose(fast.g, slow.g, atol=1e-12)
        np.testing.assert_allclose(fast.gprime, slow.gprime, atol=1e-12)

    def test_naive_sum_refuses_large_tori(self):
        with pytest.raises(ValueError):
            build_green_tables(TorusGeometry(3, 6), method="naive")
        with pytest.raises(ValueError):
            build_green_tables(TorusGeometry(3, 4), method="dct")

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_identities_hold_in_three_dimensions(self, n):
        report = check_identities(build_green_tables(TorusGeometry(3, n)))
        assert report.passed, report

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_identities_hold_in_four_dimensions(self, n):
        assert check_identities(build_green_tables(TorusGeometry(4, n))).passed

    def test_corrupted_table_fails_identities(self):
        tables = build_green_tables(TorusGeometry(3, 5))
        g = tables.g.copy()
        g[1, 2, 3] += 1e-3
        broken = type(tables)(geom=tables.geom, eig=tables.eig, g=g, gprime=tables.gprime)
        assert not check_identities(broken).passed

    def test_direct_sum_matches_table(self):
        geom = TorusGeometry(4, 6)
        tables = cached_green_tables(geom)
        for coords in [(0, 0, 0, 0), (1, 0, 0, 0), (3, 2, 5, 1)]:
            g, gprime = green_at(geom.point(coords), geom)
            assert g == pytest.approx(float(tables.g[coords]), abs=1e-12)
            assert gprime == pytest.approx(float(tables.gprime[coords]), abs=1e-11)

    def test_rows_in_row_major_order(self):
        geom = TorusGeometry(3, 3)
        tables = build_green_tables(geom)
        rows = list(green_table_rows(tables))
        assert green_table_columns(3) == ["xi_1", "xi_2", "xi_3", "g", "gprime"]
        assert len(rows) == 27
        assert rows[5][:3] == [0, 1, 2]
        assert rows[5][3] == float(tables.g[0, 1, 2])


class TestGenerating:
    def test_value_at_zero(self):
        geom = TorusGeometry(3, 4)
        assert green_generating(geom.origin, 0.0, geom) == pytest.approx(1 - 1 / 64, abs=1e-14)
        assert green_generating(geom.point([1, 2, 3]), 0.0, geom) == pytest.approx(-1 / 64, abs=1e-14)

    def test_value_at_one_is_green_function(self):
        geom = TorusGeometry(3, 5)
        xi = geom.point([2, 1, 0])
        assert green_generating(xi, 1.0, geom) == pytest.approx(green_at(xi, geom)[0], rel=1e-12)

    def test_pole_raises(self):
        geom = TorusGeometry(3, 4)
        eig = build_eigen_table(geom)
        z = 1.0 / float(eig.lam_hat[1, 0, 0])
        with pytest.raises(PoleProximity):
            green_generating(geom.origin, z, geom, eig)


class TestTwoPoint:
    def test_origin_value(self):
        geom = TorusGeometry(3, 6)
        tables = build_green_tables(geom)
        f, fprime = two_point_f(geom.origin, geom, tables)
        assert f == pytest.approx(tables.g0)
        assert fprime == pytest.approx(tables.gprime0)

    def test_floor(self):
        geom = TorusGeometry(3, 6)
        tables = build_green_tables(geom)
        xi = geom.point([3, 3, 3])
        f, fprime = two_point_f(xi, geom, tables)
        assert 0.5 < f < tables.g0
        assert 0.0 <= fprime <= tables.gprime0
        with pytest.raises(FloorViolation):
            two_point_f(xi, geom, tables, Configuration(floor_constant=math.inf))


def torus_norms(geom: TorusGeometry) -> np.ndarray:
    """Euclidean torus norm of every vertex, shaped like the Green table."""
    folded = np.minimum(np.arange(geom.n), geom.n - np.arange(geom.n)).astype(np.float64)
    squares = np.zeros(geom.shape)
    for axis in range(geom.d):
        shape = [1] * geom.d
        shape[axis] = geom.n
        squares = squares + (folded**2).reshape(shape)
    return np.sqrt(squares)


class TestFloor:
    BEYOND_CALIBRATION = {3: [14, 16, 24], 4: [14, 16], 5: [14]}

    @pytest.mark.parametrize(
        "d", [3, pytest.param(4, marks=pytest.mark.slow), pytest.param(5, marks=pytest.mark.slow)]
    )
    def test_calibrated_floor_holds_for_larger_tori(self, d, configuration):
        floor = calibrate_floor(d, range(6, 13))
        assert configuration.floor_constant <= floor
        strict = replace(configuration, floor_constant=floor)
        for n in self.BEYOND_CALIBRATION[d]:
            geom = TorusGeometry(d, n)
            tables = build_green_tables(geom)
            lowest = geom.point_of(int(np.argmin(tables.g)))
            f, _ = two_point_f(lowest, geom, tables, strict)
            assert f >= floor


class TestGrowth:
    def test_second_moment_grows_linearly_in_three_dimensions(self):
        ratios = [moment_sum(2, TorusGeometry(3, n)) / n for n in (8, 16, 32)]
        assert abs(ratios[2] - ratios[1]) < abs(ratios[1] - ratios[0])
        assert max(ratios) < 2.0 * min(ratios)

    @pytest.mark.slow
    def test_second_moment_grows_logarithmically_in_four_dimensions(self):
        ratios = [moment_sum(2, TorusGeometry(4, n)) / math.log(n) for n in (8, 16, 32, 64)]
        assert max(ratios) < 1.5 * min(ratios)

    @pytest.mark.slow
    def test_far_green_values_decay_in_five_dimensions(self):
        peaks = []
        for n in (8, 16, 32):
            geom = TorusGeometry(5, n)
            tables = build_green_tables(geom)
            far = torus_norms(geom) >= n / 4
            peaks.append(float(np.max(np.abs(tables.g[far]))))
            del tables, far
        assert peaks[0] > peaks[1] > peaks[2]
