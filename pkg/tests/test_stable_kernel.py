import math

import numpy as np
import pytest

from roughdrive.errors import DomainError
from roughdrive.services import stable_kernel
from roughdrive.services.experiments import verify_kernel_identities

SMALL_RESOLUTION = 1001


def test_char_fn_values():
    assert stable_kernel.char_fn(5.0 / 3.0, 2.0, 3.0) == pytest.approx(math.exp(-3.0 ** (5.0 / 3.0)))
    assert stable_kernel.char_fn(2.0, 1.0, 0.0) == 1.0


def test_char_fn_rejects_non_positive_time():
    with pytest.raises(DomainError):
        stable_kernel.char_fn(2.0, 0.0, 1.0)


def test_gaussian_closed_forms():
    # alpha = 2 is N(0, t)
    assert stable_kernel.peak(2.0, 1.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    assert stable_kernel.l2_norm_sq(2.0, 1.0) == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)))
    assert stable_kernel.tail_asymptote(2.0) == pytest.approx(0.0, abs=1e-15)


def test_scaling_in_time():
    alpha = 1.5
    ratio = stable_kernel.peak(alpha, 1.0) / stable_kernel.peak(alpha, 8.0)
    assert ratio == pytest.approx(8.0 ** (1.0 / alpha))


def test_gaussian_table_matches_normal_density():
    table = stable_kernel.build_table(2.0, SMALL_RESOLUTION)
    exact = np.exp(-table.grid ** 2 / 2.0) / math.sqrt(2.0 * math.pi)
    assert np.max(np.abs(table.values - exact)) < 1e-8
    assert stable_kernel.table_mass(table) == pytest.approx(1.0, abs=1e-6)


def test_table_is_non_increasing():
    table = stable_kernel.build_table(5.0 / 3.0, SMALL_RESOLUTION)
    assert np.all(np.diff(table.values) <= 0.0)
    assert table.values[0] == pytest.approx(stable_kernel.peak(5.0 / 3.0, 1.0), rel=1e-8)


def test_density_is_even_and_scaled():
    table = stable_kernel.build_table(5.0 / 3.0, SMALL_RESOLUTION)
    x = np.array([0.3, 1.7, 4.0])
    assert np.allclose(stable_kernel.density(table, 0.5, x), stable_kernel.density(table, 0.5, -x))
    assert stable_kernel.density(table, 2.0, 0.0) == pytest.approx(stable_kernel.peak(5.0 / 3.0, 2.0), rel=1e-8)


def test_tail_uses_power_law_beyond_table():
    table = stable_kernel.build_table(1.5, SMALL_RESOLUTION)
    far = np.array([100.0, 400.0])
    assert np.allclose(table.p1(far), table.tail(far))
    assert table.tail_constant == pytest.approx(stable_kernel.tail_asymptote(1.5), rel=1e-2)


def test_bad_alpha_and_resolution():
    with pytest.raises(DomainError):
        stable_kernel.build_table(1.0, SMALL_RESOLUTION)
    with pytest.raises(DomainError):
        stable_kernel.build_table(2.0, 1000)


def test_kernel_identities_at_two_thirds_power():
    report = verify_kernel_identities(5.0 / 3.0, SMALL_RESOLUTION)
    assert report.mass_error < 1e-6
    assert report.l2_relative_error < 1e-4
    assert report.peak_error < 1e-5
    assert math.isnan(report.gaussian_error)
    assert [row[0] for row in report.rows()] == ['mass', 'l2_relative', 'peak', 'chapman_kolmogorov']


def test_dump_table(tmp_path):
    table = stable_kernel.build_table(2.0, 11)
    path = stable_kernel.dump_table(table, str(tmp_path / 'kernel.csv'))
    lines = open(path).read().splitlines()
    assert lines[0].startswith('# roughdrive-csv')
    assert lines[2] == 'x,p1_of_x'
    assert len(lines) == 3 + 11


def test_more_gaussian_values():
    assert stable_kernel.char_fn(2.0, 1.0, 1.0) == pytest.approx(math.exp(-0.5))
    assert stable_kernel.l2_norm_sq(2.0, 4.0) == pytest.approx(1.0 / (4.0 * math.sqrt(math.pi)))
    table = stable_kernel.build_table(2.0, SMALL_RESOLUTION)
    assert float(table.p1(1.0)) == pytest.approx(math.exp(-0.5) / math.sqrt(2.0 * math.pi), abs=1e-8)
    assert float(stable_kernel.density(table, 4.0, 0.0)) == pytest.approx(1.0 / math.sqrt(8.0 * math.pi), rel=1e-10)


def test_two_thirds_power_closed_forms():
    alpha = 5.0 / 3.0
    l2 = math.gamma(0.6) * 3.0 / (5.0 * math.pi)
    assert stable_kernel.l2_norm_sq(alpha, 1.0) == pytest.approx(l2)
    assert stable_kernel.peak(alpha, 1.0) == pytest.approx(2.0 ** 0.6 * l2)


@pytest.mark.parametrize("alpha", [1.8, 1.4])
def test_table_is_a_unimodal_density(alpha):
    table = stable_kernel.build_table(alpha, SMALL_RESOLUTION)
    assert stable_kernel.table_mass(table) == pytest.approx(1.0, abs=1e-4)
    assert np.all(np.diff(table.values) <= 0.0)
    x = np.linspace(0.1, 60.0, 7)
    assert np.allclose(table.p1(x), table.p1(-x))


def test_chapman_kolmogorov_on_small_table():
    report = verify_kernel_identities(2.0, SMALL_RESOLUTION)
    assert report.chapman_kolmogorov_error < 1e-3
    assert report.gaussian_error < 1e-8


@pytest.mark.slow
@pytest.mark.parametrize("alpha", [2.0, 5.0 / 3.0])
def test_kernel_suite_at_full_resolution(alpha):
    report = verify_kernel_identities(alpha)
    assert report.chapman_kolmogorov_error < 1e-4
    assert report.passed
