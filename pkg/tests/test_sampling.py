import math

import numpy as np
import pytest

from atomcavity import (
    EstimatorError,
    InvalidArgumentError,
    LayoutSpec,
    collective_F,
    collective_factors,
    generate,
    layout_positions,
    monte_carlo,
    read_layout_csv,
    write_layout_csv,
)
from atomcavity.sampling import ANTINODE, BRAGG, COMMENSURATE, NODE, UNIFORM, layout_to_csv, sample_rng

K = 2 * math.pi / 780e-9


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        LayoutSpec("gas", 10)
    with pytest.raises(InvalidArgumentError):
        LayoutSpec(UNIFORM, 0)
    with pytest.raises(InvalidArgumentError):
        LayoutSpec(UNIFORM, 10, extent=-1)
    with pytest.raises(InvalidArgumentError):
        LayoutSpec(COMMENSURATE, 10, n_per_wavelength=3)
    with pytest.raises(InvalidArgumentError):
        LayoutSpec(COMMENSURATE, 10)


def test_uniform_is_seed_deterministic():
    spec = LayoutSpec(UNIFORM, 20, seed=42)
    a = layout_positions(spec, K, 3)
    assert np.array_equal(a, layout_positions(spec, K, 3))
    assert not np.array_equal(a, layout_positions(spec, K, 4))
    assert not np.array_equal(a, layout_positions(LayoutSpec(UNIFORM, 20, seed=43), K, 3))


def test_uniform_fills_cube():
    spec = LayoutSpec(UNIFORM, 5000, extent=3.0, seed=1)
    pos = layout_positions(spec, K) / (2 * math.pi / K)
    assert pos.min() >= 0 and pos.max() <= 3.0
    assert pos.mean(axis=0) == pytest.approx([1.5, 1.5, 1.5], abs=0.05)


def test_rng_streams_independent_of_batching():
    a = sample_rng(7, 11).random(5)
    b = sample_rng(7, 11).random(5)
    assert np.array_equal(a, b)


def test_lattice_limits():
    assert collective_factors(generate(LayoutSpec(ANTINODE, 10), K, cavity=True)).H == pytest.approx(1.0)
    assert collective_factors(generate(LayoutSpec(NODE, 10), K, cavity=True)).H == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_bragg_F_is_one(n):
    assert abs(collective_F(generate(LayoutSpec(BRAGG, n), K))) == pytest.approx(1.0, abs=1e-12)
    fac = collective_factors(generate(LayoutSpec(BRAGG, n), K, cavity=True))
    assert abs(fac.G) == pytest.approx(1.0, abs=1e-12)


def test_bragg_other_directions():
    lay = generate(LayoutSpec(BRAGG, 9), K, k_in_dir=(0, 1, 0), k_mode_dir=(0.6, 0, 0.8))
    assert abs(collective_F(lay)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_commensurate_is_subradiant(n):
    lay = generate(LayoutSpec(COMMENSURATE, 12 * n, n_per_wavelength=n), K)
    assert abs(collective_F(lay)) <= 1e-12


def test_forward_bragg_rejected():
    with pytest.raises(InvalidArgumentError):
        layout_positions(LayoutSpec(BRAGG, 3), K, k_in_dir=(1, 0, 0), k_mode_dir=(1, 0, 0))


@pytest.mark.parametrize(
    "name,expected",
    [("F2", 1 / 50), ("H", 0.5), ("G2", 1 / 100), ("F", 0.0), ("G", 0.0)],
)
def test_random_moments(name, expected):
    est = monte_carlo(LayoutSpec(UNIFORM, 50, seed=3), K, name, 10_000)
    assert est.within(expected, 5)


def test_monte_carlo_independent_of_workers():
    spec = LayoutSpec(UNIFORM, 30, seed=9)
    a = monte_carlo(spec, K, "G2", 2000)
    b = monte_carlo(spec, K, "G2", 2000, workers=4)
    assert a == b


def test_callable_estimator_matches_named():
    spec = LayoutSpec(UNIFORM, 10, seed=2)
    named = monte_carlo(spec, K, "H", 300)
    custom = monte_carlo(spec, K, lambda lay: collective_factors(lay).H, 300, cavity=True, workers=3)
    assert custom.mean == pytest.approx(named.mean, rel=1e-12)
    assert custom.std_error == pytest.approx(named.std_error, rel=1e-9)


def test_estimator_failure_carries_index():
    def bad(layout):
        if layout.positions[0, 0] > 0:
            raise ValueError("boom")
        return 0.0

    with pytest.raises(EstimatorError) as info:
        monte_carlo(LayoutSpec(UNIFORM, 3, seed=0), K, bad, 10)
    assert info.value.sample_index == 0


def test_monte_carlo_validation():
    spec = LayoutSpec(UNIFORM, 3)
    with pytest.raises(InvalidArgumentError):
        monte_carlo(spec, K, "nope", 10)
    with pytest.raises(InvalidArgumentError):
        monte_carlo(spec, K, "H", 1)


def test_layout_csv_round_trip(tmp_path):
    pos = layout_positions(LayoutSpec(UNIFORM, 25, seed=4), K)
    path = tmp_path / "layout.csv"
    write_layout_csv(path, pos, K)
    back = read_layout_csv(path, K)
    # exact in wavelength units; metres pick up at most an ulp from the rescaling
    assert np.allclose(back, pos, rtol=1e-15, atol=0)
    assert layout_to_csv(back, K) == path.read_text()
    text = path.read_text()
    assert text.startswith("index,x,y,z\n")
    assert "\r" not in text


def test_layout_csv_no_signed_zero():
    assert "-0," not in layout_to_csv(np.array([[0.0, -0.0, 1e-7]]), K)


def test_layout_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("i,x,y,z\n0,1,2,3\n")
    with pytest.raises(InvalidArgumentError):
        read_layout_csv(path, K)
