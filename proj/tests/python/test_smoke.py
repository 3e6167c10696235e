"""End-to-end smoke tests for the python module against known small cases."""

import math
import os
import subprocess

import pytest

import cnodal


def make_sin(j: int) -> cnodal.TrigPoly:
    """sin(j x) as an exact band-limited descriptor on the circle."""
    f = cnodal.TrigPoly(1)
    f.set([j], -0.5j)
    f.set([-j], 0.5j)
    f.lambda_cut = float(j * j + 1)
    f.validate()
    return f


def test_version_matches_cli():
    assert isinstance(cnodal.__version__, str) and cnodal.__version__
    cli = os.environ.get("CNODAL_CLI")
    if cli:
        out = subprocess.run([cli, "--version"], capture_output=True, text=True)
        assert out.returncode == 0
        assert out.stdout.strip() == cnodal.__version__


def test_deep_component_count_of_sine():
    f = make_sin(3)
    g = cnodal.absolute(cnodal.sample(f, 96, "torus"))
    for delta in (0.1, 0.5, 0.9):
        assert cnodal.coarse_m(g, delta).count == 6
    assert cnodal.coarse_z(g, 0.5).count == 6


def test_double_well_barcode_and_counts():
    g = cnodal.grid_field([5], [1.0], ["box"], [0.0, -2.0, 0.5, -1.0, 0.0])
    b = cnodal.sublevel_barcode(g)
    bars = b.bars_in_degree(0)
    assert len(bars) == 2
    essential = [bar for bar in bars if bar.is_infinite()]
    finite = [bar for bar in bars if not bar.is_infinite()]
    assert essential[0].birth == -2.0
    assert finite[0].birth == -1.0 and finite[0].death == 0.5
    assert cnodal.n_delta(b, 0.4) == 2
    assert cnodal.n_delta(b, 1.6) == 1
    assert cnodal.n_delta_window(b, 0.0, -2.5, -1.5) == 1
    assert cnodal.barcode_total_norm(b, 0.5) == pytest.approx(4.0)


def test_random_fields_are_unit_norm_and_deterministic():
    a = cnodal.random_combination(2, 64, 11)
    b = cnodal.random_combination(2, 64, 11)
    assert a.l2_norm() == pytest.approx(1.0, abs=1e-12)
    assert a.at([1, 2]) == b.at([1, 2])
    assert cnodal.nyquist_samples(a) == 8 * math.ceil(math.sqrt(a.lambda_content()))


def test_perturbation_stability():
    f = cnodal.random_combination(1, 64, 3)
    h = cnodal.random_combination(1, 64, 4)
    a = cnodal.sample(f, 256, "torus")
    hs = cnodal.sample(h, 256, "torus")
    eps = 0.01
    bumped = cnodal.grid_field(
        a.dims,
        a.spacing,
        a.topology,
        [v + eps * w for v, w in zip(a.samples, hs.samples)],
    )
    gap = max(abs(eps * w) for w in hs.samples)
    d = cnodal.bottleneck_distance(
        cnodal.sublevel_barcode(a), cnodal.sublevel_barcode(bumped)
    )
    assert d <= gap + 1e-12


def test_dualize_involution_and_sum_rule():
    b = cnodal.GradedBarcode()
    b.push_bar(0, -1.0, math.inf)
    b.push_bar(0, -0.5, 0.25)
    b.push_bar(1, 0.5, math.inf)
    twice = cnodal.dualize(cnodal.dualize(b, 1), 1)
    assert twice == b

    u = cnodal.GradedBarcode()
    u.push_bar(0, 0.0, math.inf)
    v = cnodal.GradedBarcode()
    v.push_bar(0, 1.0, 2.0)
    prod = cnodal.kunneth_product(u, v)
    bars = prod.bars()
    assert len(bars) == 1
    assert bars[0].degree == 0 and bars[0].birth == 1.0 and bars[0].death == 2.0


def test_remainder_constants_frozen_values():
    c = cnodal.morrey_constant(2, 2.0, 1)
    assert c.b_nkp == pytest.approx(3.265986323710904, rel=1e-12)
    assert c.c_prime == pytest.approx(1.632993161855452, rel=1e-12)
    assert cnodal.morrey_constant(1, 2.0, 1).b_nkp == pytest.approx(
        2.8284271247461903, rel=1e-12
    )
    c_inf = cnodal.morrey_constant(1, math.inf, 1)
    assert c_inf.t == 1.0


def test_errors_surface_as_python_exceptions():
    with pytest.raises(cnodal.InputError):
        cnodal.grid_field([4], [1.0], ["box"], [0.0, 1.0, 2.0])  # wrong count
    with pytest.raises(ValueError):
        cnodal.morrey_constant(1, 1.0, 2)  # k*p <= n
    f = make_sin(5)
    with pytest.raises(cnodal.ResolutionError):
        cnodal.sample(f, 24, "torus")  # below the resolution floor
    with pytest.raises(cnodal.InputError):
        cnodal.n_delta(cnodal.GradedBarcode(), -0.5)


def test_json_round_trip_shape():
    b = cnodal.sublevel_barcode(
        cnodal.grid_field([5], [1.0], ["box"], [0.0, -2.0, 0.5, -1.0, 0.0])
    )
    text = b.to_json()
    assert '"birth":-2.0' in text and '"death":"inf"' in text
