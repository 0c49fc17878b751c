import math

import pytest

import billiards as bl


def test_bessel_values():
    assert abs(bl.bessel_j(0, 2.404825557695773)) < 1e-12
    h = bl.hankel1(1, 1.5 - 0.2j)
    assert abs(h - (bl.bessel_j(1, 1.5 - 0.2j) + 1j * bl.bessel_y(1, 1.5 - 0.2j))) < 1e-13


def test_shapes():
    e = bl.BoundaryShape.ellipse(bl.chi_from_eccentricity(0.8))
    assert e.kind == "ellipse"
    assert e.shape_value == pytest.approx(0.8, abs=1e-12)
    assert e.area == pytest.approx(math.pi * e.semi_major * e.semi_minor)
    assert e.contains(0.0, 0.0) and not e.contains(2.0, 0.0)
    pts = bl.interior_points(bl.BoundaryShape.quadrupole(0.141), 500)
    assert len(pts) == 500


def test_entropy():
    assert bl.shannon_entropy([0.25] * 4) == pytest.approx(math.log(4), abs=1e-14)
    assert bl.shannon_entropy([1.0, 0.0]) == 0.0
    assert bl.max_entropy(4166) == pytest.approx(math.log(4166))


def test_circle_eigenvalues_match_bessel_zeros():
    circle = bl.BoundaryShape.circle()
    found = [m["k"].real for m in bl.eigenvalues(circle, 2.0, 4.0)]
    expected = []
    for k, _, _, mult in bl.circle_dirichlet_oracle(20, 2.0, 4.0):
        expected += [k] * mult
    assert len(found) == len(expected)
    for a, b in zip(sorted(found), sorted(expected)):
        assert a == pytest.approx(b, rel=1e-6)


def test_dielectric_resonances_decay():
    modes = bl.resonances(bl.BoundaryShape.circle(), 2.0, 2.0, 3.0, -0.6, 0.0)
    assert modes
    assert all(m["k"].imag < 0.0 for m in modes)


def test_twolevel_gap():
    a, b = bl.twolevel_eigenvalues(0.3, 0.3, 0.05)
    assert (b - a).real == pytest.approx(0.1, abs=1e-14)


def test_errors_and_config():
    with pytest.raises(bl.InvalidParameter):
        bl.BoundaryShape.quadrupole(2.0)
    with pytest.raises(KeyError):
        bl.resolved_config({"no_such_key": 1})
    text = bl.resolved_config({"shape": "quadrupole", "grid_n": 1000})
    assert "shape = quadrupole" in text and "grid_n = 1000" in text


def test_twolevel_command(tmp_path):
    status, log = bl.run("twolevel", {"out": str(tmp_path)})
    assert status == 0
    assert (tmp_path / "report.txt").exists()
