import math

import pytest

import bosemix


def test_one_species_constant():
    rho, a = 1e-6, 1.0
    e = bosemix.energy(rho, 0.0, a, 0.0, 0.0)
    lhy = 4 * math.pi * rho**2 * a * 128 / (15 * math.sqrt(math.pi)) * math.sqrt(rho * a**3)
    assert e["e_main"] == pytest.approx(4 * math.pi * rho**2 * a, rel=1e-14)
    assert e["e_lhy"] == pytest.approx(lhy, rel=1e-12)


def test_square_well_length():
    well = {"kind": "square_well", "params": {"V0": 2.0, "R": 1.0}, "support_radius": 1.0}
    assert bosemix.scattering_length(well) == pytest.approx(1 - math.tanh(1.0), rel=1e-10)


def test_i_ab_closed_form_matches_quadrature():
    for xi in (0.0, 0.3, 1.0):
        mp, mm = bosemix.mu_pm(xi)
        assert bosemix.i_ab_quadrature(mp, mm) == pytest.approx(bosemix.i_ab_from_mu(mp, mm), rel=1e-8)
    assert bosemix.i_ab_from_mu(1.0, 0.0) == pytest.approx(512 * math.sqrt(math.pi) / 15, rel=1e-15)


def test_mode_minimum_matches_closed_form():
    r = bosemix.minimize_mode(1e-5, 2e-5, 1.0, 0.8, 0.4, 0.01)
    assert r["value"] == pytest.approx(r["closed_form"], rel=1e-8)


def test_immiscible_raises():
    with pytest.raises(bosemix.MiscibilityError):
        bosemix.energy(1e-6, 1e-6, 1.0, 1.0, 2.0)


def test_convexity_scan_passes():
    rep = bosemix.convexity_scan(1e-8, 1e12, 1.0, 0.7, 0.5, n=10)
    assert rep["pass"]


def test_cli_help_and_errors():
    code, out, _ = bosemix.run_cli(["--help"])
    assert code == 0 and "scatter" in out
    code, _, err = bosemix.run_cli(["energy", "--config", "/nonexistent.json"])
    assert code == 2 and err
