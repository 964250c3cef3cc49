"""Closed-form dyadic kernel against its finite-difference oracle and
hand-derived near/far-field structure."""

import numpy as np
import pytest

from patchrad.errors import SingularityError
from patchrad.greens import (Wavenumber, dyadic_green, dyadic_green_fd_oracle,
                             fd_step, scalar_green)


def test_scalar_green_hand_value():
    # R = 0.3 m at 5 GHz: magnitude 1/(4 pi 0.3), phase -kappa R mod 2 pi
    k = Wavenumber.from_wavelength(0.06)
    g = scalar_green(np.array([0.3, 0.0, 0.0]), np.zeros(3), k)
    assert abs(abs(g) - 1.0 / (4.0 * np.pi * 0.3)) < 1e-12
    expected_phase = (-k.kappa * 0.3) % (2.0 * np.pi)
    assert abs((np.angle(g) % (2.0 * np.pi)) - expected_phase) < 1e-12


def test_wavenumber_validation():
    with pytest.raises(ValueError):
        Wavenumber(kappa=1.0, wavelength=1.0)
    with pytest.raises(ValueError):
        Wavenumber.from_wavelength(-0.1)
    k = Wavenumber.from_wavelength(0.06)
    assert abs(k.kappa * k.wavelength - 2.0 * np.pi) < 1e-12


def test_singularity_guard():
    k = Wavenumber.from_wavelength(1.0)
    with pytest.raises(SingularityError):
        scalar_green(np.zeros(3), np.zeros(3), k)
    with pytest.raises(SingularityError):
        dyadic_green(np.array([1e-13, 0, 0]), np.zeros(3), k)


def test_fd_oracle_agreement_random_pairs():
    """1000 random geometries spanning kappa R in [0.1, 100]."""
    rng = np.random.default_rng(42)
    k = Wavenumber.from_wavelength(1.0)
    worst = 0.0
    for _ in range(1000):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        kr = np.exp(rng.uniform(np.log(0.1), np.log(100.0)))
        s = rng.uniform(-1.0, 1.0, size=3)
        r = s + (kr / k.kappa) * u
        g = dyadic_green(r, s, k)
        h = fd_step(kr / k.kappa, k)
        dev = np.linalg.norm(g - dyadic_green_fd_oracle(r, s, k, h))
        worst = max(worst, dev / np.linalg.norm(g))
    # measured worst ~9e-8 with the shipped step rule
    assert worst < 1e-6


def test_fd_step_guard():
    k = Wavenumber.from_wavelength(1.0)
    r = np.array([0.5, 0.0, 0.0])
    with pytest.raises(ValueError):
        dyadic_green_fd_oracle(r, np.zeros(3), k, h=-1e-5)
    with pytest.raises(ValueError):
        dyadic_green_fd_oracle(r, np.zeros(3), k, h=0.1)


def test_dyadic_symmetry_and_reciprocity():
    """G is complex-symmetric and depends only on r - s."""
    rng = np.random.default_rng(7)
    k = Wavenumber.from_wavelength(0.06)
    for _ in range(20):
        r = rng.uniform(-1, 1, size=3)
        s = rng.uniform(-1, 1, size=3)
        g = dyadic_green(r, s, k)
        assert np.allclose(g, g.T, rtol=0, atol=1e-15)
        g_swapped = dyadic_green(s, r, k)
        assert np.allclose(g, g_swapped, rtol=0, atol=1e-15)
        shift = rng.uniform(-1, 1, size=3)
        assert np.allclose(g, dyadic_green(r + shift, s + shift, k),
                           rtol=1e-12, atol=0)


def test_transverse_far_field_limit():
    """Dropping the 1/(kappa R) terms leaves exactly sqrt(3)/(kappa R)
    relative Frobenius error, so at 1000 wavelengths the kernel matches
    the transverse-projected far form to ~2.76e-4 and to 1e-5 only
    beyond ~27,600 wavelengths."""
    k = Wavenumber.from_wavelength(1.0)
    rng = np.random.default_rng(3)

    def far_form(r, s):
        d = r - s
        dist = np.linalg.norm(d)
        rhat = d / dist
        g = np.exp(-1j * k.kappa * dist) / (4.0 * np.pi * dist)
        return g * (np.eye(3) - np.outer(rhat, rhat))

    for dist_wl, bound in ((1000.0, 3e-4), (30000.0, 1e-5)):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        r = dist_wl * u
        g = dyadic_green(r, np.zeros(3), k)
        rel = np.linalg.norm(g - far_form(r, np.zeros(3))) / np.linalg.norm(g)
        predicted = np.sqrt(3.0) / (k.kappa * dist_wl)
        assert rel < bound
        assert abs(rel - predicted) / predicted < 1e-3


def test_near_field_terms_dominate_close_in():
    # at kappa R = 0.1 the reactive 1/(kappa R)^2 term dwarfs the
    # radiating one, so the far form must be badly wrong there
    k = Wavenumber.from_wavelength(1.0)
    r = np.array([0.1 / k.kappa, 0.0, 0.0])
    g = dyadic_green(r, np.zeros(3), k)
    rhat = np.array([1.0, 0.0, 0.0])
    gg = scalar_green(r, np.zeros(3), k)
    far = gg * (np.eye(3) - np.outer(rhat, rhat))
    assert np.linalg.norm(g - far) / np.linalg.norm(g) > 1.0
