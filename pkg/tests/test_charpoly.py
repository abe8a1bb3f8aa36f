import dataclasses
import math

import numpy as np
import pytest

from mgtfourier.charpoly import (
    Cubic,
    Quartic,
    build_mgt_cubic,
    build_quartic,
    decay_rate_mode,
    decay_rate_spectrum,
    hurwitz_margin,
    hurwitz_stable,
    modal_system_matrix,
    roots,
    spectral_abscissa,
    tau_star,
    tau_star_bisection,
)
from mgtfourier.errors import NumericalFailure
from mgtfourier.params import SystemParams, theoretical_threshold

from test_params import make, random_params


class TestBuildQuartic:
    def test_reference_coefficients(self):
        for kappa, eta in [(2.0, 3.0), (0.7, 0.3), (5.0, 1.0)]:
            q = build_quartic(make(kappa=kappa, eta=eta), 1.0)
            assert q.a3 == pytest.approx(2.0 + kappa)
            assert q.a2 == pytest.approx(1.0 + 2.0 * kappa + eta**2)
            assert q.a1 == pytest.approx(3.0 + kappa + 2.0 * eta**2)
            assert q.a0 == pytest.approx(3.0 * kappa)

    def test_positive_coefficients(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            p = random_params(rng)
            lam = rng.uniform(0.1, 50.0)
            q = build_quartic(p, lam)
            assert q.a3 > 0 and q.a2 > 0 and q.a1 > 0 and q.a0 > 0

    def test_uncoupled_factorization(self):
        # eta=0: quartic = (z + kappa*lam) * cubic; check by synthetic division.
        rng = np.random.default_rng(6)
        for _ in range(50):
            p = dataclasses.replace(random_params(rng), eta=0.0)
            lam = rng.uniform(0.1, 10.0)
            q = build_quartic(p, lam)
            c = build_mgt_cubic(p, lam)
            r = p.kappa * lam
            # divide z^4 + a3 z^3 + ... by (z + r)
            b = [1.0]
            for coeff in (q.a3, q.a2, q.a1):
                b.append(coeff - r * b[-1])
            remainder = q.a0 - r * b[-1]
            scale = 1.0 + max(abs(x) for x in q.coeffs())
            assert abs(remainder) < 1e-9 * scale
            assert b[1] == pytest.approx(c.b2, rel=1e-9)
            assert b[2] == pytest.approx(c.b1, rel=1e-9)
            assert b[3] == pytest.approx(c.b0, rel=1e-9)

    def test_a0_scales_quadratically(self):
        p = make()
        assert build_quartic(p, 3.0).a0 == 9.0 * build_quartic(p, 1.0).a0

    def test_rejects_nonpositive_lambda(self):
        with pytest.raises(ValueError):
            build_quartic(make(), 0.0)


class TestBuildCubic:
    def test_hand_value(self):
        c = build_mgt_cubic(make(), 1.0)
        assert (c.b2, c.b1, c.b0) == (2.0, 1.0, 3.0)

    def test_supercritical_cubic_unstable(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            p = random_params(rng, mu_sign=1)
            lam = rng.uniform(0.1, 10.0)
            rs = roots(build_mgt_cubic(p, lam))
            complex_roots = [z for z in rs.roots if abs(z.imag) > 1e-9]
            assert len(complex_roots) == 2
            assert all(z.real > 0 for z in complex_roots)

    def test_subcritical_cubic_stable(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            p = random_params(rng, mu_sign=-1)
            lam = rng.uniform(0.1, 10.0)
            c = build_mgt_cubic(p, lam)
            # cubic Routh-Hurwitz: b2*b1 > b0
            assert c.b2 * c.b1 > c.b0
            assert roots(c).max_real_part() < 0


class TestRoots:
    def test_oscillator_quadratic(self):
        rs = roots((1.0, 1.0, 1.0))
        expected = [complex(-0.5, -math.sqrt(3) / 2), complex(-0.5, math.sqrt(3) / 2)]
        for want in expected:
            assert min(abs(z - want) for z in rs.roots) < 1e-12

    def test_reference_cubic_unstable(self):
        rs = roots(Cubic(b2=2.0, b1=1.0, b0=3.0))
        assert rs.max_real_part() > 0

    def test_quadruple_root(self):
        # (z+1)^4
        rs = roots((1.0, 4.0, 6.0, 4.0, 1.0))
        assert rs.residual < 1e-8
        for z in rs.roots:
            assert z == pytest.approx(-1.0, abs=1e-3)

    def test_conjugate_pairing(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            p = random_params(rng)
            rs = roots(build_quartic(p, rng.uniform(0.1, 10.0)))
            for z in rs.roots:
                if abs(z.imag) > 1e-9:
                    assert any(abs(w - z.conjugate()) < 1e-9 for w in rs.roots)

    def test_vieta_identities(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            p = random_params(rng)
            q = build_quartic(p, rng.uniform(0.1, 10.0))
            rs = roots(q)
            total = sum(rs.roots)
            prod = 1.0 + 0.0j
            for z in rs.roots:
                prod *= z
            assert abs(total - (-q.a3)) < 1e-8 * (1.0 + abs(q.a3))
            assert abs(prod - q.a0) < 1e-8 * (1.0 + abs(q.a0))

    def test_sorted_deterministically(self):
        rs = roots((1.0, 0.0, -1.0))  # z^2 - 1
        assert rs.roots[0].real < rs.roots[1].real

    def test_residual_bound(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            p = random_params(rng)
            q = build_quartic(p, rng.uniform(0.1, 10.0))
            rs = roots(q)
            assert rs.residual < 1e-10


class TestHurwitz:
    def test_reference_cases(self):
        assert not hurwitz_stable(build_quartic(make(kappa=2.0, eta=0.1), 1.0))
        assert hurwitz_stable(build_quartic(make(kappa=2.0, eta=1.1), 1.0))

    def test_agreement_with_abscissa_oracle(self):
        # coefficient test vs root finder on >= 1000 random valid quartics
        rng = np.random.default_rng(14)
        checked = 0
        while checked < 1000:
            p = random_params(rng)
            lam = rng.uniform(0.1, 10.0)
            abscissa = spectral_abscissa(p, lam)
            if abs(abscissa) < 1e-9:
                continue  # boundary flake guard
            assert hurwitz_stable(build_quartic(p, lam)) == (abscissa < 0)
            checked += 1


class TestSpectralAbscissa:
    def test_uncoupled_supercritical_positive(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            p = dataclasses.replace(random_params(rng, mu_sign=1), eta=0.0)
            lam = rng.uniform(0.1, 10.0)
            cubic_absc = roots(build_mgt_cubic(p, lam)).max_real_part()
            assert spectral_abscissa(p, lam) == pytest.approx(cubic_absc, abs=1e-8)
            assert spectral_abscissa(p, lam) > 0

    def test_stable_above_threshold(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            p = random_params(rng, mu_sign=1)
            tau = theoretical_threshold(p)
            p = dataclasses.replace(p, eta=math.sqrt(tau * p.mu) * 1.5)
            assert spectral_abscissa(p, p.lambda1) < 0

    def test_continuity_in_eta(self):
        p = make(kappa=2.0)
        for eta in np.linspace(0.2, 4.0, 25):
            a0 = spectral_abscissa(dataclasses.replace(p, eta=float(eta)), 1.0)
            a1 = spectral_abscissa(dataclasses.replace(p, eta=float(eta) + 1e-6), 1.0)
            assert abs(a0 - a1) < 1e-3


class TestDecayRate:
    def test_oscillator_analogue(self):
        rs = roots((1.0, 1.0, 1.0))
        assert -2.0 * rs.max_real_part() == pytest.approx(1.0, abs=1e-12)

    def test_rate_vanishes_large_eta(self):
        p = make(kappa=2.0)
        rates = [decay_rate_mode(dataclasses.replace(p, eta=eta), 1.0).rate
                 for eta in (10.0, 100.0, 1000.0)]
        assert rates[0] > rates[1] > rates[2] > 0

    def test_unstable_flag(self):
        p = make(kappa=2.0, eta=0.0)
        r = decay_rate_mode(p, 1.0)
        assert r.unstable and r.rate < 0

    def test_spectrum_reduces_to_single_mode(self):
        p = make(kappa=2.0, eta=3.0)
        assert decay_rate_spectrum(p, [1.0]) == decay_rate_mode(p, 1.0)

    def test_dirichlet_spectrum_stable(self):
        p = make(kappa=2.0, eta=3.0)
        spectrum = [k**2 for k in range(1, 51)]
        r = decay_rate_spectrum(p, spectrum)
        assert not r.unstable and r.rate > 0

    def test_min_monotone(self):
        p = make(kappa=2.0, eta=3.0)
        r3 = decay_rate_spectrum(p, [1.0, 4.0, 9.0])
        r4 = decay_rate_spectrum(p, [1.0, 4.0, 9.0, 16.0])
        assert r4.rate <= r3.rate


class TestTauStar:
    def test_subcritical_and_critical_zero(self):
        assert tau_star(make(alpha=2, beta=2, gamma=1), 1.0) == 0.0
        assert tau_star(make(alpha=1, beta=1, gamma=1), 1.0) == 0.0

    def test_reference_value(self):
        # hand computation: Delta3(s) = 4 s^2 + 40 s - 21 at kappa=2, lam=1
        assert tau_star(make(kappa=2.0), 1.0) == pytest.approx(0.5, rel=1e-12)

    def test_closed_form_vs_bisection(self):
        for kappa in (0.5, 1.0, 2.0, 5.0):
            p = make(kappa=kappa)
            closed = tau_star(p, 1.0, cross_check=False)
            bis = tau_star_bisection(p, 1.0, tol=1e-12)
            assert abs(closed - bis) < 1e-8

    def test_margin_sign_flips_at_threshold(self):
        for kappa in (0.5, 1.0, 2.0, 5.0):
            p = make(kappa=kappa)
            ts = tau_star(p, 1.0, cross_check=False)
            assert hurwitz_margin(p, 1.0, ts - 1e-4) < 0
            assert hurwitz_margin(p, 1.0, ts + 1e-4) > 0

    def test_below_theoretical_threshold(self):
        for kappa in np.geomspace(0.1, 10.0, 30):
            p = make(kappa=float(kappa))
            assert tau_star(p, 1.0, cross_check=False) < theoretical_threshold(p)


class TestModalSystemMatrix:
    def test_characteristic_polynomial_consistency(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            p = random_params(rng)
            lam = rng.uniform(0.1, 10.0)
            a = modal_system_matrix(p, lam)
            char = np.poly(a)  # leading-first coefficients
            expected = build_quartic(p, lam).coeffs()
            scale = 1.0 + max(abs(c) for c in expected)
            assert np.allclose(char, expected, atol=1e-12 * scale, rtol=1e-10)
