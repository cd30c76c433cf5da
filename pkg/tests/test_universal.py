import math

import numpy as np
import pytest
from scipy import integrate

from nmlgauss.core import GaussianClass, SufficientStats, log_envelope_seq, log_gaussian_seq, ml_estimate
from nmlgauss.errors import DomainError
from nmlgauss.universal import UniversalDensity, codelength_bits, log_q_star, regret

G = GaussianClass


def stats_of(*xs):
    return SufficientStats.from_sequence(xs)


class TestLogQStar:
    def test_singleton_is_the_density(self):
        u = UniversalDensity.for_class(G(0.0, 1.5, 1.5), 3)
        s = stats_of(0.2, -1.0, 0.7)
        assert log_q_star(u, s) == pytest.approx(log_gaussian_seq(s, 0.0, 1.5), rel=1e-14)

    def test_example_value(self):
        u = UniversalDensity.for_class(G(1.0, 1.0, 1.0), 1)
        expected = -math.log(math.sqrt(2.0 * math.pi)) - math.log(1.0 + 1.0 / math.sqrt(2.0 * math.pi))
        assert log_q_star(u, stats_of(0.0)) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("cls", [G(1.0, 1.0, 1.0), G(2.0, 0.5, 3.0)])
    def test_normalized_n1(self, cls):
        u = UniversalDensity.for_class(cls, 1)
        half = cls.half_range
        cuts = [-half - 15 * cls.sigma_max, -half - cls.sigma_max, -half - cls.sigma_min, -half,
                half, half + cls.sigma_min, half + cls.sigma_max, half + 15 * cls.sigma_max]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            value, _ = integrate.quad(lambda x: math.exp(log_q_star(u, SufficientStats(1, x, 0.0))), a, b,
                                      epsabs=1e-13, epsrel=1e-12)
            total += value
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_normalized_n2(self):
        cls = G(1.0, 0.5, 2.0)
        u = UniversalDensity.for_class(cls, 2)
        box = cls.half_range + 12 * cls.sigma_max

        def dens(z, y):
            return 2.0 * math.exp(log_q_star(u, SufficientStats(2, y, 2.0 * z * z)))

        total, _ = integrate.dblquad(dens, -box, box, -box, box, epsabs=1e-9, epsrel=1e-7)
        assert total == pytest.approx(1.0, abs=1e-4)

    def test_length_mismatch(self):
        u = UniversalDensity.for_class(G(1.0, 1.0, 1.0), 2)
        with pytest.raises(DomainError):
            log_q_star(u, stats_of(1.0))


class TestRegret:
    def test_equalizer_at_ml(self):
        cls = G(2.0, 0.5, 2.0)
        u = UniversalDensity.for_class(cls, 4)
        s = stats_of(0.3, 1.9, -0.4, 0.8)
        est = ml_estimate(s, cls)
        assert regret(u, est.mu_hat, est.sigma_hat, s) == pytest.approx(u.log_atten, abs=1e-12)

    def test_singleton_zero(self):
        u = UniversalDensity.for_class(G(0.0, 1.0, 1.0), 2)
        for xs in ((0.0, 1.0), (5.0, -3.0)):
            assert abs(regret(u, 0.0, 1.0, stats_of(*xs))) <= 1e-12

    def test_dominance_random(self):
        rng = np.random.default_rng(1234)
        cls = G(2.0, 0.5, 2.0)
        u = UniversalDensity.for_class(cls, 6)
        for _ in range(10_000):
            mu = rng.uniform(-1.0, 1.0)
            sigma = rng.uniform(0.5, 2.0)
            x = rng.normal(rng.uniform(-3, 3), rng.uniform(0.1, 4.0), size=6)
            assert regret(u, mu, sigma, SufficientStats.from_sequence(x)) <= u.log_atten + 1e-9

    def test_outside_class(self):
        u = UniversalDensity.for_class(G(1.0, 1.0, 2.0), 1)
        with pytest.raises(DomainError):
            regret(u, 0.0, 3.0, stats_of(0.0))


class TestCodelength:
    def test_singleton_bits(self):
        u = UniversalDensity.for_class(G(0.0, 1.0, 1.0), 1)
        assert codelength_bits(u, stats_of(0.0)) == pytest.approx(math.log2(math.sqrt(2.0 * math.pi)), rel=1e-14)

    def test_decomposition(self):
        rng = np.random.default_rng(7)
        cls = G(1.0, 0.3, 3.0)
        for n in (1, 3, 10):
            u = UniversalDensity.for_class(cls, n)
            s = SufficientStats.from_sequence(rng.normal(size=n))
            ml_bits = -log_envelope_seq(s, cls) / math.log(2.0)
            assert abs(codelength_bits(u, s) - ml_bits - math.log2(u.attenuation)) <= 1e-9

    def test_excess_over_ml(self):
        cls = G(1.0, 1.0, 1.0)
        u = UniversalDensity.for_class(cls, 100)
        s = SufficientStats.from_sequence(np.linspace(-1, 1, 100))
        excess = codelength_bits(u, s) + log_envelope_seq(s, cls) / math.log(2.0)
        assert excess == pytest.approx(math.log2(1.0 + math.sqrt(100.0 / (2.0 * math.pi))), abs=1e-9)

    def test_negative_log_atten_rejected(self):
        with pytest.raises(DomainError):
            UniversalDensity(G(1.0, 1.0, 1.0), 1, -0.1)
