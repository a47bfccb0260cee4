import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libnet.analytic import (
    MeanInterferenceInputs,
    QuadratureError,
    campbell_integral,
    laplace_functional,
    laplace_slope_at_zero,
    mean_interference_1d,
    mean_interference_2d,
    mean_interference_quadrature,
    truncation_tail,
    visible_support,
)
from libnet.channel import LambertianChannel
from libnet.sampler import Region

# mpmath (50 digits) quadratures of the kernel integrals, frozen
ONE_D_BASELINE = 0.47460359272836926342156068098537782949457052599285  # int_0^1 (x^2+1)^-4
TWO_D_EXAMPLE = 0.05215155680889947981257928422153899499406730112512  # 2 * 2pi int_.3^{1.5 tan(pi/3)} r (r^2+2.25)^-5
LAPLACE_BASELINE_S1 = 0.70725623015684455302137614991710845186463351208537  # exp(-int_0^1 1 - e^{-f})


def ch_beta(beta, h=1.0):
    return LambertianChannel(math.acos(2.0 ** (-1.0 / (beta - 3.0))), h)


def kernel(h, beta):
    return lambda d: (d * d + h * h) ** -beta


draws = st.tuples(
    st.floats(0.01, 5.0),  # lambda
    st.floats(0.5, 20.0),  # h
    st.floats(0.0, 0.95),  # z as fraction of FOV radius
    st.floats(0.1, math.pi / 2 - 0.05),  # theta_f
    st.floats(3.0, 10.0, exclude_min=True),  # beta
)


def make_inputs(d):
    lam, h, frac, theta, beta = d
    return MeanInterferenceInputs(lam, h, frac * h * math.tan(theta), theta, beta)


class TestInputs:
    @pytest.mark.parametrize(
        "args", [(-1, 1, 0, 1, 4), (1, 0, 0, 1, 4), (1, 1, -1, 1, 4), (1, 1, 0, 0, 4), (1, 1, 0, 1.6, 4), (1, 1, 0, 1, 1)]
    )
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            MeanInterferenceInputs(*args)


class TestOneDimension:
    def test_baseline(self):
        inp = MeanInterferenceInputs(1.0, 1.0, 0.0, math.pi / 4, 4.0)
        assert mean_interference_1d(inp).value == pytest.approx(ONE_D_BASELINE, rel=1e-13)

    def test_literal_form(self):
        inp = MeanInterferenceInputs(1.0, 1.0, 0.0, math.pi / 4, 4.0)
        assert mean_interference_1d(inp, literal=True).value == pytest.approx(ONE_D_BASELINE, rel=1e-13)

    @pytest.mark.parametrize("h,z,theta,beta", [(1.0, 0.3, 0.9, 4.0), (3.0, 1.0, 1.2, 6.5), (0.7, 0.5, 0.8, 3.3)])
    def test_literal_agrees_with_regrouped(self, h, z, theta, beta):
        inp = MeanInterferenceInputs(2.0, h, z, theta, beta)
        assert mean_interference_1d(inp, literal=True).value == pytest.approx(
            mean_interference_1d(inp).value, rel=1e-9)

    def test_edge_of_fov(self):
        theta = 0.8
        inp = MeanInterferenceInputs(1.0, 2.0, 2.0 * math.tan(theta), theta, 5.0)
        res = mean_interference_1d(inp)
        assert res.value == 0.0 and not res.empty_support

    def test_zero_intensity(self):
        assert mean_interference_1d(MeanInterferenceInputs(0.0, 1.0, 0.2, 0.9, 4.0)).value == 0.0

    def test_empty_support_flag(self):
        res = mean_interference_1d(MeanInterferenceInputs(1.0, 1.0, 5.0, 0.9, 4.0))
        assert res.value == 0.0 and res.empty_support

    def test_two_sided(self):
        inp = MeanInterferenceInputs(1.3, 1.0, 0.2, 0.9, 4.0)
        assert mean_interference_1d(inp, two_sided=True).value == 2 * mean_interference_1d(inp).value

    def test_unbounded_fov(self):
        # int_0^inf (x^2 + h^2)^-b dx = h^(1-2b) sqrt(pi) Gamma(b - 1/2) / (2 Gamma(b))
        h, beta = 1.7, 4.6
        exact = h ** (1 - 2 * beta) * math.sqrt(math.pi) * math.gamma(beta - 0.5) / (2 * math.gamma(beta))
        inp = MeanInterferenceInputs(1.0, h, 0.0, math.pi / 2, beta)
        assert mean_interference_1d(inp).value == pytest.approx(exact, rel=1e-13)

    @settings(max_examples=100, deadline=None)
    @given(draws)
    def test_matches_quadrature(self, d):
        inp = make_inputs(d)
        q = mean_interference_quadrature(inp, 1)
        assert mean_interference_1d(inp).value == pytest.approx(q, rel=1e-8)


class TestTwoDimension:
    def test_unbounded_fov(self):
        inp = MeanInterferenceInputs(1.0, 1.0, 0.0, math.pi / 2, 4.0)
        assert mean_interference_2d(inp).value == pytest.approx(math.pi / 3, rel=1e-15)

    def test_edge_of_fov(self):
        theta = 1.1
        inp = MeanInterferenceInputs(1.0, 2.0, 2.0 * math.tan(theta), theta, 5.0)
        assert mean_interference_2d(inp).value == 0.0

    def test_example(self):
        inp = MeanInterferenceInputs(2.0, 1.5, 0.3, math.pi / 3, 5.0)
        assert mean_interference_2d(inp).value == pytest.approx(TWO_D_EXAMPLE, rel=1e-13)
        assert mean_interference_2d(inp, literal=True).value == pytest.approx(TWO_D_EXAMPLE, rel=1e-12)

    def test_empty_support_flag(self):
        res = mean_interference_2d(MeanInterferenceInputs(1.0, 1.0, 5.0, 0.9, 4.0))
        assert res.value == 0.0 and res.empty_support

    @settings(max_examples=100, deadline=None)
    @given(draws)
    def test_matches_quadrature(self, d):
        inp = make_inputs(d)
        q = mean_interference_quadrature(inp, 2)
        assert mean_interference_2d(inp).value == pytest.approx(q, rel=1e-8)


@pytest.mark.parametrize("dim", [1, 2])
class TestMonotonicity:
    def test_in_lambda(self, dim):
        vals = [mean_interference_1d if dim == 1 else mean_interference_2d][0]
        out = [vals(MeanInterferenceInputs(lam, 1.2, 0.3, 0.9, 4.5)).value for lam in np.linspace(0, 3, 7)]
        assert all(b >= a for a, b in zip(out, out[1:]))

    def test_in_theta_f(self, dim):
        fn = mean_interference_1d if dim == 1 else mean_interference_2d
        out = [fn(MeanInterferenceInputs(1.0, 1.2, 0.3, t, 4.5)).value for t in np.linspace(0.3, math.pi / 2, 12)]
        assert all(b >= a for a, b in zip(out, out[1:]))

    def test_in_z(self, dim):
        fn = mean_interference_1d if dim == 1 else mean_interference_2d
        R = 1.2 * math.tan(0.9)
        out = [fn(MeanInterferenceInputs(1.0, 1.2, z, 0.9, 4.5)).value for z in np.linspace(0, 1.2 * R, 12)]
        assert all(b <= a for a, b in zip(out, out[1:]))
        assert out[-1] == 0.0


class TestCampbell:
    def test_zero_intensity(self):
        assert campbell_integral(0.0, kernel(1, 4), Region.interval(0, 1)) == 0.0
        assert campbell_integral(lambda x: 0.0, kernel(1, 4), Region.interval(0, 1)) == 0.0

    def test_arctan(self):
        assert campbell_integral(1.0, lambda d: 1 / (d * d + 1), Region.interval(0, 1)) == pytest.approx(
            math.pi / 4, rel=1e-12)

    def test_infinite_interval(self):
        # int_0^inf dx / (x^2 + 1) = pi / 2
        val = campbell_integral(1.0, lambda d: 1 / (d * d + 1), Region.interval(0, math.inf))
        assert val == pytest.approx(math.pi / 2, rel=1e-10)

    def test_infinite_annulus(self):
        # 2 pi int_0^inf r (r^2 + 1)^-3 dr = pi / 2
        assert campbell_integral(1.0, kernel(1.0, 3.0), Region.annulus(0, math.inf)) == pytest.approx(
            math.pi / 2, rel=1e-10)

    def test_symmetric_interval(self):
        one = campbell_integral(1.0, kernel(1, 4), Region.interval(0.2, 1.5))
        both = campbell_integral(1.0, kernel(1, 4), Region.interval(-1.5, 1.5))
        centre = campbell_integral(1.0, kernel(1, 4), Region.interval(0, 0.2))
        assert both == pytest.approx(2 * (one + centre), rel=1e-10)

    def test_varying_intensity(self):
        # int_0^1 2x dx = 1
        assert campbell_integral(lambda x: 2 * x, lambda d: 1.0, Region.interval(0, 1)) == pytest.approx(1.0)
        # 2 pi int_0^1 r * r dr = 2 pi / 3
        assert campbell_integral(lambda r: r, lambda d: 1.0, Region.annulus(0, 1)) == pytest.approx(2 * math.pi / 3)

    def test_rectangle(self):
        val = campbell_integral(lambda x, y: 1.0, lambda d: d * d, Region.rectangle(0, 1, 0, 2))
        # int int x^2 + y^2 = 2/3 + 8/3
        assert val == pytest.approx(10 / 3, rel=1e-10)

    def test_nonconvergence_reported(self):
        with pytest.raises(QuadratureError) as info:
            campbell_integral(1.0, lambda d: 1.0 / d if d > 0 else 0.0, Region.interval(0, 1))
        assert info.value.abserr > 0


def test_truncation_tail_exact():
    for dim in (1, 2):
        full = (mean_interference_1d if dim == 1 else mean_interference_2d)(
            MeanInterferenceInputs(1.0, 1.0, 0.0, math.pi / 2, 4.2)).value
        inside = campbell_integral(1.0, kernel(1.0, 4.2), Region.interval(0, 7) if dim == 1 else Region.annulus(0, 7))
        assert truncation_tail(1.0, 1.0, 4.2, 7.0, dim) == pytest.approx(full - inside, rel=1e-7)


class TestLaplace:
    support = Region.interval(0.0, math.tan(math.pi / 4))
    ch = ch_beta(4.0)

    def test_s_zero(self):
        assert laplace_functional(0.0, 1.0, self.ch, self.support) == 1.0

    def test_zero_intensity(self):
        for s in (0.1, 1.0, 100.0):
            assert laplace_functional(s, 0.0, self.ch, self.support) == 1.0

    def test_negative_s(self):
        with pytest.raises(ValueError):
            laplace_functional(-1.0, 1.0, self.ch, self.support)

    def test_baseline_value(self):
        assert laplace_functional(1.0, 1.0, self.ch, self.support) == pytest.approx(LAPLACE_BASELINE_S1, rel=1e-10)

    def test_non_increasing_and_bounded(self):
        mean = mean_interference_1d(MeanInterferenceInputs(1.0, 1.0, 0.0, math.pi / 4, 4.0)).value
        s = np.linspace(0, 20, 41)
        L = [laplace_functional(x, 1.0, self.ch, self.support) for x in s]
        assert all(b <= a for a, b in zip(L, L[1:]))
        assert all(0 < v <= 1 for v in L)
        assert all(1 - v <= x * mean * (1 + 1e-12) for x, v in zip(s, L))

    @pytest.mark.parametrize("dim,h,z,theta,beta,lam", [
        (1, 1.0, 0.0, math.pi / 4, 4.0, 1.0),
        (1, 10.0, 2.0, 0.9, 5.3, 0.05),
        (2, 1.0, 0.0, math.pi / 2, 4.0, 1.0),
        (2, 2.5, 0.5, 1.0, 6.0, 0.3),
    ])
    def test_slope_equals_mean(self, dim, h, z, theta, beta, lam):
        ch = ch_beta(beta, h)
        inp = MeanInterferenceInputs(lam, h, z, theta, ch.beta)
        mean = (mean_interference_1d if dim == 1 else mean_interference_2d)(inp).value
        support = visible_support(dim, z, h, theta)
        assert laplace_slope_at_zero(lam, ch, support) == pytest.approx(mean, rel=1e-4)
