import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from libnet.hypergeom import Hyp2F1ConvergenceError, Hyp2F1DomainError, hyp2f1


def test_zero_argument():
    assert hyp2f1(0.5, 4.0, 1.5, 0.0) == 1.0
    assert hyp2f1(3.2, -1.7, 2.5, 0.0) == 1.0


def test_arctan_identity():
    assert hyp2f1(0.5, 1.0, 1.5, -1.0) == pytest.approx(math.pi / 4, rel=1e-13)


@pytest.mark.parametrize("x", [0.1, 0.5, 0.9, 1.0, 3.0, 40.0])
def test_arctan_family(x):
    # 2F1(1/2, 1; 3/2; -x^2) = atan(x) / x
    assert hyp2f1(0.5, 1.0, 1.5, -x * x) == pytest.approx(math.atan(x) / x, rel=1e-13)


def test_oracle_example(hyp2f1_oracle):
    row = next(r for r in hyp2f1_oracle if (r["a"], r["b"], r["c"], r["z"]) == ("0.5", "4", "1.5", "-0.25"))
    assert hyp2f1(0.5, 4.0, 1.5, -0.25) == pytest.approx(float(row["value"]), rel=1e-14)


@pytest.mark.parametrize("method", ["auto", "pfaff", "direct"])
def test_against_oracle(hyp2f1_oracle, method):
    for row in hyp2f1_oracle:
        a, b, c, z = (float(row[k]) for k in "abcz")
        if method == "direct" and z <= -1:
            continue
        assert hyp2f1(a, b, c, z, method=method) == pytest.approx(float(row["value"]), rel=1e-12), row


def test_terminating_series():
    # b = -2: 1 + (a b / c) z + (a(a+1) b(b+1)) / (c(c+1) 2) z^2
    a, c, z = 0.5, 1.5, -0.3
    expected = 1 + a * -2 / c * z + a * (a + 1) * -2 * -1 / (c * (c + 1) * 2) * z * z
    assert hyp2f1(a, -2.0, c, z) == pytest.approx(expected, rel=1e-15)


class TestDomain:
    def test_positive_argument(self):
        with pytest.raises(Hyp2F1DomainError):
            hyp2f1(0.5, 1.0, 1.5, 0.2)

    @pytest.mark.parametrize("c", [0.0, -1.0, -7.0])
    def test_nonpositive_integer_c(self, c):
        with pytest.raises(Hyp2F1DomainError):
            hyp2f1(0.5, 1.0, c, -0.2)

    def test_tol_range(self):
        with pytest.raises(Hyp2F1DomainError):
            hyp2f1(0.5, 1.0, 1.5, -0.2, tol=1e-3)
        with pytest.raises(Hyp2F1DomainError):
            hyp2f1(0.5, 1.0, 1.5, -0.2, tol=1e-17)

    def test_direct_outside_disc(self):
        with pytest.raises(Hyp2F1DomainError):
            hyp2f1(0.5, 1.0, 1.5, -1.0, method="direct")

    def test_non_convergence_is_distinct(self):
        # b > 1 at z -> -1: terms decay too slowly for the cap
        with pytest.raises(Hyp2F1ConvergenceError) as info:
            hyp2f1(0.5, 4.0, 1.5, -(1 - 2**-50), method="direct")
        assert not isinstance(info.value, Hyp2F1DomainError)


@settings(max_examples=100, deadline=None)
@given(st.floats(3.0, 10.0), st.floats(-0.99, -1e-3))
def test_pfaff_matches_direct_kernel_family(beta, z):
    d = hyp2f1(0.5, beta, 1.5, z, method="direct")
    p = hyp2f1(0.5, beta, 1.5, z, method="pfaff")
    assert d == pytest.approx(p, rel=1e-10)


@settings(max_examples=150, deadline=None)
@given(st.floats(3.0, 10.0), st.floats(-0.999, -1e-3))
def test_pfaff_matches_direct_tail_family(beta, z):
    d = hyp2f1(1.0, 0.5, beta + 0.5, z, method="direct")
    p = hyp2f1(1.0, 0.5, beta + 0.5, z, method="pfaff")
    assert d == pytest.approx(p, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.floats(3.0, 10.0), st.floats(0.05, 1.5))
def test_against_mpmath_tan_family(beta, theta):
    z = -math.tan(theta) ** 2
    ref = float(mpmath.hyp2f1(0.5, beta, 1.5, z))
    assert hyp2f1(0.5, beta, 1.5, z) == pytest.approx(ref, rel=1e-12)
