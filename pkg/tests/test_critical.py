import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from sl_iosp.core import BracketFailure, DomainError, ProblemSpec, Regime, classify
from sl_iosp.critical import (
    Kernel,
    alpha_domain,
    first_integral_residual,
    invert_v,
    period_integrals_at_prior,
    u_kernel,
    v_kernel,
)
from sl_iosp.elliptic import e1, e2

from conftest import PI2, regime_spec

ABOVE = ProblemSpec(0.0, 20.0, 1, 2.0)
INTERIOR = ProblemSpec(0.0, 0.5 * PI2, 1, 2.0)
BELOW = ProblemSpec(0.0, -5.0, 1, 2.0)


def alpha_grid(which, spec, n):
    lo, hi = alpha_domain(which, spec)
    if math.isinf(hi):
        return lo + np.geomspace(1e-3, 50.0, n) * max(lo, 1.0)
    return np.linspace(lo, hi, n + 2)[1:-1]


def fourth_moment(s):
    """int_0^1 t**4 / sqrt((1-t^2)(1-s t^2)) dt via the J_n recursion."""
    k, e = e1(s), e2(s)
    j1 = (k - e) / s
    return (2.0 * (1.0 + s) * j1 - k) / (3.0 * s)


# p = 2 closed forms: A = alpha^2 / (2|gap|); G = D (1 - s t^2)
def closed_v(which, alpha, gap):
    a = alpha * alpha / (2.0 * abs(gap))
    if which == "1":
        return e1(-a / (1 + a)) / math.sqrt(1 + a)
    if which == "2":
        return e1(a / (1 - a)) / math.sqrt(1 - a)
    return e1(-a / (a - 1)) / math.sqrt(a - 1)


def closed_u(which, alpha, gap):
    a = alpha * alpha / (2.0 * abs(gap))
    d, s = {"1": (1 + a, -a / (1 + a)), "2": (1 - a, a / (1 - a)), "3": (a - 1, -a / (a - 1))}[which]
    return 4.0 * a * a * fourth_moment(s) / math.sqrt(d)


KERNEL_SPECS = [("1", INTERIOR), ("2", ABOVE), ("3", BELOW)]


def test_small_alpha_limits():
    assert v_kernel("V1", 1e-8, INTERIOR) == pytest.approx(math.pi / 2, abs=1e-12)
    assert v_kernel("V2", 1e-8, ABOVE) == pytest.approx(math.pi / 2, abs=1e-12)
    assert u_kernel("U1", 1e-8, INTERIOR) == pytest.approx(0.0, abs=1e-30)


def test_u2_positive_finite():
    alpha = math.sqrt(0.3 * 2 * ABOVE.gap)
    value = u_kernel("U2", alpha, ABOVE)
    assert 0 < value < math.inf


@pytest.mark.parametrize("branch, spec", KERNEL_SPECS)
def test_v_matches_elliptic_closed_form(branch, spec):
    for alpha in alpha_grid("V" + branch, spec, 20):
        assert v_kernel("V" + branch, alpha, spec) == pytest.approx(closed_v(branch, alpha, spec.gap), rel=1e-9)


@pytest.mark.parametrize("branch, spec", KERNEL_SPECS)
def test_u_matches_elliptic_reduction(branch, spec):
    for alpha in alpha_grid("U" + branch, spec, 20):
        assert u_kernel("U" + branch, alpha, spec) == pytest.approx(closed_u(branch, alpha, spec.gap), rel=1e-9)


def test_u1_reduction_simplifies():
    # the J_n recursion collapses to (4/3) sqrt(1+A) [(2+A) K - 2 E]
    g = INTERIOR.gap
    for alpha in (0.3, 1.0, 4.0):
        a = alpha * alpha / (2 * g)
        s = -a / (1 + a)
        simple = 4.0 / 3.0 * math.sqrt(1 + a) * ((2 + a) * e1(s) - 2 * e2(s))
        assert u_kernel("U1", alpha, INTERIOR) == pytest.approx(simple, rel=1e-12)


def test_two_term_u1_form_is_not_the_kernel():
    # 4A/sqrt(1+A) [E - K] at s = -A/(1+A): its ratio to the kernel drifts with A,
    # so no constant normalization reconciles it
    g = INTERIOR.gap
    ratios = []
    for alpha in (0.5, 2.0, 6.0):
        a = alpha * alpha / (2 * g)
        s = -a / (1 + a)
        naive = 4 * a / math.sqrt(1 + a) * (e2(s) - e1(s))
        ratios.append(naive / u_kernel("U1", alpha, INTERIOR))
    assert max(ratios) / min(ratios) > 1.01


@pytest.mark.parametrize("which, spec, sign", [("V1", INTERIOR, -1), ("V2", ABOVE, +1), ("V3", BELOW, -1)])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_v_monotone(which, spec, sign, p):
    spec = ProblemSpec(spec.q0, spec.lambda_star, spec.m, p)
    values = np.array([v_kernel(which, a, spec) for a in alpha_grid(which, spec, 50)])
    assert np.all(sign * np.diff(values) > 0)


def test_domains():
    lo, hi = alpha_domain("V2", ABOVE)
    assert (lo, hi) == (0.0, pytest.approx(math.sqrt(20.0)))
    lo, hi = alpha_domain("V3", BELOW)
    assert lo == pytest.approx(math.sqrt(10.0)) and hi == math.inf
    assert alpha_domain("U3", BELOW) == alpha_domain("V3", BELOW)
    with pytest.raises(DomainError):
        v_kernel("V2", math.sqrt(20.0), ABOVE)
    with pytest.raises(DomainError):
        v_kernel("V3", 1.0, BELOW)
    with pytest.raises(DomainError):
        v_kernel("V1", 1.0, BELOW)
    with pytest.raises(ValueError):
        v_kernel(Kernel.U1, 1.0, INTERIOR)


def test_invert_example_above():
    amp = invert_v(ABOVE)
    assert 0 < amp.a_m < math.sqrt(20.0)
    assert v_kernel("V2", amp.a_m, ABOVE) == pytest.approx(math.sqrt(20.0) / 2, rel=1e-9)
    assert amp.bracket_lo <= amp.a_m <= amp.bracket_hi


def test_at_prior_integrals_match_beta_oracle():
    for p_star in (1.25, 1.5, 2.0, 3.0, 5.0):
        i_val, j_val = period_integrals_at_prior(p_star)
        b = 1.0 / (2.0 * p_star)
        assert i_val == pytest.approx(special.beta(b, 0.5) * b, rel=1e-12)
        assert j_val == pytest.approx(special.beta(1.0 + b, 0.5) * b, rel=1e-12)


def test_invert_at_prior_closed_form():
    amp = invert_v(ProblemSpec(0.0, 0.0, 1, 2.0))
    i_val = special.beta(0.25, 0.5) / 4
    assert i_val == pytest.approx(1.3110288, abs=1e-7)
    assert amp.a_m == pytest.approx(2 * math.sqrt(2) * i_val, rel=1e-12)
    assert amp.k == pytest.approx(amp.a_m**4 / 2, rel=1e-12)
    amp3 = invert_v(ProblemSpec(2.0, 2.0, 3, 3.0))
    p_star = 1.5
    b = 1 / (2 * p_star)
    assert amp3.a_m == pytest.approx((6 * math.sqrt(p_star) * special.beta(b, 0.5) * b) ** 2, rel=1e-12)


def test_resonant_has_no_amplitude():
    with pytest.raises(DomainError):
        invert_v(ProblemSpec(0.0, PI2, 1, 2.0))


@pytest.mark.parametrize("regime", ["Above", "Interior", "Below"])
@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_round_trip(regime, m, p):
    spec = regime_spec(regime, m, p)
    amp = invert_v(spec)
    which = {"Above": "V2", "Interior": "V1", "Below": "V3"}[regime]
    target = math.sqrt(abs(spec.gap)) / (2 * m)
    assert v_kernel(which, amp.a_m, spec) == pytest.approx(target, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-300.0, 300.0).filter(lambda g: abs(g) > 1e-3),
    st.integers(1, 4),
    st.sampled_from([1.5, 2.0, 2.5, 4.0]),
)
def test_amplitude_invariants(gap, m, p):
    spec = ProblemSpec(0.0, gap, m, p)
    rc = classify(spec)
    if rc.regime is Regime.RESONANT:
        return
    amp = invert_v(spec)
    assert amp.a_m > 0 and amp.k > 0
    which = {Regime.ABOVE: "V2", Regime.INTERIOR: "V1", Regime.BELOW: "V3"}[rc.regime]
    lo, hi = alpha_domain(which, spec)
    assert lo < amp.a_m < hi
    # turning point: du = 0 at u = a_m; cancellation is relative to the largest term
    scale = amp.a_m ** (2 * spec.p_star) / spec.p_star + abs(gap) * amp.a_m**2
    assert first_integral_residual(amp.a_m, 0.0, spec, amp.k) == pytest.approx(0.0, abs=1e-12 * scale)


def test_first_integral_examples():
    spec = INTERIOR
    amp = invert_v(spec)
    assert first_integral_residual(0.0, math.sqrt(amp.k), spec, amp.k) == pytest.approx(0.0, abs=1e-12 * amp.k)
    assert first_integral_residual(amp.a_m, 0.0, spec, amp.k) == pytest.approx(0.0, abs=1e-12 * amp.k)
    out = first_integral_residual(np.zeros(3), np.full(3, math.sqrt(amp.k)), spec, amp.k)
    assert out.shape == (3,)
    with pytest.raises(DomainError):
        first_integral_residual(0.0, 1.0, ProblemSpec(0.0, PI2, 1, 2.0), 1.0)


def test_bracket_failure_is_numerical_error():
    from sl_iosp.core import NumericalError

    assert issubclass(BracketFailure, NumericalError)
