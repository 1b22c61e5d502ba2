from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicdyn.core import IndeterminateZero, NormValue, PAdic, from_rational
from padicdyn.dynamics import (
    Kind,
    MapParams,
    OrbitConfig,
    Outcome,
    Which,
    apply_f,
    apply_G,
    classify,
    contraction_certificate,
    derivative,
    iterate,
    norm_step_law,
    orbit_fate,
    parse_parameter,
)


def test_f_at_minus_a_is_exactly_zero():
    params = MapParams.parse(7, "3")
    assert apply_f(params, -params.a).is_exact_zero


@settings(max_examples=60)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 50), st.integers(1, 50), st.integers(-30, 30))
def test_conjugacy_h_f_equals_G_h(p, an, ad, xn):
    # h(x) = a x carries G to f: f(a x) = a G(x)
    params = MapParams(p, PAdic.exact(Fraction(an, ad), p))
    x = PAdic.exact(xn, p)
    a = params.a
    assert apply_f(params, a * x) == a * apply_G(params, x)


def test_fixed_points_are_fixed():
    for p, a in [(11, "1"), (11, "4"), (7, "7"), (5, "1/5")]:
        params = MapParams.parse(p, a)
        for rec in classify(params).records:
            assert apply_f(params, rec.value).agrees_with(rec.value)
            assert rec.multiplier.agrees_with(derivative(params, rec.value))


def test_vieta_product_and_sum():
    params = MapParams.parse(11, "4")
    _, x2, x3 = classify(params).records
    assert (x2.value * x3.value).agrees_with(-1)
    assert (x2.value + x3.value).agrees_with(-params.a)


def test_classification_strata():
    assert MapParams.parse(7, "7").stratum == "small"
    assert MapParams.parse(7, "3").stratum == "unit"
    assert MapParams.parse(7, "1/7").stratum == "large"


def test_x1_is_superattracting():
    rec = classify(MapParams.parse(5, "5")).records[0]
    assert rec.which is Which.X1 and rec.kind is Kind.ATTRACTIVE
    assert rec.multiplier_norm == NormValue.ZERO


def test_large_parameter_kinds_odd_p():
    cl = classify(MapParams.parse(5, "1/5"))
    kinds = sorted((r.kind.value, r.multiplier_norm.exponent) for r in cl.records[1:])
    assert kinds == [("indifferent", 0), ("repelling", 2)]


def test_two_adic_large_parameter_small_root_is_attracting():
    # |f'(x)| = |x| |3x + 2a| picks up |2|_2 = 1/2 at the small fixed point
    for a in ("1/2", "1/8", "1/32"):
        cl = classify(MapParams.parse(2, a))
        small = min(cl.records[1:], key=lambda r: -r.value.valuation)
        assert small.kind is Kind.ATTRACTIVE
        assert small.multiplier_norm.exponent == -1


def test_missing_fixed_points_leave_only_x1():
    cl = classify(MapParams.parse(3, "1"))
    assert [r.which for r in cl.records] == [Which.X1]
    assert cl.existence_decided


def test_parse_parameter_sqrt_branch():
    a = parse_parameter("sqrt(21)", 5)
    assert (a * a).agrees_with(21)
    assert a.unit_residue(1) == 1
    with pytest.raises(ValueError):
        parse_parameter("sqrt(2)", 5)


def test_parameter_must_be_determinate():
    with pytest.raises(IndeterminateZero):
        MapParams(5, PAdic._indeterminate(5, 10))


def test_norm_step_law_against_direct_evaluation():
    params = MapParams.parse(5, "1/5")
    for e in (-2, -1, 0, 2, 3):
        x = PAdic.exact(Fraction(5) ** -e * 2, 5)
        want = apply_f(params, x).norm()
        assert norm_step_law(params, NormValue(e)) == want
    assert norm_step_law(params, NormValue(1)) is None


def test_contraction_certificate():
    params = MapParams.parse(7, "7")
    x1 = params.classification.records[0]
    assert contraction_certificate(params, x1, -1)
    assert not contraction_certificate(params, x1, 0)


# -- orbit fates ---------------------------------------------------------------


def test_escape_from_large_norm():
    params = MapParams.parse(5, "1/5")
    fate = orbit_fate(params, PAdic.exact(Fraction(1, 25), 5))
    assert fate.outcome is Outcome.ESCAPED and fate.steps_used == 0


def test_convergence_to_zero():
    params = MapParams.parse(7, "7")
    fate = orbit_fate(params, PAdic.exact(7 * 3, 7))
    assert fate.converged_to(Which.X1)


def test_norm_chain_escape_takes_steps():
    # |x| = 1 with |a| = 5: |f(x)| = |x|^2 |a| = 5 = |a|, then |f| = |a|^2 |x + a| ...
    params = MapParams.parse(5, "1/5")
    fate = orbit_fate(params, PAdic.exact(2, 5))
    assert fate.outcome is Outcome.ESCAPED and fate.steps_used >= 1


def test_siegel_trapping_near_indifferent_point():
    params = MapParams.parse(11, "1")
    x2 = params.classification.get(Which.X2)
    assert x2.kind is Kind.INDIFFERENT
    fate = orbit_fate(params, x2.value + 11**3)
    assert fate.outcome is Outcome.SIEGEL_TRAPPED and fate.fixed_point is Which.X2


def test_undecided_when_budget_runs_out():
    params = MapParams.parse(7, "7")
    # 3 is 3 mod 7, away from x2 = 1 and x3 = -1; its first image is already trapped
    fate = orbit_fate(params, PAdic.exact(3, 7), OrbitConfig(max_iter=0))
    assert fate.outcome is Outcome.UNDECIDED and fate.reason == "max_iterations"
    assert orbit_fate(params, PAdic.exact(3, 7)).outcome is Outcome.SIEGEL_TRAPPED


def test_iterate_matches_repeated_application():
    params = MapParams.parse(5, "5")
    x = from_rational(2, 3, 5, 30)
    assert iterate(params, x, 3) == apply_f(params, apply_f(params, apply_f(params, x)))


def test_fate_serialises():
    params = MapParams.parse(7, "7")
    d = orbit_fate(params, PAdic.exact(7, 7)).to_dict()
    assert d["outcome"] == "converged" and d["fixed_point"] == "x1"
