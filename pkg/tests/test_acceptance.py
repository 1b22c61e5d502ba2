"""Acceptance criteria 1-10, each at its stated tolerance.

Every test carries ``@pytest.mark.criterion(n)``; the session summary prints
one PASS/FAIL line per criterion.
"""

import random
from fractions import Fraction

import pytest

from padicdyn.basins import (
    AnalysisConfig,
    Boundary,
    HitStatus,
    ball_samples,
    boundary_escape_witness,
    hitting_time,
    siegel_scan,
    sphere_invariance,
    sphere_samples,
)
from padicdyn.core import Ball, PAdic, distance, parse_padic
from padicdyn.dynamics import Kind, MapParams, Outcome, Which, apply_f, classify, orbit_fate
from padicdyn.roots import padic_sqrt, sqrt_a2p4_verdict, sqrt_exists

CRITERIA = {
    1: "square-root criterion equals brute force mod p^6",
    2: "sqrt(a^2+4) table for |a| < 1",
    3: "Hensel roots square back on all 64 digits",
    4: "fixed-point classifications of the worked examples",
    5: "|9+2a^2| and |6+a^2| never both below 1",
    6: "basins and Siegel discs for |a| < 1",
    7: "basins and Siegel discs for |a| > 1",
    8: "basins and hitting times for |a| = 1",
    9: "constructed a = sqrt(p^2 - 4) instances",
    10: "reproduce all is byte-for-byte deterministic",
}

PRIMES = (2, 3, 5, 7, 11, 13)


def log_norm(x: PAdic):
    return None if x.is_exact_zero else -x.valuation


def squares_mod(m: int) -> bytearray:
    mark = bytearray(m)
    for y in range(m // 2 + 1):
        mark[y * y % m] = 1
    return mark


# -- 1 ---------------------------------------------------------------------------


@pytest.mark.criterion(1)
@pytest.mark.parametrize("p", PRIMES)
def test_sqrt_criterion_matches_squares_mod_p6(p):
    mod = p**6
    is_square = squares_mod(mod)
    mismatches = []
    for u in range(1, p**4):
        if u % p == 0:
            continue
        for v in (0, 1, 2):
            got = sqrt_exists(PAdic.exact(u * p**v, p, 16))
            if got != bool(is_square[u * p**v % mod]):
                mismatches.append((u, v))
    assert mismatches == []


# -- 2 ---------------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_two_adic_small_parameters():
    rng = random.Random(2)
    for k in (1, 2, 3, 4):
        for _ in range(20):
            a = PAdic.exact(2**k * (2 * rng.randrange(1, 10**9) + 1), 2)
            verdict = sqrt_a2p4_verdict(a)
            assert verdict.exists == (k >= 3)
            assert sqrt_exists(a * a + 4) == (k >= 3)


@pytest.mark.criterion(2)
@pytest.mark.parametrize("p", [3, 5, 7])
def test_odd_small_parameters_always_have_the_root(p):
    rng = random.Random(p)
    for _ in range(40):
        u = rng.randrange(1, 10**9)
        a = PAdic.exact(p ** rng.randrange(1, 6) * (u if u % p else u + 1), p)
        assert sqrt_a2p4_verdict(a).exists
        assert sqrt_exists(a * a + 4)


# -- 3 ---------------------------------------------------------------------------


@pytest.mark.criterion(3)
@pytest.mark.parametrize("p", PRIMES)
def test_hensel_roots_square_back(p):
    n = 64
    mod = p**n
    rng = random.Random(1000 + p)
    radicands = [(rng.randrange(1, mod), 2 * rng.randrange(0, 3)) for _ in range(300)]
    checked = 0
    for u, v in radicands:
        if u % p == 0:
            continue
        x = PAdic.exact(u * p**v, p, n)
        if not sqrt_exists(x):
            continue
        root = padic_sqrt(x, n).root
        r = root.unit_residue(root.precision)
        assert 2 * root.valuation == v
        assert (r * r - u) % mod == 0
        checked += 1
    assert checked > 20


# -- 4 ---------------------------------------------------------------------------


def kinds(p, a):
    cl = classify(MapParams.parse(p, a))
    return {r.which: r for r in cl.records}


@pytest.mark.criterion(4)
def test_p5_a1_both_indifferent():
    recs = kinds(5, "1")
    assert recs.get(Which.X2) is not None and recs.get(Which.X3) is not None, "x2, x3 do not exist in Q_5"
    assert recs[Which.X2].kind is Kind.INDIFFERENT
    assert recs[Which.X3].kind is Kind.INDIFFERENT


@pytest.mark.criterion(4)
def test_p11_a4_both_indifferent():
    recs = kinds(11, "4")
    assert recs[Which.X2].kind is Kind.INDIFFERENT and recs[Which.X3].kind is Kind.INDIFFERENT
    a = PAdic.exact(4, 11)
    assert log_norm(6 + a * a) < 0


@pytest.mark.criterion(4)
def test_p11_a1_one_attractive_one_indifferent():
    recs = kinds(11, "1")
    assert sorted(recs[w].kind.value for w in (Which.X2, Which.X3)) == ["attractive", "indifferent"]
    a = PAdic.exact(1, 11)
    assert log_norm(a * a + 4) == 0


@pytest.mark.criterion(4)
def test_p3_a3_both_attractive():
    recs = kinds(3, "3")
    assert recs[Which.X2].kind is Kind.ATTRACTIVE and recs[Which.X3].kind is Kind.ATTRACTIVE


@pytest.mark.criterion(4)
def test_p5_large_a_one_repelling_one_indifferent():
    recs = kinds(5, "1/5")
    pair = sorted((recs[w].kind.value, recs[w].multiplier_norm.exponent) for w in (Which.X2, Which.X3))
    assert pair == [("indifferent", 0), ("repelling", 2)]  # |lambda| = 25


def test_p5_digit_parameter_both_indifferent():
    # the element 1 + 2*5 + 2*5^2 + ... = -3/2, where a^2 + 4 = 25/4 is a square
    recs = kinds(5, "0;1,2,2")
    assert recs[Which.X2].kind is Kind.INDIFFERENT and recs[Which.X3].kind is Kind.INDIFFERENT


# -- 5 ---------------------------------------------------------------------------


@pytest.mark.criterion(5)
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_conditions_never_hold_together(p):
    rng = random.Random(4200 + p)
    for _ in range(200):
        u = rng.randrange(1, p**20)
        while u % p == 0:
            u = rng.randrange(1, p**20)
        a = PAdic.exact(u, p)
        both = log_norm(9 + 2 * a * a) < 0 and log_norm(6 + a * a) < 0
        assert not both
        assert not ((9 + 2 * u * u) % p == 0 and (6 + u * u) % p == 0)


# -- 6 ---------------------------------------------------------------------------

SMALL = [(2, "8"), (5, "5"), (7, "7"), (3, "3")]
DEPTH3 = AnalysisConfig(depth=3)


@pytest.mark.criterion(6)
@pytest.mark.parametrize("p,a", SMALL)
def test_small_a_open_unit_ball_converges_to_zero(p, a):
    params = MapParams.parse(p, a)
    for x in ball_samples(PAdic.zero(p), -1, DEPTH3):
        assert orbit_fate(params, x, DEPTH3.orbit).converged_to(Which.X1), x


@pytest.mark.criterion(6)
@pytest.mark.parametrize("p,a", SMALL)
def test_small_a_unit_sphere_keeps_norm_one(p, a):
    params = MapParams.parse(p, a)
    for x in sphere_samples(PAdic.zero(p), 0, DEPTH3):
        y = x
        for _ in range(200):
            y = apply_f(params, y)
            assert log_norm(y) == 0, x


@pytest.mark.criterion(6)
def test_p3_balls_around_x2_x3_are_basins():
    params = MapParams.parse(3, "3")
    for which in (Which.X2, Which.X3):
        rec = params.classification.get(which)
        for x in ball_samples(rec.value, -1, DEPTH3):
            assert orbit_fate(params, x, DEPTH3.orbit).converged_to(which), x


@pytest.mark.criterion(6)
def test_p7_witness_and_open_disc():
    params = MapParams.parse(7, "7")
    for rec in params.classification.records[1:]:
        assert rec.kind is Kind.INDIFFERENT
        assert boundary_escape_witness(params, rec) is not None
        assert siegel_scan(params, rec, [-1, 0], DEPTH3).boundary_conclusion is Boundary.OPEN_BALL


@pytest.mark.criterion(6)
@pytest.mark.parametrize("p,a", [(5, "5"), (11, "11")])
def test_no_witness_and_closed_disc(p, a):
    params = MapParams.parse(p, a)
    for rec in params.classification.records[1:]:
        assert boundary_escape_witness(params, rec) is None
        assert siegel_scan(params, rec, [-1, 0]).boundary_conclusion is Boundary.CLOSED_BALL


@pytest.mark.criterion(6)
@pytest.mark.parametrize("p,a,expected", [(5, "5", 0), (7, "7", 0), (11, "11", 0), (2, "8", -1)])
def test_distance_between_x2_and_x3(p, a, expected):
    params = MapParams.parse(p, a)
    x2, x3 = params.classification.records[1:]
    assert distance(x2.value, x3.value).exponent == expected


# -- 7 ---------------------------------------------------------------------------

LARGE = [(5, "1/5"), (3, "1/3")]


@pytest.mark.criterion(7)
@pytest.mark.parametrize("p,a", LARGE)
def test_large_a_steps(p, a):
    params = MapParams.parse(p, a)
    cfg = AnalysisConfig()
    m = params.a_log_norm
    assert m % 2 == 1
    zero = PAdic.zero(p)

    # (I) f(S_r1(0)) lies in S_r1(0), r1 = 1/|a|
    for x in sphere_samples(zero, -m, cfg):
        assert log_norm(apply_f(params, x)) == -m, x
    # (II) |x| > |a| escapes
    for e in (m + 1, m + 2):
        for x in sphere_samples(zero, e, cfg):
            assert orbit_fate(params, x, cfg.orbit).outcome is Outcome.ESCAPED, x
    # (VI) the open ball of radius 1/|a|^3 around -a reaches B_r1(0) in one step
    target = Ball(zero, -m - 1)
    for x in ball_samples(-params.a, -3 * m - 1, cfg):
        assert hitting_time(params, x, target, cfg.kmax).T == 1, x
    # (IX) spheres around -a between r1 and |a|, restricted to |x| = |a|
    radii = [e for e in range(-3 * m + 1, -m) if e != -2 * m] + list(range(-m + 1, m + 1))
    for e in radii:
        for x in sphere_samples(-params.a, e, cfg):
            if log_norm(x) == m:
                assert orbit_fate(params, x, cfg.orbit).outcome is Outcome.ESCAPED, x


@pytest.mark.criterion(7)
@pytest.mark.parametrize("p,a", LARGE)
def test_large_a_siegel_disc(p, a):
    params = MapParams.parse(p, a)
    cfg = AnalysisConfig()
    m = params.a_log_norm
    ind = [r for r in params.classification.records[1:] if r.kind is Kind.INDIFFERENT]
    assert len(ind) == 1
    xs = ind[0].value
    for e in (-m - 1, -m - 2):
        assert sphere_invariance(params, xs, e, sphere_samples(xs, e, cfg)).invariant
    stays = [
        x for x in sphere_samples(xs, -m, cfg)
        if log_norm(x) == -m and log_norm(apply_f(params, x)) == -m
    ]
    assert stays


# -- 8 ---------------------------------------------------------------------------


@pytest.mark.criterion(8)
@pytest.mark.parametrize("p,a", [(5, "1"), (7, "3")])
def test_unit_a_dynamics(p, a):
    params = MapParams.parse(p, a)
    cfg = AnalysisConfig()
    zero = PAdic.zero(p)
    for x in ball_samples(zero, -1, cfg):
        assert orbit_fate(params, x, cfg.orbit).converged_to(Which.X1), x
    assert apply_f(params, -params.a).is_exact_zero
    assert hitting_time(params, -params.a, Ball(zero, -1), cfg.kmax).T == 1
    for e in (1, 2):
        for x in sphere_samples(zero, e, cfg):
            assert orbit_fate(params, x, cfg.orbit).outcome is Outcome.ESCAPED, x
    target = Ball(-params.a, -1)
    times = [hitting_time(params, x, target, cfg.kmax) for x in sphere_samples(zero, 0, cfg)]
    hits = [t for t in times if t.status is HitStatus.HIT]
    assert hits and all(t.T <= cfg.kmax for t in hits)


# -- 9 ---------------------------------------------------------------------------

CONSTRUCTED = {5: "sqrt(21)", 13: "sqrt(165)", 29: "sqrt(837)"}


def residue_is_square(n: int, p: int) -> bool:
    return n % p in {y * y % p for y in range(p)}


@pytest.mark.criterion(9)
def test_constructed_residue_facts():
    for p in CONSTRUCTED:
        assert residue_is_square(p * p - 4, p)
    assert residue_is_square(-5, 29) and (-5) % 29 == 24
    assert not residue_is_square(-5, 13)
    for p in (13, 29):
        assert sqrt_exists(PAdic.exact(-5, p)) == residue_is_square(-5, p)


@pytest.mark.criterion(9)
@pytest.mark.parametrize("p", sorted(CONSTRUCTED))
def test_constructed_norms(p):
    params = MapParams.parse(p, CONSTRUCTED[p])
    a = params.a
    t = a * a + 4
    assert log_norm(t) == -2
    assert sqrt_exists(t)
    assert sqrt_a2p4_verdict(a).exists
    assert params.stratum == "unit"


@pytest.mark.criterion(9)
@pytest.mark.parametrize("p,expected", [(29, Boundary.OPEN_BALL), (13, Boundary.CLOSED_BALL), (5, Boundary.CLOSED_BALL)])
def test_constructed_siegel_boundary(p, expected):
    params = MapParams.parse(p, CONSTRUCTED[p])
    recs = params.classification.records[1:]
    assert recs and all(r.kind is Kind.INDIFFERENT for r in recs)
    for rec in recs:
        rep = siegel_scan(params, rec, [-1, 0])
        assert rep.boundary_conclusion is expected, (rec.which.value, rep.to_dict()["witness"])


# -- 10 --------------------------------------------------------------------------


@pytest.mark.criterion(10)
def test_reproduce_all_is_deterministic(reproduce_all):
    assert reproduce_all.first == reproduce_all.second
