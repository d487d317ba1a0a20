import math

from hypothesis import given, strategies as st

from pollushield.trust_core import (
    CFModel,
    DTModel,
    TrustParams,
    TrustState,
    apply_decay,
    combine_trust,
    confidence_factor,
    direct_trust,
    indirect_trust,
    onoff_resistance_margin,
    transaction_probability,
)

counts = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)

ALL_DT = [DTModel.DTMA, DTModel.DTMB, DTModel.PDTM]
ALL_CF = [CFModel.CFDA, CFModel.CFDB]


@given(nc=counts, np_=counts, nt=counts, dt=st.sampled_from(ALL_DT), cf=st.sampled_from(ALL_CF))
def test_trust_and_confidence_stay_in_unit_range(nc, np_, nt, dt, cf):
    params = TrustParams(cf_model=cf, dt_model=dt)
    state = TrustState(nc, np_, nt, 0.0)
    assert 0.0 <= direct_trust(state, params) <= 1.0
    assert 0.0 <= confidence_factor(state, params) <= 1.0


@given(n1=counts, n2=counts, cf=st.sampled_from(ALL_CF))
def test_confidence_factor_monotone_over_full_range(n1, n2, cf):
    lo, hi = sorted((n1, n2))
    params = TrustParams(cf_model=cf)
    a_lo = confidence_factor(TrustState(0, 0, lo, 0), params)
    a_hi = confidence_factor(TrustState(0, 0, hi, 0), params)
    assert a_hi >= a_lo


@given(
    lo=st.floats(min_value=0.0, max_value=1e4),
    gap=st.floats(min_value=1e-3, max_value=1e4),
    cf=st.sampled_from(ALL_CF),
)
def test_confidence_factor_strictly_increasing(lo, gap, cf):
    # strict away from float saturation; CFDB pins at exactly 1.0 once
    # beta ** n underflows
    params = TrustParams(cf_model=cf)
    a_lo = confidence_factor(TrustState(0, 0, lo, 0), params)
    a_hi = confidence_factor(TrustState(0, 0, lo + gap, 0), params)
    assert a_hi > a_lo or a_lo == a_hi == 1.0


def test_confidence_factor_tends_to_one():
    big = TrustState(0, 0, 1e6, 0)
    assert confidence_factor(big, TrustParams(cf_model=CFModel.CFDA, c=1.0)) > 0.999
    assert confidence_factor(big, TrustParams(cf_model=CFModel.CFDB, beta=0.5)) > 0.999


@given(nc=counts, np_=counts, bump=st.floats(min_value=1e-3, max_value=1e5), dt=st.sampled_from(ALL_DT))
def test_direct_trust_monotone_in_clean(nc, np_, bump, dt):
    params = TrustParams(dt_model=dt)
    base = direct_trust(TrustState(nc, np_, nc + np_, 0), params)
    more = direct_trust(TrustState(nc + bump, np_, nc + bump + np_, 0), params)
    assert more >= base - 1e-12


@given(nc=counts, np_=counts, bump=st.floats(min_value=1e-3, max_value=1e5), dt=st.sampled_from(ALL_DT))
def test_direct_trust_antitone_in_polluted(nc, np_, bump, dt):
    params = TrustParams(dt_model=dt)
    base = direct_trust(TrustState(nc, np_, nc + np_, 0), params)
    worse = direct_trust(TrustState(nc, np_ + bump, nc + np_ + bump, 0), params)
    assert worse <= base + 1e-12


@given(d=unit, i=unit, alpha=unit)
def test_combined_trust_is_convex(d, i, alpha):
    t = combine_trust(d, i, alpha)
    assert min(d, i) - 1e-12 <= t <= max(d, i) + 1e-12


@given(recs=st.lists(st.tuples(unit, unit), min_size=1, max_size=20))
def test_indirect_trust_bounded_by_recommendations(recs):
    # 1e-9 absorbs the float noise of subnormal credibility weights
    result = indirect_trust(recs)
    if result is None:
        assert sum(c for c, _ in recs) == 0.0
        return
    values = [v for _, v in recs]
    assert min(values) - 1e-9 <= result <= max(values) + 1e-9


@given(
    nc=st.floats(min_value=1e-6, max_value=1e3),
    np_=st.floats(min_value=0.0, max_value=1e2),
    eta=st.floats(min_value=1e-6, max_value=10.0),
    eps=st.floats(min_value=1e-9, max_value=2.0),
    n=st.integers(min_value=1, max_value=50),
)
def test_margin_ratio_matches_direct_trust_recomputation(nc, np_, eta, eps, n):
    """The margin's drop/gain quotient must agree with differencing the trust
    model itself (independent recomputation of the same quantities). The
    differenced values carry ~1e-16 absolute float error, so the comparison
    happens on drop and gain rather than their ill-conditioned quotient."""
    rho = math.log(1.0 + 1.0 / eta) + eps
    params = TrustParams(dt_model=DTModel.PDTM, rho=rho, eta=eta)
    margin = onoff_resistance_margin(TrustState(nc, np_, nc + np_, 0), n, params)
    here = direct_trust(TrustState(nc, np_, 0, 0), params)
    drop = here - direct_trust(TrustState(nc, np_ + n, 0, 0), params)
    gain = direct_trust(TrustState(nc + n, np_, 0, 0), params) - here
    # differencing costs ~1 ulp of the O(1) trust values; the quotient scales it
    tolerance = 1e-12 + margin.ratio * 5e-15
    assert abs(margin.ratio * gain - drop) <= tolerance


@given(
    np_=st.floats(min_value=0.0, max_value=1e2),
    eta=st.floats(min_value=1e-3, max_value=10.0),
    eps=st.floats(min_value=1e-6, max_value=2.0),
    n=st.integers(min_value=1, max_value=50),
    slack=st.floats(min_value=0.0, max_value=1e3),
)
def test_margin_dominates_bound_when_clean_evidence_dominates(np_, eta, eps, n, slack):
    """The closed-form estimate is a true lower bound once n_clean >= eta * n;
    with thinner clean evidence it can overshoot the actual ratio."""
    nc = eta * n + slack
    rho = math.log(1.0 + 1.0 / eta) + eps
    params = TrustParams(dt_model=DTModel.PDTM, rho=rho, eta=eta)
    margin = onoff_resistance_margin(TrustState(nc, np_, nc + np_, 0), n, params)
    assert margin.ratio >= margin.bound * (1.0 - 1e-12)
    assert margin.ratio > 1.0  # resistant region: drops outweigh gains


@given(
    counters=st.floats(min_value=1e-3, max_value=1e5),
    dt=st.floats(min_value=1e-3, max_value=100.0),
)
def test_decay_keeps_bad_memories_longer(counters, dt):
    params = TrustParams(forgetting=0.2, forgiving=0.05)
    out = apply_decay(TrustState(counters, counters, 2 * counters, 0.0), dt, params)
    assert out.n_clean < out.n_polluted


@given(t1=unit, t2=unit)
def test_transaction_probability_non_decreasing(t1, t2):
    params = TrustParams(theta_p=0.5, theta_g=0.9, chi=0.5)
    lo, hi = sorted((t1, t2))
    assert transaction_probability(lo, params) <= transaction_probability(hi, params)
