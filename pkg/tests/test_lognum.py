"""Log-scale extended-range arithmetic."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowshot.lognum import LogNum, compare, log_add, log_sub


def ulp_gap(a: float, b: float) -> float:
    """|a-b| in ulps at the scale of the log values involved (floor 1.0:
    log-scale granularity never gets finer than ulp(1) in these identities)."""
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b), 1.0))


class TestBasics:
    def test_add_small_exact(self):
        assert (LogNum.from_value(2) + LogNum.from_value(3)).value == pytest.approx(5, rel=1e-15)

    def test_zero_is_identity(self):
        x = LogNum.from_value(3.7)
        assert (LogNum.zero() + x).log_value == x.log_value
        assert (x + LogNum.zero()).log_value == x.log_value

    def test_add_equal_huge_logs(self):
        a = LogNum.from_log(1e12)
        out = a + a
        assert out.log_value == 1e12 + math.log(2)

    def test_sub_small_exact(self):
        assert (LogNum.from_value(5) - LogNum.from_value(2)).value == pytest.approx(3, rel=1e-15)

    def test_sub_self_is_zero(self):
        a = LogNum.from_value(123.456)
        assert (a - a).is_zero()

    def test_sub_half_of_huge(self):
        a = LogNum.from_log(100.0)
        b = LogNum.from_log(100.0 - math.log(2))
        assert (a - b).log_value == pytest.approx(100.0 - math.log(2), rel=1e-15)

    def test_sub_precondition(self):
        with pytest.raises(ValueError):
            LogNum.from_value(1) - LogNum.from_value(2)

    def test_cmp(self):
        assert compare(LogNum.zero(), LogNum.from_value(1)) == -1
        assert compare(LogNum.from_value(2), LogNum.from_value(2)) == 0
        assert compare(LogNum.from_log(50.0), LogNum.from_log(49.999)) == 1
        assert LogNum.zero() < LogNum.from_value(1e-300)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            LogNum(float("nan"))

    def test_negative_value_rejected(self):
        with pytest.raises(ValueError):
            LogNum.from_value(-1.0)


class TestRoundTrip:
    @given(st.floats(min_value=1e-300, max_value=1e300, allow_nan=False))
    def test_positive_double_roundtrip_within_1ulp_of_log(self, v):
        x = LogNum.from_value(v)
        assert ulp_gap(x.log_value, math.log(v)) <= 1.0
        # one ulp of slack in the log becomes ~|log v| ulps in the value
        assert x.value == pytest.approx(v, rel=5e-13)

    def test_zero_roundtrip(self):
        assert LogNum.from_value(0.0).is_zero()
        assert LogNum.zero().value == 0.0


log_floats = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


class TestAlgebra:
    @settings(max_examples=300)
    @given(log_floats, log_floats)
    def test_add_commutative(self, la, lb):
        a, b = LogNum(la), LogNum(lb)
        assert (a + b).log_value == (b + a).log_value

    @settings(max_examples=300)
    @given(log_floats, log_floats, log_floats)
    def test_add_associative_4ulp(self, la, lb, lc):
        a, b, c = LogNum(la), LogNum(lb), LogNum(lc)
        left = ((a + b) + c).log_value
        right = (a + (b + c)).log_value
        assert ulp_gap(left, right) <= 4.0

    @settings(max_examples=300)
    @given(log_floats, st.floats(min_value=-30, max_value=30))
    def test_sub_undoes_add_4ulp(self, la, delta):
        a = LogNum(la)
        b = LogNum(la - delta) if delta >= 0 else LogNum(la + delta)
        # keep |log a - log b| <= 30 by construction
        back = ((a + b) - b).log_value
        assert ulp_gap(back, a.log_value) <= 4.0

    @settings(max_examples=300)
    @given(log_floats, log_floats)
    def test_monotone_under_addition(self, la, lb):
        a, b = LogNum(la), LogNum(lb)
        assert a <= a + b


class TestLowLevel:
    def test_log_add_handles_neg_inf(self):
        assert log_add(float("-inf"), 3.0) == 3.0
        assert log_add(float("-inf"), float("-inf")) == float("-inf")

    def test_log_sub_equal_gives_neg_inf(self):
        assert log_sub(5.0, 5.0) == float("-inf")


class TestSerialization:
    def test_plain_token_in_range(self):
        assert LogNum.from_value(2.5).to_token() == repr(2.5)
        assert LogNum.zero().to_token() == "0"

    def test_log_token_out_of_range(self):
        t = LogNum.from_log(1e4).to_token()
        assert t.startswith("log:")
        assert LogNum.from_token(t).log_value == 1e4

    def test_roundtrip_tokens(self):
        for x in [LogNum.zero(), LogNum.from_value(1e-5), LogNum.from_log(-800.0), LogNum.from_log(1e12)]:
            assert LogNum.from_token(x.to_token()).log_value == x.log_value
