"""
不完全 Beta 函数测试

覆盖连分式算法、向量化版本、整数 / 半整数闭式表达式与 a、b 方向的递推。
参考值取自 scipy.special.betainc 与数值积分。
"""

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import beta as beta_fn
from scipy.special import betainc

from dncbeta.exceptions import DomainError
from dncbeta.special import (
    BetaArgs,
    _beta_continued_fraction,
    _beta_continued_fraction_array,
    inc_beta_chain_a,
    inc_beta_chain_b,
    inc_beta_step_a,
    inc_beta_step_b,
    log_gamma,
    reg_inc_beta,
    reg_inc_beta_array,
    reg_inc_beta_even,
    reg_inc_beta_odd,
)
from dncbeta.types import EvenParameter


def _random_triples(rng, count, low=0.5, high=50.0):
    xs = rng.uniform(0.01, 0.99, size=count)
    as_ = rng.uniform(low, high, size=count)
    bs = rng.uniform(low, high, size=count)
    return list(zip(xs.tolist(), as_.tolist(), bs.tolist()))


class TestLogGamma:
    @pytest.mark.parametrize(
        "z,expected",
        [
            (1.0, 0.0),
            (2.0, 0.0),
            (0.5, 0.5 * math.log(math.pi)),
            (10.0, math.log(362880)),
        ],
    )
    def test_known_values(self, z, expected):
        assert log_gamma(z) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("z", [0.0, -1.5, math.nan, math.inf])
    def test_rejects_non_positive(self, z):
        with pytest.raises(DomainError):
            log_gamma(z)


class TestBetaArgs:
    @pytest.mark.parametrize(
        "x,a,b,parameter",
        [(-0.1, 1, 1, "x"), (1.1, 1, 1, "x"), (0.5, 0, 1, "a"), (0.5, 1, -2, "b")],
    )
    def test_invalid_arguments(self, x, a, b, parameter):
        with pytest.raises(DomainError) as exc_info:
            BetaArgs(x, a, b)
        assert exc_info.value.parameter == parameter

    def test_shifted(self):
        assert BetaArgs(0.3, 1.5, 2.0).shifted(da=2, db=1) == BetaArgs(0.3, 3.5, 3.0)


class TestRegIncBeta:
    """通用连分式算法"""

    @pytest.mark.parametrize(
        "x,a,b,expected",
        [
            (0.0, 2.0, 3.0, 0.0),
            (1.0, 2.0, 3.0, 1.0),
            (0.3, 1.0, 1.0, 0.3),
            (0.5, 3.0, 3.0, 0.5),
            (0.7, 1.0, 2.0, 1 - 0.3**2),
        ],
    )
    def test_known_values(self, x, a, b, expected):
        assert reg_inc_beta(BetaArgs(x, a, b)) == pytest.approx(expected, abs=1e-14)

    def test_against_numerical_integration(self):
        integral, _ = quad(lambda t: t**1.5 * (1 - t) ** 2.5, 0.0, 0.3)
        expected = integral / beta_fn(2.5, 3.5)
        value = reg_inc_beta(BetaArgs(0.3, 2.5, 3.5))
        assert value == pytest.approx(expected, abs=1e-12)

    def test_against_scipy(self, rng):
        for x, a, b in _random_triples(rng, 300):
            assert reg_inc_beta(BetaArgs(x, a, b)) == pytest.approx(
                betainc(a, b, x), abs=1e-13
            )

    def test_complement_symmetry(self, rng):
        """I_x(a, b) + I_{1-x}(b, a) = 1"""
        for x, a, b in _random_triples(rng, 200):
            forward = reg_inc_beta(BetaArgs(x, a, b))
            total = forward + reg_inc_beta(BetaArgs(1 - x, b, a))
            assert total == pytest.approx(1.0, abs=1e-13)

    def test_decreasing_in_a(self, rng):
        """I_x(a-1, b) > I_x(a, b)，两者都被截断到 0 或 1 时允许相等"""
        xs = rng.uniform(0.01, 0.99, size=500)
        as_ = rng.uniform(1.05, 50.0, size=500)
        bs = rng.uniform(0.1, 50.0, size=500)
        for x, a, b in zip(xs, as_, bs):
            lower = reg_inc_beta(BetaArgs(float(x), float(a - 1), float(b)))
            upper = reg_inc_beta(BetaArgs(float(x), float(a), float(b)))
            assert lower >= upper
            if 0.0 < upper < 1.0 - 1e-9:
                assert lower > upper

    def test_increasing_in_b(self, rng):
        """I_x(a, b-1) < I_x(a, b)，两者都被截断到 0 或 1 时允许相等"""
        xs = rng.uniform(0.01, 0.99, size=500)
        as_ = rng.uniform(0.1, 50.0, size=500)
        bs = rng.uniform(1.05, 50.0, size=500)
        for x, a, b in zip(xs, as_, bs):
            smaller = reg_inc_beta(BetaArgs(float(x), float(a), float(b - 1)))
            larger = reg_inc_beta(BetaArgs(float(x), float(a), float(b)))
            assert smaller <= larger
            if 0.0 < smaller and larger < 1.0 - 1e-9:
                assert smaller < larger

    def test_result_in_unit_interval(self, rng):
        for x, a, b in _random_triples(rng, 200, low=0.05, high=500.0):
            assert 0.0 <= reg_inc_beta(BetaArgs(x, a, b)) <= 1.0


class TestRegIncBetaArray:
    """向量化版本"""

    def test_matches_scalar(self, rng):
        triples = _random_triples(rng, 100)
        xs, as_, bs = (np.array(values) for values in zip(*triples))
        values = reg_inc_beta_array(xs, as_, bs)
        for value, (x, a, b) in zip(values, triples):
            assert value == pytest.approx(reg_inc_beta(BetaArgs(x, a, b)), abs=1e-15)

    def test_continued_fraction_matches_scalar_exactly(self, rng):
        """收敛快慢差异很大的元素混在一起时，逐元素结果与标量连分式逐位相同且不产生警告"""
        a = np.concatenate([rng.uniform(0.5, 2.0, 50), rng.uniform(200.0, 2000.0, 50)])
        b = np.concatenate([rng.uniform(0.5, 2.0, 50), rng.uniform(200.0, 2000.0, 50)])
        x = (a + 1.0) / (a + b + 2.0) * rng.uniform(0.05, 0.999, 100)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            values = _beta_continued_fraction_array(x, a, b)
        expected = [
            _beta_continued_fraction(float(xi), float(ai), float(bi))
            for xi, ai, bi in zip(x, a, b)
        ]
        assert values.tolist() == expected

    def test_broadcasting(self):
        a = np.arange(1.0, 4.0)[:, None]
        values = reg_inc_beta_array(0.4, a, np.arange(1.0, 3.0))
        assert values.shape == (3, 2)
        assert values[0, 0] == pytest.approx(0.4, abs=1e-15)

    def test_scalar_input_returns_one_dimensional_array(self):
        values = reg_inc_beta_array(0.25, 1.0, 1.0)
        assert values.shape == (1,)
        assert values[0] == pytest.approx(0.25, abs=1e-15)

    def test_endpoints(self):
        values = reg_inc_beta_array(np.array([0.0, 1.0]), 2.0, 3.0)
        assert values.tolist() == [0.0, 1.0]

    @pytest.mark.parametrize(
        "x,a,b", [(1.5, 1.0, 1.0), (0.5, -1.0, 1.0), (0.5, 1.0, 0.0), (math.nan, 1, 1)]
    )
    def test_invalid_arguments(self, x, a, b):
        with pytest.raises(DomainError):
            reg_inc_beta_array(x, a, b)


class TestEvenClosedForm:
    """a 或 b 为正整数时的有限和表达式"""

    def test_first_even(self):
        args = BetaArgs(0.6, 4.0, 7.5)
        assert reg_inc_beta_even(args, EvenParameter.FIRST) == pytest.approx(
            reg_inc_beta(args), abs=1e-12
        )

    def test_second_even_accepts_string(self):
        args = BetaArgs(0.35, 2.5, 6.0)
        assert reg_inc_beta_even(args, "second") == pytest.approx(
            reg_inc_beta(args), abs=1e-12
        )

    def test_uniform_case(self):
        assert reg_inc_beta_even(BetaArgs(0.3, 1.0, 1.0), "first") == pytest.approx(
            0.3, abs=1e-15
        )

    def test_random_grid(self, rng):
        for _ in range(200):
            x = float(rng.uniform(0.01, 0.99))
            integer = float(rng.integers(1, 31))
            other = float(rng.uniform(0.5, 50.0))
            first = BetaArgs(x, integer, other)
            second = BetaArgs(x, other, integer)
            assert reg_inc_beta_even(first, "first") == pytest.approx(
                reg_inc_beta(first), abs=1e-10
            )
            assert reg_inc_beta_even(second, "second") == pytest.approx(
                reg_inc_beta(second), abs=1e-10
            )

    def test_requires_integer_parameter(self):
        with pytest.raises(DomainError):
            reg_inc_beta_even(BetaArgs(0.5, 2.5, 3.0), "first")
        with pytest.raises(DomainError):
            reg_inc_beta_even(BetaArgs(0.5, 2.0, 3.5), "second")

    def test_endpoints(self):
        assert reg_inc_beta_even(BetaArgs(0.0, 2.0, 3.0), "first") == 0.0
        assert reg_inc_beta_even(BetaArgs(1.0, 2.0, 3.0), "second") == 1.0


class TestOddClosedForm:
    """a、b 均为半奇数时的闭式表达式"""

    def test_arcsine_case(self):
        """a = b = 1/2 时为反正弦分布"""
        x = 0.3
        expected = 2.0 / math.pi * math.asin(math.sqrt(x))
        value = reg_inc_beta_odd(BetaArgs(x, 0.5, 0.5))
        assert value == pytest.approx(expected, abs=1e-14)
        assert value == pytest.approx(0.3690, abs=1e-4)

    def test_symmetric_midpoint(self):
        for shape in (0.5, 3.5):
            value = reg_inc_beta_odd(BetaArgs(0.5, shape, shape))
            assert value == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize(
        "x,a,b",
        [
            (0.3, 2.5, 3.5),
            (0.3, 1.5, 0.5),
            (0.8, 0.5, 2.5),
            (0.05, 7.5, 1.5),
            (0.95, 4.5, 9.5),
        ],
    )
    def test_against_continued_fraction(self, x, a, b):
        args = BetaArgs(x, a, b)
        assert reg_inc_beta_odd(args) == pytest.approx(reg_inc_beta(args), abs=1e-10)

    def test_random_grid(self, rng):
        for _ in range(200):
            x = float(rng.uniform(0.01, 0.99))
            a = float(rng.integers(0, 50)) + 0.5
            b = float(rng.integers(0, 50)) + 0.5
            args = BetaArgs(x, a, b)
            expected = reg_inc_beta(args)
            assert reg_inc_beta_odd(args) == pytest.approx(expected, abs=1e-10)

    def test_requires_half_odd_parameters(self):
        with pytest.raises(DomainError):
            reg_inc_beta_odd(BetaArgs(0.5, 1.0, 0.5))
        with pytest.raises(DomainError):
            reg_inc_beta_odd(BetaArgs(0.5, 0.5, 2.25))


class TestRecurrences:
    """a、b 方向的单步递推与递推链"""

    def test_step_a_uniform(self):
        assert inc_beta_step_a(BetaArgs(0.3, 1.0, 1.0), 0.3) == pytest.approx(
            0.09, abs=1e-15
        )

    def test_step_a_symmetric(self):
        args = BetaArgs(0.5, 2.0, 3.0)
        stepped = inc_beta_step_a(args, reg_inc_beta(args))
        assert stepped == pytest.approx(0.5, abs=1e-14)

    def test_step_b_uniform(self):
        assert inc_beta_step_b(BetaArgs(0.3, 1.0, 1.0), 0.3) == pytest.approx(
            0.51, abs=1e-15
        )

    def test_step_b_symmetric(self):
        args = BetaArgs(0.5, 3.0, 2.0)
        stepped = inc_beta_step_b(args, reg_inc_beta(args))
        assert stepped == pytest.approx(0.5, abs=1e-14)

    def test_steps_are_identity_at_endpoints(self):
        assert inc_beta_step_a(BetaArgs(0.0, 2.0, 3.0), 0.0) == 0.0
        assert inc_beta_step_b(BetaArgs(1.0, 2.0, 3.0), 1.0) == 1.0

    def test_chain_a(self):
        args = BetaArgs(0.6, 4.0, 7.5)
        chain = inc_beta_chain_a(args, 10)
        assert len(chain) == 10
        for k, value in enumerate(chain):
            assert value == pytest.approx(reg_inc_beta(args.shifted(da=k)), abs=1e-12)

    def test_chain_b(self):
        args = BetaArgs(0.1, 20.0, 492.0)
        chain = inc_beta_chain_b(args, 50)
        for k, value in enumerate(chain):
            assert value == pytest.approx(reg_inc_beta(args.shifted(db=k)), abs=1e-12)

    @pytest.mark.parametrize(
        "chain,args,count,axis",
        [
            (inc_beta_chain_b, BetaArgs(0.3, 2.5, 3.5), 500, "b"),
            (inc_beta_chain_a, BetaArgs(0.6, 1.5, 40.0), 200, "a"),
        ],
    )
    def test_long_chains_stay_accurate(self, chain, args, count, axis):
        values = chain(args, count)
        for k in (0, count // 4, count // 2, count - 1):
            shifted = args.shifted(da=k) if axis == "a" else args.shifted(db=k)
            assert values[k] == pytest.approx(
                betainc(shifted.a, shifted.b, shifted.x), abs=1e-12
            )

    def test_chain_requires_positive_count(self):
        with pytest.raises(DomainError):
            inc_beta_chain_a(BetaArgs(0.5, 1.0, 1.0), 0)
