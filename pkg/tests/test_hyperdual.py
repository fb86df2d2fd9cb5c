import numpy as np
import pytest

from bangopt import hyperdual as hd
from bangopt.hyperdual import EvaluationError, HyperDual, second_partials


def central_diff2(f, x, i, j, h=1e-4):
    """Second partial by central differences (the comparison oracle).

    Step 1e-4 keeps the oracle's own roundoff (~eps/h^2) well below the
    1e-6 comparison tolerance; 1e-5 would leave ~2e-6 of oracle noise.
    """
    x = np.asarray(x, dtype=float)

    def fv(xs):
        return float(f(list(xs)))

    if i == j:
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        return (fv(xp) - 2 * fv(x) + fv(xm)) / h**2
    out = 0.0
    for si in (+1, -1):
        for sj in (+1, -1):
            xx = x.copy()
            xx[i] += si * h
            xx[j] += sj * h
            out += si * sj * fv(xx)
    return out / (4 * h**2)


def central_diff1(f, x, i, h=1e-6):
    xp, xm = list(x), list(x)
    xp[i] += h
    xm[i] -= h
    return (float(f(xp)) - float(f(xm))) / (2 * h)


def test_square_at_three():
    x = HyperDual(3.0, 1.0, 1.0, 0.0)
    y = x * x
    assert (y.real, y.e1, y.e2, y.e12) == (9.0, 6.0, 6.0, 2.0)


def test_sin_at_zero():
    y = hd.sin(HyperDual(0.0, 1.0, 1.0, 0.0))
    assert y.real == 0.0
    assert y.e1 == 1.0
    assert y.e12 == 0.0


def test_bilinear_cross_partial():
    u1 = HyperDual(2.0, 1.0, 0.0, 0.0)
    u2 = HyperDual(5.0, 0.0, 1.0, 0.0)
    y = u1 * u2
    assert y.e12 == 1.0
    assert y.real == 10.0


def test_second_partials_sum_of_squares():
    f = lambda x: x[0] ** 2 + x[1] ** 2
    assert second_partials(f, [1.0, 2.0], 0, 0) == (5.0, 2.0, 2.0, 2.0)


def test_second_partials_linear_cross_zero():
    f = lambda x: x[0] + 3.0 * x[1]
    val, di, dj, dij = second_partials(f, [0.7, -0.3], 0, 1)
    assert dij == 0.0
    assert di == 1.0 and dj == 3.0


def test_second_partials_exp_product_vs_fd():
    f = lambda x: hd.exp(x[0] * x[1])
    x = [0.3, -1.1]
    val, di, dj, dij = second_partials(f, x, 0, 1)
    fd = central_diff2(lambda xs: np.exp(xs[0] * xs[1]), x, 0, 1)
    assert abs(dij - fd) <= 1e-6 * max(1.0, abs(fd))


@pytest.mark.parametrize(
    "fn,xval",
    [
        (lambda x: hd.sin(x[0]) * hd.cos(x[1]) + x[0] / x[1], [0.4, 1.3]),
        (lambda x: hd.exp(x[0]) * hd.log(x[1]) + hd.sqrt(x[1]), [0.2, 2.5]),
        (lambda x: hd.tan(x[0]) + x[1] ** 3 - x[0] * x[1], [0.3, 0.8]),
        (lambda x: (x[0] + 2.0 * x[1]) ** 2 / (1.0 + x[1] ** 2), [1.1, -0.6]),
    ],
)
def test_composed_expressions_match_fd(fn, xval):
    for i in range(2):
        for j in range(2):
            val, di, dj, dij = second_partials(fn, xval, i, j)
            fd1 = central_diff1(fn, xval, i)
            fd2 = central_diff2(fn, xval, i, j)
            assert abs(di - fd1) <= 1e-6 * (1.0 + abs(fd1))
            assert abs(dij - fd2) <= 1e-6 * (1.0 + abs(fd2))


def test_single_direction_seed_leaves_other_slots_zero():
    x = HyperDual(0.7, 1.0, 0.0, 0.0)
    y = hd.exp(x) * hd.sin(x) + 3.0
    assert y.e2 == 0.0
    assert y.e12 == 0.0
    assert y.e1 != 0.0


def test_division_by_zero_reports_function():
    with pytest.raises(EvaluationError) as err:
        HyperDual(1.0, 1.0, 0.0, 0.0) / HyperDual(0.0)
    assert err.value.function == "divide"


def test_log_domain_error():
    with pytest.raises(EvaluationError) as err:
        hd.log(HyperDual(-1.0, 1.0, 0.0, 0.0))
    assert err.value.function == "log"


def test_sqrt_domain_error():
    with pytest.raises(EvaluationError) as err:
        hd.sqrt(HyperDual(-2.0, 1.0, 0.0, 0.0))
    assert err.value.function == "sqrt"


def test_fractional_power_domain_error():
    with pytest.raises(EvaluationError) as err:
        HyperDual(-2.0, 1.0, 0.0, 0.0) ** 0.5
    assert err.value.function == "power"


def test_integer_power_negative_base():
    y = HyperDual(-2.0, 1.0, 1.0, 0.0) ** 3
    assert y.real == -8.0
    assert y.e1 == 12.0  # 3 x^2
    assert y.e12 == -12.0  # 6 x


def test_array_slots_match_scalar_loop():
    xs = np.array([0.3, 0.9, 1.7, 2.2])
    h = HyperDual(xs, 1.0, 1.0, 0.0)
    y = hd.sin(h) * h + hd.exp(-h)
    for k, xv in enumerate(xs):
        hk = HyperDual(xv, 1.0, 1.0, 0.0)
        yk = hd.sin(hk) * hk + hd.exp(-hk)
        assert abs(y.real[k] - yk.real) < 1e-15
        assert abs(y.e1[k] - yk.e1) < 1e-15
        assert abs(y.e12[k] - yk.e12) < 1e-15


def test_numpy_left_operand_defers_to_hyperdual():
    arr = np.array([1.0, 2.0])
    h = HyperDual(np.array([3.0, 4.0]), 1.0, 0.0, 0.0)
    y = arr * h
    assert isinstance(y, HyperDual)
    assert np.allclose(y.real, [3.0, 8.0])
    assert np.allclose(y.e1, [1.0, 2.0])


def test_real_inputs_equal_hyperdual_real_parts():
    f = lambda a, b: hd.sin(a) * b + a / (1.0 + b * b)
    a, b = 0.37, 1.21
    plain = f(a, b)
    lifted = f(HyperDual(a, 1.0, 0.0, 0.0), HyperDual(b, 0.0, 1.0, 0.0))
    assert plain == lifted.real
