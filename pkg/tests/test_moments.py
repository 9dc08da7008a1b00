from fractions import Fraction as F

import pytest

from rmtlab.moments import centered_moment, moment_bound_holds, raw_moment

P_GRID = [F(k, 20) for k in range(1, 11)]


def two_point(q, p):
    return p * (1 - p) ** q + (1 - p) * (-p) ** q


@pytest.mark.parametrize("p", [F(0), F(1, 3), F(1, 2), F(9, 10), F(1)])
def test_first_moment_vanishes(p):
    assert centered_moment(1, p) == 0


def test_centered_moment_examples():
    assert centered_moment(3, F(1, 2)) == 0
    assert centered_moment(3, F(1, 4)) == F(3, 32)
    assert centered_moment(2, F(1, 3)) == F(2, 9)


@pytest.mark.parametrize("q", range(1, 13))
@pytest.mark.parametrize("p", P_GRID + [F(3, 4), F(1)])
def test_matches_two_point_expectation(q, p):
    assert centered_moment(q, p) == two_point(q, p)


@pytest.mark.parametrize("q", range(2, 13))
@pytest.mark.parametrize("p", P_GRID)
def test_nonnegative_and_bounded(q, p):
    assert centered_moment(q, p) >= 0
    assert moment_bound_holds(q, p)


def test_moment_bound_examples():
    assert moment_bound_holds(2, F(1, 2))
    assert moment_bound_holds(5, F(1, 4))
    assert moment_bound_holds(2, F(1, 10))


def test_moment_bound_rejects_large_p():
    with pytest.raises(ValueError):
        moment_bound_holds(2, F(3, 4))


def test_raw_moment():
    assert raw_moment(1, F(1, 3)) == F(1, 3)
    assert raw_moment(7, F(1, 3)) == F(1, 3)
    assert raw_moment(2, 0) == 0


def test_exact_input_required():
    with pytest.raises(TypeError):
        centered_moment(2, 0.25)
    assert centered_moment(2, "1/4") == F(3, 16)
