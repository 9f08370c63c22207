import math

import pytest

from nsopt import extreal
from nsopt.errors import DomainArithmeticError


def test_total_order():
    assert -math.inf < -1e300 < 0.0 < 1e300 < math.inf


def test_add_finite_and_infinite():
    assert extreal.add(1.0, 2.0) == 3.0
    assert extreal.add(math.inf, -5.0) == math.inf
    assert extreal.add(-math.inf, 5.0) == -math.inf
    assert extreal.add(math.inf, math.inf) == math.inf


def test_opposite_infinities_raise():
    with pytest.raises(DomainArithmeticError):
        extreal.add(math.inf, -math.inf)
    with pytest.raises(DomainArithmeticError):
        extreal.sub(math.inf, math.inf)
    assert extreal.sub(math.inf, -math.inf) == math.inf


def test_nan_rejected():
    with pytest.raises(DomainArithmeticError):
        extreal.check(float("nan"))
