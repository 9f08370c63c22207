"""Extended-real helpers.

Extended reals are represented as plain Python floats: ``math.inf`` and
``-math.inf`` are legal values, NaN never is.  Floats already provide the
total order -inf < finite < +inf; what they do not provide is safe addition
(IEEE returns NaN for ``inf + -inf``), so the checked operations below raise
:class:`~nsopt.errors.DomainArithmeticError` instead of silently producing
NaN.
"""

import math

from .errors import DomainArithmeticError

INF = math.inf
NEG_INF = -math.inf


def is_finite(x: float) -> bool:
    return math.isfinite(x)


def check(x: float) -> float:
    """Validate a value as an extended real (rejects NaN)."""
    x = float(x)
    if math.isnan(x):
        raise DomainArithmeticError("NaN is not an extended real")
    return x


def add(a: float, b: float) -> float:
    """a + b, raising on the undefined combination of opposite infinities."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise DomainArithmeticError("+inf and -inf cannot be added")
    return check(a) + check(b)


def sub(a: float, b: float) -> float:
    """a - b with the same guard as :func:`add`."""
    if math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0):
        raise DomainArithmeticError("inf - inf is undefined")
    return check(a) - check(b)
