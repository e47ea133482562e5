"""
Cost-function market behind PPS.

The market maker prices securities that pay one unit each if the project
is NOT provisioned. With cost function C0 and q securities outstanding, a
buyer paying x receives C0^-1(x + C0(q)) - q securities; the refund bonus
is the excess of securities over the payment.

C0 is fixed to the liquidity-parameterized softplus

    C0(q) = b * ln(1 + e^(q/b))

which is strictly increasing, convex, and has a closed-form inverse.
"""

import math

import numpy as np

from provision_point.errors import DomainError, InvalidLiquidity, OutOfRange


def _check_liquidity(b: float) -> None:
    if not b > 0:
        raise InvalidLiquidity(f"Liquidity b must be > 0, got b={b}")


def pps_cost(q: float, b: float) -> float:
    """C0(q) = b*ln(1 + e^(q/b)), evaluated as a stable softplus."""
    _check_liquidity(b)
    if q < 0:
        raise DomainError(f"Outstanding quantity must be >= 0, got q={q}")
    return float(b * np.logaddexp(0.0, q / b))


def pps_cost_inverse(c: float, b: float) -> float:
    """
    Quantity q >= 0 with C0(q) = c.

    q = b*ln(e^(c/b) - 1), rewritten as c + b*ln(1 - e^(-c/b)) so that
    large c/b does not overflow.
    """
    _check_liquidity(b)
    floor = b * math.log(2.0)
    if c < floor:
        raise OutOfRange(f"Cost {c} is below C0(0) = b*ln2 = {floor}")
    q = c + b * math.log(-math.expm1(-c / b))
    return max(q, 0.0)


def pps_refund(x: float, q: float, b: float) -> float:
    """
    Refund bonus C0^-1(x + C0(q)) - q - x for paying x at market state q.

    Uses the equivalent form b*log1p(e^(-q/b) * (1 - e^(-x/b))), which
    avoids the cancellation of the literal expression when q/b is large.
    Strictly positive for x > 0 and strictly decreasing in q.
    """
    _check_liquidity(b)
    if x < 0:
        raise DomainError(f"Payment must be >= 0, got x={x}")
    if q < 0:
        raise DomainError(f"Outstanding quantity must be >= 0, got q={q}")
    if x == 0:
        return 0.0
    return b * math.log1p(math.exp(-q / b) * -math.expm1(-x / b))


def securities_issued(x: float, q: float, b: float) -> float:
    """Number of securities r = C0^-1(x + C0(q)) - q awarded for paying x."""
    return x + pps_refund(x, q, b)


def outstanding_securities(amounts, b: float) -> list[float]:
    """
    Market state q^{t_i} seen by each contribution, in seq order.

    q starts at 0 and grows by the securities issued to every earlier
    contribution.
    """
    _check_liquidity(b)
    states = []
    q = 0.0
    for x in amounts:
        states.append(q)
        q += securities_issued(x, q, b)
    return states
