"""Consistent (theta, delta, m, d) from the separation scale rho and moment order q.

Given the net separation rho, the marginal moment order q, the critical
dimension and the ambient dimension, the constraints are

    delta <= c1 / log(5/rho)
    theta^((q-2)/(2(q+2))) * sqrt(log(e/theta)) <= c2 / log(5/rho)
    d      = round(c3 * theta^(4/(2+q)) / log^5(5/rho) * dStar)
    m     >= c0 * max(dStar / rho, n)

with all four constants configurable (they are only determined up to factors
depending on the marginal laws; the defaults are 1).  theta is the largest
value in (0, 0.2499] satisfying its constraint, found by bisection on the
monotone-increasing branch of f(theta) = theta^a sqrt(log(e/theta)), which
peaks at theta = exp(1 - 1/(2a)).

The grouped exponent reading a = (q-2)/(2(q+2)) is the default; it matches
the identity 1/2 - 1/r with r = 1 + q/2 used by the sparse-coordinate
estimates.  The flat left-to-right reading ((q-2)/2)*(q+2) is available
behind `exponent_reading="literal"` for comparison runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_THETA_CAP = 0.2499  # keeps the open-interval constraint theta < 1/4 strict in float
_BISECT_TOL = 1e-10


@dataclass(frozen=True)
class SolverConstants:
    c0: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0


@dataclass(frozen=True)
class ParameterSolution:
    rho: float
    q: float
    theta: float
    delta: float
    m: int
    d: int
    constants: SolverConstants
    feasible: bool
    reason: str | None = None


def _theta_exponent(q: float, reading: str) -> float:
    if reading == "grouped":
        return (q - 2.0) / (2.0 * (q + 2.0))
    if reading == "literal":
        return ((q - 2.0) / 2.0) * (q + 2.0)
    raise ValueError(f"unknown exponent reading {reading!r}")


def _f(theta: float, a: float) -> float:
    return theta**a * math.sqrt(math.log(math.e / theta))


def solve_parameters(
    rho: float,
    q: float,
    d_star: float,
    n: int,
    constants: SolverConstants | None = None,
    exponent_reading: str = "grouped",
) -> ParameterSolution:
    """Solve the constraint system; clamps keep theta and delta strictly below 1/4."""
    if not 0.0 < rho <= 0.25:
        raise ValueError("rho must be in (0, 1/4]")
    if q <= 2.0:
        raise ValueError("q must exceed 2")
    if d_star <= 0.0:
        raise ValueError("d_star must be positive")
    if n < 1:
        raise ValueError("n must be >= 1")
    c = constants or SolverConstants()

    log_term = math.log(5.0 / rho)
    delta = min(c.c1 / log_term, _THETA_CAP)

    a = _theta_exponent(q, exponent_reading)
    bound = c.c2 / log_term
    theta_peak = math.exp(1.0 - 1.0 / (2.0 * a))
    hi = min(_THETA_CAP, theta_peak * (1.0 - 1e-12))
    feasible, reason = True, None
    if _f(_THETA_CAP, a) <= bound:
        theta = _THETA_CAP
    elif _f(hi, a) <= bound:
        theta = hi
    else:
        lo = 1e-280
        if _f(lo, a) > bound:
            feasible, reason, theta = False, "theta-constraint unsatisfiable", lo
        else:
            # f is strictly increasing on (0, theta_peak); bisect to the boundary.
            while hi - lo > _BISECT_TOL * max(hi, 1.0):
                mid = 0.5 * (lo + hi)
                if _f(mid, a) <= bound:
                    lo = mid
                else:
                    hi = mid
            theta = lo
    _check_monotone(a, min(theta, hi))

    d_real = c.c3 * theta ** (4.0 / (2.0 + q)) / log_term**5 * d_star
    d = int(round(d_real))
    if d < 1:
        feasible = False
        reason = reason or "d<1"
        d = 1
    m = int(math.ceil(c.c0 * max(d_star / rho, float(n))))
    return ParameterSolution(rho=rho, q=q, theta=theta, delta=delta, m=m, d=d,
                             constants=c, feasible=feasible, reason=reason)


def _check_monotone(a: float, upper: float, samples: int = 1000) -> None:
    """Guard the bisection hypothesis: f must be nondecreasing below the peak."""
    if upper <= 1e-280:
        return
    lo = max(upper * 1e-12, 1e-280)
    prev = -math.inf
    for i in range(samples):
        t = lo * (upper / lo) ** (i / (samples - 1))
        v = _f(t, a)
        if v < prev * (1.0 - 1e-9):
            raise AssertionError("theta objective is not monotone on the bisection domain")
        prev = v


def constraints_satisfied(sol: ParameterSolution, exponent_reading: str = "grouped") -> bool:
    """Round-trip check: the returned (theta, delta) satisfy the constraint predicates."""
    log_term = math.log(5.0 / sol.rho)
    a = _theta_exponent(sol.q, exponent_reading)
    tol = 1e-9
    ok_delta = sol.delta <= sol.constants.c1 / log_term + tol and 0 < sol.delta < 0.25
    ok_theta = (_f(sol.theta, a) <= sol.constants.c2 / log_term + tol
                and 0 < sol.theta < 0.25)
    return ok_delta and ok_theta
