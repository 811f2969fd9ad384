"""Problem parameters and domain predicates.

Everything downstream is driven by two numbers: the A1 bound Q >= 1 and the
dimension d >= 1.  Derived quantities:

    N       = 2^d                  (children per dyadic cube)
    eta     = 1 - (N-1)/(N*Q)      (one-step decay factor, in (1/N, 1] )
    epsilon = -log(eta)/log(N)     (sharp self-improvement exponent)

so that eta = N^(-epsilon) holds by construction.  For Q > 1 we have
0 < epsilon < 1 and N*eta > 1; Q = 1 collapses the problem (only the
constant weight remains) and is flagged degenerate rather than rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

D_MAX = 20          # N = 2^d stays a safe exact integer/float
BOUNDARY_TOL = 1e-12


class DomainError(ValueError):
    """A point lies outside the domain an operation is defined on."""


class NodePointError(ValueError):
    """A one-sided quantity was requested exactly at a breakpoint."""


class DegenerateParamsError(ValueError):
    """Operation undefined for the degenerate bound Q = 1."""


@dataclass(frozen=True)
class Params:
    """Immutable problem parameters; safe to share across threads."""

    Q: float
    d: int
    N: int
    eta: float
    epsilon: float
    degenerate: bool


@dataclass(frozen=True)
class DomainPoint:
    """A point (x, y, m): set mass, weight average, weight minimum."""

    x: float
    y: float
    m: Optional[float] = None

    def with_default_m(self) -> "DomainPoint":
        return self if self.m is not None else DomainPoint(self.x, self.y, 1.0)


def new_params(Q: float, d: int) -> Params:
    """Validate (Q, d) and precompute the derived constants."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise ValueError(f"d must be an integer, got {d!r}")
    if d < 1 or d > D_MAX:
        raise ValueError(f"d must be in [1, {D_MAX}], got {d}")
    if not (isinstance(Q, (int, float)) and math.isfinite(Q)):
        raise ValueError(f"Q must be finite, got {Q!r}")
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    Q = float(Q)
    N = 2**d
    eta = 1.0 - (N - 1) / (N * Q)
    epsilon = -math.log(eta) / math.log(N)
    return Params(Q=Q, d=d, N=N, eta=eta, epsilon=epsilon, degenerate=(Q == 1.0))


def osekowski_p_max(p: Params) -> float:
    """Endpoint exponent log(N) / log(N - (N-1)/Q).

    Satisfies 1 - 1/p_max = epsilon exactly; the weak-type estimate holds
    for every exponent up to this value and for no larger one.
    """
    if p.degenerate:
        raise DegenerateParamsError("p_max is unbounded at Q = 1")
    return math.log(p.N) / math.log(p.N - (p.N - 1) / p.Q)


def in_omega(p: Params, x: float, y: float) -> bool:
    """Membership in the normalized domain {0 <= x <= 1, 1 <= y <= Q}."""
    if not (math.isfinite(x) and math.isfinite(y)):
        return False
    t = BOUNDARY_TOL
    return -t <= x <= 1 + t and 1 - t <= y <= p.Q + t

def in_omega_k(p: Params, k: int, x: float, y: float) -> bool:
    """Membership in the wedge region {y <= 1 + (Q-1) N^k x} inside the domain."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if not in_omega(p, x, y):
        return False
    return y <= 1 + (p.Q - 1) * p.N**k * x + BOUNDARY_TOL

def in_omega_b(p: Params, x: float, y: float, m: float) -> bool:
    """Membership in the unnormalized domain {0 <= x <= 1, 0 < m <= y <= Q m}."""
    if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(m)):
        return False
    t = BOUNDARY_TOL
    if not (-t <= x <= 1 + t) or m <= 0:
        return False
    return m * (1 - t) <= y <= p.Q * m * (1 + t)
