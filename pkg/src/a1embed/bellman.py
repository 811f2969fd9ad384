"""Closed-form evaluation of the extremal bound.

The boundary profile f is piecewise linear with breakpoints at x = N^-k:

    f(N^-k) = Q eta^k,   slope (N eta)^k on (N^-(k-1), N^-k),   f(0) = 0,

and f_smooth(x) = Q x^epsilon is its concave majorant, touching exactly at
the breakpoints.  The two-variable bound on {0 <= x <= 1, 1 <= y <= Q} is

    M(x, y) = x + y - 1                                 below y = 1 + (Q-1)x,
    M(x, y) = ((y-1)/(Q-1)) f(x (Q-1)/(y-1))            above it,

both branches agreeing (= Qx) on the dividing line, and the three-variable
version is recovered by scaling: B(x, y, m) = m M(x, y/m).

Interval classification never goes through log(): x is scaled by exact
powers of two (frexp/ldexp), so a breakpoint is never misassigned and the
evaluation of f stays exact-in-structure down to subnormal x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import (
    BOUNDARY_TOL,
    DegenerateParamsError,
    DomainError,
    NodePointError,
    Params,
    in_omega,
    in_omega_b,
    in_omega_k,
)


def _interval_index(p: Params, x: float) -> tuple[int, float]:
    """Return (k, s) with s = x N^k in (1/N, 1], i.e. x in (N^-(k+1), N^-k].

    The scaling is by powers of two only, hence exact; breakpoints land
    exactly at s = 1.
    """
    m, e = math.frexp(x)
    k = max(0, (-e) // p.d)
    s = math.ldexp(x, p.d * k)
    while s <= 1.0 / p.N:
        k += 1
        s = math.ldexp(x, p.d * k)
    while s > 1.0 and k > 0:
        k -= 1
        s = math.ldexp(x, p.d * k)
    return k, s


def eval_f(p: Params, x: float) -> float:
    """Piecewise-linear boundary profile at x in [0, 1]."""
    if p.degenerate:
        raise DegenerateParamsError("boundary profile needs Q > 1")
    if not (math.isfinite(x) and -BOUNDARY_TOL <= x <= 1 + BOUNDARY_TOL):
        raise DomainError(f"x = {x!r} outside [0, 1]")
    if x <= 0:
        return 0.0
    if x >= 1:
        return p.Q
    k, s = _interval_index(p, x)
    return math.pow(p.eta, k) * (p.Q - 1 + s)


def eval_f_smooth(p: Params, x: float) -> float:
    """Concave majorant Q x^epsilon; agrees with eval_f at every x = N^-k."""
    if p.degenerate:
        raise DegenerateParamsError("boundary profile needs Q > 1")
    if not (math.isfinite(x) and -BOUNDARY_TOL <= x <= 1 + BOUNDARY_TOL):
        raise DomainError(f"x = {x!r} outside [0, 1]")
    if x <= 0:
        return 0.0
    if x >= 1:
        return p.Q
    return p.Q * math.pow(x, p.epsilon)


def f_slope(p: Params, x: float) -> float:
    """One-sided slope (N eta)^k of the profile, defined off breakpoints."""
    if p.degenerate:
        raise DegenerateParamsError("boundary profile needs Q > 1")
    if not (math.isfinite(x) and 0 < x <= 1 + BOUNDARY_TOL):
        raise DomainError(f"x = {x!r} outside (0, 1)")
    k, _ = _interval_index(p, x)
    for j in (k, k + 1):
        if abs(x - math.ldexp(1.0, -p.d * j)) <= BOUNDARY_TOL:
            raise NodePointError(f"slope undefined at breakpoint x = N^-{j}")
    if x >= 1:
        raise NodePointError("slope undefined at the endpoint x = 1")
    return math.pow(p.N * p.eta, k)


@dataclass(frozen=True)
class BranchInfo:
    """Which closed-form branch applied at a point, for reporting."""

    branch: str                 # "lower" or "upper"
    k: Optional[int] = None     # interval index of x(Q-1)/(y-1) on the upper branch
    at_node: bool = False       # scaled coordinate hit a breakpoint exactly

    def describe(self) -> str:
        if self.branch == "lower":
            return "lower branch (y <= 1 + (Q-1)x)"
        tag = f"node k={self.k}" if self.at_node else f"interval k={self.k}"
        return f"upper branch, {tag}"


def _on_lower_branch(p: Params, x: float, y: float) -> bool:
    return y <= 1 + (p.Q - 1) * x + BOUNDARY_TOL


def eval_M(p: Params, x: float, y: float) -> float:
    """Normalized bound M(x, y) on {0 <= x <= 1, 1 <= y <= Q}."""
    if not in_omega(p, x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the domain for Q = {p.Q}")
    x = min(max(x, 0.0), 1.0)
    y = min(max(y, 1.0), p.Q)
    if _on_lower_branch(p, x, y):
        return x + y - 1
    u = min(x * (p.Q - 1) / (y - 1), 1.0)
    return (y - 1) / (p.Q - 1) * eval_f(p, u)


def classify_point(p: Params, x: float, y: float) -> BranchInfo:
    """Report the branch/interval eval_M uses at (x, y); same domain checks."""
    if not in_omega(p, x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the domain for Q = {p.Q}")
    if _on_lower_branch(p, x, y):
        return BranchInfo("lower")
    u = min(x * (p.Q - 1) / (y - 1), 1.0)
    if u <= 0:
        return BranchInfo("upper", k=None, at_node=False)
    k, s = _interval_index(p, u)
    return BranchInfo("upper", k=k, at_node=abs(s - 1.0) <= BOUNDARY_TOL)


def eval_B(p: Params, x: float, y: float, m: float) -> float:
    """Unnormalized bound B(x, y, m) = m M(x, y/m) on {0 < m <= y <= Q m}."""
    if not in_omega_b(p, x, y, m):
        raise DomainError(
            f"({x!r}, {y!r}, {m!r}) outside the domain for Q = {p.Q}"
        )
    if p.degenerate:
        # only y = m survives the constraint chain; the bound collapses
        return m * min(max(x, 0.0), 1.0)
    return m * eval_M(p, min(max(x, 0.0), 1.0), min(max(y / m, 1.0), p.Q))


# ---------------------------------------------------------------------------
# supporting wedges

@dataclass(frozen=True)
class WedgeCoeffs:
    """Coefficients of the k-th tangent plane a x + b (y - 1)."""

    k: int
    a: float        # (N eta)^k
    b: float        # eta^k


def wedge_coeffs(p: Params, k: int) -> WedgeCoeffs:
    if p.degenerate:
        raise DegenerateParamsError("wedges need Q > 1")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return WedgeCoeffs(k=k, a=math.pow(p.N * p.eta, k), b=math.pow(p.eta, k))


def wedge_Mk(p: Params, k: int, x: float, y: float) -> float:
    """Two-plane majorant of M built from tangent planes k-1 and k.

    The planes cross on the line y = 1 + (Q-1) N^k x, so the wedge takes
    plane k-1 inside that region and plane k outside it; this keeps the
    wedge continuous and everywhere >= M.  k = 0 is the single plane
    x + (y - 1).
    """
    if not in_omega(p, x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the domain for Q = {p.Q}")
    if k == 0:
        return x + (y - 1)
    j = k - 1 if in_omega_k(p, k, x, y) else k
    c = wedge_coeffs(p, j)
    return c.a * x + c.b * (y - 1)


# ---------------------------------------------------------------------------
# vectorized internals used by the sampling suites; no domain checks here,
# callers are trusted to supply in-domain arrays

def _f_vec(p: Params, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    if not pos.any():
        return out
    xp = x[pos]
    _, e = np.frexp(xp)
    k = np.maximum(0, -(e.astype(np.int64)) // p.d)
    s = np.ldexp(xp, (p.d * k).astype(np.int32))
    low = s <= 1.0 / p.N
    if low.any():
        k = np.where(low, k + 1, k)
        s = np.ldexp(xp, (p.d * k).astype(np.int32))
    high = (s > 1.0) & (k > 0)
    if high.any():
        k = np.where(high, k - 1, k)
        s = np.ldexp(xp, (p.d * k).astype(np.int32))
    out[pos] = np.power(p.eta, k) * (p.Q - 1 + s)
    np.minimum(out, p.Q, out=out)
    return out


def _M_vec(p: Params, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lower = y <= 1 + (p.Q - 1) * x + BOUNDARY_TOL
    out = np.empty_like(x)
    out[lower] = x[lower] + y[lower] - 1
    up = ~lower
    if up.any():
        u = np.minimum(x[up] * (p.Q - 1) / (y[up] - 1), 1.0)
        out[up] = (y[up] - 1) / (p.Q - 1) * _f_vec(p, u)
    return out


def _B_vec(p: Params, x: np.ndarray, y: np.ndarray, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    yy = np.clip(np.asarray(y, dtype=float) / m, 1.0, p.Q)
    return m * _M_vec(p, np.asarray(x, dtype=float), yy)


def _wedge_vec(p: Params, k: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if k == 0:
        return x + (y - 1)
    ca = wedge_coeffs(p, k - 1)
    cb = wedge_coeffs(p, k)
    inside = y <= 1 + (p.Q - 1) * p.N**k * x + BOUNDARY_TOL
    return np.where(inside, ca.a * x + ca.b * (y - 1), cb.a * x + cb.b * (y - 1))
