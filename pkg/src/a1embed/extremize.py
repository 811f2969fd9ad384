"""Constructive near-extremizers for the Bellman bound.

Three building blocks, composed:

  * boundary_weight(y): the depth-1 weight with one heavy child,
    realizing M(1, y) = y with the full cube as the set.
  * apply_T / apply_S: push a weight one level down, scaling it by
    N*eta inside the first child and padding the rest with 1.  Each
    application multiplies the captured mass by exactly eta and the
    set measure by exactly 1/N; k-fold iteration from y = Q gives the
    corner pairs sitting on the nodes x = N^-k of the boundary curve.
  * concatenate(lambda, pair0, pair1): mix two pairs with weights
    (1-lambda, lambda) by writing lambda in binary and, at stage j,
    copying pair_{b_j} into the first half of the children while the
    second half carries the construction on.  Truncated after `depth`
    digits; the leftover region (measure 2^-depth) gets weight 1 and
    an empty set, so every statistic sits within O(2^-depth) of the
    ideal mix and the captured mass only ever falls short.

build_extremizer dispatches on the region of (x, y): below the line
y = 1 + (Q-1)x it mixes (1, empty) with a boundary weight; above it,
it mixes (1, empty) with a point on the y = Q edge, itself a mix of
the two corner pairs bracketing u = x(Q-1)/(y-1).

With exact=True all leaves are Fractions and eta enters as an exact
rational, so corner statistics come out exactly Q*eta^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bellman import _interval_index, eval_B
from .dyadic import (
    DyadicSet,
    DyadicWeight,
    WeightStats,
    make_set_node,
    scale_weight,
    stats,
)
from .params import (
    BOUNDARY_TOL,
    DegenerateParamsError,
    DomainError,
    DomainPoint,
    Params,
    in_omega,
)

# Caps on the binary-digit truncation parameter, not on tree depth:
# nested constructions stack to roughly 2*depth + k levels of tree.
DIGITS_MAX = 32
CONCAT_DIGITS_MAX = 40
CORNER_K_MAX = 32


@dataclass(frozen=True)
class ExtremalPair:
    w: DyadicWeight
    E: DyadicSet
    target: DomainPoint
    achieved: WeightStats
    truncation_depth: int


def _finalize(p: Params, w: DyadicWeight, E: DyadicSet,
              target: DomainPoint, depth: int) -> ExtremalPair:
    st = stats(w, E)
    assert float(st.char) <= p.Q + 1e-9, f"characteristic {float(st.char)} > Q"
    assert st.m == 1, f"minimum {st.m!r} not normalized to 1"
    x, y = float(st.x), float(st.y)
    assert float(st.value) <= eval_B(p, x, min(y, p.Q), 1.0) + 1e-9
    return ExtremalPair(w, E, target, st, depth)


def _exact_scale(p: Params):
    # N*eta = N - (N-1)/Q as an exact rational
    return p.N - Fraction(p.N - 1) / Fraction(p.Q)


def boundary_weight(p: Params, y, exact: bool = False) -> ExtremalPair:
    """Depth-1 pair realizing M(1, y) = y on the right edge of the domain."""
    if not 1 - BOUNDARY_TOL <= y <= p.Q + BOUNDARY_TOL:
        raise DomainError(f"boundary average y = {y!r} outside [1, Q]")
    y = min(max(y, 1), p.Q)
    if exact:
        heavy = 1 + p.N * (Fraction(y) - 1)
        small = Fraction(1)
    else:
        heavy = 1.0 + p.N * (float(y) - 1.0)
        small = 1.0
    tree = (small,) * (p.N - 1) + (heavy,)
    return _finalize(p, DyadicWeight(p.N, tree), DyadicSet(p.N, True),
                     DomainPoint(1.0, float(y), 1.0), 0)


def apply_S(E: DyadicSet) -> DyadicSet:
    """Shrink the set into child 1; measure divides by exactly N."""
    if E.tree is False:
        return E
    return DyadicSet(E.n, make_set_node((E.tree,) + (False,) * (E.n - 1)))


def apply_T(p: Params, pair: ExtremalPair, exact: bool = False) -> ExtremalPair:
    """Push a y = Q pair one level down; captured mass scales by exactly eta."""
    if abs(float(pair.achieved.y) - p.Q) > 1e-9:
        raise DomainError("apply_T needs a pair with average exactly Q")
    if pair.achieved.m != 1:
        raise DomainError("apply_T needs minimum normalized to 1")
    if float(pair.achieved.char) > p.Q + 1e-9:
        raise DomainError("apply_T input exceeds the characteristic bound")
    factor = _exact_scale(p) if exact else p.N - (p.N - 1) / p.Q
    scaled = scale_weight(pair.w, factor)
    pad = Fraction(1) if exact else 1.0
    wtree = (scaled.tree,) + (pad,) * (p.N - 1)
    return _finalize(p, DyadicWeight(p.N, wtree), apply_S(pair.E),
                     DomainPoint(float(pair.target.x) / p.N, p.Q, 1.0),
                     pair.truncation_depth)


def build_corner(p: Params, k: int, exact: bool = False) -> ExtremalPair:
    """k-fold apply_T of boundary_weight(Q): stats (N^-k, Q, 1, Q, Q*eta^k)."""
    if p.degenerate:
        raise DegenerateParamsError("corner pairs need Q > 1")
    if not 0 <= k <= CORNER_K_MAX:
        raise DomainError(f"corner index k = {k} outside [0, {CORNER_K_MAX}]")
    pair = boundary_weight(p, p.Q, exact=exact)
    for _ in range(k):
        pair = apply_T(p, pair, exact=exact)
    return pair


def _binary_digits(lam: Fraction, depth: int) -> tuple[list[int], Fraction]:
    """First `depth` binary digits of lam and their truncated value."""
    bits = []
    r = lam
    for _ in range(depth):
        r *= 2
        b = 1 if r >= 1 else 0
        bits.append(b)
        r -= b
    return bits, lam - r / 2**depth


def concatenate(p: Params, lam, pair0: ExtremalPair, pair1: ExtremalPair,
                depth: int, exact: bool = False) -> ExtremalPair:
    """Mix pair0 and pair1 with weights (1-lam, lam), truncated binary digits.

    Stage j copies pair_{b_j} into the first N/2 children and continues
    in the (shared) second half; after `depth` stages the residual cell
    gets (1, empty).  Statistics land within max(1, Q)*2^-depth of the
    ideal mix, and the captured mass never overshoots it.
    """
    lamf = Fraction(lam)
    if not 0 <= lamf <= 1:
        raise DomainError(f"mixing weight {lam!r} outside [0, 1]")
    if not 1 <= depth <= CONCAT_DIGITS_MAX:
        raise DomainError(f"digit count {depth} outside [1, {CONCAT_DIGITS_MAX}]")
    for pair in (pair0, pair1):
        if pair.w.n != p.N:
            raise DomainError("pair fan-out does not match params")
        if pair.achieved.m != 1 or float(pair.achieved.char) > p.Q + 1e-9:
            raise DomainError("concatenate inputs must have m = 1 and char <= Q")

    x0, y0 = float(pair0.achieved.x), float(pair0.achieved.y)
    x1, y1 = float(pair1.achieved.x), float(pair1.achieved.y)
    lf = float(lamf)
    target = DomainPoint((1 - lf) * x0 + lf * x1, (1 - lf) * y0 + lf * y1, 1.0)

    if lamf == 1:
        # terminating expansion would be 0.111...; take the pair itself
        return ExtremalPair(pair1.w, pair1.E, target, pair1.achieved, depth)

    bits, _ = _binary_digits(lamf, depth)
    half = p.N // 2
    wcur = Fraction(1) if exact else 1.0
    scur = False
    for b in reversed(bits):
        src = pair1 if b else pair0
        wcur = (src.w.tree,) * half + (wcur,) * half
        scur = make_set_node((src.E.tree,) * half + (scur,) * half)
    return _finalize(p, DyadicWeight(p.N, wcur), DyadicSet(p.N, scur),
                     target, depth)


def _inner_digits(p: Params, depth: int) -> int:
    # extra digits keep the nested truncation drift within max(1, Q)*2^-depth
    spread = max(p.Q - 1, 1 / (p.Q - 1))
    return min(depth + max(1, math.ceil(math.log2(spread))), CONCAT_DIGITS_MAX)


def _pair_on_q_edge(p: Params, u: float, depth: int, exact: bool) -> ExtremalPair:
    """Pair with average Q and set measure ~u, mass f(u): mix of corners."""
    if u >= 1 - BOUNDARY_TOL:
        return boundary_weight(p, p.Q, exact=exact)
    k, s = _interval_index(p, u)
    if s == 1.0:                      # u is exactly a node N^-k
        return build_corner(p, k, exact=exact)
    if k + 1 > CORNER_K_MAX:
        raise DomainError(f"set fraction {u!r} needs corner index beyond cap")
    mu = (s - 1 / p.N) / (1 - 1 / p.N)
    return concatenate(p, mu, build_corner(p, k + 1, exact=exact),
                       build_corner(p, k, exact=exact), depth, exact=exact)


def build_extremizer(p: Params, x: float, y: float, depth: int,
                     exact: bool = False) -> ExtremalPair:
    """Near-extremal pair for any (x, y) in the domain.

    The captured mass sits within 2Q*2^-depth below M(x, y), and the
    achieved (set measure, average) within max(1, Q)*2^-depth of the
    target.  Deepening `depth` only ever improves the mass.
    """
    if p.degenerate:
        raise DegenerateParamsError("extremizers need Q > 1")
    if not in_omega(p, x, y):
        raise DomainError(f"({x!r}, {y!r}) outside the domain for Q = {p.Q}")
    if not 1 <= depth <= DIGITS_MAX:
        raise DomainError(f"depth {depth} outside [1, {DIGITS_MAX}]")
    x = min(max(x, 0.0), 1.0)
    y = min(max(y, 1.0), p.Q)

    if x == 0:
        # all the average, none of the set: M(0, y) = 0
        bw = boundary_weight(p, y, exact=exact)
        return ExtremalPair(bw.w, DyadicSet(p.N, False),
                            DomainPoint(0.0, y, 1.0),
                            stats(bw.w, DyadicSet(p.N, False)), depth)

    one = Fraction(1) if exact else 1.0
    trivial = ExtremalPair(
        DyadicWeight(p.N, one), DyadicSet(p.N, False),
        DomainPoint(0.0, 1.0, 1.0),
        WeightStats(Fraction(0), one, one, one, 0 * one), 0)

    if y <= 1 + (p.Q - 1) * x + BOUNDARY_TOL:
        yprime = min(1 + (y - 1) / x, p.Q)
        return_pair = concatenate(p, x, trivial,
                                  boundary_weight(p, yprime, exact=exact),
                                  depth, exact=exact)
        return ExtremalPair(return_pair.w, return_pair.E,
                            DomainPoint(x, y, 1.0), return_pair.achieved, depth)

    lam = (y - 1) / (p.Q - 1)
    u = min(x * (p.Q - 1) / (y - 1), 1.0)
    edge = _pair_on_q_edge(p, u, _inner_digits(p, depth), exact)
    out = concatenate(p, lam, trivial, edge, depth, exact=exact)
    return ExtremalPair(out.w, out.E, DomainPoint(x, y, 1.0),
                        out.achieved, depth)
