"""Independent checks on the closed forms.

Three kinds of evidence, none of which trusts the formulas being tested:

  * seeded samplers for the splitting inequalities (the M-form, the
    B-form over all child strata, and the per-wedge form), reporting
    the worst slack and the witness attaining it;
  * property suites: concavity, rescaling monotonicity, the smooth
    majorant, branch continuity, homogeneity, wedge domination, and
    the weak-type bound on explicit weights;
  * a brute-force oracle that enumerates every leaf assignment of a
    small dyadic tree over a finite value grid and tabulates the best
    captured mass per (set measure, average) bucket, in exact rational
    arithmetic.

Randomness is counter-based (Philox keyed by (seed, stream)), with a
fixed chunk schedule, so reports are bit-identical no matter how many
worker threads BELLMAN_THREADS allows.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

import numpy as np

from .bellman import _B_vec, _M_vec, _f_vec, _wedge_vec, eval_B
from .dyadic import (
    DyadicSet,
    DyadicWeight,
    a1_characteristic,
    average,
    ess_inf,
    make_set_node,
    value_distribution,
)
from .params import DomainError, Params, osekowski_p_max

CHUNK = 1 << 16
WAVE = 8            # chunks per scheduling wave; fixed so the chunk set
                    # never depends on the worker count
MAX_WAVES = 4096


@dataclass(frozen=True)
class CheckReport:
    suite: str
    samples: int
    worst_slack: float
    worst_witness: Any
    passed: bool
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "samples": self.samples,
            "worst_slack": self.worst_slack,
            "worst_witness": self.worst_witness,
            "passed": self.passed,
            "notes": self.notes,
        }


def _report(suite: str, samples: int, slack: float, witness, tol: float,
            notes: str = "") -> CheckReport:
    return CheckReport(suite, samples, slack, witness, slack >= -tol, notes)


def _threads() -> int:
    try:
        n = int(os.environ.get("BELLMAN_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _map_streams(fn: Callable[[int], Any], streams: list[int]) -> list:
    n = _threads()
    if n > 1 and len(streams) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            return list(pool.map(fn, streams))
    return [fn(s) for s in streams]


def _gen(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, stream]))


def _argmin_merge(best: tuple[float, Any], slacks: np.ndarray,
                  witness_cols: list[np.ndarray]) -> tuple[float, Any]:
    """Fold a chunk into (worst slack, witness); first occurrence wins ties."""
    if slacks.size == 0:
        return best
    i = int(np.argmin(slacks))
    s = float(slacks[i])
    if s < best[0]:
        return s, tuple(float(c[i]) for c in witness_cols)
    return best


# ---------------------------------------------------------------------------
# splitting-inequality samplers

def check_main_inequality_M(p: Params, n_samples: int = 100_000,
                            seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Sample the N-child splitting inequality for M on its full domain.

    Draws (x, y), (xt, yt) uniformly from the domain square and keeps
    samples satisfying xt <= x (which forces xhat = Nx - (N-1)xt >= 0),
    xhat <= 1, and yhat = Ny - (N-1)yt >= Q.  Slack is
    M(x,y) - [(N-1)/N M(xt,yt) + yhat/(NQ) M(xhat, Q)].
    """
    if p.degenerate:
        raise DomainError("main inequality sampler needs Q > 1")
    N, Q = p.N, p.Q

    def one_chunk(stream: int):
        g = _gen(seed, stream)
        x = g.uniform(0.0, 1.0, CHUNK)
        xt = g.uniform(0.0, 1.0, CHUNK)
        y = g.uniform(1.0, Q, CHUNK)
        yt = g.uniform(1.0, Q, CHUNK)
        xhat = N * x - (N - 1) * xt
        yhat = N * y - (N - 1) * yt
        ok_order = xt <= x
        ok_hat = xhat >= 0
        keep = ok_order & (xhat <= 1.0) & (yhat >= Q)
        cols = [x[keep], y[keep], xt[keep], yt[keep], xhat[keep], yhat[keep]]
        lhs = _M_vec(p, cols[0], cols[1])
        rhs = ((N - 1) / N * _M_vec(p, cols[2], cols[3])
               + cols[5] / (N * Q) * _M_vec(p, cols[4], np.full_like(cols[4], Q)))
        return (int(keep.sum()), lhs - rhs, cols,
                int(ok_order.sum()), int(ok_hat.sum()), CHUNK)

    total = raw = n_order = n_hat = 0
    best: tuple[float, Any] = (math.inf, None)
    wave = 0
    while total < n_samples and wave < MAX_WAVES:
        streams = list(range(wave * WAVE, (wave + 1) * WAVE))
        for cnt, slacks, cols, c_order, c_hat, c_raw in _map_streams(one_chunk, streams):
            total += cnt
            n_order += c_order
            n_hat += c_hat
            raw += c_raw
            best = _argmin_merge(best, slacks, cols)
        wave += 1
    notes = (f"constraint xt<=x implies xhat>=0 and is the one that binds: "
             f"raw pass rates xt<=x {n_order / raw:.4f}, xhat>=0 {n_hat / raw:.4f}")
    if total == 0:
        return CheckReport("main-inequality-M", 0, math.inf, None, True,
                           "no admissible samples drawn; " + notes)
    return _report("main-inequality-M", total, best[0], best[1], tol, notes)


def check_main_inequality_B(p: Params, n_samples: int = 100_000,
                            seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Sample the averaged splitting inequality for B over child tuples.

    Stratum n_low in 1..N fixes how many children sit in the m = 1 slab
    (y in [1, Q]); the rest take y >= Q with m = y/Q, the total average
    kept <= Q so the parent point stays in the domain.  Slack is
    B(mean x, mean y, 1) - mean_i B(x_i, y_i, m_i).
    """
    if p.degenerate:
        raise DomainError("main inequality sampler needs Q > 1")
    N, Q = p.N, p.Q
    per = -(-n_samples // N)

    def one_stratum(n_low: int):
        rows_left = per
        chunk_id = 0
        best: tuple[float, Any] = (math.inf, None)
        done = 0
        while rows_left > 0:
            c = min(rows_left, CHUNK)
            g = _gen(seed, (n_low << 32) | chunk_id)
            n_hi = N - n_low
            xs = g.uniform(0.0, 1.0, (c, N))
            y_lo = g.uniform(1.0, Q, (c, n_low))
            if n_hi:
                slack_budget = N * Q - y_lo.sum(axis=1) - n_hi * Q
                y_hi = Q + slack_budget[:, None] * g.uniform(0.0, 1.0, (c, n_hi)) / n_hi
                ys = np.concatenate([y_lo, y_hi], axis=1)
                ms = np.concatenate([np.ones((c, n_low)), y_hi / Q], axis=1)
            else:
                ys = y_lo
                ms = np.ones((c, N))
            xbar = xs.mean(axis=1)
            ybar = ys.mean(axis=1)
            child = _B_vec(p, xs.ravel(), ys.ravel(), ms.ravel()).reshape(c, N)
            slacks = _B_vec(p, xbar, ybar, np.ones(c)) - child.mean(axis=1)
            i = int(np.argmin(slacks))
            s = float(slacks[i])
            if s < best[0]:
                best = (s, {"stratum": n_low,
                            "x": [float(v) for v in xs[i]],
                            "y": [float(v) for v in ys[i]],
                            "m": [float(v) for v in ms[i]]})
            done += c
            rows_left -= c
            chunk_id += 1
        return done, best

    results = _map_streams(one_stratum, list(range(1, N + 1)))
    total = sum(r[0] for r in results)
    best = min((r[1] for r in results), key=lambda b: b[0])
    return _report("main-inequality-B", total, best[0], best[1], tol,
                   f"strata n_low=1..{N}")


def check_wedge_inequality(p: Params, k_max: int = 6, n_samples: int = 100_000,
                           seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Sample the per-wedge splitting inequality for k = 0..k_max.

    Admissible splits additionally satisfy xhat <= N^-k (the wedge only
    supports the construction when the continuing child keeps its set
    fraction below the next node); a few samples per chunk are pinned
    to the sharp edges xhat = N^-k and yhat = Q.
    """
    if p.degenerate:
        raise DomainError("wedge sampler needs Q > 1")
    N, Q = p.N, p.Q
    per = -(-n_samples // (k_max + 1))

    def one_wedge(k: int):
        nodek = N ** (-k)
        x_lo = N ** (-k - 1.0)
        x_hi = (N - 1 + nodek) / N
        y_lo = (Q + N - 1) / N
        rows_left = per
        chunk_id = 0
        best: tuple[float, Any] = (math.inf, None)
        done = 0
        while rows_left > 0:
            c = min(rows_left, CHUNK)
            g = _gen(seed, (k << 32) | chunk_id)
            x = x_lo + (x_hi - x_lo) * g.uniform(0.0, 1.0, c)
            y_cap = np.minimum(Q, 1 + (Q - 1) * N**k * x)
            y = y_lo + (y_cap - y_lo) * g.uniform(0.0, 1.0, c)
            xh_lo = np.maximum(0.0, N * x - (N - 1))
            xhat = xh_lo + (nodek - xh_lo) * g.uniform(0.0, 1.0, c)
            yh_lo = np.maximum(Q, N * y - (N - 1) * Q)
            yh_hi = N * y - (N - 1)
            yhat = yh_lo + (yh_hi - yh_lo) * g.uniform(0.0, 1.0, c)
            pin = min(64, c // 2)
            xhat[:pin] = nodek          # sharp edge: slack 0 expected
            yhat[pin:2 * pin] = Q
            xt = (N * x - xhat) / (N - 1)
            yt = (N * y - yhat) / (N - 1)
            lhs = _wedge_vec(p, k, x, y)
            rhs = ((N - 1) / N * _wedge_vec(p, k, xt, yt)
                   + yhat / (N * Q) * _wedge_vec(p, k, xhat, np.full(c, Q)))
            slacks = lhs - rhs
            i = int(np.argmin(slacks))
            s = float(slacks[i])
            if s < best[0]:
                best = (s, {"k": k, "x": float(x[i]), "y": float(y[i]),
                            "xt": float(xt[i]), "yt": float(yt[i]),
                            "xhat": float(xhat[i]), "yhat": float(yhat[i])})
            done += c
            rows_left -= c
            chunk_id += 1
        return done, best

    results = _map_streams(one_wedge, list(range(0, k_max + 1)))
    total = sum(r[0] for r in results)
    best = min((r[1] for r in results), key=lambda b: b[0])
    return _report("wedge", total, best[0], best[1], tol,
                   f"k=0..{k_max}, xhat capped at N^-k")


# ---------------------------------------------------------------------------
# property suites

def check_concavity(p: Params, n_samples: int = 10_000, seed: int = 0,
                    tol: float = 1e-9) -> CheckReport:
    if p.degenerate:
        raise DomainError("concavity check needs Q > 1")
    n_chunks = -(-n_samples // CHUNK)

    def one_chunk(stream: int):
        g = _gen(seed, stream)
        c = min(CHUNK, n_samples - stream * CHUNK)
        x1 = g.uniform(0.0, 1.0, c)
        x2 = g.uniform(0.0, 1.0, c)
        y1 = g.uniform(1.0, p.Q, c)
        y2 = g.uniform(1.0, p.Q, c)
        lam = g.uniform(0.0, 1.0, c)
        xm = lam * x1 + (1 - lam) * x2
        ym = lam * y1 + (1 - lam) * y2
        slacks = (_M_vec(p, xm, ym)
                  - lam * _M_vec(p, x1, y1) - (1 - lam) * _M_vec(p, x2, y2))
        return slacks, [x1, y1, x2, y2, lam]

    best: tuple[float, Any] = (math.inf, None)
    for slacks, cols in _map_streams(one_chunk, list(range(n_chunks))):
        best = _argmin_merge(best, slacks, cols)
    return _report("concavity", n_samples, best[0], best[1], tol)


def check_t_monotonicity(p: Params, n_samples: int = 10_000, seed: int = 0,
                         tol: float = 1e-9) -> CheckReport:
    if p.degenerate:
        raise DomainError("rescaling check needs Q > 1")
    n_chunks = -(-n_samples // CHUNK)

    def one_chunk(stream: int):
        g = _gen(seed, stream)
        c = min(CHUNK, n_samples - stream * CHUNK)
        x = g.uniform(0.0, 1.0, c)
        y = g.uniform(1.0, p.Q, c)
        t2 = 1 + (y - 1) * g.uniform(0.0, 1.0, c)      # keeps y/t2 >= 1
        t1 = 1 + (t2 - 1) * g.uniform(0.0, 1.0, c)
        slacks = t1 * _M_vec(p, x, y / t1) - t2 * _M_vec(p, x, y / t2)
        return slacks, [x, y, t1, t2]

    best: tuple[float, Any] = (math.inf, None)
    for slacks, cols in _map_streams(one_chunk, list(range(n_chunks))):
        best = _argmin_merge(best, slacks, cols)
    return _report("t-monotonicity", n_samples, best[0], best[1], tol)


def check_smooth_bound(p: Params, n_samples: int = 100_000, seed: int = 0,
                       tol: float = 1e-9) -> CheckReport:
    """f <= f_smooth everywhere; exact agreement at the nodes N^-k."""
    if p.degenerate:
        raise DomainError("smooth bound needs Q > 1")
    half = n_samples // 2
    xs = np.concatenate([
        np.linspace(0.0, 1.0, half),
        np.geomspace(1e-12, 1.0, n_samples - half),
    ])
    slacks = p.Q * np.power(xs, p.epsilon) - _f_vec(p, xs)
    i = int(np.argmin(slacks))
    worst, witness = float(slacks[i]), float(xs[i])

    ks = np.arange(0, 41)
    nodes = np.power(float(p.N), -ks.astype(float))
    fn = _f_vec(p, nodes)
    fs = p.Q * np.power(nodes, p.epsilon)
    rel = np.max(np.abs(fn - fs) / fs)
    notes = f"node agreement max rel err {rel:.3e} (k<=40)"
    if rel > 1e-12:
        return CheckReport("smooth-bound", n_samples + 41, -math.inf,
                           witness, False, notes + "; node identity violated")
    return _report("smooth-bound", n_samples + 41, worst, witness, tol, notes)


def check_branch_continuity(p: Params, n_samples: int = 1000, seed: int = 0,
                            tol: float = 1e-9) -> CheckReport:
    """Both closed-form branches agree on the line y = 1 + (Q-1)x."""
    if p.degenerate:
        raise DomainError("branch continuity needs Q > 1")
    x = np.linspace(1e-9, 1.0, n_samples)
    y = 1 + (p.Q - 1) * x
    lower = x + y - 1
    u = np.minimum(x * (p.Q - 1) / (y - 1), 1.0)
    upper = (y - 1) / (p.Q - 1) * _f_vec(p, u)
    diff = np.abs(lower - upper)
    i = int(np.argmax(diff))
    return _report("branch-continuity", n_samples, -float(diff[i]),
                   float(x[i]), tol)


def check_homogeneity(p: Params, n_samples: int = 1000, seed: int = 0,
                      tol: float = 1e-12) -> CheckReport:
    """B(x, ty, tm) = t B(x, y, m), relative error, default tol 1e-12."""
    g = _gen(seed, 0)
    x = g.uniform(0.0, 1.0, n_samples)
    m = g.uniform(0.5, 2.0, n_samples)
    y = m * (1 + (p.Q - 1) * g.uniform(0.0, 1.0, n_samples))
    t = g.uniform(0.5, 2.0, n_samples)
    b1 = _B_vec(p, x, t * y, t * m)
    b2 = t * _B_vec(p, x, y, m)
    rel = np.abs(b1 - b2) / np.maximum(np.abs(b2), 1e-300)
    i = int(np.argmax(rel))
    return _report("homogeneity", n_samples, -float(rel[i]),
                   (float(x[i]), float(y[i]), float(m[i]), float(t[i])), tol)


def check_wedge_domination(p: Params, k_max: int = 10, n_samples: int = 10_000,
                           seed: int = 0, tol: float = 1e-9) -> CheckReport:
    """Every wedge M_k lies above M on the whole domain."""
    if p.degenerate:
        raise DomainError("wedge domination needs Q > 1")
    side = max(2, int(math.isqrt(n_samples)))
    x = np.linspace(0.0, 1.0, side)
    y = np.linspace(1.0, p.Q, side)
    X, Y = (a.ravel() for a in np.meshgrid(x, y))
    m = _M_vec(p, X, Y)
    best: tuple[float, Any] = (math.inf, None)
    for k in range(1, k_max + 1):
        slacks = _wedge_vec(p, k, X, Y) - m
        i = int(np.argmin(slacks))
        s = float(slacks[i])
        if s < best[0]:
            best = (s, {"k": k, "x": float(X[i]), "y": float(Y[i])})
    return _report("wedge-domination", side * side * k_max, best[0], best[1],
                   tol, f"k=1..{k_max} on a {side}x{side} grid")


def check_weak_type(w: DyadicWeight, p_exp: float,
                    tol: float = 1e-9) -> CheckReport:
    """sup over levels of lambda |{w > lambda}|^{1/p} against the integral.

    Needs min leaf exactly 1; p_exp beyond the endpoint exponent for the
    weight's own characteristic makes the bound inapplicable, which is
    reported rather than failed.
    """
    if ess_inf(w) != 1:
        raise DomainError("weak-type check needs a weight with min leaf 1")
    char = float(a1_characteristic(w))
    n = w.n
    if char > 1:
        p_star = math.log(n) / math.log(n - (n - 1) / char)
    else:
        p_star = math.inf
    if p_exp > p_star * (1 + 1e-12):
        return CheckReport("weak-type", 0, math.inf, None, True,
                           f"inapplicable: p={p_exp:.6g} beyond endpoint "
                           f"{p_star:.6g} for characteristic {char:.6g}")
    dist = value_distribution(w)
    values = sorted(dist, reverse=True)
    integral = float(average(w))
    sup = 0.0
    witness = None
    tail = Fraction(0)
    for v in values:
        tail += dist[v]
        lvl = float(v) * float(tail) ** (1.0 / p_exp)
        if lvl > sup:
            sup = lvl
            witness = (float(v), float(tail))
    return _report("weak-type", len(values), integral - sup, witness, tol,
                   f"p={p_exp:.6g}, endpoint {p_star:.6g}")


# ---------------------------------------------------------------------------
# brute-force oracle on small trees

@dataclass(frozen=True)
class OracleBucket:
    value: Fraction
    leaves: tuple
    j: int


@dataclass
class OracleTable:
    depth: int
    n: int
    grid: tuple
    buckets: dict = field(default_factory=dict)

    def witness_pair(self, key) -> tuple[DyadicWeight, DyadicSet]:
        """Rebuild the (weight, set) pair attaining a bucket."""
        b = self.buckets[key]
        order = sorted(range(len(b.leaves)), key=lambda i: (-b.leaves[i], i))
        chosen = set(order[:b.j])
        wtree = _nest(tuple(b.leaves), self.n)
        etree = _nest(tuple(i in chosen for i in range(len(b.leaves))), self.n,
                      is_set=True)
        return DyadicWeight(self.n, wtree), DyadicSet(self.n, etree)

    def to_json(self) -> dict:
        rows = []
        for (x, y) in sorted(self.buckets):
            b = self.buckets[(x, y)]
            rows.append({"x": float(x), "y": float(y), "m": 1.0,
                         "value": float(b.value),
                         "leaves": [float(v) for v in b.leaves], "j": b.j})
        return {"depth": self.depth, "n": self.n,
                "grid": [float(v) for v in self.grid], "buckets": rows}

    def to_csv(self) -> str:
        lines = ["x,y,m,value,witness_id"]
        for wid, (x, y) in enumerate(sorted(self.buckets)):
            b = self.buckets[(x, y)]
            lines.append(f"{float(x):.17g},{float(y):.17g},1,"
                         f"{float(b.value):.17g},{wid}")
        return "\n".join(lines) + "\n"


def _nest(flat: tuple, n: int, is_set: bool = False):
    """Fold a flat leaf tuple into a uniform n-ary tree."""
    level: tuple = flat
    while len(level) > 1:
        grouped = tuple(level[i:i + n] for i in range(0, len(level), n))
        if is_set:
            level = tuple(make_set_node(g) for g in grouped)
        else:
            level = grouped
    return level[0]


def default_value_grid(p: Params, depth: int, grid_size: int = 6) -> list[Fraction]:
    """{1}, an even ladder to 1 + N(Q-1), and the corner-construction values."""
    Qf = Fraction(p.Q)
    vals = {Fraction(1)}
    if Qf > 1:
        for j in range(1, grid_size):
            vals.add(1 + Fraction(j) * (Qf - 1) * p.N / (grid_size - 1))
        step = p.N - Fraction(p.N - 1) / Qf      # N*eta, exact
        heavy = 1 + p.N * (Qf - 1)
        for a in range(depth):
            vals.add(step**a)
            vals.add(step**a * heavy)
    return sorted(vals)


def brute_force_oracle(p: Params, depth: int, value_grid=None,
                       x_step=None, max_assignments: int = 2_000_000) -> OracleTable:
    """Exhaustive supremum over leaf assignments of a depth-`depth` tree.

    Every leaf takes a value from the grid; assignments whose minimum is
    not 1 or whose characteristic exceeds Q are discarded; for each kept
    weight the best set of measure j/N^depth is the j heaviest leaves.
    Buckets key on (set measure, average rounded UP to a step of
    0.05(Q-1)); rounding up keeps bucket values below the closed form
    evaluated at the bucket label.  Exact rational arithmetic throughout.

    Feasible envelope: |grid|^(N^depth) <= max_assignments; think d=1,
    depth <= 2, |grid| <= 12, or depth 3 with a handful of values.
    """
    if value_grid is None:
        value_grid = default_value_grid(p, depth)
    grid = sorted({Fraction(v) for v in value_grid})
    if Fraction(1) not in grid or any(v < 1 for v in grid):
        raise ValueError("value grid must contain 1 and only values >= 1")
    leaves = p.N**depth
    count = len(grid)**leaves
    if count > max_assignments:
        raise ValueError(
            f"{len(grid)}^{leaves} = {count} assignments exceed the cap "
            f"{max_assignments}; shrink depth or the grid")
    Qf = Fraction(p.Q)
    h = (Qf - 1) / 20 if Qf > 1 else None
    L = Fraction(leaves)
    if x_step is None:
        step_int = 1
    else:
        s = Fraction(x_step) * leaves
        if s.denominator != 1 or s <= 0:
            raise ValueError(f"x_step {x_step!r} must be a positive multiple "
                             f"of N^-depth")
        step_int = int(s)

    table = OracleTable(depth=depth, n=p.N, grid=tuple(grid))
    one = Fraction(1)
    for assignment in itertools.product(grid, repeat=leaves):
        if min(assignment) != one:
            continue
        w = DyadicWeight(p.N, _nest(assignment, p.N))
        if a1_characteristic(w) > Qf:
            continue
        y = sum(assignment) / L
        ylabel = one if h is None or y == 1 else 1 + math.ceil((y - 1) / h) * h
        order = sorted(range(leaves), key=lambda i: (-assignment[i], i))
        acc = Fraction(0)
        for j0, idx in enumerate(order):
            acc += assignment[idx]
            j = j0 + 1
            if j % step_int:
                continue
            key = (Fraction(j, leaves), ylabel)
            val = acc / L
            cur = table.buckets.get(key)
            if cur is None or val > cur.value:
                table.buckets[key] = OracleBucket(val, assignment, j)
    return table


def oracle_vs_closed_form(table: OracleTable, p: Params,
                          tol: float = 1e-9) -> CheckReport:
    """Two-sided bridge: every bucket below the closed form, and corner
    buckets reaching Q eta^k whenever the grid can express them."""
    worst = math.inf
    witness = None
    for (x, y), b in sorted(table.buckets.items()):
        s = eval_B(p, float(x), float(y), 1.0) - float(b.value)
        if s < worst:
            worst, witness = s, {"direction": "upper", "x": float(x),
                                 "y": float(y), "value": float(b.value)}
    corners = 0
    if p.Q > 1:
        Qf = Fraction(p.Q)
        step = p.N - Fraction(p.N - 1) / Qf
        heavy = 1 + p.N * (Qf - 1)
        eta = 1 - Fraction(p.N - 1) / (p.N * Qf)
        gridset = set(table.grid)
        for k in range(0, table.depth + 1):
            if k == 0:
                needed = {Fraction(1), heavy}
            else:
                needed = {step**a for a in range(k)} | {step**(k - 1) * heavy}
            if not needed <= gridset:
                continue
            key = (Fraction(1, p.N**k), Qf)
            target = Qf * eta**k
            got = table.buckets.get(key)
            s = (float(got.value) - float(target)) if got else -math.inf
            corners += 1
            if s < worst:
                worst, witness = s, {"direction": "lower", "k": k,
                                     "expected": float(target),
                                     "got": float(got.value) if got else None}
    return _report("oracle-vs-closed-form", len(table.buckets), worst, witness,
                   tol, f"{len(table.buckets)} buckets, {corners} corner checks")


# ---------------------------------------------------------------------------
# suite registry for the CLI

def _weak_type_suite(p: Params, n_samples: Optional[int] = None, seed: int = 0,
                     tol: float = 1e-9) -> CheckReport:
    from .extremize import build_corner
    pexp = osekowski_p_max(p)
    worst = math.inf
    witness = None
    total = 0
    for k in range(0, 9):
        r = check_weak_type(build_corner(p, k, exact=True).w, pexp, tol)
        total += r.samples
        if r.worst_slack < worst:
            worst, witness = r.worst_slack, {"k": k, "at": r.worst_witness}
    return _report("weak-type", total, worst, witness, tol,
                   f"corner pairs k=0..8 at p={pexp:.6g}")


SUITES: dict[str, Callable[..., CheckReport]] = {
    "main-inequality-M": check_main_inequality_M,
    "main-inequality-B": check_main_inequality_B,
    "wedge": lambda p, n_samples=100_000, seed=0, tol=1e-9:
        check_wedge_inequality(p, 6, n_samples, seed, tol),
    "concavity": check_concavity,
    "t-monotonicity": check_t_monotonicity,
    "smooth-bound": check_smooth_bound,
    "branch-continuity": check_branch_continuity,
    "homogeneity": check_homogeneity,
    "wedge-domination": check_wedge_domination,
    "weak-type": _weak_type_suite,
}


def run_suite(p: Params, name: str, n_samples: Optional[int] = None,
              seed: int = 0, tol: Optional[float] = None) -> list[CheckReport]:
    names = list(SUITES) if name == "all" else [name]
    out = []
    for nm in names:
        if nm not in SUITES:
            raise ValueError(f"unknown suite {nm!r}; choose from "
                             f"{', '.join(SUITES)} or 'all'")
        kw: dict[str, Any] = {"seed": seed}
        if n_samples is not None:
            kw["n_samples"] = n_samples
        if tol is not None:
            kw["tol"] = tol
        out.append(SUITES[nm](p, **kw))
    return out
