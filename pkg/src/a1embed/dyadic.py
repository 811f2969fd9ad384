"""Finite dyadic trees: weights, measurable sets, and their statistics.

A weight is a positive function constant on the leaves of a finite N-ary
tree (N = 2^d children per node, a leaf at depth j standing for a whole
subcube of measure N^-j).  A set is a tree whose leaves are full/empty
markers.  Leaf values may be floats or fractions.Fraction; all statistics
are computed with the leaf type, so rational trees give exact answers.

Trees are plain immutable structures: a weight node is either a number or
a tuple of N nodes, a set node is either a bool (True = full) or a tuple.
Subtrees may be shared; every walk below memoizes on node identity, so
deeply shared constructions (see extremize) stay linear-time.

All quantities are normalized to the root cube having measure 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Any, Union

WeightNode = Union[float, Fraction, tuple]
SetNode = Union[bool, tuple]

DEFAULT_MAX_DEPTH = 32

FULL: SetNode = True
EMPTY: SetNode = False


@dataclass(frozen=True)
class DyadicWeight:
    n: int              # children per internal node, n = 2^d
    tree: WeightNode


@dataclass(frozen=True)
class DyadicSet:
    n: int
    tree: SetNode


@dataclass(frozen=True)
class WeightStats:
    """The bundle (set mass, average, minimum, A1 bound, mass on the set)."""

    x: Any
    y: Any
    m: Any
    char: Any
    value: Any


def _is_leaf(node) -> bool:
    return not isinstance(node, tuple)


def make_set_node(children) -> SetNode:
    """Internal set node, collapsed when all children agree (canonical form)."""
    children = tuple(children)
    if all(c is True for c in children):
        return True
    if all(c is False for c in children):
        return False
    return children


def validate_weight(w: DyadicWeight, max_depth: int = DEFAULT_MAX_DEPTH) -> None:
    """Check fan-out, leaf positivity and the depth cap; raise ValueError."""
    seen: dict[int, int] = {}

    def walk(node, depth):
        if depth > max_depth:
            raise ValueError(f"weight tree deeper than {max_depth}")
        if _is_leaf(node):
            if not node > 0:
                raise ValueError(f"leaf value {node!r} is not positive")
            return
        # shared nodes recur at several depths; the cap binds at the deepest
        prior = seen.get(id(node))
        if prior is not None and prior >= depth:
            return
        seen[id(node)] = depth
        if len(node) != w.n:
            raise ValueError(f"internal node has {len(node)} children, want {w.n}")
        for c in node:
            walk(c, depth + 1)

    walk(w.tree, 0)


def validate_set(E: DyadicSet, max_depth: int = DEFAULT_MAX_DEPTH) -> None:
    """Check fan-out, canonical form and the depth cap; raise ValueError."""
    seen: dict[int, int] = {}

    def walk(node, depth):
        if depth > max_depth:
            raise ValueError(f"set tree deeper than {max_depth}")
        if _is_leaf(node):
            if not isinstance(node, bool):
                raise ValueError(f"set leaf {node!r} is not a bool")
            return
        prior = seen.get(id(node))
        if prior is not None and prior >= depth:
            return
        seen[id(node)] = depth
        if len(node) != E.n:
            raise ValueError(f"internal node has {len(node)} children, want {E.n}")
        if all(c is True for c in node) or all(c is False for c in node):
            raise ValueError("internal set node with uniform children (not canonical)")
        for c in node:
            walk(c, depth + 1)

    walk(E.tree, 0)


def tree_depth(w) -> int:
    memo: dict[int, int] = {}

    def walk(node) -> int:
        if _is_leaf(node):
            return 0
        r = memo.get(id(node))
        if r is None:
            r = 1 + max(walk(c) for c in node)
            memo[id(node)] = r
        return r

    return walk(w.tree)


# ---------------------------------------------------------------------------
# statistics

def average(w: DyadicWeight):
    """Mean of the weight over the root cube."""
    memo: dict[int, Any] = {}

    def walk(node):
        if _is_leaf(node):
            return node
        r = memo.get(id(node))
        if r is None:
            r = sum(walk(c) for c in node) / w.n
            memo[id(node)] = r
        return r

    return walk(w.tree)


def ess_inf(w: DyadicWeight):
    memo: dict[int, Any] = {}

    def walk(node):
        if _is_leaf(node):
            return node
        r = memo.get(id(node))
        if r is None:
            r = min(walk(c) for c in node)
            memo[id(node)] = r
        return r

    return walk(w.tree)


def measure(E: DyadicSet) -> Fraction:
    """Measure of the set, exact (always a dyadic rational)."""
    memo: dict[int, Fraction] = {}

    def walk(node) -> Fraction:
        if node is True:
            return Fraction(1)
        if node is False:
            return Fraction(0)
        r = memo.get(id(node))
        if r is None:
            r = sum(walk(c) for c in node) / E.n
            memo[id(node)] = r
        return r

    return walk(E.tree)


def weight_on_set(w: DyadicWeight, E: DyadicSet):
    """Integral of the weight over the set (root cube normalized to mass 1)."""
    if w.n != E.n:
        raise ValueError("weight and set have different fan-out")
    memo: dict[tuple[int, int], Any] = {}

    def walk(wn, en):
        if en is False:
            return 0
        if en is True:
            return _avg(wn)
        if _is_leaf(wn):
            return wn * _measure(en)
        key = (id(wn), id(en))
        r = memo.get(key)
        if r is None:
            r = sum(walk(wc, ec) for wc, ec in zip(wn, en)) / w.n
            memo[key] = r
        return r

    avg_memo: dict[int, Any] = {}

    def _avg(node):
        if _is_leaf(node):
            return node
        r = avg_memo.get(id(node))
        if r is None:
            r = sum(_avg(c) for c in node) / w.n
            avg_memo[id(node)] = r
        return r

    meas_memo: dict[int, Fraction] = {}

    def _measure(node):
        if node is True:
            return Fraction(1)
        if node is False:
            return Fraction(0)
        r = meas_memo.get(id(node))
        if r is None:
            r = sum(_measure(c) for c in node) / E.n
            meas_memo[id(node)] = r
        return r

    return walk(w.tree, E.tree)


def maximal_function(w: DyadicWeight) -> DyadicWeight:
    """Dyadic maximal function, reported per leaf.

    Each leaf of the result carries the maximum of the subtree averages
    over all ancestors of that leaf, the root and the leaf itself included.
    One top-down pass; output nodes are shared wherever the running
    maximum agrees, so the result is no larger than the input.
    """
    avg_memo: dict[int, Any] = {}

    def avg(node):
        if _is_leaf(node):
            return node
        r = avg_memo.get(id(node))
        if r is None:
            r = sum(avg(c) for c in node) / w.n
            avg_memo[id(node)] = r
        return r

    out_memo: dict[tuple[int, Any], Any] = {}

    def walk(node, running):
        if _is_leaf(node):
            return max(running, node)
        key = (id(node), running)
        r = out_memo.get(key)
        if r is None:
            r = tuple(walk(c, max(running, avg(c))) for c in node)
            out_memo[key] = r
        return r

    return DyadicWeight(w.n, walk(w.tree, avg(w.tree)))


def a1_characteristic(w: DyadicWeight):
    """Largest ratio (maximal function) / (weight) over the leaves."""
    avg_memo: dict[int, Any] = {}

    def avg(node):
        if _is_leaf(node):
            return node
        r = avg_memo.get(id(node))
        if r is None:
            r = sum(avg(c) for c in node) / w.n
            avg_memo[id(node)] = r
        return r

    memo: dict[tuple[int, Any], Any] = {}

    def walk(node, running):
        if _is_leaf(node):
            return max(running, node) / node
        key = (id(node), running)
        r = memo.get(key)
        if r is None:
            r = max(walk(c, max(running, avg(c))) for c in node)
            memo[key] = r
        return r

    return walk(w.tree, avg(w.tree))


def value_distribution(w: DyadicWeight) -> dict:
    """Map leaf value -> total measure carried by leaves of that value."""
    memo: dict[int, dict] = {}

    def walk(node) -> dict:
        if _is_leaf(node):
            return {node: Fraction(1)}
        r = memo.get(id(node))
        if r is None:
            r = {}
            for c in node:
                for v, mu in walk(c).items():
                    r[v] = r.get(v, Fraction(0)) + mu / w.n
            memo[id(node)] = r
        return r

    return walk(w.tree)


def stats(w: DyadicWeight, E: DyadicSet) -> WeightStats:
    """Statistics bundle of a weight/set pair."""
    return WeightStats(
        x=measure(E),
        y=average(w),
        m=ess_inf(w),
        char=a1_characteristic(w),
        value=weight_on_set(w, E),
    )


def complement(E: DyadicSet) -> DyadicSet:
    memo: dict[int, SetNode] = {}

    def walk(node):
        if node is True:
            return False
        if node is False:
            return True
        r = memo.get(id(node))
        if r is None:
            r = tuple(walk(c) for c in node)
            memo[id(node)] = r
        return r

    return DyadicSet(E.n, walk(E.tree))


def scale_weight(w: DyadicWeight, c) -> DyadicWeight:
    """Multiply every leaf by c > 0."""
    if not c > 0:
        raise ValueError(f"scale factor must be positive, got {c!r}")
    memo: dict[int, WeightNode] = {}

    def walk(node):
        if _is_leaf(node):
            return node * c
        r = memo.get(id(node))
        if r is None:
            r = tuple(walk(ch) for ch in node)
            memo[id(node)] = r
        return r

    return DyadicWeight(w.n, walk(w.tree))


# ---------------------------------------------------------------------------
# JSON round trip.  Floats serialize via repr and therefore round-trip
# bit-exactly; Fraction leaves degrade to float on output.  An interior node
# referenced from more than one parent (concatenation stages share their
# continuation subtree) is emitted once, tagged "id", and thereafter as
# {"ref": id}; expanding such trees naively is exponential in the number of
# stages.  Trees without sharing emit the plain nested format with no tags.

def _refcounts(root) -> dict:
    counts: dict = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if not isinstance(node, tuple):
            continue
        k = id(node)
        counts[k] = counts.get(k, 0) + 1
        if counts[k] == 1:
            stack.extend(node)
    return counts


def _weight_node_to_json(node, _counts=None, _ids=None):
    if _counts is None:
        _counts = _refcounts(node)
        _ids = {}
    if _is_leaf(node):
        return {"leaf": node if isinstance(node, float) else float(node)}
    ref = _ids.get(id(node))
    if ref is not None:
        return {"ref": ref}
    doc = {}
    if _counts[id(node)] > 1:
        doc["id"] = _ids[id(node)] = len(_ids)
    doc["children"] = [_weight_node_to_json(c, _counts, _ids) for c in node]
    return doc


def _weight_node_from_json(doc, n: int, _defs=None):
    if _defs is None:
        _defs = {}
    if "leaf" in doc:
        return float(doc["leaf"])
    if "ref" in doc:
        node = _defs.get(doc["ref"])
        if node is None:
            raise ValueError(f"ref {doc['ref']} precedes its definition")
        return node
    children = doc["children"]
    if len(children) != n:
        raise ValueError(f"weight node has {len(children)} children, want {n}")
    node = tuple(_weight_node_from_json(c, n, _defs) for c in children)
    if "id" in doc:
        _defs[doc["id"]] = node
    return node


def _set_node_to_json(node, _counts=None, _ids=None):
    if _counts is None:
        _counts = _refcounts(node)
        _ids = {}
    if node is True:
        return {"set": "full"}
    if node is False:
        return {"set": "empty"}
    ref = _ids.get(id(node))
    if ref is not None:
        return {"ref": ref}
    doc = {}
    if _counts[id(node)] > 1:
        doc["id"] = _ids[id(node)] = len(_ids)
    doc["children"] = [_set_node_to_json(c, _counts, _ids) for c in node]
    return doc


def _set_node_from_json(doc, n: int, _defs=None):
    if _defs is None:
        _defs = {}
    if "set" in doc:
        if doc["set"] not in ("full", "empty"):
            raise ValueError(f"bad set marker {doc['set']!r}")
        return doc["set"] == "full"
    if "ref" in doc:
        node = _defs.get(doc["ref"])
        if node is None:
            raise ValueError(f"ref {doc['ref']} precedes its definition")
        return node
    children = doc["children"]
    if len(children) != n:
        raise ValueError(f"set node has {len(children)} children, want {n}")
    node = make_set_node(_set_node_from_json(c, n, _defs) for c in children)
    if "id" in doc:
        _defs[doc["id"]] = node
    return node


def pair_to_json(Q: float, d: int, w: DyadicWeight, E: DyadicSet) -> dict:
    return {
        "Q": Q,
        "d": d,
        "weight": _weight_node_to_json(w.tree),
        "set": _set_node_to_json(E.tree),
    }


def pair_from_json(doc: dict, max_depth: int = DEFAULT_MAX_DEPTH):
    """Parse {"Q", "d", "weight", "set"}; validates both trees."""
    Q = float(doc["Q"])
    d = int(doc["d"])
    n = 2**d
    w = DyadicWeight(n, _weight_node_from_json(doc["weight"], n))
    E = DyadicSet(n, _set_node_from_json(doc["set"], n))
    validate_weight(w, max_depth)
    validate_set(E, max_depth)
    return Q, d, w, E


def as_fraction_weight(w: DyadicWeight) -> DyadicWeight:
    """Convert every leaf to an exact Fraction (floats convert exactly)."""

    def walk(node):
        if _is_leaf(node):
            return node if isinstance(node, Rational) else Fraction(node)
        return tuple(walk(c) for c in node)

    return DyadicWeight(w.n, walk(w.tree))
