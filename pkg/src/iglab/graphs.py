"""Weighted graphs with vertex measures, and rule-based infinite families.

A weighted graph here is a finite symmetric edge-weight structure w >= 0
with zero diagonal together with a strictly positive vertex measure mu.
The weighted degree is Deg(x) = (1/mu(x)) * sum_y w(x,y).

Infinite one-sided rays and two-sided lines are represented by rule
families (weight/measure/length as functions of the vertex index) that
realize themselves on finite windows via truncate(). Truncations carry
the frontier (vertices that lost edge mass to the cut) and the dropped
mass per frontier vertex, which downstream modules use for leak bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FamilyDefinitionError, InputError
from .series import TailSum, bounded_tail, geometric_tail


class WeightedGraph:
    """Finite symmetric weighted graph with a positive vertex measure.

    Vertices are 0..n-1. Edges are stored once per unordered pair in both
    adjacency mirrors, sharing the same float, so lookups of (x, y) and
    (y, x) are identical bit for bit.
    """

    __slots__ = ("n", "mu", "adj", "frontier", "leak", "labels", "_row_sums")

    def __init__(self, n, edges, mu, frontier=(), leak=None, labels=None):
        if n <= 0:
            raise InputError("graph needs at least one vertex")
        self.n = int(n)
        self.mu = np.asarray(mu, dtype=float)
        if self.mu.shape != (self.n,):
            raise InputError(f"mu must have length {self.n}")
        if not np.all(np.isfinite(self.mu)) or np.any(self.mu <= 0.0):
            raise InputError("measure must be finite and strictly positive")
        self.adj = [dict() for _ in range(self.n)]
        for x, y, w in edges:
            x, y, w = int(x), int(y), float(w)
            if not 0 <= x < self.n or not 0 <= y < self.n:
                raise InputError(f"edge ({x},{y}) out of range")
            if x == y:
                raise InputError(f"self-loop at {x} (diagonal must be zero)")
            if not math.isfinite(w) or w < 0.0:
                raise InputError(f"edge ({x},{y}) has invalid weight {w}")
            if y in self.adj[x]:
                raise InputError(f"duplicate edge ({x},{y})")
            if w == 0.0:
                continue  # absent edge
            self.adj[x][y] = w
            self.adj[y][x] = w
        self.leak = {int(k): float(v) for k, v in (leak or {}).items()}
        for x, v in self.leak.items():
            if not 0 <= x < self.n or v < 0.0:
                raise InputError("invalid leak entry")
        self.frontier = frozenset(int(v) for v in frontier) | frozenset(self.leak)
        if any(not 0 <= v < self.n for v in self.frontier):
            raise InputError("frontier vertex out of range")
        self.labels = labels
        self._row_sums = np.array(
            [math.fsum(self.adj[x].values()) for x in range(self.n)])

    # -- basic accessors -------------------------------------------------

    def neighbors(self, x: int):
        return self.adj[x]

    def weight(self, x: int, y: int) -> float:
        return self.adj[x].get(y, 0.0)

    def row_sum(self, x: int) -> float:
        """Cached sum_y w(x,y)."""
        return float(self._row_sums[x])

    def recomputed_row_sum(self, x: int) -> float:
        return math.fsum(self.adj[x].values())

    def degree(self, x: int) -> float:
        """Weighted degree Deg(x) = row_sum(x) / mu(x)."""
        return float(self._row_sums[x]) / float(self.mu[x])

    def combinatorial_degree(self, x: int) -> int:
        return len(self.adj[x])

    def edges(self):
        """Yield (x, y, w) once per edge with x < y, sorted."""
        for x in range(self.n):
            for y in sorted(self.adj[x]):
                if x < y:
                    yield x, y, self.adj[x][y]

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def total_measure(self) -> float:
        return math.fsum(self.mu)

    def to_csr(self):
        import scipy.sparse as sp
        rows, cols, vals = [], [], []
        for x, y, w in self.edges():
            rows += [x, y]
            cols += [y, x]
            vals += [w, w]
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def core_vertices(self):
        """Vertices not on the frontier."""
        return [x for x in range(self.n) if x not in self.frontier]

    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n


def weighted_degree(g: WeightedGraph, x: int) -> float:
    """Deg(x) = (1/mu(x)) sum_y w(x,y)."""
    return g.degree(x)


def vertex_set(g: WeightedGraph, ids) -> tuple:
    """Normalize an iterable of vertex ids: sorted, unique, validated."""
    out = sorted(set(int(v) for v in ids))
    if out and (out[0] < 0 or out[-1] >= g.n):
        raise InputError("vertex id out of range")
    return tuple(out)


def combinatorial_neighborhood(g: WeightedGraph, ids) -> tuple:
    """n(K) = K together with every vertex adjacent to K."""
    k = vertex_set(g, ids)
    out = set(k)
    for x in k:
        out.update(g.adj[x])
    return tuple(sorted(out))


# -- graph interchange format ---------------------------------------------
#
# Line-oriented text:
#     graph <n>
#     mu <x> <value>
#     edge <x> <y> <w>
# Floats are written with repr() (shortest round-trip form, up to 17
# significant digits), so dumps/loads is bit-stable. Truncation metadata
# (frontier, leaks, labels) is not part of the format.

def dumps(g: WeightedGraph) -> str:
    lines = [f"graph {g.n}"]
    for x in range(g.n):
        lines.append(f"mu {x} {float(g.mu[x])!r}")
    for x, y, w in g.edges():
        lines.append(f"edge {x} {y} {w!r}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> WeightedGraph:
    n = None
    mu = {}
    edges = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "graph" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "mu" and len(parts) == 3:
                mu[int(parts[1])] = float(parts[2])
            elif parts[0] == "edge" and len(parts) == 4:
                edges.append((int(parts[1]), int(parts[2]), float(parts[3])))
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"bad interchange line {ln}: {raw!r}") from None
    if n is None:
        raise InputError("missing 'graph <n>' header")
    if set(mu) != set(range(n)):
        raise InputError("mu lines must cover exactly the vertices 0..n-1")
    return WeightedGraph(n, edges, [mu[x] for x in range(n)])


def dump_path(g: WeightedGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(g))


def load_path(path) -> WeightedGraph:
    with open(path) as fh:
        return loads(fh.read())


# -- family configuration files -------------------------------------------
#
# Key-value lines, one per line, '#' comments allowed:
#     family ex5.6
#     alpha 1.0
#     case 2
# 'family' is required; remaining keys are parsed as int, then float,
# then kept as strings, and passed to the registry constructor.

def load_family_config(path):
    name = None
    params = {}
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise InputError(f"bad config line {ln}: {raw.rstrip()!r}")
            key, val = parts[0], parts[1].strip()
            if key == "family":
                name = val
            else:
                for cast in (int, float):
                    try:
                        val = cast(val)
                        break
                    except ValueError:
                        continue
                params[key] = val
    if name is None:
        raise InputError("config file missing 'family <name>' line")
    return name, params


# -- rule families ---------------------------------------------------------

def _validate_window(name, w, mu):
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        bad = int(np.argmin(np.isfinite(w) & (w > 0.0)))
        raise FamilyDefinitionError(
            f"{name}: weight rule invalid at edge index {bad} "
            f"(value {w[bad] if bad < len(w) else '?'})")
    if not np.all(np.isfinite(mu)) or np.any(mu <= 0.0):
        bad = int(np.argmin(np.isfinite(mu) & (mu > 0.0)))
        raise FamilyDefinitionError(
            f"{name}: measure rule invalid at vertex {bad}")


class GraphFamily:
    """Base class: a countable weighted graph given by rules, realized on
    finite windows. Subclasses define truncate() and end structure."""

    name = "family"
    params: dict = {}
    locally_finite = True

    def truncate(self, window: int) -> WeightedGraph:
        raise NotImplementedError

    def ends(self):
        """End descriptors (empty when the family has no linear ends)."""
        return ()

    def canonical_lengths(self, g: WeightedGraph):
        """Edge lengths of the family's canonical path metric on g."""
        raise NotImplementedError

    def max_window(self, cap: int) -> int:
        """Largest usable window <= cap (float-range probing)."""
        return cap

    def describe(self) -> str:
        ps = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({ps})" if ps else self.name


class End:
    """One linear end of a ray or line family.

    Exposes the tail data of its side: edge weights w(k) for the k-th edge
    outward, measure mu(k), canonical edge length sigma(k), and certified
    tail sums of sigma and mu. Index k counts outward from the origin, so
    for the left end of a line, k corresponds to model vertex -k.
    """

    def __init__(self, family, label, w_fn, mu_fn, sigma_fn,
                 sigma_tail_fn=None, sigma_ratio=None, sigma_rem_fn=None,
                 mu_tail_fn=None, mu_ratio=None, mu_rem_fn=None,
                 mu_total=None, res_upper=None):
        self.family = family
        self.label = label
        self.w_fn = w_fn
        self.mu_fn = mu_fn
        self.sigma_fn = sigma_fn
        self._sigma_tail_fn = sigma_tail_fn
        self._sigma_ratio = sigma_ratio
        self._sigma_rem_fn = sigma_rem_fn
        self._mu_tail_fn = mu_tail_fn
        self._mu_ratio = mu_ratio
        self._mu_rem_fn = mu_rem_fn
        self._mu_total = mu_total
        # certified upper bound on the tail resistance sum_{k>=1} 1/w(k),
        # or None when unknown or infinite
        self.res_upper = res_upper

    def sigma_tail(self, k: int) -> TailSum:
        """sum_{j >= k} sigma(j): remaining length beyond vertex k."""
        if self._sigma_tail_fn is not None:
            return TailSum(float(self._sigma_tail_fn(k)))
        if self._sigma_ratio is not None:
            return geometric_tail(self.sigma_fn, k, self._sigma_ratio)
        if self._sigma_rem_fn is not None:
            return bounded_tail(self.sigma_fn, k, self._sigma_rem_fn)
        raise InputError(
            f"end {self.label}: no tail data for the edge lengths")

    def mu_tail(self, k: int) -> TailSum:
        """sum_{j >= k} mu(j); raises if the measure tail is infinite."""
        if self.mu_is_infinite():
            raise InputError(f"end {self.label}: measure tail is infinite")
        if self._mu_tail_fn is not None:
            return TailSum(float(self._mu_tail_fn(k)))
        if self._mu_ratio is not None:
            return geometric_tail(self.mu_fn, k, self._mu_ratio)
        if self._mu_rem_fn is not None:
            return bounded_tail(self.mu_fn, k, self._mu_rem_fn)
        raise InputError(f"end {self.label}: no tail data for the measure")

    def mu_is_infinite(self) -> bool:
        return self._mu_total is not None and math.isinf(self._mu_total)

    def mu_total(self):
        if self._mu_total is not None:
            return self._mu_total
        return self.mu_tail(0).value

    def has_boundary_point(self) -> bool:
        """Finite remaining length <=> the end is a metric boundary point."""
        try:
            return math.isfinite(self.sigma_tail(0).upper)
        except InputError:
            return False


def _probe_max_window(name, w_fn, mu_fn, cap, slack=0):
    """Largest window N <= cap whose truncation only evaluates valid floats.

    A ray window N reads w(0..N-1) (the last entry is the leak weight) and
    mu(0..N-1); a line half additionally reads w(N) and mu(N) (slack=1).
    """
    hi = int(cap)
    bad = hi + 1
    lo, chunk = 0, 1 << 12
    while lo <= hi:               # scan in growing chunks, not one arange(cap)
        xs = np.arange(lo, min(lo + chunk, hi + 1), dtype=float)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            w = np.asarray(w_fn(xs), dtype=float)
            mu = np.asarray(mu_fn(xs), dtype=float)
        ok = np.isfinite(mu) & (mu > 0.0) & np.isfinite(w) & (w > 0.0)
        if not ok.all():
            bad = lo + int(np.argmin(ok))
            break
        lo += chunk
        chunk = min(chunk * 4, 1 << 22)
    n = min(bad - slack, hi)
    if n < 2:
        raise FamilyDefinitionError(f"{name}: rules invalid near the origin")
    return n


def default_sigma0_rule(w_fn, mu_fn):
    """Closed-form sigma_0 edge lengths of the infinite nearest-neighbor ray.

    sigma_0(x, x+1) = min(Deg(x)^-1/2, Deg(x+1)^-1/2, 1) with the full-ray
    degree Deg(x) = (w(x-1,x) + w(x,x+1)) / mu(x) (no left edge at 0).
    """
    def deg(x):
        x = np.asarray(x, dtype=float)
        left = np.where(x > 0, w_fn(np.maximum(x - 1.0, 0.0)), 0.0)
        return (left + w_fn(x)) / mu_fn(x)

    def sigma(x):
        x = np.asarray(x, dtype=float)
        return np.minimum(np.minimum(deg(x) ** -0.5, deg(x + 1.0) ** -0.5), 1.0)

    return sigma


class RayFamily(GraphFamily):
    """One-sided ray on 0,1,2,... with nearest-neighbor weights.

    w_fn(x) is the weight of edge (x, x+1), mu_fn(x) the measure, both
    vectorized over numpy arrays. sigma_fn(x) is the canonical edge length
    of (x, x+1); by default the closed-form sigma_0 of the infinite ray.
    """

    def __init__(self, name, w_fn, mu_fn, params=None, sigma_fn=None,
                 sigma_kind="sigma0", sigma_tail_fn=None, sigma_ratio=None,
                 sigma_rem_fn=None, mu_tail_fn=None, mu_ratio=None,
                 mu_rem_fn=None, mu_total=None, res_upper=None,
                 window_cap=1 << 24):
        self.name = name
        self.params = dict(params or {})
        self.w_fn = w_fn
        self.mu_fn = mu_fn
        self.sigma_kind = sigma_kind
        self.sigma_fn = sigma_fn or default_sigma0_rule(w_fn, mu_fn)
        self._window_cap = window_cap
        self._end = End(self, "plus", w_fn, mu_fn, self.sigma_fn,
                        sigma_tail_fn=sigma_tail_fn, sigma_ratio=sigma_ratio,
                        sigma_rem_fn=sigma_rem_fn, mu_tail_fn=mu_tail_fn,
                        mu_ratio=mu_ratio, mu_rem_fn=mu_rem_fn,
                        mu_total=mu_total, res_upper=res_upper)

    def ends(self):
        return (self._end,)

    def truncate(self, window: int) -> WeightedGraph:
        n = int(window)
        if n < 2:
            raise InputError("window must be at least 2")
        xs = np.arange(n, dtype=float)
        w = np.asarray(self.w_fn(xs[:-1]), dtype=float)
        mu = np.asarray(self.mu_fn(xs), dtype=float)
        _validate_window(self.name, w, mu)
        cut = float(self.w_fn(np.float64(n - 1)))
        edges = [(x, x + 1, w[x]) for x in range(n - 1)]
        return WeightedGraph(n, edges, mu, leak={n - 1: cut},
                             labels={x: x for x in range(n)})

    def canonical_lengths(self, g: WeightedGraph):
        from .metrics import EdgeLengths
        lengths = {}
        for x, y, _ in g.edges():
            lengths[(x, y)] = float(self.sigma_fn(np.float64(min(x, y))))
        return EdgeLengths(g, lengths, kind=self.sigma_kind)

    def max_window(self, cap: int) -> int:
        return _probe_max_window(self.name, self.w_fn, self.mu_fn,
                                 min(cap, self._window_cap))

    def model_to_id(self, x: int, window: int) -> int:
        return int(x)

    def tail_ids(self, start: int, window: int):
        """Ids of the tail set {x >= start} inside truncate(window)."""
        return tuple(range(int(start), int(window)))


class LineFamily(GraphFamily):
    """Two-sided line on ..., -1, 0, 1, ... glued from two ray rules.

    pos_* rules describe the right half (pos_w_fn(x) = w(x, x+1), x >= 0);
    neg_* the left half in outward coordinates (neg_w_fn(k) = w(-k-1, -k),
    neg_mu_fn(k) = mu(-k) for k >= 1). mu(0) is taken from pos_mu_fn.
    truncate(N) realizes the window [-N, N] with id(x) = x + N.
    """

    def __init__(self, name, pos, neg, params=None):
        self.name = name
        self.params = dict(params or {})
        self.pos = pos  # dicts of rules, same keys as RayFamily kwargs
        self.neg = neg
        self._ends = (
            End(self, "minus", neg["w_fn"], neg["mu_fn"], neg["sigma_fn"],
                sigma_tail_fn=neg.get("sigma_tail_fn"),
                sigma_ratio=neg.get("sigma_ratio"),
                sigma_rem_fn=neg.get("sigma_rem_fn"),
                mu_tail_fn=neg.get("mu_tail_fn"),
                mu_ratio=neg.get("mu_ratio"),
                mu_rem_fn=neg.get("mu_rem_fn"),
                mu_total=neg.get("mu_total"),
                res_upper=neg.get("res_upper")),
            End(self, "plus", pos["w_fn"], pos["mu_fn"], pos["sigma_fn"],
                sigma_tail_fn=pos.get("sigma_tail_fn"),
                sigma_ratio=pos.get("sigma_ratio"),
                sigma_rem_fn=pos.get("sigma_rem_fn"),
                mu_tail_fn=pos.get("mu_tail_fn"),
                mu_ratio=pos.get("mu_ratio"),
                mu_rem_fn=pos.get("mu_rem_fn"),
                mu_total=pos.get("mu_total"),
                res_upper=pos.get("res_upper")),
        )
        self.sigma_kind = pos.get("sigma_kind", "sigma0")

    def ends(self):
        return self._ends

    def truncate(self, window: int) -> WeightedGraph:
        n = int(window)
        if n < 1:
            raise InputError("window must be at least 1")
        ks = np.arange(n, dtype=float)
        w_pos = np.asarray(self.pos["w_fn"](ks), dtype=float)      # (k, k+1)
        w_neg = np.asarray(self.neg["w_fn"](ks), dtype=float)      # (-k-1, -k)
        mu_pos = np.asarray(self.pos["mu_fn"](np.arange(n + 1.0)), dtype=float)
        mu_neg = np.asarray(self.neg["mu_fn"](np.arange(1.0, n + 1.0)),
                            dtype=float)
        _validate_window(self.name, w_pos, mu_pos)
        _validate_window(self.name, w_neg, mu_neg if n else [1.0])
        size = 2 * n + 1
        mu = np.empty(size)
        labels = {}
        for x in range(-n, n + 1):
            i = x + n
            labels[i] = x
            mu[i] = mu_pos[x] if x >= 0 else mu_neg[-x - 1]
        edges = []
        for k in range(n):
            edges.append((k + n, k + 1 + n, w_pos[k]))          # (k, k+1)
            edges.append((-k - 1 + n, -k + n, w_neg[k]))        # (-k-1, -k)
        leak = {0: float(self.neg["w_fn"](np.float64(n))),
                2 * n: float(self.pos["w_fn"](np.float64(n)))}
        return WeightedGraph(size, edges, mu, leak=leak, labels=labels)

    def canonical_lengths(self, g: WeightedGraph):
        from .metrics import EdgeLengths
        n = (g.n - 1) // 2
        lengths = {}
        for x, y, _ in g.edges():
            lo = min(x, y) - n    # model coordinate of the lower endpoint
            if lo >= 0:
                s = self.pos["sigma_fn"](np.float64(lo))
            else:
                s = self.neg["sigma_fn"](np.float64(-lo - 1))
            lengths[(min(x, y), max(x, y))] = float(s)
        return EdgeLengths(g, lengths, kind=self.sigma_kind)

    def max_window(self, cap: int) -> int:
        cap = min(int(cap), 1 << 24)
        a = _probe_max_window(self.name, self.pos["w_fn"], self.pos["mu_fn"],
                              cap, slack=1)
        b = _probe_max_window(self.name, self.neg["w_fn"], self.neg["mu_fn"],
                              cap, slack=1)
        return min(a, b)

    def model_to_id(self, x: int, window: int) -> int:
        return int(x) + int(window)

    def tail_ids(self, start: int, window: int, side: int = +1):
        """Ids of {x >= start} (side=+1) or {x <= -start} (side=-1)."""
        n = int(window)
        if side > 0:
            return tuple(range(int(start) + n, 2 * n + 1))
        return tuple(range(0, n - int(start) + 1))
