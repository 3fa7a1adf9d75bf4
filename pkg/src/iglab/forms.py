"""Dirichlet energy, gradients, Laplacian, and the finite-graph identities.

For a function f on a weighted graph:

    energy     Q(f)        = 1/2 sum_{x,y} w(x,y) (f(x) - f(y))^2
    carre      |grad f|^2(x) = sum_y w(x,y) (f(x) - f(y))^2
    pairing    (grad f . grad g)(x) analogously
    laplacian  (Delta f)(x) = (1/mu(x)) sum_y w(x,y) (f(x) - f(y))
    norms      ||f||^2 = sum f^2 mu,   ||f||_Q = sqrt(Q(f) + ||f||^2)

On a finite graph, Green's identity, the Leibniz rule and the Caccioppoli
inequality are exact algebra; the check functions verify them to residual
<= 1e-9 * scale with scale = max(|terms|, 1). On truncations of infinite
graphs the values differ from the infinite-graph ones only through edges
dropped at the frontier; form_report attaches the corresponding leak bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graphs import WeightedGraph, combinatorial_neighborhood
from .metrics import PathMetric

RESIDUAL_TOL = 1e-9


class VertexFunction:
    """A real-valued function on the vertices of a specific graph."""

    def __init__(self, graph: WeightedGraph, values):
        self.graph = graph
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (graph.n,):
            raise InputError(f"values must have length {graph.n}")

    @classmethod
    def constant(cls, graph, c):
        return cls(graph, np.full(graph.n, float(c)))

    @classmethod
    def indicator(cls, graph, ids):
        v = np.zeros(graph.n)
        v[list(ids)] = 1.0
        return cls(graph, v)

    @classmethod
    def from_dict(cls, graph, d, default=0.0):
        v = np.full(graph.n, float(default))
        for x, val in d.items():
            v[x] = val
        return cls(graph, v)

    def support(self) -> tuple:
        return tuple(int(v) for v in np.flatnonzero(self.values != 0.0))

    def __mul__(self, other):
        if isinstance(other, VertexFunction):
            return VertexFunction(self.graph, self.values * other.values)
        return VertexFunction(self.graph, self.values * float(other))

    def clip(self, lo=0.0, hi=1.0):
        """Normal contraction (f v lo) ^ hi; never increases the energy."""
        return VertexFunction(self.graph, np.clip(self.values, lo, hi))


def energy(f: VertexFunction) -> float:
    """Q(f) = 1/2 sum_{x,y} w (f(x)-f(y))^2, accumulated once per edge."""
    v = f.values
    return math.fsum(w * (v[x] - v[y]) ** 2 for x, y, w in f.graph.edges())


def norm_sq(f: VertexFunction) -> float:
    v = f.values
    mu = f.graph.mu
    return math.fsum(float(v[x]) ** 2 * float(mu[x]) for x in range(f.graph.n))


def qnorm(f: VertexFunction) -> float:
    """Form norm ||f||_Q = sqrt(Q(f) + ||f||^2)."""
    return math.sqrt(energy(f) + norm_sq(f))


def gradient_sq(f: VertexFunction, x: int) -> float:
    """|grad f|^2(x) = sum_y w(x,y)(f(x)-f(y))^2."""
    v = f.values
    return math.fsum(w * (v[x] - v[y]) ** 2
                     for y, w in f.graph.adj[x].items())


def gradient_pairing(f: VertexFunction, g: VertexFunction, x: int) -> float:
    """(grad f . grad g)(x) = sum_y w (f(x)-f(y))(g(x)-g(y))."""
    vf, vg = f.values, g.values
    return math.fsum(w * (vf[x] - vf[y]) * (vg[x] - vg[y])
                     for y, w in f.graph.adj[x].items())


def laplacian(f: VertexFunction, x: int) -> float:
    """(Delta f)(x) = (1/mu(x)) sum_y w(x,y)(f(x)-f(y)).

    On a truncation this is the Laplacian of the finite graph; at frontier
    vertices it differs from the infinite-graph value by the dropped edges.
    """
    v = f.values
    s = math.fsum(w * (v[x] - v[y]) for y, w in f.graph.adj[x].items())
    return s / float(f.graph.mu[x])


def laplacian_all(f: VertexFunction) -> np.ndarray:
    return np.array([laplacian(f, x) for x in range(f.graph.n)])


@dataclass(frozen=True)
class FormReport:
    energy: float
    norm_sq: float
    qnorm: float
    touches_frontier: bool
    leak_mass: float          # total dropped edge weight at the frontier
    leak_bound: float         # |Q_infinite - Q_window| <= this, for any
                              # extension bounded by the frontier sup
    frontier_sup: float

    def to_dict(self):
        return dict(energy=self.energy, norm_sq=self.norm_sq,
                    qnorm=self.qnorm, touches_frontier=self.touches_frontier,
                    leak_mass=self.leak_mass, leak_bound=self.leak_bound)


def form_report(f: VertexFunction) -> FormReport:
    """Energy/norms plus the frontier-leak error bound of the window.

    Each dropped edge (x, y_out) contributes w * (f(x) - f(y_out))^2 to the
    infinite-graph energy. If |f| stays bounded by M = max over frontier
    vertices of |f| beyond the window, the total is at most 4 M^2 * leak
    mass; it is exactly zero when f vanishes on the frontier and is
    extended by zero.
    """
    g = f.graph
    e = energy(f)
    n2 = norm_sq(f)
    near = set(combinatorial_neighborhood(g, g.frontier))
    touches = any(f.values[x] != 0.0 for x in near) if near else False
    mass = math.fsum(g.leak.values())
    sup = max((abs(float(f.values[x])) for x in g.frontier), default=0.0)
    return FormReport(e, n2, math.sqrt(e + n2), touches, mass,
                      4.0 * sup * sup * mass, sup)


def _scale(*vals: float) -> float:
    return max(1.0, *(abs(v) for v in vals))


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    terms: dict
    residual: float
    scale: float
    passed: bool
    frontier_warning: bool = False


def green_identity_check(u: VertexFunction, v: VertexFunction,
                         tol: float = RESIDUAL_TOL) -> IdentityCheck:
    """sum (Delta u) v mu = sum u (Delta v) mu = 1/2 sum (grad u . grad v).

    Exact algebra on a finite graph. The frontier warning fires when v is
    supported near the frontier, meaning the checked values differ from
    the infinite-graph ones (the identity itself still holds).
    """
    g = u.graph
    mu = g.mu
    a = math.fsum(laplacian(u, x) * float(v.values[x]) * float(mu[x])
                  for x in range(g.n))
    b = math.fsum(float(u.values[x]) * laplacian(v, x) * float(mu[x])
                  for x in range(g.n))
    c = 0.5 * math.fsum(gradient_pairing(u, v, x) for x in range(g.n))
    sc = _scale(a, b, c)
    res = max(abs(a - b), abs(a - c), abs(b - c))
    near = set(combinatorial_neighborhood(g, g.frontier))
    warn = any(v.values[x] != 0.0 for x in near)
    return IdentityCheck("green", {"sum (Du)v mu": a, "sum u(Dv) mu": b,
                                   "half pairing": c},
                         res, sc, res <= tol * sc, warn)


def leibniz_check(f: VertexFunction, g: VertexFunction, h: VertexFunction,
                  tol: float = RESIDUAL_TOL) -> IdentityCheck:
    """sum grad(fg).grad h = sum f (grad g . grad h) + sum g (grad f . grad h),
    all three outer sums plain (unweighted) vertex sums."""
    gr = f.graph
    fg = f * g
    lhs = math.fsum(gradient_pairing(fg, h, x) for x in range(gr.n))
    rhs = math.fsum(
        float(f.values[x]) * gradient_pairing(g, h, x)
        + float(g.values[x]) * gradient_pairing(f, h, x)
        for x in range(gr.n))
    sc = _scale(lhs, rhs)
    res = abs(lhs - rhs)
    return IdentityCheck("leibniz", {"lhs": lhs, "rhs": rhs},
                         res, sc, res <= tol * sc)


def caccioppoli_check(u: VertexFunction, v: VertexFunction,
                      tol: float = RESIDUAL_TOL) -> IdentityCheck:
    """-sum (Delta u) u v^2 mu <= 1/2 sum u^2 |grad v|^2 (slack >= 0)."""
    g = u.graph
    lhs = -math.fsum(laplacian(u, x) * float(u.values[x])
                     * float(v.values[x]) ** 2 * float(g.mu[x])
                     for x in range(g.n))
    rhs = 0.5 * math.fsum(float(u.values[x]) ** 2 * gradient_sq(v, x)
                          for x in range(g.n))
    sc = _scale(lhs, rhs)
    slack = rhs - lhs
    return IdentityCheck("caccioppoli", {"lhs": lhs, "rhs": rhs,
                                         "slack": slack},
                         min(slack, 0.0), sc, slack >= -tol * sc)


def cutoff_eta(metric: PathMetric, x0: int, r: float, R: float) -> VertexFunction:
    """eta(x) = ((R - d(x, x0)) / (R - r))_+ ^ 1: equals 1 on the r-ball,
    0 outside the R-ball, linear ramp in between.

    When the metric is intrinsic, |grad eta|^2(x) <= mu(x) / (R - r)^2.
    """
    if not R > r >= 0.0:
        raise InputError("need 0 <= r < R")
    d = metric.distances_from(x0)
    with np.errstate(invalid="ignore"):
        vals = np.clip((R - d) / (R - r), 0.0, 1.0)
    vals[~np.isfinite(d)] = 0.0
    return VertexFunction(metric.graph, vals)
