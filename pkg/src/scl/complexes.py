"""Filtered Cech / Vietoris-Rips complexes, Borsuk graphs, neighborhood
complexes and the conicity predicates.

A simplex is a strictly increasing tuple of vertex indices. A complex is a
plain ``set`` of such tuples (face-closed, no empty simplex).
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import BudgetExceeded
from .sphere_geom import GEOM_TOL, Sample, spherical_one_center

Simplex = tuple
DEFAULT_SIMPLEX_BUDGET = 20_000_000
DEFAULT_COMBINATORIAL_BUDGET = 5_000_000
CECH = "cech_ambient"
VR = "vietoris_rips"
_TWO_PI = 2 * math.pi


def simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(set(int(v) for v in vertices)))
    if not s:
        raise ValueError("empty simplex")
    return s


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def closure(simplices: Iterable[Iterable[int]]) -> set:
    K = set()
    for s in simplices:
        s = simplex(s)
        for k in range(1, len(s) + 1):
            K.update(combinations(s, k))
    return K


def vertices_of(K) -> list[int]:
    return sorted(s[0] for s in K if len(s) == 1)


@dataclass
class FilteredComplex:
    sample: Sample | None
    flavor: str
    max_dim: int
    value_cap: float
    entries: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def value(self, s: Simplex) -> float:
        return self.entries[s]

    def ordered(self) -> list[Simplex]:
        """Deterministic filtration order: (value, dimension, lexicographic)."""
        return sorted(self.entries, key=lambda s: (self.entries[s], len(s), s))

    def to_json(self) -> str:
        n = self.sample.dim if self.sample is not None else None
        simp = [{"v": list(s), "value": self.entries[s]} for s in self.ordered()]
        return json.dumps({"flavor": self.flavor, "n": n, "max_dim": self.max_dim,
                           "value_cap": self.value_cap, "simplices": simp}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "FilteredComplex":
        d = json.loads(text)
        entries = {tuple(e["v"]): float(e["value"]) for e in d["simplices"]}
        return cls(None, d["flavor"], int(d["max_dim"]), float(d.get("value_cap", math.pi)), entries)


def estimate_simplex_count(N: int, max_dim: int) -> int:
    return sum(math.comb(N, d + 1) for d in range(max_dim + 1))


def _circle_radius(angles: list[float]) -> float:
    # angles sorted ascending in [0, 2pi)
    g = angles[0] + _TWO_PI - angles[-1]
    for a, b in zip(angles, angles[1:]):
        if b - a > g:
            g = b - a
    return max(0.0, (_TWO_PI - g) / 2)


def _value_function(sample: Sample, flavor: str):
    if flavor == VR:
        D = sample.distance_matrix()

        def vr_value(s, face_vals):
            # diam(s) is the max over its facets plus the new edges; for an
            # edge compute it directly.
            if len(s) == 2:
                return float(D[s[0], s[1]])
            return max(face_vals)
        return vr_value
    if flavor != CECH:
        raise ValueError(f"unknown flavor {flavor!r}")
    if sample.dim == 1:
        ang = [float(t) for t in sample.angles()]

        def circ_value(s, face_vals):
            return _circle_radius(sorted(ang[i] for i in s))
        return circ_value
    X = sample.array

    def sph_value(s, face_vals):
        return spherical_one_center(X[list(s)]).radius
    return sph_value


def build_filtration(sample: Sample, flavor: str = CECH, max_dim: int = 2,
                     value_cap: float = math.pi, budget: int = DEFAULT_SIMPLEX_BUDGET) -> FilteredComplex:
    """All simplices of dimension <= max_dim with filtration value < value_cap.

    Cech values are spherical 1-center radii (exact circle formula on S^1),
    VR values are diameters. Vertices always enter at 0. Enumeration grows
    simplices one vertex at a time and only from simplices already admitted,
    which is valid because both values are monotone under inclusion.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    if not (0 < value_cap <= math.pi):
        raise ValueError("value_cap must lie in (0, pi]")
    N = len(sample)
    est = estimate_simplex_count(N, max_dim)
    if est > budget:
        raise BudgetExceeded(f"up to {est} simplices (budget {budget})")
    val = _value_function(sample, flavor)
    entries: dict = {(i,): 0.0 for i in range(N)}
    layer = [(i,) for i in range(N)]
    for d in range(1, max_dim + 1):
        nxt = []
        for s in layer:
            for v in range(s[-1] + 1, N):
                t = s + (v,)
                fv = []
                ok = True
                for f in faces(t):
                    x = entries.get(f)
                    if x is None:
                        ok = False
                        break
                    fv.append(x)
                if not ok:
                    continue
                x = val(t, fv)
                # Guard monotonicity against rounding in the 1-center solver.
                x = max(x, max(fv))
                if x < value_cap:
                    entries[t] = x
                    nxt.append(t)
        layer = nxt
        if not layer:
            break
    return FilteredComplex(sample, flavor, max_dim, value_cap, entries)


def complex_at_scale(f: FilteredComplex, r: float) -> set:
    """Open convention: simplices with value < r."""
    return {s for s, x in f.entries.items() if x < r}


# --- graphs ---------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset
    sample: Sample | None = None
    delta: float | None = None

    def __post_init__(self):
        E = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise ValueError("loops are not allowed")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise ValueError(f"edge {e} references a missing vertex")
            E.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(E))

    def adjacency(self) -> list[set]:
        adj = [set() for _ in range(self.vertex_count)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_csv(self) -> str:
        buf = io.StringIO()
        for i, j in sorted(self.edges):
            buf.write(f"{i},{j}\n")
        return buf.getvalue()


def borsuk_graph(sample: Sample, delta: float, convention: str = "open",
                 tol: float = GEOM_TOL) -> Graph:
    """Edges between points more than delta apart (open) or at least delta apart (closed).

    Distances within ``tol`` of delta are ties: the open graph drops them and
    the closed graph keeps them. Without this, evenly spaced samples whose
    distances are exact multiples of delta gain edges from rounding alone.
    """
    if not (0 < delta < math.pi):
        raise ValueError("delta must lie in (0, pi)")
    D = sample.distance_matrix()
    if convention == "open":
        M = D > delta + tol
    elif convention == "closed":
        M = D >= delta - tol
    else:
        raise ValueError("convention must be 'open' or 'closed'")
    iu = np.triu_indices(len(sample), 1)
    sel = M[iu]
    edges = frozenset(zip(iu[0][sel].tolist(), iu[1][sel].tolist()))
    return Graph(len(sample), edges, sample, delta)


def neighborhood_complex(g: Graph, max_dim: int | None = None) -> set:
    """Vertex sets with a common neighbour (the witness need not be in the set)."""
    K = set()
    for nb in g.adjacency():
        nb = sorted(nb)
        top = len(nb) if max_dim is None else min(len(nb), max_dim + 1)
        for k in range(1, top + 1):
            K.update(combinations(nb, k))
    return K


@dataclass
class NeighborhoodComparison:
    inclusion_holds: bool
    equal: bool
    counterexamples: list
    n_neighborhood: int
    n_cech: int


def compare_neighborhood_vs_cech(sample: Sample, delta: float, max_dim: int = 3,
                                 budget: int = DEFAULT_SIMPLEX_BUDGET) -> NeighborhoodComparison:
    """Check N(Bor(X; delta)) inside the ambient Cech complex at pi - delta.

    ``counterexamples`` lists neighbourhood simplices missing from the Cech
    complex (expected empty); equality is only reported.
    """
    g = borsuk_graph(sample, delta)
    NK = neighborhood_complex(g, max_dim)
    f = build_filtration(sample, CECH, max_dim, math.pi - delta, budget)
    CK = set(f.entries)
    missing = sorted(NK - CK)
    return NeighborhoodComparison(not missing, NK == CK, missing, len(NK), len(CK))


# --- stars and conicity ---------------------------------------------------

def closed_star(K, v: int) -> set:
    if (v,) not in K:
        raise KeyError(f"vertex {v} is not in the complex")
    return {s for s in K if tuple(sorted(set(s) | {v})) in K}


def _check_budget(nv: int, l: int, budget: int) -> int:
    k = min(l, nv)
    c = math.comb(nv, k)
    if c > budget:
        raise BudgetExceeded(f"C({nv},{k}) = {c} vertex subsets (budget {budget})")
    return k


def induced_subcomplex(K, S) -> set:
    S = sorted(S)
    out = set()
    for k in range(1, len(S) + 1):
        for t in combinations(S, k):
            if t in K:
                out.add(t)
    return out


def _maximal(L) -> list:
    return [s for s in L if not any(len(t) > len(s) and set(s) <= set(t) for t in L)]


@dataclass
class ConicResult:
    holds: bool
    witness_failure: tuple | None = None

    def __bool__(self):
        return self.holds


def is_l_conic(K, l: int, budget: int = DEFAULT_COMBINATORIAL_BUDGET) -> ConicResult:
    """Every subcomplex on <= l vertices lies in some closed star.

    Only induced subcomplexes K[S] with |S| = min(l, #vertices) are examined:
    any subcomplex on <= l vertices sits inside such a K[S], and lying in a
    star passes to subcomplexes. K must contain all of its simplices up to
    dimension l for the star test to be exact.
    """
    if l < 1:
        raise ValueError("l must be >= 1")
    V = vertices_of(K)
    k = _check_budget(len(V), l, budget)
    for S in combinations(V, k):
        if S in K:
            continue  # a simplex is coned by any of its own vertices
        top = _maximal(induced_subcomplex(K, S))
        found = False
        for v in V:
            if all(tuple(sorted(set(s) | {v})) in K for s in top):
                found = True
                break
        if not found:
            return ConicResult(False, S)
    return ConicResult(True)


def is_l_simplex_dominated(K, l: int, budget: int = DEFAULT_COMBINATORIAL_BUDGET) -> bool:
    if l < 1:
        raise ValueError("l must be >= 1")
    V = vertices_of(K)
    k = _check_budget(len(V), l, budget)
    return all(S in K for S in combinations(V, k))


def write_complex_json(f: FilteredComplex, path: str | Path) -> None:
    Path(path).write_text(f.to_json())
