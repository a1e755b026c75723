"""Covering radii, covering and packing numbers, chromatic numbers, the
closed circle formulas, and a minimax Lloyd estimator for cov_{S^n}(k).

Finite quantities use centers drawn from X itself and are exact (branch and
bound over bitmasks). The continuum estimator only reports the best
configuration it finds, measured on a grid.
"""
from __future__ import annotations

import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complexes import Graph
from .errors import BudgetExceeded
from .sphere_geom import (GEOM_TOL, Sample, SpherePoint, grid_points, grid_resolution,
                          nearest_distances, spherical_one_center)

DEFAULT_MAX_EXACT_CHI = 40
# Snap near-integers before taking ceilings of 2pi/delta and friends.
_SNAP = 1e-9


@dataclass(frozen=True)
class FiniteMetric:
    D: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.D, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError("distance matrix must be square")
        if np.abs(D - D.T).max(initial=0.0) > 1e-9:
            raise ValueError("distance matrix is not symmetric")
        if np.abs(np.diag(D)).max(initial=0.0) > 1e-12:
            raise ValueError("distance matrix needs a zero diagonal")
        D = (D + D.T) / 2
        np.fill_diagonal(D, 0.0)
        object.__setattr__(self, "D", D)

    @property
    def size(self) -> int:
        return self.D.shape[0]

    @classmethod
    def from_sample(cls, sample: Sample) -> "FiniteMetric":
        return cls(sample.distance_matrix())

    def check_triangle(self, tol: float = 1e-9) -> bool:
        D = self.D
        return bool((D[:, None, :] <= D[:, :, None] + D[None, :, :] + tol).all())


# --- set cover ------------------------------------------------------------

def _ball_masks(D: np.ndarray, r: float) -> list[int]:
    masks = []
    for row in D <= r:
        m = 0
        for j in np.flatnonzero(row):
            m |= 1 << int(j)
        masks.append(m)
    return masks


def min_set_cover(masks: list[int], full: int, upper: int | None = None) -> tuple[int, list[int]] | None:
    """Smallest sub-family of ``masks`` whose union is ``full``.

    Returns (size, indices), or None if nothing of size <= upper exists.
    Branches on the uncovered element with the fewest covering sets.
    """
    n = full.bit_length()
    covers = [[i for i, m in enumerate(masks) if m >> e & 1] for e in range(n)]
    if any(not covers[e] for e in range(n) if full >> e & 1):
        return None
    limit = upper if upper is not None else len(masks)
    best: list = [limit + 1, None]

    def rec(covered: int, chosen: list):
        if covered == full:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), chosen[:]
            return
        if len(chosen) + 1 >= best[0]:
            return
        rest = full & ~covered
        # lower bound: every set covers at most `mx` new elements
        mx = max((masks[i] & rest).bit_count() for i in range(len(masks)))
        if len(chosen) + -(-rest.bit_count() // mx) >= best[0]:
            return
        e_best, opts = None, None
        r = rest
        while r:
            e = (r & -r).bit_length() - 1
            r &= r - 1
            c = covers[e]
            if opts is None or len(c) < len(opts):
                e_best, opts = e, c
        for i in sorted(opts, key=lambda i: -(masks[i] & rest).bit_count()):
            chosen.append(i)
            rec(covered | masks[i], chosen)
            chosen.pop()

    rec(0, [])
    if best[1] is None:
        return None
    return best[0], sorted(best[1])


def covering_number_finite(X: FiniteMetric, delta: float) -> int:
    """Fewest closed delta-balls centred in X that cover X."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    full = (1 << X.size) - 1
    res = min_set_cover(_ball_masks(X.D, delta), full)
    return res[0]


def covering_radius_finite(X: FiniteMetric, k: int) -> tuple[float, list[int]]:
    """Least r (a pairwise distance) such that k closed r-balls centred in X cover X."""
    m = X.size
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= |X|")
    cand = np.unique(X.D)
    full = (1 << m) - 1
    lo, hi = 0, len(cand) - 1
    best = None
    while lo <= hi:  # feasibility is monotone in r
        mid = (lo + hi) // 2
        res = min_set_cover(_ball_masks(X.D, cand[mid]), full, upper=k)
        if res is not None:
            best = (float(cand[mid]), res[1])
            hi = mid - 1
        else:
            lo = mid + 1
    return best


# --- cliques and packings -------------------------------------------------

def _adj_masks(adj: list[set]) -> list[int]:
    out = []
    for nb in adj:
        m = 0
        for j in nb:
            m |= 1 << j
        out.append(m)
    return out


def max_clique(adj_masks: list[int]) -> list[int]:
    """Exact maximum clique; greedy colouring gives the pruning bound."""
    n = len(adj_masks)
    best: list = [[]]

    def colour_order(P: int):
        order, bounds = [], []
        colour = 0
        U = P
        while U:
            colour += 1
            Q = U
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~(1 << v)
                Q &= ~adj_masks[v]
                U &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(R: list, P: int):
        order, bounds = colour_order(P)
        for idx in range(len(order) - 1, -1, -1):
            if len(R) + bounds[idx] <= len(best[0]):
                return
            v = order[idx]
            R.append(v)
            NP = P & adj_masks[v]
            if NP:
                expand(R, NP)
            elif len(R) > len(best[0]):
                best[0] = R[:]
            R.pop()
            P &= ~(1 << v)

    if n:
        expand([], (1 << n) - 1)
    return sorted(best[0])


def clique_number(g: Graph) -> int:
    return len(max_clique(_adj_masks(g.adjacency()))) if g.vertex_count else 0


def packing_number(X: FiniteMetric, delta: float, tol: float = GEOM_TOL) -> tuple[int, list[int]]:
    """Most points of X pairwise strictly more than delta apart, with a witness.

    Distances within ``tol`` of delta count as ties and are excluded, the
    same rule the open Borsuk graph uses, so the packing number is its
    clique number.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    M = X.D > delta + tol
    adj = [set(np.flatnonzero(row).tolist()) for row in M]
    w = max_clique(_adj_masks(adj))
    if not w:
        w = [0]
    return len(w), w


# --- colouring ------------------------------------------------------------

def _dsatur(adj: list[set]) -> list[int]:
    n = len(adj)
    colours = [-1] * n
    sat = [set() for _ in range(n)]
    for _ in range(n):
        v = max((u for u in range(n) if colours[u] < 0), key=lambda u: (len(sat[u]), len(adj[u]), -u))
        c = 0
        while c in sat[v]:
            c += 1
        colours[v] = c
        for u in adj[v]:
            sat[u].add(c)
    return colours


def is_proper_colouring(g: Graph, colours: list[int]) -> bool:
    return all(colours[i] != colours[j] for i, j in g.edges)


def exact_colouring(g: Graph, max_vertices: int = DEFAULT_MAX_EXACT_CHI) -> list[int]:
    """Optimal colouring by DSATUR branch and bound, seeded with a max clique."""
    n = g.vertex_count
    if n > max_vertices:
        raise BudgetExceeded(f"{n} vertices exceed the exact colouring budget {max_vertices}")
    if n == 0:
        return []
    adj = g.adjacency()
    best = _dsatur(adj)
    best_k = max(best) + 1
    clique = max_clique(_adj_masks(adj))
    if len(clique) >= best_k:
        return best
    colours = [-1] * n
    # count[v][c] = number of neighbours of v with colour c
    count = [[0] * best_k for _ in range(n)]
    satn = [0] * n

    def assign(v, c):
        colours[v] = c
        for u in adj[v]:
            if count[u][c] == 0:
                satn[u] += 1
            count[u][c] += 1

    def unassign(v, c):
        colours[v] = -1
        for u in adj[v]:
            count[u][c] -= 1
            if count[u][c] == 0:
                satn[u] -= 1

    for c, v in enumerate(clique):
        assign(v, c)
    state = {"best_k": best_k, "best": best}

    def rec(ncoloured: int, used: int):
        if used >= state["best_k"]:
            return
        if ncoloured == n:
            state["best_k"], state["best"] = used, colours[:]
            return
        v = -1
        key = None
        for u in range(n):
            if colours[u] < 0:
                k = (satn[u], len(adj[u]))
                if key is None or k > key:
                    key, v = k, u
        for c in range(used + 1):
            if c >= state["best_k"] - 1:
                break
            if count[v][c]:
                continue
            assign(v, c)
            rec(ncoloured + 1, max(used, c + 1))
            unassign(v, c)

    rec(len(clique), len(clique))
    return state["best"]


def chromatic_number_exact(g: Graph, max_vertices: int = DEFAULT_MAX_EXACT_CHI) -> int:
    if g.vertex_count == 0:
        return 0
    return max(exact_colouring(g, max_vertices)) + 1


def chromatic_upper_greedy(g: Graph, seed: int = 0) -> int:
    """Greedy colouring in a seeded random vertex order."""
    n = g.vertex_count
    if n == 0:
        return 0
    adj = g.adjacency()
    order = list(range(n))
    random.Random(seed).shuffle(order)
    colours = {}
    for v in order:
        used = {colours[u] for u in adj[v] if u in colours}
        c = 0
        while c in used:
            c += 1
        colours[v] = c
    return max(colours.values()) + 1


# --- circle formulas ------------------------------------------------------

def snap_ceil(x: float) -> int:
    """Ceiling that treats values within 1e-9 (relative) of an integer as that integer."""
    r = round(x)
    if abs(x - r) <= _SNAP * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def cov_s1(k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.pi / k


def numcov_s1(delta: float) -> int:
    if delta <= 0:
        raise ValueError("delta must be positive")
    return max(1, snap_ceil(math.pi / delta))


def chi_borsuk_s1(delta: float) -> int:
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    return snap_ceil(2 * math.pi / delta)


def numpack_s1(delta: float) -> int:
    """k when delta lies in [2pi/(k+1), 2pi/k)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if delta >= 2 * math.pi:
        return 1
    return max(1, snap_ceil(2 * math.pi / delta) - 1)


_CIRCLE = {"cov": cov_s1, "numcov": numcov_s1, "chi": chi_borsuk_s1, "numpack": numpack_s1}


def circle_formula(query: str, value):
    try:
        fn = _CIRCLE[query]
    except KeyError:
        raise ValueError(f"unknown circle formula {query!r}; choose from {sorted(_CIRCLE)}") from None
    return fn(value)


# --- continuum covering estimator -----------------------------------------

@dataclass
class CoverEstimate:
    n: int
    k: int
    radius_estimate: float
    centers: list
    grid_resolution: float
    starts_used: int
    seed: int | None
    exact: bool = False
    start_radii: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k, "radius": self.radius_estimate,
                           "centers": [list(c.coords) for c in self.centers],
                           "grid_resolution": self.grid_resolution, "seed": self.seed,
                           "provenance": "exact" if self.exact else "estimated"})


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SCL_THREADS", "1")))
    except ValueError:
        return 1


def _initial_centers(G: np.ndarray, k: int, rng: np.random.Generator, farthest: bool) -> np.ndarray:
    if not farthest:
        return G[rng.choice(len(G), size=k, replace=False)]
    C = [G[rng.integers(len(G))]]
    d = nearest_distances(G, np.array(C))
    for _ in range(1, k):
        C.append(G[int(np.argmax(d))])
        d = np.minimum(d, nearest_distances(G, C[-1][None, :]))
    return np.array(C)


def lloyd_minimax(G: np.ndarray, C: np.ndarray, max_iter: int = 500, tol: float = 1e-9,
                  patience: int = 5) -> tuple[float, np.ndarray]:
    """Alternate nearest-center assignment and per-cell 1-centers.

    Returns the best (grid radius, centers) seen; iteration stops after
    ``patience`` steps without an improvement of at least ``tol``.
    """
    C = C.copy()
    best_r = float(nearest_distances(G, C).max())
    best_C = C.copy()
    stale = 0
    for _ in range(max_iter):
        lab = np.argmax(G @ C.T, axis=1)
        newC = C.copy()
        for j in range(len(C)):
            cell = G[lab == j]
            if len(cell):
                newC[j] = spherical_one_center(cell).center.vec
        empty = [j for j in range(len(C)) if not (lab == j).any()]
        if empty:
            d = nearest_distances(G, newC)
            for j in empty:
                newC[j] = G[int(np.argmax(d))]
                d = np.minimum(d, nearest_distances(G, newC[j][None, :]))
        C = newC
        r = float(nearest_distances(G, C).max())
        if r < best_r - tol:
            best_r, best_C, stale = r, C.copy(), 0
        else:
            stale += 1
            if stale >= patience:
                break
    return best_r, best_C


def sphere_cov_estimate(n: int, k: int, starts: int = 16, grid_size: int = 4000, seed: int = 0,
                        max_iter: int = 500, tol: float = 1e-9) -> CoverEstimate:
    """Estimate cov_{S^n}(k) by multi-start minimax Lloyd descent on a grid.

    For n = 1 the closed form pi/k is returned with evenly spaced centers.
    Start s uses the derived seed (seed, s); start 0 is farthest-point
    seeded, the rest random. Ties go to the lowest start index.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        cs = [SpherePoint.from_angle(2 * math.pi * i / k) for i in range(k)]
        return CoverEstimate(1, k, math.pi / k, cs, 0.0, 0, seed, exact=True)
    G = grid_points(n, grid_size)
    res = grid_resolution(G)
    if k == 1:
        c = G[0]
        return CoverEstimate(n, 1, float(nearest_distances(G, c[None, :]).max()), [SpherePoint(tuple(c))],
                             res, 1, seed)

    def run(s: int):
        rng = np.random.default_rng([seed, s])
        C0 = _initial_centers(G, k, rng, farthest=(s % 2 == 0))
        return lloyd_minimax(G, C0, max_iter, tol)

    idx = list(range(max(1, starts)))
    if _threads() > 1:
        with ThreadPoolExecutor(_threads()) as ex:
            results = list(ex.map(run, idx))
    else:
        results = [run(s) for s in idx]
    radii = [r for r, _ in results]
    b = min(idx, key=lambda s: (radii[s], s))
    C = results[b][1]
    return CoverEstimate(n, k, radii[b], [SpherePoint(tuple(c)) for c in C], res, len(idx), seed,
                         start_radii=radii)
