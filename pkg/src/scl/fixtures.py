"""Small named graphs and complexes used by tests and the CLI."""
from __future__ import annotations

from itertools import combinations

from .complexes import Graph, closure


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, frozenset(outer + spokes + inner))


def complete_graph(m: int) -> Graph:
    return Graph(m, frozenset(combinations(range(m), 2)))


def cycle_graph(m: int) -> Graph:
    return Graph(m, frozenset((i, (i + 1) % m) for i in range(m)))


def edgeless(m: int) -> Graph:
    return Graph(m, frozenset())


def hollow_triangle() -> set:
    return closure([(0, 1), (1, 2), (0, 2)])


def full_simplex(d: int) -> set:
    return closure([tuple(range(d + 1))])


def octahedron() -> set:
    """Boundary of the cross-polytope on {0,1},{2,3},{4,5}: a 2-sphere."""
    return closure((a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5))


RP2_FACETS = [(0, 1, 2), (0, 1, 4), (0, 2, 3), (0, 3, 5), (0, 4, 5),
              (1, 2, 5), (1, 3, 4), (1, 3, 5), (2, 3, 4), (2, 4, 5)]


def rp2() -> set:
    """Six-vertex real projective plane."""
    return closure(RP2_FACETS)
