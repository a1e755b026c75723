import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_reduced_betti_z2, sympy_integral_homology
from scl.complexes import CECH, VR, build_filtration, closure, complex_at_scale, neighborhood_complex
from scl.errors import BudgetExceeded
from scl.fixtures import full_simplex, hollow_triangle, octahedron, petersen, rp2
from scl.homology import (betti_z2, boundary_of_simplex, cone, conn_proxy_z2, euler_characteristic,
                          hdim_z, hdim_z2, integral_homology, persistence, smith_invariants)
from scl.sphere_geom import sample_evenly_spaced_circle, sample_uniform


def nonzero(b: dict, top: int = 99) -> dict:
    return {d: v for d, v in b.items() if v and d <= top}


def random_complex(rng: random.Random, max_v: int = 12, max_facet: int = 5) -> set:
    nv = rng.randint(1, max_v)
    facets = [rng.sample(range(nv), rng.randint(1, min(max_facet, nv))) for _ in range(rng.randint(1, 12))]
    return closure(facets)


@st.composite
def complexes(draw, max_v=8, max_facet=4):
    nv = draw(st.integers(1, max_v))
    facets = draw(st.lists(st.sets(st.integers(0, nv - 1), min_size=1, max_size=max_facet),
                           min_size=1, max_size=8))
    return closure(facets)


def test_betti_examples():
    assert betti_z2({(0,)}).nonzero() == {}
    for d in (1, 2, 3):
        assert betti_z2(boundary_of_simplex(d)).nonzero() == {d: 1}
    assert betti_z2(octahedron()).nonzero() == {2: 1}
    e = betti_z2(set())
    assert e.is_empty and e.nonzero() == {}


def test_betti_json():
    d = json.loads(betti_z2(octahedron()).to_json())
    assert d["betti"]["2"] == 1


def test_betti_matches_naive_oracle_200_cases():
    rng = random.Random(20240601)
    for _ in range(200):
        K = random_complex(rng)
        assert betti_z2(K).betti == naive_reduced_betti_z2(K)


@given(complexes())
@settings(max_examples=100, deadline=None)
def test_euler_equals_alternating_betti(K):
    b = betti_z2(K).betti
    # reduced Betti numbers: chi = 1 + sum (-1)^d b_d
    assert euler_characteristic(K) == 1 + sum((-1) ** d * v for d, v in b.items())


@given(complexes(), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_order_invariance(K, rnd):
    V = sorted({v for s in K for v in s})
    perm = V[:]
    rnd.shuffle(perm)
    m = dict(zip(V, perm))
    L = {tuple(sorted(m[v] for v in s)) for s in K}
    assert betti_z2(K).betti == betti_z2(L).betti


def test_hdim_and_conn_examples():
    assert hdim_z2(boundary_of_simplex(2)) == 2
    assert hdim_z2({(0,)}) is None
    assert hdim_z2(neighborhood_complex(petersen())) == 1
    assert conn_proxy_z2(boundary_of_simplex(2), 3) == 1
    assert conn_proxy_z2(hollow_triangle(), 3) == 0
    assert conn_proxy_z2({(0,), (1,)}, 3) == -1


def test_conn_proxy_capped_by_max_degree():
    assert conn_proxy_z2(full_simplex(5), 3) == 2


def test_euler_examples():
    assert euler_characteristic({(0,)}) == 1
    assert euler_characteristic(hollow_triangle()) == 0
    assert euler_characteristic(boundary_of_simplex(2)) == 2


# --- persistence -----------------------------------------------------------------

def test_three_point_bar():
    f = build_filtration(sample_evenly_spaced_circle(3), CECH, 2)
    bc = persistence(f)
    one = bc.in_degree(1)
    assert len(one) == 1
    assert one[0][0] == pytest.approx(math.pi / 3) and one[0][1] == pytest.approx(2 * math.pi / 3)
    assert nonzero(bc.betti_at(math.pi / 2)) == {1: 1}
    assert nonzero(bc.betti_at(2 * math.pi / 3 + 1e-9)) == {}


def test_degree_zero_bars_count_points():
    s = sample_uniform(2, 9, 4)
    bc = persistence(build_filtration(s, CECH, 2))
    assert bc.betti_at(1e-12, reduced=False)[0] == 9


def test_barcode_csv():
    bc = persistence(build_filtration(sample_evenly_spaced_circle(3), CECH, 2))
    lines = bc.to_csv().splitlines()
    assert lines[0] == "degree,birth,death"
    assert any(l.endswith(",inf") for l in lines[1:])


@pytest.mark.parametrize("flavor", [CECH, VR])
@pytest.mark.parametrize("seed", range(6))
def test_persistence_matches_direct_betti(flavor, seed):
    rng = random.Random(seed)
    n = 1 + seed % 2
    s = sample_uniform(n, 9, seed)
    f = build_filtration(s, flavor, 4, math.pi)
    bc = persistence(f)
    values = sorted(set(f.entries.values()))
    radii = [rng.uniform(0.01, 3.1) for _ in range(14)] + values[1:7]
    for r in radii:
        K = complex_at_scale(f, r)
        direct = {d: v for d, v in betti_z2(K, max_degree=3).betti.items() if v}
        assert nonzero(bc.betti_at(r), 3) == {d: v for d, v in direct.items() if d <= 3}, r


def test_persistence_is_deterministic():
    f = build_filtration(sample_uniform(2, 8, 1), CECH, 3)
    assert persistence(f).bars == persistence(f).bars


# --- integral homology -------------------------------------------------------------

def test_integral_examples():
    H = integral_homology(hollow_triangle())
    assert H.groups[1] == (1, [])
    P = integral_homology(rp2())
    assert P.groups[1] == (0, [2]) and P.groups[2] == (0, [])
    assert not P.torsion_free()
    assert cone(rp2()) and integral_homology(cone(rp2())).hdim() is None


def test_rp2_z2_sees_the_torsion():
    assert betti_z2(rp2()).nonzero() == {1: 1, 2: 1}
    assert hdim_z2(rp2()) == 2 and hdim_z(rp2()) == 1


def test_integral_matches_sympy():
    rng = random.Random(7)
    cases = [rp2(), octahedron(), hollow_triangle()] + [random_complex(rng, 7, 4) for _ in range(25)]
    for K in cases:
        ref = sympy_integral_homology(K)
        got = integral_homology(K).groups
        for d, v in ref.items():
            assert got.get(d, (0, [])) == v, (d, K)


def test_smith_invariants_small():
    # [[2, 4], [6, 8]] has invariant factors 2, 4
    assert smith_invariants({0: {0: 2, 1: 4}, 1: {0: 6, 1: 8}}, 2, 2) == [2, 4]


def test_smith_invariants_match_sympy_on_random_matrices():
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    rng = random.Random(3)
    for _ in range(60):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.choice([0, 0, 1, -1, 2, 3, -4]) for _ in range(c)] for _ in range(r)]
        S = smith_normal_form(Matrix(A), domain=ZZ)
        ref = sorted(abs(int(S[i, i])) for i in range(min(r, c)) if S[i, i] != 0)
        M = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(A)}
        assert sorted(smith_invariants(M, r, c)) == ref, A


def test_integral_budget():
    with pytest.raises(BudgetExceeded):
        integral_homology(full_simplex(12), budget=100)


@given(complexes(max_v=7))
@settings(max_examples=60, deadline=None)
def test_uct_relation(K):
    hz, h2 = hdim_z(K), hdim_z2(K)
    if h2 is not None:
        assert hz is not None and hz >= h2 - 1
    # Z2 sees everything Z does: free parts and torsion both survive mod 2
    if hz is not None:
        assert h2 is not None and h2 >= hz


@given(complexes(max_v=7))
@settings(max_examples=40, deadline=None)
def test_cone_is_acyclic(K):
    C = cone(K)
    assert betti_z2(C).nonzero() == {}
    assert integral_homology(C).hdim() is None
