"""Evaluate the connectivity, chromatic and homological-dimension bounds
for Cech complexes of spheres, and compare them with the exact circle case.

Every number placed in a report carries a provenance tag:
``exact`` (computed by an exact solver), ``formula`` (closed form), or
``estimated`` (optimizer output; never used in a hard assertion).
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable

from .complexes import (CECH, Graph, borsuk_graph, build_filtration, is_l_conic,
                        neighborhood_complex)
from .covering_packing import (FiniteMetric, chi_borsuk_s1, chromatic_number_exact, cov_s1,
                               numcov_s1, packing_number, snap_ceil, sphere_cov_estimate)
from .errors import BudgetExceeded
from .homology import SNF_BUDGET, betti_z2, conn_proxy_z2, hdim_z2, integral_homology
from .sphere_geom import Sample

EXACT, FORMULA, ESTIMATED = "exact", "formula", "estimated"


@dataclass
class BoundsReport:
    statement: str
    inputs: dict
    lhs: float | int | None
    rhs: float | int | None
    relation: str  # lhs <relation> rhs
    holds: bool
    provenance: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    vacuous: bool = False
    note: str = ""

    def to_json(self) -> str:
        def clean(x):
            if isinstance(x, float) and math.isinf(x):
                return "inf"
            if isinstance(x, dict):
                return {str(k): clean(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [clean(v) for v in x]
            return x
        return json.dumps(clean(asdict(self)), sort_keys=True)


_RELS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "<": lambda a, b: a < b,
}


def _report(statement, inputs, lhs, rhs, relation, provenance, **kw) -> BoundsReport:
    return BoundsReport(statement, inputs, lhs, rhs, relation, _RELS[relation](lhs, rhs), provenance, **kw)


def write_jsonl(reports, path=None) -> str:
    text = "".join(r.to_json() + "\n" for r in reports)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# --- circle ground truth --------------------------------------------------

@dataclass(frozen=True)
class GroundTruthS1:
    value: float
    kind: str  # "r" or "delta"
    k: int
    homotopy_sphere_dim: int
    connectivity: int
    interval: tuple  # half-open as printed: r in (lo, hi], delta in [lo, hi)


def s1_ground_truth(r: float | None = None, delta: float | None = None) -> GroundTruthS1:
    """Homotopy type of Cech(S^1; r), or connectivity of Cech(S^1; pi - delta).

    r in (pi k/(k+1), pi (k+1)/(k+2)] gives S^{2k+1};
    delta in [pi/(k+2), pi/(k+1)) gives connectivity 2k.
    """
    if (r is None) == (delta is None):
        raise ValueError("give exactly one of r, delta")
    if r is not None:
        if not 0 < r < math.pi:
            raise ValueError("r must lie in (0, pi)")
        k = snap_ceil(r / (math.pi - r)) - 1
        iv = (math.pi * k / (k + 1), math.pi * (k + 1) / (k + 2))
        return GroundTruthS1(r, "r", k, 2 * k + 1, 2 * k, iv)
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    k = snap_ceil(math.pi / delta) - 2
    iv = (math.pi / (k + 2), math.pi / (k + 1))
    return GroundTruthS1(delta, "delta", k, 2 * k + 1, 2 * k, iv)


def s_n(n: int) -> float:
    """Radial-projection diameter of a facet of the inscribed regular simplex."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n % 2:
        return math.acos(-(n + 1) / (n + 3))
    return math.acos(-math.sqrt(n / (n + 4)))


# --- covering providers ---------------------------------------------------

CovProvider = Callable[[int], "tuple[float, str]"]


def circle_cov_provider(k: int) -> tuple[float, str]:
    return cov_s1(k), FORMULA


def make_sphere_cov_provider(n: int, starts: int = 16, grid_size: int = 4000, seed: int = 0) -> CovProvider:
    if n == 1:
        return circle_cov_provider

    @lru_cache(maxsize=None)
    def provider(k: int) -> tuple[float, str]:
        if n == 2 and k in (2, 3):
            # For any three centres some unit vector is orthogonal to two of
            # them and non-positive against the third, so it sits at distance
            # >= pi/2 from all of them; the equator triple attains pi/2.
            return math.pi / 2, FORMULA
        est = sphere_cov_estimate(n, k, starts=starts, grid_size=grid_size, seed=seed)
        return est.radius_estimate, ESTIMATED
    return provider


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    provenance: tuple  # (lower tag, upper tag)


def theorem_main_interval(k: int, cov_provider: CovProvider = circle_cov_provider) -> Interval:
    """delta-range [cov(2k+2), 2 cov(k+1)] compatible with connectivity k - 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    lo, plo = cov_provider(2 * k + 2)
    up, pup = cov_provider(k + 1)
    return Interval(lo, 2 * up, (plo, pup))


def corollary_main_sandwich(delta: float, numcov_provider: Callable = numcov_s1) -> tuple[float, int]:
    """(numcov(delta)/2 - 2, numcov(delta/2) - 2) bracketing conn(Cech(S^n; pi - delta))."""
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    return numcov_provider(delta) / 2 - 2, numcov_provider(delta / 2) - 2


def check_theorem_s1(delta: float) -> list[BoundsReport]:
    gt = s1_ground_truth(delta=delta)
    k = gt.connectivity + 1  # theorem index: conn = k - 1
    iv = theorem_main_interval(k)
    lo_c, up_c = corollary_main_sandwich(delta)
    inp = {"n": 1, "delta": delta, "conn": gt.connectivity, "k": k}
    return [
        _report("cover_interval_lower", inp, iv.lower, delta, "<=", {"lhs": FORMULA, "rhs": "input"}),
        _report("cover_interval_upper", inp, delta, iv.upper, "<=", {"lhs": "input", "rhs": FORMULA}),
        _report("numcov_sandwich_lower", inp, lo_c, gt.connectivity, "<=", {"lhs": FORMULA, "rhs": FORMULA}),
        _report("numcov_sandwich_upper", inp, gt.connectivity, up_c, "<=", {"lhs": FORMULA, "rhs": FORMULA}),
    ]


def delta_grid(num: int = 1000, lo: float = 0.05, hi: float = math.pi - 0.05) -> list[float]:
    return [lo + (hi - lo) * i / (num - 1) for i in range(num)]


# --- conicity, Lovasz -----------------------------------------------------

@dataclass(frozen=True)
class BarmakBound:
    l: int
    bound: int


def barmak_lower(K, l_max: int) -> BarmakBound:
    """Largest l <= l_max with K l-conic, and the implied connectivity floor(l/2) - 1."""
    best = 0
    for l in range(1, l_max + 1):
        if not is_l_conic(K, l).holds:
            break
        best = l
    return BarmakBound(best, best // 2 - 1)


def lovasz_check(g: Graph, max_degree: int = 3, max_exact_chi: int = 40) -> BoundsReport:
    """chi(g) >= conn(N(g)) + 3 with homology connectivity standing in for conn."""
    chi = chromatic_number_exact(g, max_exact_chi)
    N = neighborhood_complex(g, max_dim=max_degree + 1)
    inp = {"vertices": g.vertex_count, "edges": len(g.edges), "max_degree": max_degree}
    if not N:
        return BoundsReport("lovasz_chi", inp, chi, None, ">=", True, {"lhs": EXACT},
                            vacuous=True, note="neighborhood complex is empty; bound is vacuous")
    conn = conn_proxy_z2(N, max_degree)
    return _report("lovasz_chi", inp, chi, conn + 3, ">=", {"lhs": EXACT, "rhs": EXACT},
                   witnesses={"conn_proxy": conn}, note="conn measured as Z2-homology connectivity")


def finite_circle_chi(N: int, delta: float) -> int:
    """chi of Bor(X; delta) for N evenly spaced circle points.

    The graph is the circular clique K_{N/q} with q the least step count
    exceeding delta, whose chromatic number is ceil(N/q).
    """
    step = 2 * math.pi / N
    q = math.floor(delta / step + 1e-12) + 1
    if q > N // 2:
        return 1
    return -(-N // q)


def circle_chi_check(N: int, delta: float, max_exact_chi: int = 40) -> BoundsReport:
    g = borsuk_graph(_even(N), delta)
    chi = chromatic_number_exact(g, max_exact_chi)
    truth = chi_borsuk_s1(delta)
    step = 2 * math.pi / N
    # closest boundary 2pi/m of the ceil(2pi/delta) staircase
    m = truth
    margin = min(abs(delta - 2 * math.pi / m), abs(2 * math.pi / (m - 1) - delta) if m > 1 else math.inf)
    asserted = margin >= step
    inp = {"N": N, "delta": delta, "margin_to_boundary": margin, "asserted": asserted}
    return _report("circle_chi", inp, chi, truth, "==" if asserted else "<=",
                   {"lhs": EXACT, "rhs": FORMULA}, witnesses={"finite_formula": finite_circle_chi(N, delta)},
                   note="" if asserted else "within 2pi/N of a staircase boundary: only chi <= ceil(2pi/delta) asserted")


def _even(N: int) -> Sample:
    from .sphere_geom import sample_evenly_spaced_circle
    return sample_evenly_spaced_circle(N)


# --- homological dimension ------------------------------------------------

def _ge_hdim(statement, inp, hdim, bound, prov, witnesses) -> BoundsReport:
    if hdim is None:
        ok = bound <= 0
        return BoundsReport(statement, inp, None, bound, ">=", ok, prov, witnesses, vacuous=ok,
                            note="acyclic complex (hdim none); " + ("vacuous: bound <= 0" if ok else
                                                                     "positive bound violated"))
    return _report(statement, inp, hdim, bound, ">=", prov, witnesses=witnesses)


def hdim_bound_check(sample: Sample, delta: float, max_points: int = 14,
                     snf_budget: int = SNF_BUDGET) -> list[BoundsReport]:
    """Z2 and Z homological-dimension bounds for the ambient Cech complex at pi - delta.

    Builds the complete complex (all dimensions), so the sample must be small.
    """
    if len(sample) > max_points:
        raise BudgetExceeded(f"{len(sample)} points exceed the full-complex limit {max_points}")
    if not 0 < delta < math.pi:
        raise ValueError("delta must lie in (0, pi)")
    f = build_filtration(sample, CECH, len(sample) - 1, math.pi - delta)
    K = set(f.entries)
    h2 = hdim_z2(K)
    pack, wit = packing_number(FiniteMetric.from_sample(sample), delta)
    inp = {"N": len(sample), "n": sample.dim, "delta": delta, "simplices": len(K), "seed": sample.seed}
    w = {"packing_witness": wit, "betti_z2": betti_z2(K).nonzero()}
    prov = {"lhs": EXACT, "rhs": EXACT}
    out = [_ge_hdim("pack_hdim_z2", inp, h2, pack - 2, prov, w)]
    # The clique argument lives on the neighbourhood complex of the Borsuk graph.
    # For finite X it can be a proper subcomplex of the ambient Cech complex,
    # so the bound is also reported there.
    NK = neighborhood_complex(borsuk_graph(sample, delta))
    nb = {"packing_witness": wit, "betti_z2": betti_z2(NK).nonzero(), "equals_cech": NK == K}
    out.append(_ge_hdim("pack_hdim_z2_neighborhood", {**inp, "simplices": len(NK)}, hdim_z2(NK),
                        pack - 2, prov, nb))
    if len(K) <= snf_budget:
        H = integral_homology(K)
        hz = H.hdim()
        wz = {"packing_witness": wit, "torsion_free": H.torsion_free(),
              "integral": {d: [f_, t] for d, (f_, t) in H.groups.items() if f_ or t}}
        out.append(_ge_hdim("pack_hdim_z", inp, hz, pack - 3, prov, wz))
        if H.torsion_free():
            out.append(_ge_hdim("pack_hdim_z_torsion_free", inp, hz, pack - 2, prov, wz))
        if h2 is not None:
            out.append(_ge_hdim("uct_hdim_z_vs_z2", inp, hz, h2 - 1, prov, wz))
    return out


# --- interval tables ------------------------------------------------------

@dataclass
class IntervalRow:
    k: int
    lower: float
    upper: float
    provenance: str
    truth_lower: float | None = None
    truth_upper: float | None = None


@dataclass
class IntervalTable:
    n: int
    rows: list
    tight_upper: bool | None = None  # n = 1 only

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("k,lower,upper,provenance,truth_lower,truth_upper\n")
        for r in self.rows:
            tl = "" if r.truth_lower is None else repr(r.truth_lower)
            tu = "" if r.truth_upper is None else repr(r.truth_upper)
            buf.write(f"{r.k},{r.lower!r},{r.upper!r},{r.provenance},{tl},{tu}\n")
        return buf.getvalue()

    def ratios(self) -> list[float]:
        """truth_lower / lower per row (n = 1): the lower-bound slack factor."""
        return [r.truth_lower / r.lower for r in self.rows if r.truth_lower is not None]


def emit_interval_data(n: int, k_max: int, cov_provider: CovProvider | None = None) -> IntervalTable:
    """delta-intervals allowed by the main theorem.

    n = 1: row k is connectivity 2k (theorem index 2k+1), i.e.
    [cov(4k+4), 2 cov(2k+2)] = [pi/(4k+4), pi/(k+1)], next to the exact
    range [pi/(k+2), pi/(k+1)); rows k = 0..k_max.
    n >= 2: row k is connectivity k - 1, [cov(2k+2), 2 cov(k+1)]; rows 1..k_max.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if cov_provider is None:
        cov_provider = make_sphere_cov_provider(n)
    rows = []
    if n == 1:
        tight = True
        for k in range(0, k_max + 1):
            iv = theorem_main_interval(2 * k + 1, cov_provider)
            tl, tu = math.pi / (k + 2), math.pi / (k + 1)
            tight &= iv.upper == tu
            rows.append(IntervalRow(k, iv.lower, iv.upper, _combine(iv.provenance), tl, tu))
        return IntervalTable(1, rows, tight)
    for k in range(1, k_max + 1):
        iv = theorem_main_interval(k, cov_provider)
        rows.append(IntervalRow(k, iv.lower, iv.upper, _combine(iv.provenance)))
    return IntervalTable(n, rows)


def _combine(tags) -> str:
    return ESTIMATED if ESTIMATED in tags else (EXACT if all(t == EXACT for t in tags) else FORMULA)


# --- finite evenly spaced circle samples -----------------------------------

def finite_circle_cech_betti(N: int, r: float) -> dict:
    """Reduced Betti numbers of Cech(X; r) for N evenly spaced circle points.

    A run of consecutive points spanning j steps has 1-center radius
    j pi / N, so the complex is the cyclic complex whose simplices are the
    vertex sets inside some window of j + 1 consecutive points, with j the
    largest span satisfying j pi / N < r. With t = j / N it is homotopy
    equivalent to S^{2l+1} when l/(l+1) < t < (l+1)/(l+2), and to a wedge of
    N - j - 1 copies of S^{2l} when t = l/(l+1).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    j = max(0, math.ceil(r * N / math.pi) - 1)
    while (j + 1) * math.pi / N < r:
        j += 1
    while j > 0 and j * math.pi / N >= r:
        j -= 1
    if j >= N - 1:
        return {}
    l = 0
    while (l + 1) * N <= j * (l + 2):
        l += 1
    # now l/(l+1) <= j/N < (l+1)/(l+2)
    if j * (l + 1) == l * N:
        return {2 * l: N - j - 1}
    return {2 * l + 1: 1}
