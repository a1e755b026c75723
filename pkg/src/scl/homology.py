"""Reduced simplicial homology: Z2 via column reduction (with clearing),
persistence barcodes, and integral homology via Smith normal form.

Z2 columns are Python ints used as bitsets; the pivot of a column is its
highest set bit.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from itertools import combinations

from .complexes import FilteredComplex, faces
from .errors import BudgetExceeded

DEFAULT_REDUCTION_BUDGET = 20_000_000
SNF_BUDGET = 50_000


@dataclass
class BettiTable:
    betti: dict
    max_degree: int
    scale: float | None = None
    is_empty: bool = False

    def __getitem__(self, d: int) -> int:
        return self.betti.get(d, 0)

    def nonzero(self) -> dict:
        return {d: b for d, b in sorted(self.betti.items()) if b}

    def to_json(self) -> str:
        return json.dumps({"betti": {str(d): b for d, b in sorted(self.betti.items())},
                           "max_degree": self.max_degree, "scale": self.scale,
                           "is_empty": self.is_empty})


@dataclass
class Barcode:
    bars: list = field(default_factory=list)  # (degree, birth, death)
    max_dim: int = 0

    def in_degree(self, d: int) -> list:
        return [(b, e) for k, b, e in self.bars if k == d]

    def betti_at(self, r: float, reduced: bool = True) -> dict:
        """Betti numbers of the open-convention complex at scale r.

        A bar [birth, death) covers r iff birth < r <= death. Only degrees
        below the filtration's max_dim are exact.
        """
        out = {d: 0 for d in range(self.max_dim + 1)}
        for k, b, e in self.bars:
            if b < r <= e:
                out[k] += 1
        if reduced and out.get(0, 0) > 0:
            out[0] -= 1
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("degree,birth,death\n")
        for k, b, e in self.bars:
            buf.write(f"{k},{b!r},{'inf' if math.isinf(e) else repr(e)}\n")
        return buf.getvalue()


@dataclass
class IntegralHomology:
    groups: dict  # degree -> (free rank, torsion coefficients)

    def __getitem__(self, d: int):
        return self.groups.get(d, (0, []))

    def torsion_free(self) -> bool:
        return all(not t for _, t in self.groups.values())

    def hdim(self) -> int | None:
        nz = [d for d, (f, t) in self.groups.items() if f or t]
        return max(nz) if nz else None


# --- Z2 reduction ---------------------------------------------------------

def _by_dimension(K) -> list:
    top = max((len(s) for s in K), default=0)
    dims = [[] for _ in range(top)]
    for s in K:
        dims[len(s) - 1].append(s)
    for L in dims:
        L.sort()
    return dims


def _boundary_ranks_z2(dims: list, top: int) -> list:
    """rank of d_d : C_d -> C_{d-1} for d = 0..top (d_0 = 0), with clearing."""
    ranks = [0] * (top + 2)
    cleared: set = set()
    for d in range(top, 0, -1):
        if d >= len(dims):
            continue
        rows = {s: i for i, s in enumerate(dims[d - 1])}
        pivots: dict = {}
        new_cleared = set()
        for s in dims[d]:
            if s in cleared:
                continue
            c = 0
            for f in faces(s):
                c ^= 1 << rows[f]
            while c:
                p = c.bit_length() - 1
                q = pivots.get(p)
                if q is None:
                    pivots[p] = c
                    new_cleared.add(dims[d - 1][p])
                    break
                c ^= q
        ranks[d] = len(pivots)
        cleared = new_cleared
    return ranks


def _check_reduction_budget(K, budget: int) -> None:
    if len(K) > budget:
        raise BudgetExceeded(f"{len(K)} simplices exceed the reduction budget {budget}")


def betti_z2(K, max_degree: int | None = None, budget: int = DEFAULT_REDUCTION_BUDGET,
             scale: float | None = None) -> BettiTable:
    """Reduced Z2 Betti numbers in degrees 0..max_degree.

    Uses simplices up to dimension max_degree + 1, so degree max_degree is
    exact whenever K carries its (max_degree + 1)-simplices. An empty complex
    reports all zeros with ``is_empty`` set (its only reduced class lives in
    degree -1).
    """
    _check_reduction_budget(K, budget)
    if not K:
        md = 0 if max_degree is None else max_degree
        return BettiTable({d: 0 for d in range(md + 1)}, md, scale, True)
    dims = _by_dimension(K)
    top_dim = len(dims) - 1
    md = top_dim if max_degree is None else max_degree
    use = min(top_dim, md + 1)
    dims = dims[: use + 1]
    ranks = _boundary_ranks_z2(dims, use)
    betti = {}
    for d in range(md + 1):
        n_d = len(dims[d]) if d < len(dims) else 0
        r_d = ranks[d] if d <= use else 0
        r_up = ranks[d + 1] if d + 1 <= use else 0
        betti[d] = n_d - r_d - r_up
    betti[0] -= 1
    return BettiTable(betti, md, scale, False)


def hdim_z2(K, max_degree: int | None = None, budget: int = DEFAULT_REDUCTION_BUDGET) -> int | None:
    bt = betti_z2(K, max_degree, budget)
    nz = [d for d, b in bt.betti.items() if b]
    return max(nz) if nz else None


def conn_proxy_z2(K, max_degree: int, budget: int = DEFAULT_REDUCTION_BUDGET) -> int:
    """Homology connectivity: largest k <= max_degree - 1 with reduced
    H_i(K; Z2) = 0 for all i <= k, or -1 if H_0 already fails.

    Equals homotopy connectivity only for simply connected complexes.
    """
    bt = betti_z2(K, max_degree, budget)
    k = -1
    for d in range(0, max_degree):
        if bt[d] != 0:
            break
        k = d
    return k


def euler_characteristic(K) -> int:
    return sum((-1) ** (len(s) - 1) for s in K)


# --- persistence ----------------------------------------------------------

def persistence(f: FilteredComplex, keep_zero_length: bool = False,
                budget: int = DEFAULT_REDUCTION_BUDGET) -> Barcode:
    """Standard Z2 persistence pairing in the order (value, dim, lex).

    Degree-0 bars are unreduced: at small r there is one bar per vertex.
    Bars in degree max_dim never die (no higher simplices are stored).
    """
    _check_reduction_budget(f.entries, budget)
    order = f.ordered()
    val = f.entries
    by_dim: list = [[] for _ in range(f.max_dim + 1)]
    for s in order:
        by_dim[len(s) - 1].append(s)
    pos = [{s: i for i, s in enumerate(L)} for L in by_dim]
    paired_creator: dict = {}  # (d-1)-simplex -> killer d-simplex
    cleared: set = set()
    for d in range(len(by_dim) - 1, 0, -1):
        rows = pos[d - 1]
        low_of: dict = {}
        new_cleared = set()
        for s in by_dim[d]:
            if s in cleared:
                continue
            c = 0
            for t in faces(s):
                c ^= 1 << rows[t]
            while c:
                p = c.bit_length() - 1
                q = low_of.get(p)
                if q is None:
                    low_of[p] = c
                    creator = by_dim[d - 1][p]
                    paired_creator[creator] = s
                    new_cleared.add(creator)
                    break
                c ^= q
        cleared = new_cleared
    killers = set(paired_creator.values())
    bars = []
    for s in order:
        if s in killers:
            continue
        d = len(s) - 1
        b = val[s]
        k = paired_creator.get(s)
        e = val[k] if k is not None else math.inf
        if e > b or keep_zero_length or math.isinf(e):
            bars.append((d, b, e))
    bars.sort(key=lambda x: (x[0], x[1], x[2]))
    return Barcode(bars, f.max_dim)


# --- integral homology ----------------------------------------------------

def _boundary_int(dims: list, d: int) -> tuple[dict, int, int]:
    """Sparse signed boundary d_d as {row: {col: val}}; d = 0 is augmentation."""
    if d == 0:
        return {0: {j: 1 for j in range(len(dims[0]))}}, 1, len(dims[0])
    rows = {s: i for i, s in enumerate(dims[d - 1])}
    M: dict = {}
    for j, s in enumerate(dims[d]):
        for i, t in enumerate(faces(s)):
            M.setdefault(rows[t], {})[j] = -1 if i % 2 else 1
    return M, len(dims[d - 1]), len(dims[d])


def _dense_snf_diagonal(A: list) -> list:
    """Invariant factors of a dense integer matrix (list of row lists)."""
    A = [row[:] for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # pick the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: p must divide the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
                continue
            # move the smallest nonzero entry of row/col t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def smith_invariants(M: dict, nrows: int, ncols: int) -> list:
    """Nonzero invariant factors of a sparse integer matrix."""
    rows = {i: dict(r) for i, r in M.items() if r}
    cols: dict = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                if v in (1, -1):
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best, pivot = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pivot is None:
            break
        i, j = pivot
        prow = rows.pop(i)
        pv = prow[j]
        for k in prow:
            cols[k].discard(i)
        for i2 in list(cols[j]):
            r2 = rows[i2]
            q = r2[j] * pv  # pv = +-1, so r2 -= (r2[j]/pv) * prow
            for k, v in prow.items():
                nv = r2.get(k, 0) - q * v
                if nv:
                    if k not in r2:
                        cols[k].add(i2)
                    r2[k] = nv
                elif k in r2:
                    del r2[k]
                    cols[k].discard(i2)
            if not r2:
                del rows[i2]
        del cols[j]
        units += 1
    rest_rows = sorted(i for i, r in rows.items() if r)
    rest_cols = sorted({j for r in rows.values() for j in r})
    diag = [1] * units
    if rest_rows and rest_cols:
        ci = {j: k for k, j in enumerate(rest_cols)}
        dense = [[0] * len(rest_cols) for _ in rest_rows]
        for a, i in enumerate(rest_rows):
            for j, v in rows[i].items():
                dense[a][ci[j]] = v
        diag += _dense_snf_diagonal(dense)
    return [x for x in diag if x]


def integral_homology(K, max_degree: int | None = None, budget: int = SNF_BUDGET) -> IntegralHomology:
    """Reduced integral homology (free rank, torsion) in degrees 0..max_degree."""
    if len(K) > budget:
        raise BudgetExceeded(f"{len(K)} simplices exceed the Smith normal form budget {budget}")
    if not K:
        return IntegralHomology({})
    dims = _by_dimension(K)
    top = len(dims) - 1
    md = top if max_degree is None else max_degree
    use = min(top, md + 1)
    rank = {}
    inv = {}
    for d in range(0, use + 1):
        M, nr, nc = _boundary_int(dims, d)
        invs = smith_invariants(M, nr, nc)
        rank[d] = len(invs)
        inv[d] = invs
    groups = {}
    for d in range(md + 1):
        n_d = len(dims[d]) if d <= top else 0
        free = n_d - rank.get(d, 0) - rank.get(d + 1, 0)
        tors = sorted(x for x in inv.get(d + 1, []) if x > 1)
        groups[d] = (free, tors)
    return IntegralHomology(groups)


def hdim_z(K, max_degree: int | None = None, budget: int = SNF_BUDGET) -> int | None:
    return integral_homology(K, max_degree, budget).hdim()


def cone(K, apex: int | None = None) -> set:
    """Simplicial cone over K with a fresh apex vertex."""
    if apex is None:
        apex = max((max(s) for s in K), default=-1) + 1
    C = set(K)
    C.add((apex,))
    for s in K:
        C.add(tuple(sorted(s + (apex,))))
    return C


def boundary_of_simplex(d: int) -> set:
    """Boundary of the (d+1)-simplex on vertices 0..d+1: a triangulated S^d."""
    V = range(d + 2)
    return {t for k in range(1, d + 2) for t in combinations(V, k)}
