"""Geodesic geometry of the round sphere S^n (diameter pi).

Points are unit vectors in R^{n+1}; the distance is ``arccos(x . y)``.
The central routine is the exact spherical minimax 1-center, whose radius
is the Cech filtration value of a simplex.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

GEOM_TOL = 1e-9
NORM_TOL = 1e-12
# Relative rank tolerance for support subsets (QR diagonal vs. spread).
_SINGULAR_TOL = 1e-10
# Above this many points the exact enumeration is replaced by support iteration.
_ENUM_LIMIT = 12


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple[float, ...]

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a point of S^n needs n+1 >= 2 coordinates")
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0 or not np.isfinite(nrm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        object.__setattr__(self, "coords", tuple(float(c) for c in v / nrm))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.coords)

    @classmethod
    def from_angle(cls, theta: float) -> "SpherePoint":
        return cls((math.cos(theta), math.sin(theta)))

    def angle(self) -> float:
        """Angle in [0, 2pi) of a point of S^1."""
        if self.dim != 1:
            raise ValueError("angle() is only defined on S^1")
        return math.atan2(self.coords[1], self.coords[0]) % (2 * math.pi)


@dataclass(frozen=True)
class Sample:
    points: tuple[SpherePoint, ...]
    label: str = ""
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("a sample must be nonempty")
        dims = {p.dim for p in self.points}
        if len(dims) != 1:
            raise ValueError(f"mixed dimensions in sample: {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> SpherePoint:
        return self.points[i]

    @property
    def dim(self) -> int:
        return self.points[0].dim

    @property
    def array(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    def angles(self) -> np.ndarray:
        if self.dim != 1:
            raise ValueError("angles() is only defined on S^1")
        return np.array([p.angle() for p in self.points])

    def distance_matrix(self) -> np.ndarray:
        X = self.array
        D = pair_angles(X, X)
        D = np.minimum(D, D.T)  # exact symmetry
        np.fill_diagonal(D, 0.0)
        return D

    @classmethod
    def from_array(cls, X, label: str = "", seed: int | None = None) -> "Sample":
        return cls(tuple(SpherePoint(tuple(row)) for row in np.asarray(X, dtype=float)), label, seed)

    @classmethod
    def from_angles(cls, angles: Iterable[float], label: str = "", seed: int | None = None) -> "Sample":
        return cls(tuple(SpherePoint.from_angle(t) for t in angles), label, seed)


@dataclass(frozen=True)
class OneCenterResult:
    center: SpherePoint
    radius: float
    support: frozenset = field(default_factory=frozenset)


def _check_same_dim(x: SpherePoint, y: SpherePoint) -> None:
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: S^{x.dim} vs S^{y.dim}")


def geodesic_distance(x: SpherePoint, y: SpherePoint) -> float:
    _check_same_dim(x, y)
    return float(pair_angles(x.vec[None, :], y.vec[None, :])[0, 0])


def antipode(x: SpherePoint) -> SpherePoint:
    # Exact negation; renormalizing would perturb the coordinates by an ulp.
    p = object.__new__(SpherePoint)
    object.__setattr__(p, "coords", tuple(-c for c in x.coords))
    return p


def pair_angles(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Geodesic distances between the unit rows of A and of B.

    Evaluates arccos(a . b) as 2 atan2(|a - b|, |a + b|), which is the same
    angle for unit vectors but stays accurate when a is close to b or -b,
    where arccos of a rounded dot product loses about half the digits.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    diff = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    summ = np.linalg.norm(A[:, None, :] + B[None, :, :], axis=2)
    return 2.0 * np.arctan2(diff, summ)


def _as_matrix(points) -> np.ndarray:
    if isinstance(points, Sample):
        return points.array
    if isinstance(points, np.ndarray):
        X = np.asarray(points, dtype=float)
        return X / np.linalg.norm(X, axis=1, keepdims=True)
    pts = list(points)
    if not pts:
        raise ValueError("need at least one point")
    dims = {p.dim for p in pts}
    if len(dims) != 1:
        raise ValueError(f"mixed dimensions: {sorted(dims)}")
    return np.array([p.coords for p in pts])


@lru_cache(maxsize=None)
def _subsets(m: int, size: int) -> np.ndarray:
    return np.array(list(combinations(range(m), size)), dtype=np.intp).reshape(-1, size)


def _candidate_centers(X: np.ndarray) -> np.ndarray:
    """All stationary-point candidates for the minimax center of the rows of X.

    Two families: for every linearly independent subset T of size <= n+1 the
    unit vectors in span(T) with equal inner product against T, and (for
    rank-n subsets) the unit normals of span(T), which realise radius pi/2
    when the optimum sits on a closed hemisphere boundary.
    """
    m, dim = X.shape  # dim = n + 1
    out = [X, -X]
    for size in range(2, min(m, dim) + 1):
        A = X[_subsets(m, size)]  # (s, size, dim)
        # z in span(A) with equal inner products against A is a_0 minus its
        # projection onto span{a_i - a_0}. Orthonormalizing the differences
        # keeps this accurate for tightly clustered points, where the Gram
        # matrix of A itself is nearly singular.
        Dt = (A[:, 1:] - A[:, :1]).transpose(0, 2, 1)  # (s, dim, size-1)
        Q, R = np.linalg.qr(Dt)
        scale = np.linalg.norm(Dt, axis=1).max(axis=1)
        diag = np.abs(np.diagonal(R, axis1=1, axis2=2)).min(axis=1)
        a0 = A[:, 0, :]
        u = a0 - (Q @ (Q.transpose(0, 2, 1) @ a0[..., None]))[..., 0]
        nrm = np.linalg.norm(u, axis=1)
        ok = (diag > _SINGULAR_TOL * scale) & (nrm > _SINGULAR_TOL)
        if not ok.any():
            continue
        u = u[ok] / nrm[ok, None]
        out.append(u)
        out.append(-u)
    # Unit normals of hyperplanes spanned by n independent points.
    if dim >= 2 and m >= dim - 1:
        idx = _subsets(m, dim - 1)
        A = X[idx]
        # Last right-singular vector spans the orthogonal complement.
        _, s, vt = np.linalg.svd(A)
        full = s[:, -1] > 1e-8 if s.shape[1] else np.ones(len(A), bool)
        nrm = vt[full, -1, :]
        out.append(nrm)
        out.append(-nrm)
    # Points spanning <= n-1 dimensions: anything orthogonal to all of them.
    _, s, vt = np.linalg.svd(X)
    rank = int((s > 1e-8).sum())
    if rank < dim - 1:
        z = vt[-1]
        out.append(z[None, :])
    return np.vstack(out)


def _eval_centers(X: np.ndarray, Z: np.ndarray):
    ang = pair_angles(Z, X)
    return ang.max(axis=1), ang


def _result(X: np.ndarray, z: np.ndarray, tol: float) -> OneCenterResult:
    ang = pair_angles(X, z[None, :])[:, 0]
    r = float(ang.max())
    support = frozenset(int(i) for i in np.flatnonzero(ang >= r - tol))
    return OneCenterResult(SpherePoint(tuple(z)), r, support)


def _one_center_enum(X: np.ndarray, tol: float) -> OneCenterResult:
    Z = _candidate_centers(X)
    radii, _ = _eval_centers(X, Z)
    best = int(np.argmin(radii))
    return _result(X, Z[best], tol)


def _one_center_iterative(X: np.ndarray, tol: float) -> OneCenterResult:
    # Support iteration: solve exactly on a small working set, add the farthest
    # violator, repeat. Radius increases strictly, so it terminates.
    dim = X.shape[1]
    work = [0]
    far = int(np.argmin(X @ X[0]))
    if far != 0:
        work.append(far)
    for _ in range(10 * len(X) + 10):
        sub = X[work]
        res = _one_center_enum(sub, tol)
        z = np.asarray(res.center.coords)
        ang = pair_angles(X, z[None, :])[:, 0]
        j = int(np.argmax(ang))
        if ang[j] <= res.radius + tol:
            return _result(X, z, tol)
        keep = [work[i] for i in sorted(res.support)][: dim + 1]
        if j in keep:  # numerical stall
            return _result(X, z, tol)
        work = keep + [j]
    return _result(X, z, tol)


def _circle_center_from_matrix(X: np.ndarray, tol: float) -> OneCenterResult:
    ang = np.arctan2(X[:, 1], X[:, 0]) % (2 * math.pi)
    return circle_one_center(ang, tol=tol)


def spherical_one_center(points, tol: float = GEOM_TOL) -> OneCenterResult:
    """Global minimizer of ``z -> max_i d(x_i, z)`` over S^n.

    Small inputs are solved by enumerating every support configuration
    (exact, including the nonconvex regime radius >= pi/2). Larger inputs use
    support iteration, which is exact while the points fit in an open
    hemisphere; if the iterate reaches pi/2 the enumeration is used instead.
    """
    X = _as_matrix(points)
    if len(X) == 1:
        return OneCenterResult(SpherePoint(tuple(X[0])), 0.0, frozenset({0}))
    if len(X) <= _ENUM_LIMIT:
        return _one_center_enum(X, tol)
    res = _one_center_iterative(X, tol)
    if res.radius < math.pi / 2 - 1e-6:
        return res
    return _one_center_enum(X, tol)


def circle_one_center(angles: Sequence[float], tol: float = GEOM_TOL) -> OneCenterResult:
    """Exact 1-center on S^1: the complement of the largest circular gap."""
    a = np.sort(np.mod(np.asarray(angles, dtype=float), 2 * math.pi))
    if a.size == 0:
        raise ValueError("need at least one angle")
    gaps = np.diff(np.append(a, a[0] + 2 * math.pi))
    g = int(np.argmax(gaps))
    g_max = float(gaps[g])
    radius = max(0.0, (2 * math.pi - g_max) / 2)
    # Covering arc runs from a[g+1] counterclockwise to a[g].
    start = a[(g + 1) % a.size]
    mid = start + radius
    center = SpherePoint.from_angle(mid)
    d = np.abs(np.mod(np.asarray(angles, dtype=float) - mid + math.pi, 2 * math.pi) - math.pi)
    support = frozenset(int(i) for i in np.flatnonzero(d >= radius - tol))
    return OneCenterResult(center, radius, support)


# --- samplers -------------------------------------------------------------

def sample_evenly_spaced_circle(N: int) -> Sample:
    if N < 1:
        raise ValueError("N must be >= 1")
    return Sample.from_angles((2 * math.pi * i / N for i in range(N)), label=f"circle_even_{N}")


def sample_uniform(n: int, N: int, seed: int) -> Sample:
    if N < 1 or n < 1:
        raise ValueError("need n >= 1 and N >= 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, n + 1))
    return Sample.from_array(X, label=f"uniform_S{n}_{N}", seed=seed)


def fibonacci_array(N: int) -> np.ndarray:
    i = np.arange(N) + 0.5
    z = 1 - 2 * i / N
    rho = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def sample_fibonacci_s2(N: int) -> Sample:
    if N < 1:
        raise ValueError("N must be >= 1")
    return Sample.from_array(fibonacci_array(N), label=f"fibonacci_S2_{N}")


def grid_points(n: int, size: int) -> np.ndarray:
    """Deterministic near-uniform grid on S^n, used by the grid oracles."""
    if n == 1:
        t = 2 * math.pi * np.arange(size) / size
        return np.column_stack([np.cos(t), np.sin(t)])
    if n == 2:
        return fibonacci_array(size)
    X = np.random.default_rng(0).standard_normal((size, n + 1))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def nearest_distances(points: np.ndarray, centers: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Geodesic distance from each row of ``points`` to its nearest center."""
    out = np.empty(len(points))
    for s in range(0, len(points), chunk):
        dots = points[s:s + chunk] @ centers.T
        out[s:s + chunk] = np.arccos(np.clip(dots.max(axis=1), -1.0, 1.0))
    return out


@dataclass(frozen=True)
class DensityResult:
    epsilon: float
    exact: bool
    grid_resolution: float  # 0 when exact


def density_radius(sample: Sample, grid: Sample | np.ndarray | None = None) -> DensityResult:
    """sup over S^n of the distance to the nearest sample point.

    Exact on S^1 (half the largest gap). For n >= 2 the sup is taken over a
    grid; the true value lies in [epsilon, epsilon + grid_resolution].
    """
    if sample.dim == 1 and grid is None:
        a = np.sort(sample.angles())
        gaps = np.diff(np.append(a, a[0] + 2 * math.pi))
        return DensityResult(float(gaps.max()) / 2, True, 0.0)
    if grid is None:
        grid = grid_points(sample.dim, 20000)
    G = grid.array if isinstance(grid, Sample) else np.asarray(grid, dtype=float)
    eps = float(nearest_distances(G, sample.array).max())
    return DensityResult(eps, False, grid_resolution(G))


def grid_resolution(G: np.ndarray) -> float:
    """Estimated covering radius of a grid on S^n.

    Exact half-gap on S^1. Otherwise the worst distance from an 8x finer
    probe set to the grid, inflated by the probe set's own expected
    covering radius. A 1-Lipschitz function minimised over the grid is
    within this of its true minimum.
    """
    from scipy.spatial import cKDTree

    if G.shape[1] == 2:
        a = np.sort(np.arctan2(G[:, 1], G[:, 0]) % (2 * math.pi))
        return float(np.diff(np.append(a, a[0] + 2 * math.pi)).max()) / 2
    n = G.shape[1] - 1
    fine = grid_points(n, 8 * len(G)) if n == 2 else \
        _unit_rows(np.random.default_rng(1).standard_normal((8 * len(G), n + 1)))
    d, _ = cKDTree(G).query(fine)
    eps = 2 * math.asin(min(1.0, float(d.max()) / 2))
    return eps * (1 + 8 ** (-1 / n))


def _unit_rows(X: np.ndarray) -> np.ndarray:
    return X / np.linalg.norm(X, axis=1, keepdims=True)


# --- file formats ---------------------------------------------------------

def write_sample_csv(sample: Sample, path: str | Path | None = None, circle: bool = False) -> str:
    buf = io.StringIO()
    if circle:
        buf.write("# circle\n")
        for t in sample.angles():
            buf.write(f"{float(t)!r}\n")
    else:
        buf.write(f"# dim={sample.dim}\n")
        w = csv.writer(buf, lineterminator="\n")
        for p in sample.points:
            w.writerow([repr(c) for c in p.coords])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_sample_csv(text: str, label: str = "") -> Sample:
    circle = False
    dim = None
    rows = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("#"):
            h = ln[1:].strip()
            if h == "circle":
                circle = True
            elif h.startswith("dim="):
                dim = int(h[4:])
            continue
        rows.append([float(v) for v in ln.split(",")])
    if circle:
        return Sample.from_angles([r[0] for r in rows], label=label or "circle")
    X = np.array(rows)
    if dim is not None and X.shape[1] != dim + 1:
        raise ValueError(f"header says dim={dim} but rows have {X.shape[1]} columns")
    return Sample.from_array(X, label=label)


def read_sample_csv(path: str | Path, label: str = "") -> Sample:
    return parse_sample_csv(Path(path).read_text(), label=label or Path(path).stem)
