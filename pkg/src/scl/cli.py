"""Command-line entry point: ``scl <command> [flags]``.

Exit codes: 0 success (all checked inequalities hold), 2 an inequality
failed (the counterexample is in the report), 1 usage or budget error.
A ``--config`` file of ``key=value`` lines supplies defaults; flags win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import MISSING, dataclass, field, fields
from pathlib import Path

from . import bounds as B
from .complexes import CECH, VR, borsuk_graph, build_filtration
from .covering_packing import sphere_cov_estimate
from .errors import BudgetExceeded
from .homology import persistence
from .sphere_geom import (Sample, parse_sample_csv, sample_evenly_spaced_circle,
                          sample_fibonacci_s2, sample_uniform, write_sample_csv)

COMMANDS = ("sample", "cech", "persist", "bounds", "verify-s1", "verify-hdim", "cover-opt", "figure-data")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = ""
    n: int = 1
    N: int = 12
    seed: int = 0
    kind: str = "auto"  # auto | even | uniform | fibonacci
    input: str = ""
    delta: list = field(default_factory=list)
    r: list = field(default_factory=list)
    k: int = 1
    kmax: int = 6
    grid: int = 3
    trials: int = 1
    flavor: str = CECH
    max_dim: int = 2
    cap: float = math.pi
    budget_simplices: int = 20_000_000
    grid_size: int = 4000
    starts: int = 16
    max_exact_chi: int = 40
    out: str = ""
    format: str = "json"

    # --- file form -----------------------------------------------------
    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = ",".join(repr(float(x)) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_pairs(cls, text: str) -> dict:
        kinds = {f.name: f for f in fields(cls)}
        out = {}
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line {ln}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in kinds:
                raise UsageError(f"config line {ln}: unknown key {key!r}")
            out[key] = _coerce(cls, key, val)
        return out

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**cls.parse_pairs(text))

    def validate(self) -> "RunConfig":
        if self.command and self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.n < 1:
            raise UsageError("--n must be >= 1")
        if self.N < 1:
            raise UsageError("--N must be >= 1")
        if self.kind not in ("auto", "even", "uniform", "fibonacci"):
            raise UsageError("--kind must be auto, even, uniform or fibonacci")
        if self.kind == "even" and self.n != 1:
            raise UsageError("evenly spaced samples exist only for n = 1")
        if self.kind == "fibonacci" and self.n != 2:
            raise UsageError("fibonacci samples exist only for n = 2")
        for d in self.delta:
            if not 0 < d < math.pi:
                raise UsageError(f"delta {d} outside (0, pi)")
        for r in self.r:
            if not 0 < r <= math.pi:
                raise UsageError(f"r {r} outside (0, pi]")
        if self.flavor not in (CECH, VR):
            raise UsageError(f"--flavor must be {CECH} or {VR}")
        if self.max_dim < 0:
            raise UsageError("--max-dim must be >= 0")
        if not 0 < self.cap <= math.pi:
            raise UsageError("--cap outside (0, pi]")
        for name in ("k", "kmax", "grid", "trials", "budget_simplices", "grid_size", "starts", "max_exact_chi"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be >= 1")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        return self


def _coerce(cls, key, val):
    f = cls.__dataclass_fields__[key]
    proto = f.default_factory() if f.default is MISSING else f.default
    try:
        if isinstance(proto, list):
            return [eval_pi(x) for x in val.split(",") if x.strip()]
        if isinstance(proto, int):
            return int(val)
        if isinstance(proto, float):
            return eval_pi(val)
    except ValueError as e:
        raise UsageError(f"bad value for {key}: {val!r}") from e
    return val


def eval_pi(s: str) -> float:
    """Accept plain floats or simple multiples such as ``0.5pi`` / ``pi/3``."""
    t = s.strip().lower().replace("π", "pi")
    if "pi" not in t:
        return float(t)
    num, _, den = t.partition("/")
    coef = num.replace("*", "").replace("pi", "").strip()
    val = (float(coef) if coef else 1.0) * math.pi
    return val / float(den) if den else val


# --- helpers ----------------------------------------------------------------

def _sample(cfg: RunConfig) -> Sample:
    if cfg.input:
        return parse_sample_csv(Path(cfg.input).read_text(), Path(cfg.input).stem)
    kind = cfg.kind
    if kind == "auto":
        kind = "even" if cfg.n == 1 else "uniform"
    if kind == "even":
        return sample_evenly_spaced_circle(cfg.N)
    if kind == "fibonacci":
        return sample_fibonacci_s2(cfg.N)
    return sample_uniform(cfg.n, cfg.N, cfg.seed)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _tag(value, prov):
    return {"value": value, "provenance": prov}


def _status(reports) -> int:
    return 0 if all(r.holds for r in reports) else 2


# --- commands ---------------------------------------------------------------

def cmd_sample(cfg: RunConfig) -> int:
    s = _sample(cfg)
    if cfg.format == "csv":
        _emit(cfg, write_sample_csv(s, circle=(s.dim == 1)))
    else:
        _emit(cfg, json.dumps({"label": s.label, "n": s.dim, "seed": s.seed,
                               "points": s.array.tolist()}) + "\n")
    return 0


def _filtration(cfg: RunConfig):
    return build_filtration(_sample(cfg), cfg.flavor, cfg.max_dim, cfg.cap, cfg.budget_simplices)


def cmd_cech(cfg: RunConfig) -> int:
    f = _filtration(cfg)
    if cfg.format == "csv":
        lines = ["dim,value,vertices"] + [f"{len(s) - 1},{f.entries[s]!r},{' '.join(map(str, s))}"
                                          for s in f.ordered()]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, f.to_json() + "\n")
    return 0


def cmd_persist(cfg: RunConfig) -> int:
    f = _filtration(cfg)
    bc = persistence(f)
    if cfg.format == "csv" and not cfg.r:
        _emit(cfg, bc.to_csv())
        return 0
    out = {"flavor": cfg.flavor, "N": len(f.sample), "n": f.sample.dim, "max_dim": cfg.max_dim,
           "provenance": B.EXACT,
           "bars": [[d, b, "inf" if math.isinf(e) else e] for d, b, e in bc.bars],
           "betti_at": {repr(r): {str(d): v for d, v in _betti_from_bars(bc, r, cfg.max_dim).items()}
                        for r in cfg.r}}
    _emit(cfg, json.dumps(out) + "\n")
    return 0


def _betti_from_bars(bc, r, max_dim):
    vals = bc.betti_at(r)
    return {d: vals.get(d, 0) for d in range(max_dim)}


def cmd_bounds(cfg: RunConfig) -> int:
    """Theorem / corollary / Lovasz checks at each delta."""
    deltas = cfg.delta or [math.pi / 3]
    reports = []
    sample = _sample(cfg)
    for d in deltas:
        if cfg.n == 1:
            reports.extend(B.check_theorem_s1(d))
        lo, up = B.corollary_main_sandwich(d)
        g = borsuk_graph(sample, d)
        if g.vertex_count <= cfg.max_exact_chi:
            reports.append(B.lovasz_check(g, max_degree=min(cfg.max_dim, 3), max_exact_chi=cfg.max_exact_chi))
        if cfg.n == 1 and sample.label.startswith("circle_even"):
            reports.append(B.circle_chi_check(len(sample), d, cfg.max_exact_chi))
    _emit(cfg, B.write_jsonl(reports))
    return _status(reports)


def cmd_verify_s1(cfg: RunConfig) -> int:
    """Reduced Z2 homology of Cech(X; r) for N evenly spaced circle points.

    Radii are ``--r`` if given, else the midpoints of the first ``--grid``
    ground-truth intervals (those whose sphere degree the chosen
    ``--max-dim`` can resolve). Each radius is compared with the continuum
    type and with the exact finite-sample type; a mismatch with the finite
    type, or with the continuum at a radius at least 2pi/N from every
    filtration boundary, is a failure.
    """
    N = cfg.N
    max_dim = cfg.max_dim if cfg.max_dim > 2 else 6
    if cfg.r:
        radii = list(cfg.r)
    else:
        radii = []
        for k in range(cfg.grid):
            if 2 * k + 1 > max_dim - 1:
                break
            radii.append(math.pi * (k / (k + 1) + (k + 1) / (k + 2)) / 2)
    top = max(radii)
    f = build_filtration(sample_evenly_spaced_circle(N), CECH, max_dim, min(math.pi, top + 1e-9),
                         cfg.budget_simplices)
    bc = persistence(f)
    rows, failed = [], False
    step = math.pi / N  # filtration values are multiples of pi/N
    for r in radii:
        got = _betti_from_bars(bc, r, max_dim)
        gt = B.s1_ground_truth(r=r) if r < math.pi else None
        finite = B.finite_circle_cech_betti(N, r)
        finite_full = {d: finite.get(d, 0) for d in range(max_dim)}
        cont = ({d: int(d == gt.homotopy_sphere_dim) for d in range(max_dim)} if gt else None)
        margin = min(abs(r - j * step) for j in range(1, N + 1))
        matches_finite = got == finite_full
        matches_cont = cont is not None and got == cont
        asserted_cont = margin >= 2 * math.pi / N
        ok = matches_finite and (matches_cont or not asserted_cont)
        failed |= not ok
        rows.append({"r": _tag(r, "input"),
                     "degrees": sorted(d for d, v in got.items() if v),
                     "betti": {str(d): _tag(v, B.EXACT) for d, v in got.items()},
                     "continuum_sphere_dim": _tag(gt.homotopy_sphere_dim, B.FORMULA) if gt else None,
                     "finite_prediction": {str(d): _tag(v, B.FORMULA) for d, v in finite.items()},
                     "matches_continuum": matches_cont, "matches_finite": matches_finite,
                     "margin_to_boundary": _tag(margin, B.FORMULA), "holds": ok})
    _emit(cfg, json.dumps({"N": N, "max_dim": max_dim, "simplices": len(f), "rows": rows}) + "\n")
    return 2 if failed else 0


def cmd_verify_hdim(cfg: RunConfig) -> int:
    deltas = cfg.delta or [2.0, 2.4, 2.8]
    reports = []
    for t in range(cfg.trials):
        sub = RunConfig(**{**cfg.__dict__, "seed": cfg.seed + t})
        s = _sample(sub)
        for d in deltas:
            reports.extend(B.hdim_bound_check(s, d))
    _emit(cfg, B.write_jsonl(reports))
    return _status(reports)


def cmd_cover_opt(cfg: RunConfig) -> int:
    est = sphere_cov_estimate(cfg.n, cfg.k, cfg.starts, cfg.grid_size, cfg.seed)
    _emit(cfg, est.to_json() + "\n")
    return 0


def cmd_figure_data(cfg: RunConfig) -> int:
    prov = B.make_sphere_cov_provider(cfg.n, cfg.starts, cfg.grid_size, cfg.seed)
    table = B.emit_interval_data(cfg.n, cfg.kmax, prov)
    if cfg.format == "json":
        _emit(cfg, json.dumps({"n": cfg.n, "tight_upper": table.tight_upper,
                               "rows": [r.__dict__ for r in table.rows]}) + "\n")
    else:
        _emit(cfg, table.to_csv())
    if cfg.n == 1 and not table.tight_upper:
        return 2
    return 0


DISPATCH = {"sample": cmd_sample, "cech": cmd_cech, "persist": cmd_persist, "bounds": cmd_bounds,
            "verify-s1": cmd_verify_s1, "verify-hdim": cmd_verify_hdim, "cover-opt": cmd_cover_opt,
            "figure-data": cmd_figure_data}


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _floats(text: str) -> list:
    return [eval_pi(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scl", description="Cech complexes of spheres: homology, covering and bound checks.")
    p.add_argument("command", choices=COMMANDS)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=None, help="key=value file; flags override it")
    p.add_argument("--n", type=int, default=S, help="sphere dimension")
    p.add_argument("--N", type=int, default=S, help="number of sample points")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--kind", default=S, help="auto, even, uniform or fibonacci")
    p.add_argument("--input", default=S, help="sample CSV to use instead of sampling")
    p.add_argument("--delta", type=_floats, default=S, help="comma-separated values, 'pi' allowed")
    p.add_argument("--r", type=_floats, default=S, help="comma-separated radii, 'pi' allowed")
    p.add_argument("--k", type=int, default=S)
    p.add_argument("--kmax", type=int, default=S)
    p.add_argument("--grid", type=int, default=S, help="number of interval midpoints (verify-s1)")
    p.add_argument("--trials", type=int, default=S, help="consecutive seeds (verify-hdim)")
    p.add_argument("--flavor", default=S, help=f"{CECH} or {VR}")
    p.add_argument("--max-dim", dest="max_dim", type=int, default=S)
    p.add_argument("--cap", type=eval_pi, default=S)
    p.add_argument("--budget-simplices", dest="budget_simplices", type=int, default=S)
    p.add_argument("--grid-size", dest="grid_size", type=int, default=S)
    p.add_argument("--starts", type=int, default=S)
    p.add_argument("--max-exact-chi", dest="max_exact_chi", type=int, default=S)
    p.add_argument("--out", default=S)
    p.add_argument("--format", default=S, choices=("csv", "json"))
    return p


def resolve_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    base = {}
    cfg_path = ns.pop("config", None)
    if cfg_path:
        base = RunConfig.parse_pairs(Path(cfg_path).read_text())
    base.update(ns)
    return RunConfig(**base).validate()


def main(argv=None) -> int:
    try:
        cfg = resolve_config(sys.argv[1:] if argv is None else argv)
        return DISPATCH[cfg.command](cfg)
    except (UsageError, BudgetExceeded, ValueError, OSError) as e:
        print(f"scl: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
