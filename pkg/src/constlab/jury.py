"""Common-value oligarchy model.

Oligarchy O_i lets the first i voters decide by strict majority.  An insider
of O_i values it at ``g(i) = λ/i + (1-λ)·P(i)``, where P(i) is the chance that
i independent signals of accuracy p produce a correct strict majority; an
outsider only gets the participative part ``(1-λ)·P(i)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from constlab.errors import ParameterError

SMALL_MAX = 3
LARGE_MIN = 10
DEFAULT_N = 500


@dataclass(frozen=True)
class JuryConfig:
    n: int = DEFAULT_N
    lam: float = 0.5
    p: float = 0.6
    eps: float = 1e-12
    # count half of an even split as correct (off: ties are incorrect)
    tie_credit: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError("n must be a positive integer")
        if not 0 <= self.lam <= 1:
            raise ParameterError("lambda must lie in [0, 1]")
        if not 0.5 < self.p < 1:
            raise ParameterError("p must lie in (1/2, 1)")
        if not self.eps > 0:
            raise ParameterError("eps must be positive")

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "p": self.p, "eps": self.eps,
                "tie_credit": self.tie_credit}


@dataclass(frozen=True)
class OligarchyProfile:
    i: int
    g: float
    P: float
    E: float


# --- participative probability ------------------------------------------------


def _check_p(p: float) -> None:
    if not 0.5 < p < 1:
        raise ParameterError("p must lie in (1/2, 1)")


def _binomial_pmf(i: int, p: float) -> list[float]:
    """Binomial(i, p) pmf, built outward from the mode by term ratios."""
    q = 1.0 - p
    mode = min(i, int((i + 1) * p))
    vals = [0.0] * (i + 1)
    vals[mode] = 1.0
    up, down = p / q, q / p
    for k in range(mode, i):
        vals[k + 1] = vals[k] * (i - k) / (k + 1) * up
    for k in range(mode, 0, -1):
        vals[k - 1] = vals[k] * k / (i - k + 1) * down
    total = math.fsum(vals)
    return [v / total for v in vals]


def majority_correct_probability(i: int, p: float, tie_credit: bool = False) -> float:
    """Pr[more than i/2 of i Bernoulli(p) signals are correct]."""
    if i < 1:
        raise ParameterError("committee size must be at least 1")
    _check_p(p)
    pmf = _binomial_pmf(i, p)
    prob = math.fsum(pmf[i // 2 + 1:])
    if tie_credit and i % 2 == 0:
        prob += 0.5 * pmf[i // 2]
    return min(prob, 1.0)


@lru_cache(maxsize=256)
def _curve(n: int, p: float, tie_credit: bool) -> np.ndarray:
    out = np.zeros(n + 1)
    for i in range(1, n + 1):
        out[i] = majority_correct_probability(i, p, tie_credit)
    out.setflags(write=False)
    return out


def probability_curve(n: int, p: float, tie_credit: bool = False) -> np.ndarray:
    """P(i) for i = 0..n (entry 0 unused), memoized per (n, p, tie_credit)."""
    _check_p(p)
    return _curve(int(n), float(p), bool(tie_credit))


# --- utilities and bounds -------------------------------------------------------


def _check_size(i: int, cfg: JuryConfig) -> None:
    if not 1 <= i <= cfg.n:
        raise ParameterError(f"size {i} outside 1..{cfg.n}")


def insider_utility(i: int, cfg: JuryConfig) -> float:
    _check_size(i, cfg)
    return cfg.lam / i + (1 - cfg.lam) * probability_curve(cfg.n, cfg.p, cfg.tie_credit)[i]


def profile(i: int, cfg: JuryConfig) -> OligarchyProfile:
    P = float(probability_curve(cfg.n, cfg.p, cfg.tie_credit)[i])
    return OligarchyProfile(i, insider_utility(i, cfg), P, 1 / i)


def utility_curve(cfg: JuryConfig) -> np.ndarray:
    """g(i) for i = 0..n (entry 0 unused)."""
    P = probability_curve(cfg.n, cfg.p, cfg.tie_credit)
    g = np.zeros(cfg.n + 1)
    i = np.arange(1, cfg.n + 1)
    g[1:] = cfg.lam / i + (1 - cfg.lam) * P[1:]
    return g


def hoeffding_bound(i_prime: int, cfg: JuryConfig) -> float:
    """Lower bound on g(i') from Hoeffding's inequality on P(i')."""
    return cfg.lam / i_prime + (1 - cfg.lam) * (1 - math.exp(-2 * i_prime * (cfg.p - 0.5) ** 2))


def hoeffding_filter(i: int, cfg: JuryConfig) -> bool:
    """Necessary condition for size i to be stable; False means i is ruled out.

    Uses g(i) <= λ/i + (1-λ) against the bound at i' = ceil((i+1)/2) and
    i' = 2i - 1 (whichever differ from i and lie in 1..n).
    """
    _check_size(i, cfg)
    best = cfg.lam / i + (1 - cfg.lam)
    for ip in ((i + 2) // 2, 2 * i - 1):
        if ip != i and 1 <= ip <= cfg.n and best + cfg.eps < hoeffding_bound(ip, cfg):
            return False
    return True


# --- motions and stability ------------------------------------------------------


def passes_motion(i: int, i2: int, cfg: JuryConfig) -> bool:
    """Does a motion to move from O_i to O_i2 win a strict majority of O_i?"""
    _check_size(i, cfg)
    _check_size(i2, cfg)
    if i == i2:
        raise ParameterError("a motion must propose a different size")
    g_now = insider_utility(i, cfg)
    g_new = insider_utility(i2, cfg)
    if i2 > i:
        return g_new > g_now + cfg.eps
    outsider = (1 - cfg.lam) * probability_curve(cfg.n, cfg.p, cfg.tie_credit)[i2]
    count = i2 * (g_new > g_now + cfg.eps) + (i - i2) * (outsider > g_now + cfg.eps)
    return 2 * count > i


def motion_matrix(cfg: JuryConfig) -> np.ndarray:
    """M[i, i2] = passes_motion(i, i2) for 1 <= i, i2 <= n (row/col 0 unused)."""
    n = cfg.n
    P = probability_curve(n, cfg.p, cfg.tie_credit)
    g = utility_curve(cfg)
    out = (1 - cfg.lam) * P
    idx = np.arange(1, n + 1)
    I = idx[:, None]
    J = idx[None, :]
    gain_in = g[J] > g[I] + cfg.eps
    gain_out = out[J] > g[I] + cfg.eps
    count = np.where(J > I, I * gain_in, J * gain_in + (I - J) * gain_out)
    passes = (2 * count > I) & (I != J)
    M = np.zeros((n + 1, n + 1), dtype=bool)
    M[1:, 1:] = passes
    return M


@dataclass(frozen=True)
class SizeCheck:
    full_check: bool
    right_maximal: bool
    halving_safe: bool
    violator: int | None = None

    @property
    def consistent(self) -> bool:
        return self.full_check == (self.right_maximal and self.halving_safe)


def is_stable(i: int, cfg: JuryConfig) -> SizeCheck:
    _check_size(i, cfg)
    g = utility_curve(cfg)
    violator = next((j for j in range(1, cfg.n + 1) if j != i and passes_motion(i, j, cfg)), None)
    rm = bool(np.all(g[i] >= g[i + 1:] - cfg.eps))
    lo = i // 2 + 1
    hs = bool(np.all(g[i] >= g[lo:i] - cfg.eps))
    return SizeCheck(violator is None, rm, hs, violator)


@dataclass
class JuryResult:
    config: JuryConfig
    g: np.ndarray
    P: np.ndarray
    stable_sizes: list[int]
    per_size: dict[int, SizeCheck]
    discrepancies: list[dict] = field(default_factory=list)
    motions: np.ndarray | None = None

    @property
    def largest(self) -> int | None:
        return max(self.stable_sizes) if self.stable_sizes else None

    def classification(self) -> str:
        return classify_sizes(self.stable_sizes)


def classify_sizes(sizes: Sequence[int]) -> str:
    parts = []
    if any(s <= SMALL_MAX for s in sizes):
        parts.append("small")
    if any(SMALL_MAX < s < LARGE_MIN for s in sizes):
        parts.append("mid")
    if any(s >= LARGE_MIN for s in sizes):
        parts.append("large")
    return "+".join(parts) if parts else "none"


def analyze(cfg: JuryConfig) -> JuryResult:
    """Exact check of every size plus the right-maximal / halving-safe audit."""
    n, eps = cfg.n, cfg.eps
    g = utility_curve(cfg)
    P = probability_curve(n, cfg.p, cfg.tie_credit)
    M = motion_matrix(cfg)
    full = ~M[1:, 1:].any(axis=1)
    # right-maximal: g(i) >= max_{i' > i} g(i') - eps
    suffix = np.full(n + 2, -np.inf)
    for i in range(n, 0, -1):
        suffix[i] = max(suffix[i + 1], g[i])
    per_size, stable, discrepancies = {}, [], []
    for i in range(1, n + 1):
        rm = bool(g[i] >= suffix[i + 1] - eps)
        lo = i // 2 + 1
        hs = bool(lo >= i or g[i] >= g[lo:i].max() - eps)
        row = np.flatnonzero(M[i])
        check = SizeCheck(bool(full[i - 1]), rm, hs, int(row[0]) if row.size else None)
        per_size[i] = check
        if check.full_check:
            stable.append(i)
        if not check.consistent:
            discrepancies.append({
                "i": i, "full_check": check.full_check, "right_maximal": rm,
                "halving_safe": hs, "violating_i2": check.violator,
            })
    return JuryResult(cfg, g, P, stable, per_size, discrepancies, M)


# --- dynamics -------------------------------------------------------------------


def reachability(M: np.ndarray) -> np.ndarray:
    """Transitive closure of a boolean adjacency matrix (paths of length >= 1)."""
    R = M.astype(bool)
    while True:
        step = (R.astype(np.float32) @ R.astype(np.float32)) > 0
        nxt = R | step
        if np.array_equal(nxt, R):
            return R
        R = nxt


def basin_label(sinks: Sequence[int]) -> str:
    kinds = set()
    for s in sinks:
        if s == 1:
            kinds.add("dictatorship")
        elif s >= LARGE_MIN:
            kinds.add("committee")
        else:
            kinds.add("oligarchy")
    order = ("dictatorship", "oligarchy", "committee")
    return "+".join(k for k in order if k in kinds) or "none"


@dataclass
class Dynamics:
    result: JuryResult
    reachable: dict[int, list[int]]
    basins: dict[int, str]

    def to_json(self) -> dict:
        M = self.result.motions
        n = self.result.config.n
        return {
            "config": self.result.config.to_json(),
            "edges": {str(i): np.flatnonzero(M[i]).tolist() for i in range(1, n + 1)},
            "stable": self.result.stable_sizes,
            "reachable": {str(i): s for i, s in self.reachable.items()},
            "basins": {str(i): b for i, b in self.basins.items()},
        }


def dynamics(cfg: JuryConfig) -> Dynamics:
    """For each starting size, the stable sizes reachable by passing motions."""
    res = analyze(cfg)
    R = reachability(res.motions)
    stable = set(res.stable_sizes)
    reach, basins = {}, {}
    for i in range(1, cfg.n + 1):
        sinks = sorted(s for s in stable if s == i or R[i, s])
        reach[i] = sinks
        basins[i] = basin_label(sinks)
    return Dynamics(res, reach, basins)


# --- grids ----------------------------------------------------------------------


@dataclass(frozen=True)
class GridCell:
    lam: float
    p: float
    n: int
    stable_sizes: tuple[int, ...]
    classification: str
    discrepancies: int
    filtered_out_stable: tuple[int, ...] = ()

    @property
    def largest(self) -> int | None:
        return max(self.stable_sizes) if self.stable_sizes else None


def evaluate_cell(cfg: JuryConfig) -> GridCell:
    res = analyze(cfg)
    lost = tuple(i for i in res.stable_sizes if not hoeffding_filter(i, cfg))
    return GridCell(cfg.lam, cfg.p, cfg.n, tuple(res.stable_sizes), res.classification(),
                    len(res.discrepancies), lost)


def stable_grid(
    lambdas: Sequence[float],
    ps: Sequence[float],
    n: int = DEFAULT_N,
    eps: float = 1e-12,
    tie_credit: bool = False,
) -> list[GridCell]:
    """Stable sizes for every (λ, p) cell, λ-major order."""
    cells = []
    for lam in lambdas:
        for p in ps:
            cells.append(evaluate_cell(JuryConfig(n, float(lam), float(p), eps, tie_credit)))
    return cells


def grid_csv(cells: Sequence[GridCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "p", "n", "stable_sizes", "classification"])
    for c in cells:
        w.writerow([_fmt(c.lam), _fmt(c.p), c.n, ";".join(map(str, c.stable_sizes)), c.classification])
    return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def dynamics_json(d: Dynamics) -> str:
    return json.dumps(d.to_json(), indent=2, sort_keys=True) + "\n"


def paper_grid() -> tuple[list[float], list[float]]:
    """λ ∈ {0.1,…,0.9}, p ∈ {0.6,…,0.95}."""
    lambdas = [round(0.1 * k, 10) for k in range(1, 10)]
    ps = [round(0.6 + 0.05 * k, 10) for k in range(8)]
    return lambdas, ps
