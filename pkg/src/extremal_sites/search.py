"""Multi-start maximisation of omega = sigma / D over n-point configurations.

Each start runs a coordinate pattern search: every coordinate of every point
is nudged by +/- step, the first move that raises omega is taken, and the
step is halved after a sweep with no improvement. The configuration is
rescaled to unit diameter after every accepted move.

Pattern search stalls where several pairs share the diameter, which is
exactly where the maximisers live. A final polish solves the smooth problem
"maximise sigma subject to every squared distance <= 1" with SLSQP from the
pattern-search incumbent; its result is kept only if omega improves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from ._parallel import pmap
from .constructions import EXACT_INFIMUM, reference_values, thm33_bound, thm33_configuration
from .errors import DegenerateError, InvalidInputError
from .geometry import PointSet, functionals, omega as omega_of

COLLAPSE_TOL = 1e-9
MAX_REDRAWS = 100
MAX_ORACLE_PAIRS = 10**9


@dataclass(frozen=True)
class SearchConfig:
    m: int
    n: int
    starts: int = 50
    max_iters: int = 2000
    seed: int = 0
    step_init: float = 0.1
    step_min: float = 1e-10
    warm_start: Optional[PointSet] = None
    polish: bool = True

    def __post_init__(self):
        if self.m < 1:
            raise InvalidInputError(f"m: must be >= 1, got {self.m}")
        if self.n < 3:
            raise InvalidInputError(f"n: must be >= 3, got {self.n}")
        if self.starts < 1:
            raise InvalidInputError(f"starts: must be >= 1, got {self.starts}")
        if self.max_iters < 1:
            raise InvalidInputError(f"max_iters: must be >= 1, got {self.max_iters}")
        if not 0 < self.step_min < self.step_init:
            raise InvalidInputError("need 0 < step_min < step_init")
        ws = self.warm_start
        if ws is not None and (ws.dim != self.m or len(ws) != self.n):
            raise InvalidInputError(
                f"warm_start: expected {self.n} points in E^{self.m}, got {len(ws)} in E^{ws.dim}"
            )

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "starts": self.starts,
            "max_iters": self.max_iters,
            "seed": self.seed,
            "step_init": self.step_init,
            "step_min": self.step_min,
            "warm_start": None if self.warm_start is None else self.warm_start.to_dict(),
            "polish": self.polish,
        }


@dataclass(frozen=True)
class SearchResult:
    best: PointSet
    best_omega: float
    per_start_bests: List[float]
    config: SearchConfig

    def to_dict(self) -> dict:
        return {
            "best": self.best.to_dict(),
            "best_omega": self.best_omega,
            "per_start_bests": list(self.per_start_bests),
            "config": self.config.to_dict(),
        }


def _unit_diameter(p: np.ndarray) -> np.ndarray:
    c = p.mean(axis=0)
    return c + (p - c) / pdist(p).max()


def _pattern_search(p: np.ndarray, cfg: SearchConfig, trace: Optional[list] = None) -> np.ndarray:
    """Coordinate pattern search; appends the incumbent omega per sweep to ``trace``."""
    w = omega_of(p)
    step = cfg.step_init
    n, m = p.shape
    for _ in range(cfg.max_iters):
        if step < cfg.step_min:
            break
        improved = False
        for i in range(n):
            for k in range(m):
                for delta in (step, -step):
                    q = p.copy()
                    q[i, k] += delta
                    wq = omega_of(q)
                    if wq > w:
                        p, w = _unit_diameter(q), wq
                        improved = True
                        break
        if trace is not None:
            trace.append(w)
        if not improved:
            step /= 2.0
    return p


def _polish(p: np.ndarray) -> np.ndarray:
    """SLSQP on: maximise sigma subject to |p_i - p_j|^2 <= 1."""
    n, m = p.shape
    I, J = np.triu_indices(n, 1)
    rows = np.arange(len(I))

    def neg_sigma(x):
        return -pdist(x.reshape(n, m)).sum()

    def neg_sigma_grad(x):
        q = x.reshape(n, m)
        diff = q[:, None, :] - q[None, :, :]
        d = np.sqrt((diff**2).sum(axis=-1))
        np.fill_diagonal(d, 1.0)
        d = np.maximum(d, 1e-300)
        return -(diff / d[..., None]).sum(axis=1).ravel()

    def slack(x):
        return 1.0 - pdist(x.reshape(n, m), "sqeuclidean")

    def slack_jac(x):
        q = x.reshape(n, m)
        dd = q[I] - q[J]
        jac = np.zeros((len(I), n, m))
        jac[rows, I] = -2.0 * dd
        jac[rows, J] = 2.0 * dd
        return jac.reshape(len(I), -1)

    res = minimize(
        neg_sigma,
        p.ravel(),
        jac=neg_sigma_grad,
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": slack, "jac": slack_jac}],
        options={"ftol": 1e-15, "maxiter": 500},
    )
    q = res.x.reshape(n, m)
    if not np.all(np.isfinite(q)) or pdist(q).max() < COLLAPSE_TOL:
        return p
    return _unit_diameter(q)


def _initial(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    for _ in range(MAX_REDRAWS):
        p = rng.random((n, m))
        if pdist(p).max() > COLLAPSE_TOL:
            return p
    raise DegenerateError(f"{MAX_REDRAWS} consecutive collapsed initial draws")


def _run_start(cfg: SearchConfig, index: int) -> np.ndarray:
    if index == 0 and cfg.warm_start is not None:
        p = np.array(cfg.warm_start.points, dtype=float)
        if pdist(p).max() <= COLLAPSE_TOL:
            raise DegenerateError("warm_start: all points coincide")
    else:
        rng = np.random.default_rng([cfg.seed, index])
        p = _initial(rng, cfg.m, cfg.n)
    p = _pattern_search(_unit_diameter(p), cfg)
    if cfg.polish:
        q = _polish(p)
        if omega_of(q) > omega_of(p):
            p = q
    return p


def optimize_omega(cfg: SearchConfig, threads: Optional[int] = None) -> SearchResult:
    """Best omega found over ``cfg.starts`` independent starts.

    Start ``i`` draws from a stream seeded by ``(seed, i)``; start 0 uses
    ``warm_start`` when given. The result does not depend on ``threads``.
    """
    finals = pmap(lambda i: _run_start(cfg, i), range(cfg.starts), threads)
    values = [functionals(PointSet(cfg.m, p)).omega for p in finals]
    best = int(np.argmax(values))  # first maximum wins, i.e. keep the incumbent
    return SearchResult(
        best=PointSet(cfg.m, finals[best]),
        best_omega=values[best],
        per_start_bests=values,
        config=cfg,
    )


def lens_grid(resolution: float) -> np.ndarray:
    """Grid points (i h, j h) inside the closed lens of the unit segment."""
    if not 0 < resolution <= 0.05:
        raise InvalidInputError(f"resolution: must be in (0, 0.05], got {resolution}")
    k = int(math.floor(1.0 / resolution + 1e-9))
    xs = resolution * np.arange(0, k + 1)
    jmax = int(math.floor(math.sqrt(3.0) / 2.0 / resolution))
    ys = resolution * np.arange(-jmax, jmax + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    keep = (X * X + Y * Y <= 1.0 + 1e-12) & ((X - 1.0) ** 2 + Y * Y <= 1.0 + 1e-12)
    # A3, A4 may not coincide with A1 or A2
    keep &= (X * X + Y * Y > 0) & ((X - 1.0) ** 2 + Y * Y > 0)
    return np.column_stack([X[keep], Y[keep]])


@dataclass(frozen=True)
class OracleResult:
    best_omega: float
    best_config: PointSet
    resolution: float
    grid_points: int

    def to_dict(self) -> dict:
        return {
            "best_omega": self.best_omega,
            "best_config": self.best_config.to_dict(),
            "resolution": self.resolution,
            "grid_points": self.grid_points,
        }


def grid_oracle_2_4(resolution: float = 0.02, threads: Optional[int] = None) -> OracleResult:
    """Exhaustive search over four-point sets with A1 = (0,0), A2 = (1,0).

    A3 and A4 range over the lens grid; pairs farther apart than 1 are
    discarded, so A1A2 is always a diameter and omega = sigma.
    """
    if resolution > 0:
        # lens area is 2 pi / 3 - sqrt(3) / 2
        estimate = ((2 * math.pi / 3 - math.sqrt(3) / 2) / resolution**2) ** 2 / 2
        if estimate > MAX_ORACLE_PAIRS:
            raise InvalidInputError(
                f"resolution {resolution} needs about {estimate:.2e} pairs (> {MAX_ORACLE_PAIRS:.0e});"
                " use a coarser grid"
            )
    pts = lens_grid(resolution)
    g = len(pts)
    chord = np.hypot(pts[:, 0], pts[:, 1]) + np.hypot(pts[:, 0] - 1.0, pts[:, 1])

    def row_block(start: int):
        stop = min(start + 64, g)
        best_val, best_pair = -math.inf, (-1, -1)
        for i in range(start, stop):
            d = np.hypot(pts[i + 1 :, 0] - pts[i, 0], pts[i + 1 :, 1] - pts[i, 1])
            if d.size == 0:
                continue
            tot = 1.0 + chord[i] + chord[i + 1 :] + d
            tot[d > 1.0 + 1e-12] = -math.inf
            k = int(np.argmax(tot))
            if tot[k] > best_val:
                best_val, best_pair = float(tot[k]), (i, i + 1 + k)
        return best_val, best_pair

    blocks = pmap(row_block, range(0, g, 64), threads)
    best_val, (i, j) = max(blocks, key=lambda b: b[0])  # max() keeps the first of equals
    config = PointSet(2, [[0.0, 0.0], [1.0, 0.0], pts[i].tolist(), pts[j].tolist()])
    return OracleResult(functionals(config).omega, config, resolution, g)


@dataclass(frozen=True)
class ConjectureReport:
    claim: str
    lhs: Optional[float]
    rhs: Optional[float]
    gap: Optional[float]
    verdict: str
    caveat: str = "numeric evidence only"
    search: Optional[SearchResult] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        out = {
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "verdict": self.verdict,
            "caveat": self.caveat,
        }
        if self.search is not None:
            out["search"] = self.search.to_dict()
        return out


def conjecture_41_report(m: int, n: int, cfg: SearchConfig, threads: Optional[int] = None) -> ConjectureReport:
    """Compare the known inf mu(m, n) with a numeric estimate of sup omega(m, n).

    A numeric sup omega estimate is a lower bound on the true supremum, so a
    positive gap supports the inequality but cannot prove it.
    """
    if m < 2 or n <= m + 1:
        raise InvalidInputError(f"claim needs m >= 2 and n > m + 1, got m={m}, n={n}")
    claim = f"inf mu({m},{n}) > sup omega({m},{n})"
    cfg = replace(cfg, m=m, n=n)
    refs = [r for r in reference_values(m, n) if r.kind == EXACT_INFIMUM]
    result = optimize_omega(cfg, threads)
    if not refs:
        return ConjectureReport(
            claim, None, result.best_omega, None, "inconclusive",
            "numeric evidence only; no closed form for inf mu is known here", result,
        )
    inf_mu = refs[0].value
    gap = inf_mu - result.best_omega
    verdict = "consistent" if gap > 1e-9 else "violated"
    return ConjectureReport(claim, inf_mu, result.best_omega, gap, verdict, search=result)


def conjecture_42_report(n: int, cfg: SearchConfig, threads: Optional[int] = None) -> ConjectureReport:
    """Search for n+2 points in E^n beating the cap-pole construction.

    The construction is used as the warm start, so the search never reports
    less than the bound. ``gap`` is best found minus the bound; a gap above
    1e-6 would be evidence against equality and yields verdict "violated".
    """
    if n < 2:
        raise InvalidInputError(f"n: must be >= 2, got {n}")
    bound = thm33_bound(n)
    cfg = replace(cfg, m=n, n=n + 2, warm_start=thm33_configuration(n))
    result = optimize_omega(cfg, threads)
    excess = result.best_omega - bound
    if excess > 1e-6:
        verdict = "violated"
    elif excess >= -1e-9:
        verdict = "consistent"
    else:
        verdict = "inconclusive"
    return ConjectureReport(
        f"sup omega({n},{n + 2}) = C({n + 1},2)+1+{n}*sqrt(2*(1-sqrt({n + 1}/{2 * n})))",
        result.best_omega,
        bound,
        excess,
        verdict,
        search=result,
    )


__all__ = [
    "SearchConfig",
    "SearchResult",
    "optimize_omega",
    "grid_oracle_2_4",
    "lens_grid",
    "OracleResult",
    "ConjectureReport",
    "conjecture_41_report",
    "conjecture_42_report",
]
