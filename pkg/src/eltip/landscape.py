"""Low-energy structure of a problem and a difficulty ranking of its landscapes.

The difficulty score is a heuristic: near-ground levels that sit far (in
Hamming distance) from every ground config are expected to slow annealing
down, the more so the smaller their gap.  It only orders landscapes; it does
not predict annealing times.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from .ising import IsingProblem, SpinConfig, full_spectrum, hamming_distance
from .transform import enumerate_landscapes

SCORE_FORMULA = "gap-hamming/1"
SCORE_EPSILON = 1e-9

# scores this close (relative) count as tied; absorbs rounding differences
# between coefficient-wise equal landscapes
TIE_TOL = 1e-9

# relative tolerance for treating a level as degenerate with the ground level
GROUND_TOL = 1e-9


@dataclass(frozen=True)
class Level:
    energy: float
    config: SpinConfig
    gap: float
    min_hamming: int


@dataclass(frozen=True)
class LandscapeReport:
    ground_energy: float
    ground_configs: tuple[SpinConfig, ...]
    levels: tuple[Level, ...]
    difficulty_score: float
    score_formula: str = field(default=SCORE_FORMULA)

    @property
    def n(self) -> int:
        return len(self.ground_configs[0])

    def first_excited(self) -> Level | None:
        """Lowest level that is not a ground config."""
        for lvl in self.levels:
            if lvl.gap > 0:
                return lvl
        return None

    def level_of(self, config: SpinConfig) -> Level | None:
        for lvl in self.levels:
            if lvl.config == config:
                return lvl
        return None


def default_levels(n: int) -> int:
    return min(16, 1 << n)


def analyze(problem: IsingProblem, levels: int | None = None, cap: int | None = None) -> LandscapeReport:
    """Gaps and Hamming distances to the ground set for the lowest ``levels`` levels."""
    L = default_levels(problem.n) if levels is None else int(levels)
    if not 1 <= L <= (1 << problem.n):
        raise ValueError(f"level count {L} outside [1, {1 << problem.n}]")
    spec = full_spectrum(problem, cap)
    e0 = float(spec.energies[0])
    tol = GROUND_TOL * max(1.0, abs(e0))
    ground = []
    for k in range(len(spec)):
        if spec.energies[k] - e0 > tol:
            break
        ground.append(spec[k][1])
    rows = []
    for k in range(L):
        e, cfg = spec[k]
        if k < len(ground):
            rows.append(Level(e, cfg, 0.0, 0))
        else:
            d = min(hamming_distance(cfg, g) for g in ground)
            rows.append(Level(e, cfg, e - e0, d))
    score = difficulty_score(rows) if L >= 2 else 0.0
    return LandscapeReport(e0, tuple(ground), tuple(rows), score)


def difficulty_score(report: LandscapeReport | tuple[Level, ...] | list[Level]) -> float:
    """Sum of ``hamming / (gap + eps)`` over excited levels with ``gap < theta``.

    ``theta`` is half the median gap over the reported levels.
    """
    levels = report.levels if isinstance(report, LandscapeReport) else report
    if len(levels) < 2:
        raise ValueError("difficulty score needs at least two levels")
    theta = 0.5 * statistics.median(lvl.gap for lvl in levels)
    return float(sum(
        lvl.min_hamming / (lvl.gap + SCORE_EPSILON)
        for lvl in levels
        if lvl.gap > 0 and lvl.gap < theta
    ))


def rank_landscapes(problem: IsingProblem, levels: int | None = None, cap: int | None = None) -> list[tuple[str, LandscapeReport]]:
    """All ``n + 1`` landscapes, easiest first; ties keep the ``id, T0, T1, ...`` order."""
    reports = [(label, analyze(p, levels, cap)) for label, p in enumerate_landscapes(problem)]
    by_score = sorted(range(len(reports)), key=lambda q: (reports[q][1].difficulty_score, q))
    # group runs of near-equal scores, then restore label order inside each run
    order, run = [], []
    for q in by_score:
        s = reports[q][1].difficulty_score
        if run and s - reports[run[0]][1].difficulty_score > TIE_TOL * max(1.0, abs(s)):
            order += sorted(run)
            run = []
        run.append(q)
    order += sorted(run)
    return [reports[q] for q in order]
