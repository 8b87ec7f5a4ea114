"""Closed-system annealing dynamics for ``H(s) = (1 - s) H_B + s H_P``.

``H_B = sum_i sigma^x_i`` with the positive sign, so the initial state is the
product of single-spin ``sigma^x = -1`` eigenstates.  ``H_P`` is diagonal in
the basis-index convention of :mod:`eltip.ising`.

Three propagators are available:

``rk4``
    Fixed-step classical Runge-Kutta, matrix-free.  The default.
``magnus4``
    Fourth-order commutator-free Magnus scheme, two exponentials per step,
    each evaluated matrix-free by a Chebyshev expansion.  Its error does not
    grow with the total time, so it is the one to use for long anneals.
``exact``
    Piecewise-constant midpoint propagator built from dense Kronecker
    matrices and diagonalized every step (``n <= 10``).  Slow; serves as the
    reference for the other two.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy import linalg

from . import _backend
from .errors import DimensionError, IntegrationAccuracyError, ResourceError
from .ising import IsingProblem, diagonal

#: Largest spin count for dense diagonalization (gaps, ``exact`` propagator).
DENSE_CAP = 10

# steps per kernel call; bounds the schedule buffer
_CHUNK = 1 << 16


def linear(u):
    return u


def sine(u):
    return np.sin(0.5 * np.pi * u) ** 2


SCHEDULES: dict[str, Callable] = {"linear": linear, "sine": sine}

Schedule = Union[str, Callable]


def resolve_schedule(schedule: Schedule) -> Callable:
    if callable(schedule):
        return schedule
    try:
        return SCHEDULES[schedule]
    except KeyError:
        raise ValueError(f"unknown schedule {schedule!r}; choose from {sorted(SCHEDULES)}") from None


def check_schedule(fn: Callable, points: int = 1001):
    u = np.linspace(0.0, 1.0, points)
    s = np.asarray(fn(u), dtype=np.float64)
    if s.shape != u.shape:
        raise ValueError("schedule must map an array of times to an array of the same shape")
    if abs(s[0]) > 1e-12 or abs(s[-1] - 1.0) > 1e-12:
        raise ValueError("schedule must satisfy s(0) = 0 and s(1) = 1")
    if np.any(np.diff(s) < -1e-15):
        raise ValueError("schedule must be nondecreasing")


@dataclass(frozen=True)
class Integrator:
    """Propagator choice and step-size control.

    ``dt=None`` picks the step from the method's rule (see
    :func:`default_step`).  ``max_work`` caps ``steps * 2**n``;
    ``force_long`` lifts the cap.
    """

    method: str = "rk4"
    dt: float | None = None
    drift_tol: float = 1e-7
    norm_tol: float = 1e-6
    max_work: float = 3e10
    force_long: bool = False

    def __post_init__(self):
        if self.method not in ("rk4", "magnus4", "exact"):
            raise ValueError(f"unknown integrator {self.method!r}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")


@dataclass(frozen=True)
class AnnealSpec:
    problem: IsingProblem
    total_time: float
    schedule: Schedule = "linear"
    integrator: Integrator = field(default_factory=Integrator)

    def __post_init__(self):
        if not (self.total_time > 0 and math.isfinite(self.total_time)):
            raise ValueError(f"total time must be positive and finite, got {self.total_time}")
        check_schedule(resolve_schedule(self.schedule))


def initial_state(n: int) -> np.ndarray:
    """Ground state of ``sum_i sigma^x_i``."""
    if n < 1:
        raise ValueError("need at least one spin")
    z = np.arange(1 << n)
    parity = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        parity ^= (z >> i) & 1
    return np.where(parity, -1.0, 1.0).astype(np.complex128) / math.sqrt(1 << n)


def apply_hamiltonian(problem: IsingProblem, s: float, state: np.ndarray, diag: np.ndarray | None = None) -> np.ndarray:
    state = np.ascontiguousarray(state, dtype=np.complex128)
    if state.shape != (1 << problem.n,):
        raise DimensionError(f"state has shape {state.shape}, expected ({1 << problem.n},)")
    if diag is None:
        diag = diagonal(problem)
    return _backend.kernels.apply_hamiltonian(diag, problem.n, float(s), state)


def _radius(diag: np.ndarray, n: int) -> float:
    # half-width of the union of spectral intervals of H(s), after centering
    return max(float(n), 0.5 * float(diag.max() - diag.min()))


def default_step(method: str, n: int, diag: np.ndarray, total_time: float, drift_tol: float = 1e-7) -> float:
    """Step rule per method.

    rk4: ``min(0.05, 0.5 / (n + max|E|))`` tightened so that the RK4 norm loss,
    about ``(lambda dt)**6 / 144`` per step at spectral radius ``lambda``,
    sums to at most ``drift_tol`` over the run.
    magnus4: ``min(1, 2 / lambda)``.  exact: ``0.01``.
    """
    lam = _radius(diag, n)
    if method == "rk4":
        scale = n + float(np.max(np.abs(diag)))
        base = min(0.05, 0.5 / scale)
        drift = (144.0 * drift_tol / (total_time * lam**6)) ** 0.2
        return min(base, drift)
    if method == "magnus4":
        return min(1.0, 2.0 / lam)
    return 0.01


def plan_steps(spec: AnnealSpec, diag: np.ndarray | None = None) -> tuple[int, float]:
    """Number of steps and the step length ``evolve`` would use."""
    if diag is None:
        diag = diagonal(spec.problem)
    integ = spec.integrator
    dt = integ.dt or default_step(integ.method, spec.problem.n, diag, spec.total_time, integ.drift_tol)
    nsteps = max(1, math.ceil(spec.total_time / dt - 1e-9))
    return nsteps, spec.total_time / nsteps


# --- dense reference -------------------------------------------------------

_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _site_operator(op: np.ndarray, i: int, n: int) -> np.ndarray:
    # bit i of the basis index is the i-th factor from the right
    out = np.array([[1.0]])
    for q in reversed(range(n)):
        out = np.kron(out, op if q == i else np.eye(2))
    return out


def dense_parts(problem: IsingProblem) -> tuple[np.ndarray, np.ndarray]:
    """``(H_B, H_P)`` as dense real matrices from Kronecker products."""
    n = problem.n
    if n > DENSE_CAP:
        raise ResourceError(f"{n} spins exceeds the dense cap of {DENSE_CAP}")
    zs = [_site_operator(_Z, i, n) for i in range(n)]
    hb = sum(_site_operator(_X, i, n) for i in range(n))
    hp = np.zeros((1 << n, 1 << n))
    for (i, j), v in problem.couplings.items():
        hp += v * (zs[i] @ zs[j])
    for i, h in enumerate(problem.fields):
        hp += h * zs[i]
    return hb, hp


def instantaneous_gap(problem: IsingProblem, s: float, cap: int = DENSE_CAP) -> float:
    """Difference of the two lowest eigenvalues of ``H(s)``."""
    if problem.n > cap:
        raise ResourceError(f"{problem.n} spins exceeds the dense cap of {cap}")
    hb, hp = dense_parts(problem)
    w = linalg.eigvalsh((1.0 - s) * hb + s * hp, subset_by_index=[0, 1])
    return float(w[1] - w[0])


def _exact_steps(hb, hp, psi, svals, dt):
    for s in svals:
        w, v = linalg.eigh((1.0 - s) * hb + s * hp)
        psi = v @ (np.exp(-1j * w * dt) * (v.T @ psi))
    return psi


# --- propagation -----------------------------------------------------------

_GAUSS = math.sqrt(3.0) / 6.0
_A1 = 0.25 + _GAUSS
_A2 = 0.25 - _GAUSS


def _run(spec: AnnealSpec, diag: np.ndarray, nsteps: int, dt: float, record: Sequence[int] = ()):
    """Propagate from the initial state; yields ``(psi, snapshots)``."""
    n = spec.problem.n
    sched = resolve_schedule(spec.schedule)
    method = spec.integrator.method
    kern = _backend.kernels
    psi = initial_state(n)
    dmin, dmax = float(diag.min()), float(diag.max())
    center = 0.5 * (dmin + dmax)
    phase = 0.0
    if method == "exact":
        hb, hp = dense_parts(spec.problem)
    stops = sorted(set(int(r) for r in record) | {nsteps})
    snaps = {}
    k0 = 0
    for stop in stops:
        while k0 < stop:
            k1 = min(stop, k0 + _CHUNK)
            ks = np.arange(k0, k1, dtype=np.float64)
            if method == "rk4":
                u = np.arange(2 * k0, 2 * k1 + 1, dtype=np.float64) / (2 * nsteps)
                svals = np.ascontiguousarray(sched(u), dtype=np.float64)
                kern.rk4_steps(diag, n, psi, svals, dt, center)
                # Simpson rule, exact for the linear schedule
                phase += center * dt * float(
                    np.sum(svals[0:-1:2] + 4.0 * svals[1::2] + svals[2::2]) / 6.0
                )
            elif method == "magnus4":
                sa = np.asarray(sched((ks + 0.5 - _GAUSS) / nsteps), dtype=np.float64)
                sb = np.asarray(sched((ks + 0.5 + _GAUSS) / nsteps), dtype=np.float64)
                # exp(-i dt (a1 H_a + a2 H_b)) first, then exp(-i dt (a2 H_a + a1 H_b));
                # each is exp(-i dt/2 H(s_eff)) because H is affine in s
                first = 2.0 * (_A1 * sa + _A2 * sb)
                second = 2.0 * (_A2 * sa + _A1 * sb)
                svals = np.empty(2 * len(ks))
                svals[0::2] = first
                svals[1::2] = second
                kern.chebyshev_steps(diag, n, psi, np.ascontiguousarray(svals), 0.5 * dt, dmin, dmax)
            else:
                svals = np.asarray(sched((ks + 0.5) / nsteps), dtype=np.float64)
                psi = _exact_steps(hb, hp, psi, svals, dt)
            k0 = k1
        if stop in record:
            snaps[stop] = np.abs(psi) ** 2
    if method == "rk4" and phase:
        psi *= np.exp(-1j * phase)
    return psi, snaps


def _prepare(spec: AnnealSpec):
    n = spec.problem.n
    if spec.integrator.method == "exact" and n > DENSE_CAP:
        raise ResourceError(f"the exact propagator is limited to {DENSE_CAP} spins")
    diag = diagonal(spec.problem)
    nsteps, dt = plan_steps(spec, diag)
    work = float(nsteps) * (1 << n)
    if work > spec.integrator.max_work and not spec.integrator.force_long:
        raise ResourceError(
            f"{nsteps} steps on {1 << n} amplitudes exceeds the work cap "
            f"{spec.integrator.max_work:.3g}; use magnus4 or force_long"
        )
    return diag, nsteps, dt


def _finish(psi: np.ndarray, tol: float) -> np.ndarray:
    drift = abs(float(np.linalg.norm(psi)) - 1.0)
    if not drift < tol:
        raise IntegrationAccuracyError(f"norm drifted by {drift:.3g} (bound {tol:.1g})")
    return psi / np.linalg.norm(psi)


def evolve(spec: AnnealSpec) -> np.ndarray:
    """Final amplitudes after annealing for ``spec.total_time``.

    Raises :class:`IntegrationAccuracyError` if the norm drifted by more than
    ``integrator.norm_tol``; otherwise the state is renormalized.
    """
    diag, nsteps, dt = _prepare(spec)
    psi, _ = _run(spec, diag, nsteps, dt)
    return _finish(psi, spec.integrator.norm_tol)


def norm_drift(spec: AnnealSpec) -> float:
    """``| ||psi(T)|| - 1 |`` before renormalization."""
    diag, nsteps, dt = _prepare(spec)
    psi, _ = _run(spec, diag, nsteps, dt)
    return abs(float(np.linalg.norm(psi)) - 1.0)


def trajectory(spec: AnnealSpec, points: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Probabilities at ``points`` evenly spaced fractions of the anneal.

    Returns ``(fractions, probabilities)`` with one row per fraction; the last
    row is the final state.
    """
    diag, nsteps, dt = _prepare(spec)
    marks = sorted({max(1, round(j * nsteps / points)) for j in range(1, points + 1)})
    psi, snaps = _run(spec, diag, nsteps, dt, record=marks)
    _finish(psi, spec.integrator.norm_tol)
    probs = np.array([snaps[m] / snaps[m].sum() for m in marks])
    return np.array(marks, dtype=np.float64) / nsteps, probs


def ground_indices(diag: np.ndarray, rel_tol: float = 1e-9) -> np.ndarray:
    e0 = float(diag.min())
    return np.nonzero(diag <= e0 + rel_tol * max(1.0, abs(e0)))[0]


@dataclass(frozen=True, eq=False)
class SweepResult:
    n: int
    times: np.ndarray
    probabilities: np.ndarray
    ground_probability: np.ndarray
    ground_indices: np.ndarray

    def first_crossing(self, threshold: float = 0.9) -> float | None:
        """Smallest swept time whose ground probability reaches ``threshold``."""
        hits = np.nonzero(self.ground_probability >= threshold)[0]
        return float(self.times[hits[0]]) if len(hits) else None


def _final_probabilities(args):
    problem, total_time, schedule, integrator = args
    psi = evolve(AnnealSpec(problem, total_time, schedule, integrator))
    return np.abs(psi) ** 2


def default_workers() -> int:
    env = os.environ.get("ELTIP_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep(
    problem: IsingProblem,
    times: Sequence[float],
    schedule: Schedule = "linear",
    integrator: Integrator | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Independent anneals for every total time in ``times``."""
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1 or len(times) == 0:
        raise ValueError("times must be a non-empty list")
    if np.any(times <= 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be positive and sorted ascending")
    integrator = integrator or Integrator()
    check_schedule(resolve_schedule(schedule))
    jobs = [(problem, float(t), schedule, integrator) for t in times]
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        # longest runs first, results reassembled in input order
        order = sorted(range(len(jobs)), key=lambda q: -times[q])
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_final_probabilities, [jobs[q] for q in order]))
        rows = [None] * len(jobs)
        for q, r in zip(order, done):
            rows[q] = r
    else:
        rows = [_final_probabilities(j) for j in jobs]
    probs = np.array(rows)
    gidx = ground_indices(diagonal(problem))
    return SweepResult(problem.n, times, probs, probs[:, gidx].sum(axis=1), gidx)


def log_grid(start: float, stop: float, count: int) -> np.ndarray:
    if count == 1:
        return np.array([float(start)])
    return np.logspace(math.log10(start), math.log10(stop), count)
