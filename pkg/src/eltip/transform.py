"""Spectrum-preserving landscape transformations.

``apply_T(P, k)`` exchanges the roles of the field ``h_i`` and the coupling
``J_ik`` for every ``i != k``.  Seen through :func:`~eltip.ising.promote_with_ancilla`
it is the relabeling that swaps spin ``k`` with the ancilla, followed by
pinning the ancilla back to +1.  All generated maps are therefore
permutations of ``n + 1`` labels, which is what :func:`reduce_word` uses.

Effect on states: a config with ``s_k = +1`` keeps its energy under the
transformed problem.  When ``s_k = -1``, the promoted config (``s``, ancilla
+1) is first relabeled, which leaves the ancilla at -1; flipping every
promoted spin (a symmetry of the field-free problem) restores it, so the
energy moves to the config with every spin except ``k`` negated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError
from .ising import IsingProblem, SpinConfig, full_spectrum


def _check_spin(k: int, n: int):
    if not 0 <= k < n:
        raise IndexError(f"spin index {k} out of range for {n} spins")


def apply_T(problem: IsingProblem, k: int) -> IsingProblem:
    n = problem.n
    _check_spin(k, n)
    h = problem.fields
    couplings = {key: v for key, v in problem.couplings.items() if k not in key}
    fields = list(h)
    for i in range(n):
        if i == k:
            continue
        couplings[(min(i, k), max(i, k))] = h[i]
        fields[i] = problem.coupling(i, k)
    return IsingProblem(n, couplings, tuple(fields))


def relabel(problem: IsingProblem, perm: Sequence[int]) -> IsingProblem:
    """Move spin ``a`` to label ``perm[a]``."""
    n = problem.n
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm!r} is not a permutation of {n} labels")
    couplings = {}
    for (a, b), v in problem.couplings.items():
        pa, pb = perm[a], perm[b]
        couplings[(min(pa, pb), max(pa, pb))] = v
    fields = [0.0] * n
    for a, h in enumerate(problem.fields):
        fields[perm[a]] = h
    return IsingProblem(n, couplings, tuple(fields))


def apply_swap(problem: IsingProblem, i: int, j: int) -> IsingProblem:
    n = problem.n
    _check_spin(i, n)
    _check_spin(j, n)
    if i == j:
        raise ValueError("swap needs two distinct spins")
    perm = list(range(n))
    perm[i], perm[j] = j, i
    return relabel(problem, perm)


def apply_word(problem: IsingProblem, word: Iterable[int]) -> IsingProblem:
    """Apply generators left to right."""
    for k in word:
        problem = apply_T(problem, k)
    return problem


@dataclass(frozen=True)
class StatePermutation:
    """Where each config's energy lands after ``apply_T(., k)``."""

    k: int
    n: int

    def __post_init__(self):
        _check_spin(self.k, self.n)

    def __call__(self, config: SpinConfig) -> SpinConfig:
        if len(config) != self.n:
            raise DimensionError(f"config has {len(config)} spins, expected {self.n}")
        if config[self.k] == 1:
            return config
        return SpinConfig(tuple(s if i == self.k else -s for i, s in enumerate(config)))

    def as_array(self) -> np.ndarray:
        """Image basis index for every basis index."""
        z = np.arange(1 << self.n, dtype=np.int64)
        others = ((1 << self.n) - 1) ^ (1 << self.k)
        return np.where((z >> self.k) & 1, z ^ others, z)


def state_permutation(k: int, n: int) -> StatePermutation:
    return StatePermutation(k, n)


@dataclass(frozen=True)
class NormalForm:
    """At most one generator followed by a relabeling of the real spins.

    ``core`` is ``None`` for the identity.  ``permutation[a]`` is the new
    label of spin ``a``.
    """

    core: int | None
    permutation: tuple[int, ...]

    def apply(self, problem: IsingProblem) -> IsingProblem:
        if self.core is not None:
            problem = apply_T(problem, self.core)
        if self.permutation != tuple(range(problem.n)):
            problem = relabel(problem, self.permutation)
        return problem

    @property
    def is_identity(self) -> bool:
        return self.core is None and self.permutation == tuple(range(len(self.permutation)))


def word_permutation(word: Iterable[int], n: int) -> tuple[int, ...]:
    """The label map on ``n + 1`` labels (ancilla last) produced by a word."""
    sigma = list(range(n + 1))
    for k in word:
        _check_spin(k, n)
        # T_k swaps labels k and n after everything applied so far
        sigma = [n if x == k else k if x == n else x for x in sigma]
    return tuple(sigma)


def reduce_word(word: Sequence[int], n: int) -> NormalForm:
    """Collapse a generator word into ``core`` plus a spin relabeling.

    The word acts on the promoted problem as a permutation ``sigma`` of the
    ``n + 1`` labels.  Writing ``sigma = rho o (c n)`` with ``rho`` fixing the
    ancilla gives ``c = sigma^-1(n)``; ``c == n`` means no generator is left.
    """
    sigma = word_permutation(word, n)
    c = sigma.index(n)
    if c == n:
        return NormalForm(None, sigma[:n])
    tau = list(range(n + 1))
    tau[c], tau[n] = n, c
    rho = tuple(sigma[tau[a]] for a in range(n + 1))
    assert rho[n] == n
    return NormalForm(c, rho[:n])


def enumerate_landscapes(problem: IsingProblem) -> list[tuple[str, IsingProblem]]:
    """The original problem and its ``n`` single-generator images."""
    return [("id", problem)] + [(f"T{k}", apply_T(problem, k)) for k in range(problem.n)]


def verify_spectrum_invariance(a: IsingProblem, b: IsingProblem, cap: int | None = None) -> float:
    """Largest absolute difference between the two sorted spectra."""
    if a.n != b.n:
        raise DimensionError(f"problems have {a.n} and {b.n} spins")
    ea = full_spectrum(a, cap).energies
    eb = full_spectrum(b, cap).energies
    return float(np.max(np.abs(ea - eb)))


def generated_actions(problem: IsingProblem) -> set[IsingProblem]:
    """Closure of ``problem`` under all generators (breadth-first)."""
    seen = {problem}
    frontier = [problem]
    while frontier:
        nxt = []
        for p in frontier:
            for k in range(p.n):
                q = apply_T(p, k)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return seen


def landscape_key(problem: IsingProblem) -> tuple:
    """Canonical form up to relabeling of the real spins (brute force over n!)."""
    best = None
    for perm in itertools.permutations(range(problem.n)):
        q = relabel(problem, perm)
        key = (tuple(q.couplings.items()), q.fields)
        if best is None or key < best:
            best = key
    return best
