"""Ising problems, spin configurations and exhaustive spectra.

Basis-index convention used everywhere in the package: bit ``i`` of an
integer index ``z`` is set exactly when spin ``i`` is ``-1``.  Index 0 is
therefore the all-up configuration.  Text renderings put spin 0 leftmost.
"""
from __future__ import annotations

import math
import types
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import _backend
from .errors import DimensionError, ResourceError

#: Largest spin count :func:`full_spectrum` enumerates unless told otherwise.
ENUMERATION_CAP = 24

_MINUS_SIGNS = {"-", "−"}


@dataclass(frozen=True)
class SpinConfig:
    """A classical assignment of +1/-1 to ``n`` spins."""

    spins: tuple[int, ...]

    def __post_init__(self):
        spins = tuple(int(s) for s in self.spins)
        if any(s not in (1, -1) for s in spins):
            raise ValueError(f"spins must be +1 or -1, got {self.spins!r}")
        object.__setattr__(self, "spins", spins)

    @property
    def n(self) -> int:
        return len(self.spins)

    @property
    def index(self) -> int:
        return sum(1 << i for i, s in enumerate(self.spins) if s == -1)

    @classmethod
    def from_index(cls, z: int, n: int) -> SpinConfig:
        if not 0 <= z < (1 << n):
            raise ValueError(f"index {z} out of range for {n} spins")
        return cls(tuple(-1 if (z >> i) & 1 else 1 for i in range(n)))

    @classmethod
    def from_string(cls, text: str, reverse: bool = False) -> SpinConfig:
        """Parse ``"+-+-"`` (brackets and spaces ignored, ASCII or unicode minus).

        ``reverse=True`` reads the string with spin 0 rightmost.
        """
        spins = []
        for ch in text:
            if ch == "+":
                spins.append(1)
            elif ch in _MINUS_SIGNS:
                spins.append(-1)
            elif ch in "[] ":
                continue
            else:
                raise ValueError(f"unexpected character {ch!r} in config {text!r}")
        if reverse:
            spins.reverse()
        return cls(tuple(spins))

    def flipped(self) -> SpinConfig:
        return SpinConfig(tuple(-s for s in self.spins))

    def __str__(self) -> str:
        return "".join("+" if s == 1 else "-" for s in self.spins)

    def __len__(self) -> int:
        return len(self.spins)

    def __iter__(self) -> Iterator[int]:
        return iter(self.spins)

    def __getitem__(self, i):
        return self.spins[i]


def _check_finite(value, what):
    v = float(value)
    if not math.isfinite(v):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class IsingProblem:
    """Coefficients of ``sum_{i<j} J_ij s_i s_j + sum_i h_i s_i``.

    Couplings are stored sparsely and keyed by ``(i, j)`` with ``i < j``;
    zero couplings are dropped so that an explicit zero and an absent pair
    compare equal.
    """

    n: int
    couplings: Mapping[tuple[int, int], float] = types.MappingProxyType({})
    fields: tuple[float, ...] = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"spin count must be >= 1, got {self.n}")
        object.__setattr__(self, "n", n)

        fields = tuple(self.fields) if self.fields is not None else ()
        if len(fields) == 0:
            fields = (0.0,) * n
        if len(fields) != n:
            raise DimensionError(f"expected {n} fields, got {len(fields)}")
        # adding 0.0 folds -0.0 into 0.0
        fields = tuple(_check_finite(h, f"h[{i}]") + 0.0 for i, h in enumerate(fields))
        object.__setattr__(self, "fields", fields)

        pairs = {}
        for key, value in dict(self.couplings or {}).items():
            i, j = (int(k) for k in key)
            if not 0 <= i < j < n:
                raise ValueError(f"coupling index ({i}, {j}) violates 0 <= i < j < {n}")
            v = _check_finite(value, f"J[{i},{j}]")
            if v != 0.0:
                pairs[(i, j)] = v
        object.__setattr__(self, "couplings", types.MappingProxyType(dict(sorted(pairs.items()))))

    def __hash__(self):
        return hash((self.n, tuple(self.couplings.items()), self.fields))

    def __reduce__(self):
        # mappingproxy does not pickle; rebuild from a plain dict
        return (IsingProblem, (self.n, dict(self.couplings), self.fields))

    def __eq__(self, other):
        if not isinstance(other, IsingProblem):
            return NotImplemented
        return (
            self.n == other.n
            and self.fields == other.fields
            and dict(self.couplings) == dict(other.couplings)
        )

    def __repr__(self):
        return f"IsingProblem(n={self.n}, couplings={dict(self.couplings)}, fields={self.fields})"

    def coupling(self, i: int, j: int) -> float:
        """``J_ij`` for either index order; 0 for absent pairs."""
        if i > j:
            i, j = j, i
        return self.couplings.get((i, j), 0.0)

    def scaled(self, factor: float) -> IsingProblem:
        return IsingProblem(
            self.n,
            {k: v * factor for k, v in self.couplings.items()},
            tuple(h * factor for h in self.fields),
        )

    @cached_property
    def term_arrays(self):
        """``(pair_i, pair_j, pair_value, fields)`` arrays in canonical order."""
        items = list(self.couplings.items())
        pi = np.array([k[0] for k, _ in items], dtype=np.int64)
        pj = np.array([k[1] for k, _ in items], dtype=np.int64)
        pv = np.array([v for _, v in items], dtype=np.float64)
        return pi, pj, pv, np.array(self.fields, dtype=np.float64)


def _check_length(problem: IsingProblem, config: SpinConfig):
    if len(config) != problem.n:
        raise DimensionError(f"config has {len(config)} spins, problem has {problem.n}")


def energy(problem: IsingProblem, config: SpinConfig | Iterable[int]) -> float:
    """Classical energy of ``config``.

    Terms are accumulated pairs first (in sorted pair order), then fields in
    index order; the enumeration kernels use the same order so both paths
    agree bit for bit.
    """
    if not isinstance(config, SpinConfig):
        config = SpinConfig(tuple(config))
    _check_length(problem, config)
    s = config.spins
    e = 0.0
    for (i, j), v in problem.couplings.items():
        e += v * (s[i] * s[j])
    for i, h in enumerate(problem.fields):
        e += h * s[i]
    return e


def diagonal(problem: IsingProblem) -> np.ndarray:
    """Energies of all ``2**n`` configs indexed by basis index."""
    pi, pj, pv, h = problem.term_arrays
    return _backend.kernels.diagonal_energies(problem.n, pi, pj, pv, h)


def lex_keys(n: int) -> np.ndarray:
    """Sort key per basis index: lexicographic, spin 0 first, ``+1 < -1``."""
    z = np.arange(1 << n, dtype=np.int64)
    key = np.zeros_like(z)
    for i in range(n):
        key |= ((z >> i) & 1) << (n - 1 - i)
    return key


@dataclass(frozen=True, eq=False)
class Spectrum:
    """All ``2**n`` classical levels, ascending by energy.

    Stored as parallel arrays; ``levels`` materializes ``(energy, SpinConfig)``
    pairs on demand.
    """

    n: int
    energies: np.ndarray
    indices: np.ndarray

    def __len__(self):
        return len(self.energies)

    def __getitem__(self, k):
        return float(self.energies[k]), SpinConfig.from_index(int(self.indices[k]), self.n)

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    @property
    def levels(self) -> list[tuple[float, SpinConfig]]:
        return list(self)

    def head(self, count: int) -> list[tuple[float, SpinConfig]]:
        return [self[k] for k in range(min(count, len(self)))]


def full_spectrum(problem: IsingProblem, cap: int | None = None) -> Spectrum:
    """Enumerate every configuration and sort.

    Ties are broken lexicographically on the config with ``+1`` before ``-1``.
    """
    cap = ENUMERATION_CAP if cap is None else cap
    if problem.n > cap:
        raise ResourceError(f"{problem.n} spins exceeds the enumeration cap of {cap}")
    energies = diagonal(problem)
    order = np.lexsort((lex_keys(problem.n), energies))
    return Spectrum(problem.n, energies[order], order.astype(np.int64))


def hamming_distance(a: SpinConfig, b: SpinConfig) -> int:
    if len(a) != len(b):
        raise DimensionError(f"configs have different lengths {len(a)} and {len(b)}")
    return sum(x != y for x, y in zip(a, b))


def parity_transform(problem: IsingProblem) -> IsingProblem:
    """Negate every field; same spectrum, each config maps to its global flip."""
    return IsingProblem(problem.n, problem.couplings, tuple(-h for h in problem.fields))


def gauge_flip(problem: IsingProblem, spins: Iterable[int]) -> IsingProblem:
    """Flip the sign convention of the given spins.

    ``h_i`` changes sign for every flipped spin and ``J_ij`` changes sign when
    exactly one endpoint is flipped.  The spectrum is unchanged.
    """
    flip = set(int(i) for i in spins)
    if any(not 0 <= i < problem.n for i in flip):
        raise IndexError(f"spin index out of range in {sorted(flip)}")
    couplings = {
        (i, j): (-v if (i in flip) != (j in flip) else v)
        for (i, j), v in problem.couplings.items()
    }
    fields = tuple(-h if i in flip else h for i, h in enumerate(problem.fields))
    return IsingProblem(problem.n, couplings, fields)


@dataclass(frozen=True)
class PromotedProblem:
    """A field-free problem on ``n + 1`` spins; the last spin is the ancilla."""

    inner: IsingProblem

    def __post_init__(self):
        if any(h != 0.0 for h in self.inner.fields):
            raise ValueError("promoted problems must be field-free")
        if self.inner.n < 2:
            raise ValueError("promoted problems need at least two spins")

    @property
    def ancilla_index(self) -> int:
        return self.inner.n - 1


def promote_with_ancilla(problem: IsingProblem) -> PromotedProblem:
    """Trade every field ``h_i`` for a coupling to an added ancilla spin ``n``."""
    n = problem.n
    couplings = dict(problem.couplings)
    for i, h in enumerate(problem.fields):
        couplings[(i, n)] = h
    return PromotedProblem(IsingProblem(n + 1, couplings))


def fix_ancilla(promoted: PromotedProblem | IsingProblem, k: int) -> IsingProblem:
    """Pin spin ``k`` of a field-free problem to +1 and drop it.

    Couplings to ``k`` become fields.  When ``k`` is not the last spin, the
    last spin takes over label ``k`` so the result keeps labels ``0..n-1``.
    """
    inner = promoted.inner if isinstance(promoted, PromotedProblem) else promoted
    if any(h != 0.0 for h in inner.fields):
        raise ValueError("fix_ancilla needs a field-free problem")
    m = inner.n
    if not 0 <= k < m:
        raise IndexError(f"spin {k} out of range for {m} spins")
    if m < 2:
        raise ValueError("cannot fix the only spin")
    last = m - 1

    def label(a):
        return k if a == last else a

    fields = [0.0] * (m - 1)
    couplings = {}
    for (a, b), v in inner.couplings.items():
        if a == k:
            fields[label(b)] = v
        elif b == k:
            fields[label(a)] = v
        else:
            la, lb = sorted((label(a), label(b)))
            couplings[(la, lb)] = v
    return IsingProblem(m - 1, couplings, tuple(fields))
