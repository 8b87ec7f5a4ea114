import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eltip.errors import DimensionError
from eltip.ising import IsingProblem, SpinConfig, energy, full_spectrum
from eltip.transform import (
    NormalForm,
    apply_T,
    apply_swap,
    apply_word,
    enumerate_landscapes,
    generated_actions,
    landscape_key,
    reduce_word,
    relabel,
    state_permutation,
    verify_spectrum_invariance,
    word_permutation,
)

from conftest import TABLE4_STATES, table1_problem, table4_energies, table4_problem
from test_ising import problems


def test_fig1a_T0_is_row_2a():
    assert apply_T(table1_problem("1a"), 0) == table1_problem("2a")


@pytest.mark.parametrize("k,row", [(0, "T0"), (1, "T1"), (2, "T2")])
def test_table4_rows(k, row):
    assert apply_T(table4_problem("id"), k) == table4_problem(row)


def test_table4_T2_explicit():
    q = apply_T(table4_problem("id"), 2)
    assert dict(q.couplings) == {(0, 1): 3, (0, 2): -7, (1, 2): -16}
    assert q.fields == (5, 10, 13)


def test_symmetric_fixed_point():
    # h_i = J_ik for every i != k
    p = IsingProblem(3, {(0, 1): 2.0, (0, 2): -1.0, (1, 2): 4.0}, (9.0, 2.0, -1.0))
    assert apply_T(p, 0) == p


def test_apply_T_range():
    with pytest.raises(IndexError):
        apply_T(table4_problem("id"), 3)
    with pytest.raises(IndexError):
        apply_T(table4_problem("id"), -1)


def test_swap_examples():
    p = table4_problem("id")
    q = apply_swap(p, 0, 1)
    assert q == IsingProblem(3, {(0, 1): 3, (0, 2): 10, (1, 2): 5}, (-16, -7, 13))
    assert verify_spectrum_invariance(p, q) == 0
    assert apply_swap(q, 0, 1) == p
    with pytest.raises(ValueError):
        apply_swap(p, 1, 1)
    with pytest.raises(IndexError):
        apply_swap(p, 0, 5)


def test_state_permutation_table4():
    p = table4_problem("id")
    sigma = state_permutation(0, 3)
    s = SpinConfig((-1, 1, -1))
    assert sigma(s) == SpinConfig((-1, -1, 1))
    assert energy(apply_T(p, 0), sigma(s)) == -30 == energy(p, s)


@pytest.mark.parametrize("k,row", [(0, "T0"), (1, "T1"), (2, "T2")])
def test_state_permutation_reproduces_table4(k, row):
    # energy printed for state x in the id row must appear at sigma(x) in row T_k
    src = dict(zip(TABLE4_STATES, table4_energies("id")))
    dst = dict(zip(TABLE4_STATES, table4_energies(row)))
    sigma = state_permutation(k, 3)
    for text, e in src.items():
        c = SpinConfig.from_string(text, reverse=True)
        image = sigma(c)
        assert dst["".join(str(image)[::-1])] == e


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_state_permutation_involution(n):
    for k in range(n):
        sigma = state_permutation(k, n)
        arr = sigma.as_array()
        assert np.array_equal(arr[arr], np.arange(1 << n))
        for z in range(1 << n):
            c = SpinConfig.from_index(z, n)
            assert sigma(sigma(c)) == c
            assert sigma(c).index == arr[z]
            if c[k] == 1:
                assert sigma(c) == c


def test_state_permutation_length_check():
    with pytest.raises(DimensionError):
        state_permutation(0, 3)(SpinConfig((1, 1)))


def test_reduce_word_examples():
    n = 4
    assert reduce_word([2, 2], n).is_identity
    nf = reduce_word([1, 3, 1], n)
    assert nf.core is None and nf.permutation == (0, 3, 2, 1)
    nf = reduce_word([2], n)
    assert nf.core == 2 and nf.permutation == (0, 1, 2, 3)
    assert reduce_word([], n).is_identity


def test_word_permutation_single_letter():
    assert word_permutation([0], 3) == (3, 1, 2, 0)


@settings(max_examples=200, deadline=None)
@given(problems(max_n=7), st.data())
def test_reduce_word_matches_letterwise(p, data):
    word = data.draw(st.lists(st.integers(0, p.n - 1), max_size=12))
    nf = reduce_word(word, p.n)
    assert nf.apply(p) == apply_word(p, word)


@settings(max_examples=100, deadline=None)
@given(problems(max_n=10), st.data())
def test_involution(p, data):
    k = data.draw(st.integers(0, p.n - 1))
    assert apply_T(apply_T(p, k), k) == p


@settings(max_examples=100, deadline=None)
@given(problems(min_n=2, max_n=10), st.data())
def test_braid_relation(p, data):
    i, j = data.draw(st.lists(st.integers(0, p.n - 1), min_size=2, max_size=2, unique=True))
    a = apply_word(p, [i, j, i])
    assert a == apply_word(p, [j, i, j])
    assert a == apply_swap(p, i, j)


@settings(max_examples=60, deadline=None)
@given(problems(max_n=9), st.data())
def test_spectrum_and_permutation_consistency(p, data):
    k = data.draw(st.integers(0, p.n - 1))
    q = apply_T(p, k)
    assert verify_spectrum_invariance(p, q) <= 1e-12
    sigma = state_permutation(k, p.n)
    for z in range(1 << p.n):
        c = SpinConfig.from_index(z, p.n)
        assert abs(energy(q, sigma(c)) - energy(p, c)) <= 1e-12


def test_verify_detects_perturbation():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(2, 6)
        couplings = {(i, j): rng.uniform(-3, 3) for i in range(n) for j in range(i + 1, n)}
        p = IsingProblem(n, couplings, tuple(rng.uniform(-3, 3) for _ in range(n)))
        key = rng.choice(sorted(couplings))
        bumped = dict(couplings)
        bumped[key] += 1.0
        q = IsingProblem(n, bumped, p.fields)
        a, b = full_spectrum(p).energies, full_spectrum(q).energies
        # sum(a^2) - sum(b^2) = sum (a-b)(a+b) <= max|a-b| * sum|a+b|, and
        # over all configs sum(b^2) - sum(a^2) = 2^n (2 J + 1) for a unit bump
        bound = (1 << n) * abs(2 * couplings[key] + 1) / np.sum(np.abs(a + b))
        assert verify_spectrum_invariance(p, q) >= bound - 1e-12
        assert verify_spectrum_invariance(p, p) == 0


def test_verify_size_mismatch():
    with pytest.raises(DimensionError):
        verify_spectrum_invariance(IsingProblem(2), IsingProblem(3))


def test_enumerate_landscapes_table4():
    out = enumerate_landscapes(table4_problem("id"))
    assert [lab for lab, _ in out] == ["id", "T0", "T1", "T2"]
    assert [q for _, q in out] == [table4_problem(r) for r in ("id", "T0", "T1", "T2")]


def test_enumerate_landscapes_field_free():
    p = IsingProblem(3, {(0, 1): 1.0, (0, 2): 2.0, (1, 2): 3.0})
    spectra = [full_spectrum(q).energies for _, q in enumerate_landscapes(p)]
    for s in spectra[1:]:
        assert np.array_equal(s, spectra[0])
    for k in range(3):
        q = apply_T(p, k)
        assert all(q.fields[i] == p.coupling(i, k) for i in range(3) if i != k)


def test_enumerate_landscapes_random_integer():
    rng = random.Random(11)
    for _ in range(20):
        p = IsingProblem(
            3,
            {(i, j): rng.randint(-9, 9) for i in range(3) for j in range(i + 1, 3)},
            tuple(rng.randint(-9, 9) for _ in range(3)),
        )
        ref = sorted(full_spectrum(p).energies)
        for _, q in enumerate_landscapes(p):
            assert sorted(full_spectrum(q).energies) == ref


def test_group_order_n3():
    # distinct integers, no accidental coincidences
    p = IsingProblem(3, {(0, 1): 3, (0, 2): 5, (1, 2): 10}, (-7, -16, 13))
    acts = generated_actions(p)
    assert len(acts) == 24
    # independent count: all words of length <= 6 reach the same set
    words = set()
    for m in range(7):
        for w in itertools.product(range(3), repeat=m):
            words.add(apply_word(p, w))
    assert words == acts
    assert len({landscape_key(q) for q in acts}) == 4


def test_relabel_rejects_non_permutation():
    with pytest.raises(ValueError):
        relabel(IsingProblem(3), (0, 0, 1))


def test_normal_form_identity_apply():
    p = table4_problem("id")
    assert NormalForm(None, (0, 1, 2)).apply(p) == p
