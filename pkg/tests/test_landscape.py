import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eltip.ising import IsingProblem, SpinConfig, full_spectrum, hamming_distance
from eltip.landscape import (
    SCORE_FORMULA,
    LandscapeReport,
    analyze,
    default_levels,
    difficulty_score,
    rank_landscapes,
)
from eltip.transform import apply_T

from conftest import TABLE3, table1_problem
from test_ising import problems


def test_fig1a_gap():
    rep = analyze(table1_problem("1a"))
    assert rep.first_excited().gap == pytest.approx(1.4, abs=1e-12)


def test_fig1b_levels():
    rep = analyze(table1_problem("1b"))
    fe = rep.first_excited()
    assert fe.gap == pytest.approx(0.005, abs=1e-12)
    # Table 3 lists the first two 1(b) states; the distance follows from them
    ground, second = (SpinConfig.from_string(t) for t in TABLE3["1b"].split()[:2])
    assert fe.config == second
    assert fe.min_hamming == hamming_distance(ground, second)
    lvl = rep.level_of(SpinConfig.from_string("-+-+"))
    assert lvl.gap == pytest.approx(0.015, abs=1e-12)
    assert lvl.min_hamming == 4


def test_fig1c_and_T0():
    fe = analyze(table1_problem("1c")).first_excited()
    assert fe.gap == pytest.approx(0.01, abs=1e-12)
    assert fe.min_hamming == 4
    rep = analyze(apply_T(table1_problem("1c"), 0))
    assert rep.ground_configs == (SpinConfig.from_string("+-+-"),)
    assert rep.first_excited().min_hamming == 1


def test_report_shape():
    rep = analyze(table1_problem("2b"), levels=6)
    assert len(rep.levels) == 6 and rep.n == 4
    assert rep.levels[0].gap == 0 and rep.levels[0].min_hamming == 0
    assert [l.energy for l in rep.levels] == sorted(l.energy for l in rep.levels)
    assert rep.score_formula == SCORE_FORMULA
    with pytest.raises(ValueError):
        analyze(table1_problem("2b"), levels=0)
    with pytest.raises(ValueError):
        analyze(table1_problem("2b"), levels=17)


def test_default_levels():
    assert default_levels(4) == 16 and default_levels(2) == 4 and default_levels(10) == 16


def test_degenerate_ground_min_over_set():
    # no fields: global flip symmetry doubles every level
    p = IsingProblem(3, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): -0.3})
    rep = analyze(p)
    assert len(rep.ground_configs) == 2
    for l in rep.levels[2:]:
        assert l.min_hamming == min(hamming_distance(l.config, g) for g in rep.ground_configs)


def test_score_zero_without_near_ground_states():
    assert analyze(IsingProblem(1, {}, (1.0,))).difficulty_score == 0.0
    # levels -3.3, -1.3, 1.1, 3.5 with gaps 0, 2, 4.4, 6.8: theta = 1.6 < 2
    p = IsingProblem(2, {(0, 1): 0.1}, (1.2, 2.2))
    assert analyze(p).difficulty_score == 0.0


def test_score_needs_two_levels():
    rep = analyze(table1_problem("1a"), levels=1)
    assert rep.difficulty_score == 0.0
    with pytest.raises(ValueError):
        difficulty_score(rep)


def test_score_hand_computed():
    rep = analyze(table1_problem("1b"))
    gaps = [l.gap for l in rep.levels]
    theta = 0.5 * float(np.median(gaps))
    expect = sum(l.min_hamming / (l.gap + 1e-9) for l in rep.levels if 0 < l.gap < theta)
    assert difficulty_score(rep) == pytest.approx(expect, rel=1e-12)
    assert difficulty_score(rep.levels) == rep.difficulty_score


def test_fig1c_scores_higher_than_T0():
    a = analyze(table1_problem("1c")).difficulty_score
    b = analyze(apply_T(table1_problem("1c"), 0)).difficulty_score
    assert a > b


@settings(max_examples=40, deadline=None)
@given(
    problems(min_n=2, max_n=6, values=st.integers(-9, 9).map(float)),
    st.sampled_from([0.25, 0.5, 2.0, 8.0]),
)
def test_score_scale_covariant(p, factor):
    # power-of-two factors scale every energy exactly, so the same levels pass
    # the theta cut; each term scales as 1/factor up to the epsilon, and
    # integer coefficients keep nonzero gaps >= 1
    a = analyze(p)
    b = analyze(p.scaled(factor))
    assert [l.min_hamming for l in a.levels] == [l.min_hamming for l in b.levels]
    assert b.difficulty_score * factor == pytest.approx(a.difficulty_score, rel=1e-7)
    assert [lab for lab, _ in rank_landscapes(p)] == [lab for lab, _ in rank_landscapes(p.scaled(factor))]


@settings(max_examples=40, deadline=None)
@given(problems(min_n=1, max_n=7), st.data())
def test_report_invariants(p, data):
    rep = analyze(p)
    assert rep.ground_energy == float(full_spectrum(p).energies[0])
    k = data.draw(st.integers(0, p.n - 1))
    assert abs(analyze(apply_T(p, k)).ground_energy - rep.ground_energy) <= 1e-12
    for l in rep.levels:
        if l.gap == 0:
            assert l.min_hamming == 0
        else:
            assert 1 <= l.min_hamming <= p.n
    ranked = rank_landscapes(p)
    labels = [lab for lab, _ in ranked]
    assert sorted(labels) == sorted(["id"] + [f"T{q}" for q in range(p.n)])
    scores = [r.difficulty_score for _, r in ranked]
    assert all(b >= a * (1 - 1e-9) for a, b in zip(scores, scores[1:]))


def test_rank_fig1b_T0_before_original():
    labels = [lab for lab, _ in rank_landscapes(table1_problem("1b"))]
    assert labels.index("T0") < labels.index("id")


def test_rank_fig1c():
    ranked = rank_landscapes(table1_problem("1c"))
    labels = [lab for lab, _ in ranked]
    assert labels.index("T0") < labels.index("id")
    assert labels[-1] == "id"


def test_rank_ties_keep_label_order():
    # h_i = J_ik = c everywhere: every T_k returns the same coefficients
    p = IsingProblem(3, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0}, (1.0, 1.0, 1.0))
    assert all(apply_T(p, k) == p for k in range(3))
    ranked = rank_landscapes(p)
    assert [lab for lab, _ in ranked] == ["id", "T0", "T1", "T2"]
    assert len({r.difficulty_score for _, r in ranked}) == 1


def test_rank_one_spin():
    ranked = rank_landscapes(IsingProblem(1, {}, (0.5,)))
    assert [lab for lab, _ in ranked] == ["id", "T0"]
