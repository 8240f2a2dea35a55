import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from entromem import (MemorySystem, accept_matrix, eval_register_metrics,
                      eval_system_metrics)


def hand_built_system():
    """Two classes over a 2x4 grid: register 0 holds (0,0), register 1 (3,3)."""
    sys_ = MemorySystem(2, 2, 4)
    sys_.register_instance(0, np.array([0, 0]))
    sys_.register_instance(1, np.array([3, 3]))
    return sys_


HAND_CUES = np.array([[0, 0], [1, 1], [3, 3], [0, 0]])
HAND_LABELS = np.array([0, 0, 1, 1])
# by manual enumeration:
#   cue0 label0: reg0 accepts (TP0); reg1 rejects
#   cue1 label0: both reject        (FN0)
#   cue2 label1: reg1 accepts (TP1); reg0 rejects
#   cue3 label1: reg0 accepts (FP0); reg1 rejects (FN1)


def test_register_counts_match_hand_enumeration():
    per_reg = eval_register_metrics(hand_built_system(), HAND_CUES, HAND_LABELS)
    r0, r1 = per_reg
    assert (r0.tp, r0.fp, r0.fn) == (1, 1, 1)
    assert (r1.tp, r1.fp, r1.fn) == (1, 0, 1)
    assert r0.precision == 0.5 and r0.recall == 0.5
    assert r1.precision == 1.0 and r1.recall == 0.5
    assert not r1.precision_undefined


def test_system_counts_match_hand_enumeration():
    m = eval_system_metrics(hand_built_system(), HAND_CUES, HAND_LABELS)
    assert (m.tp, m.fp, m.fn) == (2, 1, 2)
    assert m.precision == 2 / 3
    assert m.recall == 0.5
    assert m.accepting_avg == 0.75


def test_single_instance_system_is_perfect_on_its_own_cue():
    sys_ = MemorySystem(2, 3, 8)
    fn = np.array([1, 2, 3])
    sys_.register_instance(1, fn)
    m = eval_system_metrics(sys_, fn[None, :], np.array([1]))
    assert (m.tp, m.fp, m.fn) == (1, 0, 0)
    assert m.precision == 1.0 and m.recall == 1.0


def test_all_rejected_reports_sentinel_precision():
    sys_ = hand_built_system()
    cues = np.array([[1, 1], [2, 2]])
    m = eval_system_metrics(sys_, cues, np.array([0, 1]))
    assert m.tp == 0 and m.fp == 0 and m.fn == 2
    assert m.precision == 1.0 and m.precision_undefined
    assert m.recall == 0.0
    per_reg = eval_register_metrics(sys_, cues, np.array([0, 1]))
    assert all(r.precision_undefined for r in per_reg)


def test_single_row_grid_accepts_everything():
    sys_ = MemorySystem(4, 3, 1)
    for label in range(4):
        sys_.register_instance(label, np.zeros(3, dtype=int))
    cues = np.zeros((40, 3), dtype=int)
    labels = np.arange(40) % 4
    per_reg = eval_register_metrics(sys_, cues, labels)
    assert all(r.recall == 1.0 for r in per_reg)
    assert all(abs(r.precision - 0.25) < 1e-12 for r in per_reg)
    m = eval_system_metrics(sys_, cues, labels)
    assert m.accepting_avg == 4.0
    # entropy ties everywhere, filter picks class 0 for every cue
    assert m.tp == 10 and m.fp == 30 and m.fn == 30


def test_accept_matrix_matches_recognize():
    rng = np.random.default_rng(1)
    sys_ = MemorySystem(3, 4, 8)
    for _ in range(12):
        sys_.register_instance(int(rng.integers(3)), rng.integers(0, 8, size=4))
    cues = rng.integers(0, 8, size=(25, 4))
    got = accept_matrix(sys_, cues, tolerance=1)
    for k, cue in enumerate(cues):
        for c, reg in enumerate(sys_.registers):
            assert got[k, c] == reg.recognize(cue, 1)


@st.composite
def random_eval_case(draw):
    classes = draw(st.integers(1, 4))
    n = draw(st.integers(1, 4))
    rows = draw(st.integers(1, 6))
    seed = draw(st.integers(0, 10 ** 6))
    rng = np.random.default_rng(seed)
    sys_ = MemorySystem(classes, n, rows)
    for _ in range(draw(st.integers(1, 10))):
        sys_.register_instance(int(rng.integers(classes)),
                               rng.integers(0, rows, size=n))
    k = draw(st.integers(1, 15))
    return sys_, rng.integers(0, rows, size=(k, n)), rng.integers(0, classes, size=k)


@given(random_eval_case(), st.integers(0, 2))
@settings(max_examples=80, deadline=None)
def test_every_instance_contributes_exactly_once(case, tolerance):
    sys_, cues, labels = case
    m = eval_system_metrics(sys_, cues, labels, tolerance)
    # TP + FN counts every instance once: correct, or rejected, or wrong (FP pairs with FN)
    assert m.tp + m.fn == len(cues)
    assert 0 <= m.fp <= m.fn


@given(random_eval_case(), st.integers(0, 2))
@settings(max_examples=80, deadline=None)
def test_register_counts_are_consistent(case, tolerance):
    sys_, cues, labels = case
    per_reg = eval_register_metrics(sys_, cues, labels, tolerance)
    for r in per_reg:
        assert r.tp + r.fn == int((labels == r.label).sum())
        assert 0 <= r.fp <= int((labels != r.label).sum())
        assert r.entropy == sys_.registers[r.label].entropy()
