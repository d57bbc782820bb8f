import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tests.conftest import StubRng
from wepsim.election import (
    ElectionProbabilities,
    elect,
    elect_cluster_heads,
    epoch_length,
    epoch_rounds,
    threshold,
    weighted_probabilities,
)
from wepsim.model import ConfigError, Node, NodeClass

BELOW_ONE = 1.0 - 1e-12


def test_weighted_probabilities_default_case():
    probs = weighted_probabilities(0.1, 0.2, 3.0)
    assert probs.p_nrm == pytest.approx(0.0625, abs=1e-15)
    assert probs.p_adv == pytest.approx(0.25, abs=1e-15)
    assert 0.8 * probs.p_nrm + 0.2 * probs.p_adv == pytest.approx(0.1, abs=1e-15)


def test_weighted_probabilities_homogeneous_collapse():
    assert weighted_probabilities(0.1, 0.2, 0.0) == ElectionProbabilities(0.1, 0.1)
    assert weighted_probabilities(0.1, 0.0, 5.0).p_nrm == 0.1


def test_weighted_probabilities_small_case():
    probs = weighted_probabilities(0.05, 0.1, 1.0)
    assert probs.p_nrm == pytest.approx(0.045455, abs=1e-6)
    assert probs.p_adv == pytest.approx(0.090909, abs=1e-6)


def test_weighted_probabilities_rejects_degenerate():
    with pytest.raises(ConfigError):
        weighted_probabilities(0.5, 0.2, 3.0)
    with pytest.raises(ConfigError):
        weighted_probabilities(0.0, 0.2, 3.0)


@given(p=st.floats(1e-4, 0.2), m=st.floats(0, 1), alpha=st.floats(0, 3))
def test_population_average_preserved(p, m, alpha):
    probs = weighted_probabilities(p, m, alpha)
    assert abs((1 - m) * probs.p_nrm + m * probs.p_adv - p) <= 1e-12
    assert 0 < probs.p_nrm <= probs.p_adv < 1


def test_epoch_length():
    assert epoch_length(0.1, 0.2, 3.0).system == 16
    assert epoch_length(0.1, 0.0, 3.0).system == 10
    assert epoch_length(0.05, 0.2, 4.0).system == 36
    e = epoch_length(0.1, 0.2, 3.0)
    assert (e.normal, e.advanced) == (16, 4)


def test_threshold_examples():
    assert threshold(0.25, 3, False) == 0.0
    assert threshold(0.25, 0, True) == 0.25
    assert threshold(0.0625, 8, True) == pytest.approx(0.125, abs=1e-15)


@given(p=st.floats(0.001, 0.999), r=st.integers(0, 10**6))
def test_threshold_denominator_positive(p, r):
    t = threshold(p, r, True)
    assert t >= p
    assert np.isfinite(t)


def test_threshold_reaches_one_at_epoch_end():
    assert threshold(0.25, 3, True) == 1.0
    assert threshold(0.0625, 15, True) == 1.0


def _nodes(n, advanced=()):
    return [
        Node(i, (0.0, 0.0), NodeClass.ADVANCED if i in advanced else NodeClass.NORMAL, 0.1, 0.1)
        for i in range(n)
    ]


def test_all_dead_elects_nobody():
    nodes = _nodes(5)
    for nd in nodes:
        nd.alive = False
    assert elect_cluster_heads(nodes, ElectionProbabilities.uniform(0.1), 0, StubRng([0.0])) == set()


def test_single_node_zero_draw_elected():
    nodes = _nodes(1)
    assert elect_cluster_heads(nodes, ElectionProbabilities.uniform(0.1), 0, StubRng([0.0])) == {0}
    assert nodes[0].elected_in_epoch


def test_draws_follow_ascending_id():
    # node 2 gets the first draw, node 5 the second; only the first is low
    nodes = _nodes(6)
    for i in (0, 1, 3, 4):
        nodes[i].elected_in_epoch = True
    chosen = elect_cluster_heads(
        list(reversed(nodes)), ElectionProbabilities.uniform(0.1), 1, StubRng([0.01, 0.9])
    )
    assert chosen == {2}


def _enumerate_epochs(n, p, rounds):
    """Every election history over ``rounds`` rounds when each draw is either
    certain to pass (0.0) or as high as possible (just below 1)."""

    def walk(r, eligible, counts):
        if r == rounds:
            yield counts
            return
        k = int(eligible.sum()) if r % epoch_rounds(p) else n
        for pattern in itertools.product((0.0, BELOW_ONE), repeat=k):
            el = eligible.copy()
            chosen = elect(
                np.ones(n, dtype=bool), el, np.zeros(n, dtype=bool),
                ElectionProbabilities.uniform(p), r, StubRng(pattern or (0.0,)),
            )
            c = counts.copy()
            c[chosen] += 1
            yield from walk(r + 1, el, c)

    yield from walk(0, np.ones(n, dtype=bool), np.zeros(n, dtype=int))


def test_each_node_elected_exactly_once_per_epoch_exhaustive():
    histories = list(_enumerate_epochs(4, 0.25, 4))
    assert len(histories) > 1
    for counts in histories:
        assert counts.tolist() == [1, 1, 1, 1]


def test_pool_resets_for_second_epoch():
    for counts in _enumerate_epochs(3, 1 / 3, 6):
        assert counts.tolist() == [2, 2, 2]


def test_per_class_pools_reset_independently():
    # normal pool is 16 rounds, advanced pool 4 rounds
    probs = weighted_probabilities(0.1, 0.2, 3.0)
    n = 10
    advanced = np.zeros(n, dtype=bool)
    advanced[[1, 6]] = True
    alive = np.ones(n, dtype=bool)
    eligible = np.ones(n, dtype=bool)
    counts = np.zeros(n, dtype=int)
    rng = np.random.default_rng(3)
    for r in range(32):
        counts[elect(alive, eligible, advanced, probs, r, rng)] += 1
    assert counts[advanced].tolist() == [8, 8]
    assert counts[~advanced].tolist() == [2] * 8


@given(seed=st.integers(0, 10**6), dead=st.sets(st.integers(0, 19), max_size=20))
def test_dead_nodes_never_elected(seed, dead):
    n = 20
    alive = np.ones(n, dtype=bool)
    alive[list(dead)] = False
    eligible = np.ones(n, dtype=bool)
    rng = np.random.default_rng(seed)
    for r in range(12):
        chosen = elect(alive, eligible, np.zeros(n, dtype=bool), ElectionProbabilities.uniform(0.25), r, rng)
        assert not set(chosen.tolist()) & dead


def test_alpha_zero_thresholds_match_leach():
    probs = weighted_probabilities(0.1, 0.2, 0.0)
    leach = ElectionProbabilities.uniform(0.1)
    for r in range(40):
        for cls in NodeClass:
            assert threshold(probs.of(cls), r, True) == threshold(leach.of(cls), r, True)
