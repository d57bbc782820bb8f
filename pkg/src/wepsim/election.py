"""Cluster-head election with class-weighted probabilities.

Each class keeps its own LEACH-style eligibility pool: a node that served as
cluster head is ineligible until its class pool resets, which happens every
``round(1/p_class)`` rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from wepsim.model import ConfigError, Node, NodeClass


@dataclass(frozen=True)
class ElectionProbabilities:
    p_nrm: float
    p_adv: float

    @classmethod
    def uniform(cls, p: float) -> "ElectionProbabilities":
        return cls(p, p)

    def of(self, node_class: NodeClass) -> float:
        return self.p_adv if node_class is NodeClass.ADVANCED else self.p_nrm


@dataclass(frozen=True)
class EpochLengths:
    system: int
    normal: int
    advanced: int


def epoch_rounds(p: float) -> int:
    """Pool length for election probability ``p``: 1/p rounded, ties up."""
    return max(1, int(math.floor(1.0 / p + 0.5)))


def weighted_probabilities(p_opt: float, m: float, alpha: float) -> ElectionProbabilities:
    """Scale p_opt by each class's initial energy relative to a normal node,
    renormalised so the population-average probability stays p_opt."""
    if not 0.0 < p_opt < 1.0:
        raise ConfigError(f"p_opt out of range (0, 1): {p_opt!r}")
    if not 0.0 <= m <= 1.0:
        raise ConfigError(f"m out of range [0, 1]: {m!r}")
    if alpha < 0.0:
        raise ConfigError(f"alpha must be >= 0, got {alpha!r}")
    scale = 1.0 + alpha * m
    p_nrm = p_opt / scale
    p_adv = p_opt * (1.0 + alpha) / scale
    if p_adv >= 1.0:
        raise ConfigError(
            f"advanced-node election probability {p_adv:.4g} >= 1 "
            f"(p_opt={p_opt}, m={m}, alpha={alpha})"
        )
    return ElectionProbabilities(p_nrm, p_adv)


def epoch_length(p_opt: float, m: float, alpha: float) -> EpochLengths:
    probs = weighted_probabilities(p_opt, m, alpha)
    system = int(math.floor((1.0 + alpha * m) / p_opt + 0.5))
    return EpochLengths(system, epoch_rounds(probs.p_nrm), epoch_rounds(probs.p_adv))


def threshold(p: float, r: int, in_pool: bool) -> float:
    """LEACH threshold for a node with probability ``p`` at 0-based round ``r``."""
    if not in_pool:
        return 0.0
    return p / (1.0 - p * (r % epoch_rounds(p)))


def elect(
    alive: np.ndarray,
    eligible: np.ndarray,
    advanced: np.ndarray,
    probs: ElectionProbabilities,
    r: int,
    rng,
) -> np.ndarray:
    """Array form of :func:`elect_cluster_heads`.

    ``eligible`` is updated in place (pool resets, then removal of the newly
    elected). Draws are taken in ascending node id, one per alive eligible
    node. Returns the sorted ids of the elected nodes.
    """
    for is_adv, p in ((False, probs.p_nrm), (True, probs.p_adv)):
        if r % epoch_rounds(p) == 0:
            eligible[alive & (advanced == is_adv)] = True
    eligible &= alive

    candidates = np.flatnonzero(eligible)
    if candidates.size == 0:
        return candidates
    t_nrm = threshold(probs.p_nrm, r, True)
    t_adv = threshold(probs.p_adv, r, True)
    t = np.where(advanced[candidates], t_adv, t_nrm)
    u = np.asarray(rng.random(candidates.size), dtype=float)
    chosen = candidates[u < t]
    eligible[chosen] = False
    return chosen


def elect_cluster_heads(
    nodes: Sequence[Node], probs: ElectionProbabilities, r: int, rng
) -> set[int]:
    """Run one election round over ``nodes`` (0-based round ``r``).

    Updates each node's ``elected_in_epoch`` flag and returns the elected ids.
    """
    nodes = sorted(nodes, key=lambda nd: nd.id)
    alive = np.array([nd.alive for nd in nodes], dtype=bool)
    eligible = np.array([not nd.elected_in_epoch for nd in nodes], dtype=bool)
    advanced = np.array([nd.node_class is NodeClass.ADVANCED for nd in nodes], dtype=bool)
    chosen = elect(alive, eligible, advanced, probs, r, rng)
    for nd, ok in zip(nodes, eligible):
        nd.elected_in_epoch = not ok
    return {nodes[i].id for i in chosen}
