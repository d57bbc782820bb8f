"""One simulated round for each protocol.

Every round runs the same phases: election (clustered protocols only),
cluster assignment, intra-cluster collection, delivery to the BS, then death
marking. Costs for a round are accumulated into one vector and debited at the
end, so a node spending its last joules still delivers that round's packet.

RNG draw order per round: election draws in ascending node id, then (WEP
only) the chain leader draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wepsim.chain import nearest_head, build_greedy_chain, chain_relay_cost, select_leader
from wepsim.election import ElectionProbabilities, elect, weighted_probabilities
from wepsim.model import Node, NodeClass, Protocol, RoundLog, SimConfig
from wepsim.radio import agg_cost, rx_cost, tx_cost


class SimulationError(RuntimeError):
    """Internal contract violation, e.g. charging energy to a dead node."""


def apply_debit(node: Node, joules: float) -> Node:
    """Charge ``joules`` to ``node``; it dies once its energy is <= 0."""
    if joules < 0:
        raise ValueError(f"negative debit {joules!r}")
    if not node.alive:
        raise SimulationError(f"debit of {joules!r} J on dead node {node.id}")
    node.energy -= joules
    node.alive = node.energy > 0
    return node


@dataclass
class Network:
    """Column-wise state of all nodes in one run."""

    pos: np.ndarray  # (n, 2)
    advanced: np.ndarray  # bool
    initial_energy: np.ndarray
    energy: np.ndarray
    alive: np.ndarray  # bool
    eligible: np.ndarray  # bool, election pool membership

    @property
    def n(self) -> int:
        return len(self.energy)

    @property
    def alive_count(self) -> int:
        return int(self.alive.sum())

    def node(self, i: int) -> Node:
        return Node(
            id=i,
            pos=(float(self.pos[i, 0]), float(self.pos[i, 1])),
            node_class=NodeClass.ADVANCED if self.advanced[i] else NodeClass.NORMAL,
            energy=float(self.energy[i]),
            initial_energy=float(self.initial_energy[i]),
            alive=bool(self.alive[i]),
            elected_in_epoch=not self.eligible[i],
        )

    def nodes(self) -> list[Node]:
        return [self.node(i) for i in range(self.n)]

    def apply_debits(self, costs: np.ndarray) -> None:
        """Debit a full round of costs, then mark deaths."""
        if np.any(costs < 0):
            raise ValueError("negative debit")
        if np.any(costs[~self.alive] != 0):
            dead = np.flatnonzero((costs != 0) & ~self.alive)
            raise SimulationError(f"debit on dead nodes {dead.tolist()}")
        self.energy -= costs
        self.alive &= self.energy > 0
        self.eligible &= self.alive


def election_probabilities(cfg: SimConfig) -> ElectionProbabilities:
    if cfg.protocol.weighted:
        h = cfg.hetero
        return weighted_probabilities(cfg.p_opt, h.m, h.alpha)
    return ElectionProbabilities.uniform(cfg.p_opt)


def _direct(net: Network, alive_ids, costs, cfg: SimConfig) -> dict:
    d = np.sqrt(((net.pos[alive_ids] - np.asarray(cfg.bs)) ** 2).sum(axis=1))
    costs[alive_ids] += tx_cost(cfg.radio, cfg.radio.packet_bits, d)
    return {"bs_uplinks": len(alive_ids), "hops": 1}


def _chain_delivery(net: Network, chain, leader_pos, costs, cfg: SimConfig) -> None:
    per_node, _ = chain_relay_cost(chain, leader_pos, net.pos, cfg.bs, cfg.radio)
    for node, c in per_node.items():
        costs[node] += c


def _clustered(net, alive_ids, costs, cfg: SimConfig, r: int, rng, probs) -> dict:
    radio = cfg.radio
    k = radio.packet_bits
    chs = elect(net.alive, net.eligible, net.advanced, probs, r - 1, rng)
    if chs.size == 0:
        return _direct(net, alive_ids, costs, cfg)

    members = alive_ids[~np.isin(alive_ids, chs)]
    if members.size:
        head = chs[nearest_head(net.pos[members], net.pos[chs])]
        d = np.sqrt(((net.pos[members] - net.pos[head]) ** 2).sum(axis=1))
        costs[members] += tx_cost(radio, k, d)
        cluster_size = np.bincount(np.searchsorted(chs, head), minlength=chs.size)
        cluster_of = dict(zip(members.tolist(), head.tolist()))
    else:
        cluster_size = np.zeros(chs.size, dtype=int)
        cluster_of = {}
    costs[chs] += cluster_size * rx_cost(radio, k) + agg_cost(radio, k, cluster_size + 1)
    collect_hops = 1 if members.size else 0

    out = {"ch_ids": tuple(chs.tolist()), "cluster_of": cluster_of}
    if cfg.protocol is Protocol.WEP:
        chain = build_greedy_chain(chs.tolist(), net.pos, cfg.bs)
        leader_pos = select_leader(chain, rng)
        _chain_delivery(net, chain, leader_pos, costs, cfg)
        out.update(
            chain=tuple(chain),
            leader=chain[leader_pos],
            bs_uplinks=1,
            hops=collect_hops + max(leader_pos, len(chain) - 1 - leader_pos) + 1,
        )
    else:
        d = np.sqrt(((net.pos[chs] - np.asarray(cfg.bs)) ** 2).sum(axis=1))
        costs[chs] += tx_cost(radio, k, d)
        out.update(bs_uplinks=int(chs.size), hops=collect_hops + 1)
    return out


def _pegasis(net, alive_ids, costs, cfg: SimConfig, r: int) -> dict:
    chain = build_greedy_chain(alive_ids.tolist(), net.pos, cfg.bs)
    leader_pos = r % len(chain)
    _chain_delivery(net, chain, leader_pos, costs, cfg)
    return {
        "chain": tuple(chain),
        "leader": chain[leader_pos],
        "bs_uplinks": 1,
        "hops": max(leader_pos, len(chain) - 1 - leader_pos) + 1,
    }


def run_round(net: Network, cfg: SimConfig, r: int, rng, probs=None) -> RoundLog:
    """Simulate 1-based round ``r`` of ``cfg.protocol`` on ``net`` in place."""
    alive_ids = np.flatnonzero(net.alive)
    alive_before = alive_ids.size
    if alive_before == 0:
        return RoundLog(round=r, alive_before=0, alive_after=0, energy_consumed=0.0)

    costs = np.zeros(net.n)
    proto = cfg.protocol
    if proto.clustered:
        if probs is None:
            probs = election_probabilities(cfg)
        extra = _clustered(net, alive_ids, costs, cfg, r, rng, probs)
    elif proto is Protocol.PEGASIS:
        extra = _pegasis(net, alive_ids, costs, cfg, r)
    else:
        extra = _direct(net, alive_ids, costs, cfg)

    net.apply_debits(costs)
    return RoundLog(
        round=r,
        alive_before=int(alive_before),
        alive_after=net.alive_count,
        energy_consumed=math.fsum(costs[alive_ids]),
        **extra,
    )
