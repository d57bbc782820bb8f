"""Cluster membership, greedy chain construction and chain relay costs.

``positions`` arguments are indexable by node id (an ``(n, 2)`` array in the
simulator). All ties break toward the lowest node id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from wepsim.model import RadioParams
from wepsim.radio import agg_cost, distance, rx_cost, tx_cost


@dataclass(frozen=True)
class ChainPlan:
    order: tuple[int, ...] = ()
    leader_pos: Optional[int] = None

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise ValueError(f"chain visits a node twice: {self.order}")
        if (self.leader_pos is None) != (len(self.order) == 0):
            raise ValueError("leader_pos must be set iff the chain is nonempty")
        if self.leader_pos is not None and not 0 <= self.leader_pos < len(self.order):
            raise ValueError(f"leader_pos {self.leader_pos} outside chain of {len(self.order)}")

    @property
    def leader(self) -> Optional[int]:
        return None if self.leader_pos is None else self.order[self.leader_pos]

    @property
    def max_hops_to_leader(self) -> int:
        if not self.order:
            return 0
        return max(self.leader_pos, len(self.order) - 1 - self.leader_pos)


def _coords(positions, ids: Sequence[int]) -> np.ndarray:
    if isinstance(positions, np.ndarray):
        return positions[np.asarray(ids, dtype=int)].astype(float, copy=False)
    return np.array([positions[i] for i in ids], dtype=float).reshape(len(ids), 2)


def nearest_head(member_xy: np.ndarray, ch_xy: np.ndarray) -> np.ndarray:
    # squared distances keep exact ties exact; argmin takes the first minimum
    d2 = ((member_xy[:, None, :] - ch_xy[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)


def assign_clusters(node_ids: Iterable[int], ch_ids: Iterable[int], positions) -> dict[int, int]:
    """Map every node in ``node_ids`` to its nearest cluster head."""
    chs = sorted(ch_ids)
    if not chs:
        raise ValueError("assign_clusters needs at least one cluster head")
    members = list(node_ids)
    if not members:
        return {}
    idx = nearest_head(_coords(positions, members), _coords(positions, chs))
    return {m: chs[j] for m, j in zip(members, idx)}


def build_greedy_chain(ch_ids: Iterable[int], positions, bs) -> list[int]:
    """Start at the node farthest from the BS, then keep appending the nearest
    unvisited node to the chain tail."""
    ids = sorted(ch_ids)
    if not ids:
        return []
    xy = _coords(positions, ids)
    to_bs = ((xy - np.asarray(bs, dtype=float)) ** 2).sum(axis=1)
    d2 = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2)

    current = int(to_bs.argmax())
    visited = np.zeros(len(ids), dtype=bool)
    visited[current] = True
    order = [current]
    for _ in range(len(ids) - 1):
        row = np.where(visited, np.inf, d2[current])
        current = int(row.argmin())
        visited[current] = True
        order.append(current)
    return [ids[i] for i in order]


def select_leader(chain: Sequence[int], rng) -> int:
    if len(chain) == 0:
        raise ValueError("cannot select a leader from an empty chain")
    return int(rng.integers(0, len(chain)))


def chain_relay_cost(
    chain: Sequence[int], leader_pos: int, positions, bs, radio: RadioParams
) -> tuple[dict[int, float], float]:
    """Energy for one convergecast along ``chain`` toward its leader.

    Each non-leader node sends one fused packet to its neighbour on the
    leader's side. A node that received ``c`` packets pays ``c`` receptions and
    fuses ``c + 1`` signals. The leader then sends one packet to the BS.
    Returns the per-node costs and their sum.
    """
    if not chain:
        raise ValueError("chain_relay_cost needs a nonempty chain")
    if not 0 <= leader_pos < len(chain):
        raise ValueError(f"leader_pos {leader_pos} outside chain of {len(chain)}")
    k = radio.packet_bits
    cost = {node: 0.0 for node in chain}
    received = {node: 0 for node in chain}

    for i, node in enumerate(chain):
        if i == leader_pos:
            continue
        nxt = chain[i + 1] if i < leader_pos else chain[i - 1]
        cost[node] += tx_cost(radio, k, distance(positions[node], positions[nxt]))
        received[nxt] += 1

    for node, c in received.items():
        if c:
            cost[node] += c * rx_cost(radio, k) + agg_cost(radio, k, c + 1)

    leader = chain[leader_pos]
    cost[leader] += tx_cost(radio, k, distance(positions[leader], bs))
    return cost, math.fsum(cost.values())
