"""Network construction and the round loop.

A run owns one ``numpy.random.Generator`` seeded from ``cfg.seed``. Draw
order: node x/y positions (n pairs), then the advanced-node ids, then per
round whatever :func:`wepsim.protocols.run_round` consumes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from wepsim.model import (
    RoundLog,
    SimConfig,
    advanced_count,
    total_initial_energy,
    validate_config,
)
from wepsim.protocols import Network, election_probabilities, run_round


@dataclass
class RunResult:
    config: SimConfig
    seed: int
    final_round: int
    initial_energy: float
    positions: np.ndarray
    advanced: np.ndarray
    # per-round series, index i holds round i + 1
    alive: np.ndarray
    energy_consumed: np.ndarray
    ch_count: np.ndarray
    bs_uplinks: np.ndarray
    final_residual: np.ndarray
    logs: Optional[list[RoundLog]] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def protocol(self) -> str:
        return self.config.protocol.value

    def same_outcome(self, other: "RunResult") -> bool:
        return (
            self.config == other.config
            and self.final_round == other.final_round
            and all(
                np.array_equal(getattr(self, name), getattr(other, name))
                for name in ("positions", "advanced", "alive", "energy_consumed",
                             "ch_count", "bs_uplinks", "final_residual")
            )
        )


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def build_network(cfg: SimConfig, positions, advanced=None) -> Network:
    """Network with the given node positions; ``advanced`` is an iterable of
    advanced node ids (none by default)."""
    pos = np.asarray(positions, dtype=float).reshape(-1, 2)
    adv = np.zeros(len(pos), dtype=bool)
    if advanced is not None:
        adv[list(advanced)] = True
    e0, alpha = cfg.hetero.e0, cfg.hetero.alpha
    initial = np.where(adv, e0 * (1.0 + alpha), e0)
    return Network(
        pos=pos,
        advanced=adv,
        initial_energy=initial,
        energy=initial.copy(),
        alive=np.ones(len(pos), dtype=bool),
        eligible=np.ones(len(pos), dtype=bool),
    )


def init_network(cfg: SimConfig, rng) -> Network:
    n = cfg.n
    width, height = cfg.field
    pos = rng.random((n, 2)) * np.array([width, height], dtype=float)
    a = advanced_count(n, cfg.hetero.m)
    adv_ids = rng.choice(n, size=a, replace=False) if a else []
    return build_network(cfg, pos, adv_ids)


def run_simulation(cfg: SimConfig, keep_logs: bool = True, network: Network | None = None) -> RunResult:
    """Run rounds until every node is dead or ``cfg.max_rounds`` is reached.

    ``network`` overrides the random placement (the RNG stream then starts
    directly with the round draws). With ``keep_logs=False`` only the compact
    per-round series are kept.
    """
    validate_config(cfg)
    rng = make_rng(cfg.seed)
    net = network if network is not None else init_network(cfg, rng)
    if net.n != cfg.n:
        raise ValueError(f"network has {net.n} nodes but cfg.n = {cfg.n}")
    positions = net.pos.copy()
    advanced = net.advanced.copy()
    probs = election_probabilities(cfg) if cfg.protocol.clustered else None

    alive, consumed, chs, uplinks = [], [], [], []
    logs: list[RoundLog] | None = [] if keep_logs else None
    r = 0
    while r < cfg.max_rounds and net.alive.any():
        r += 1
        log = run_round(net, cfg, r, rng, probs)
        alive.append(log.alive_after)
        consumed.append(log.energy_consumed)
        chs.append(len(log.ch_ids))
        uplinks.append(log.bs_uplinks)
        if logs is not None:
            logs.append(log)

    return RunResult(
        config=cfg,
        seed=cfg.seed,
        final_round=r,
        initial_energy=total_initial_energy(cfg) if network is None else math.fsum(net.initial_energy),
        positions=positions,
        advanced=advanced,
        alive=np.array(alive, dtype=int),
        energy_consumed=np.array(consumed, dtype=float),
        ch_count=np.array(chs, dtype=int),
        bs_uplinks=np.array(uplinks, dtype=int),
        final_residual=net.energy.copy(),
        logs=logs,
    )


def _run_seed(args) -> RunResult:
    cfg, keep_logs = args
    return run_simulation(cfg, keep_logs=keep_logs)


def run_batch(
    cfg: SimConfig, seeds: Sequence[int], keep_logs: bool = False, workers: int = 1
) -> list[RunResult]:
    """One independent run per seed, returned in the order of ``seeds``."""
    if not seeds:
        raise ValueError("run_batch needs at least one seed")
    jobs = [(cfg.with_(seed=int(s)), keep_logs) for s in seeds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_seed, jobs))
    return [_run_seed(job) for job in jobs]
