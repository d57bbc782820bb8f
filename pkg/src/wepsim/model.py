"""Domain types shared by the simulator, plus configuration validation."""

from __future__ import annotations

import enum
import math
import dataclasses
from dataclasses import dataclass, replace
from typing import Optional


class ConfigError(ValueError):
    """Raised when a configuration violates one of its invariants."""


class NodeClass(enum.Enum):
    NORMAL = "normal"
    ADVANCED = "advanced"


class Protocol(str, enum.Enum):
    WEP = "WEP"
    LEACH = "LEACH"
    SEP = "SEP"
    PEGASIS = "PEGASIS"
    DIRECT = "DIRECT"

    @classmethod
    def parse(cls, token: str) -> "Protocol":
        try:
            return cls(token.strip().upper())
        except ValueError:
            known = ", ".join(p.value for p in cls)
            raise ConfigError(f"unknown protocol {token.strip()!r} (expected one of {known})") from None

    @property
    def clustered(self) -> bool:
        return self in (Protocol.WEP, Protocol.LEACH, Protocol.SEP)

    @property
    def weighted(self) -> bool:
        return self in (Protocol.WEP, Protocol.SEP)


@dataclass
class Node:
    """A single sensor. The simulator keeps the same data column-wise in
    :class:`wepsim.engine.Network`; this record is the per-node view."""

    id: int
    pos: tuple[float, float]
    node_class: NodeClass
    energy: float
    initial_energy: float
    alive: bool = True
    elected_in_epoch: bool = False


@dataclass(frozen=True)
class HeterogeneityConfig:
    m: float = 0.2
    alpha: float = 3.0
    e0: float = 0.1


@dataclass(frozen=True)
class RadioParams:
    e_elec: float = 50e-9  # J/bit
    eps_amp: float = 100e-12  # J/bit/m^2
    e_da: float = 5e-9  # J/bit/signal
    packet_bits: int = 4000


@dataclass(frozen=True)
class SimConfig:
    n: int = 100
    field: tuple[float, float] = (100.0, 100.0)
    bs: tuple[float, float] = (50.0, 50.0)
    hetero: HeterogeneityConfig = dataclasses.field(default_factory=HeterogeneityConfig)
    radio: RadioParams = dataclasses.field(default_factory=RadioParams)
    p_opt: float = 0.1
    protocol: Protocol = Protocol.WEP
    max_rounds: int = 10000
    seed: int = 1

    def with_(self, **changes) -> "SimConfig":
        """Copy with top-level fields or ``m``/``alpha``/``e0`` replaced."""
        hetero_keys = {"m", "alpha", "e0"} & changes.keys()
        if hetero_keys:
            hetero = replace(self.hetero, **{k: changes.pop(k) for k in hetero_keys})
            changes["hetero"] = hetero
        return replace(self, **changes)


@dataclass
class RoundLog:
    round: int
    alive_before: int
    alive_after: int
    energy_consumed: float
    ch_ids: tuple[int, ...] = ()
    cluster_of: dict[int, int] = dataclasses.field(default_factory=dict)
    chain: tuple[int, ...] = ()
    leader: Optional[int] = None
    bs_uplinks: int = 0
    # longest path, in radio hops, from any sensing node to the BS
    hops: int = 0


def advanced_count(n: int, m: float) -> int:
    """Number of advanced nodes: m*n rounded to nearest, ties up."""
    return int(math.floor(m * n + 0.5))


def initial_energies(cfg: SimConfig, advanced: Optional[set[int]] = None) -> list[float]:
    """Per-node initial energies in id order.

    Without ``advanced`` the advanced nodes are taken to be the last ids; the
    multiset of energies (and hence their sum) does not depend on which ids.
    """
    h = cfg.hetero
    if advanced is None:
        a = advanced_count(cfg.n, h.m)
        advanced = set(range(cfg.n - a, cfg.n))
    e_adv = h.e0 * (1.0 + h.alpha)
    return [e_adv if i in advanced else h.e0 for i in range(cfg.n)]


def total_initial_energy(cfg: SimConfig) -> float:
    return math.fsum(initial_energies(cfg))


def validate_config(cfg: SimConfig) -> SimConfig:
    """Return ``cfg`` unchanged if it is usable, else raise :class:`ConfigError`.

    All violations are collected so the message names each one.
    """
    problems = []
    if not isinstance(cfg.n, int) or cfg.n < 1:
        problems.append(f"n must be a positive integer, got {cfg.n!r}")
    if not isinstance(cfg.max_rounds, int) or cfg.max_rounds < 1:
        problems.append(f"max_rounds must be >= 1, got {cfg.max_rounds!r}")
    if not 0.0 < cfg.p_opt < 1.0:
        problems.append(f"p_opt out of range (0, 1): {cfg.p_opt!r}")
    w, h = cfg.field
    if not (w > 0 and h > 0):
        problems.append(f"field dimensions must be positive, got {cfg.field!r}")
    if not all(math.isfinite(v) for v in cfg.bs):
        problems.append(f"bs position must be finite, got {cfg.bs!r}")

    het = cfg.hetero
    if not 0.0 <= het.m <= 1.0:
        problems.append(f"m out of range [0, 1]: {het.m!r}")
    if not het.alpha >= 0.0:
        problems.append(f"alpha must be >= 0, got {het.alpha!r}")
    if not het.e0 > 0.0:
        problems.append(f"e0 must be positive, got {het.e0!r}")

    r = cfg.radio
    for name in ("e_elec", "eps_amp", "e_da", "packet_bits"):
        if not getattr(r, name) > 0:
            problems.append(f"radio.{name} must be positive, got {getattr(r, name)!r}")

    if not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2**64:
        problems.append(f"seed must be an unsigned 64-bit integer, got {cfg.seed!r}")
    if not isinstance(cfg.protocol, Protocol):
        problems.append(f"protocol must be a Protocol, got {cfg.protocol!r}")
    elif not problems and cfg.protocol.weighted:
        p_adv = cfg.p_opt * (1 + het.alpha) / (1 + het.alpha * het.m)
        if p_adv >= 1.0:
            problems.append(
                f"advanced-node election probability {p_adv:.4g} >= 1 "
                f"(p_opt={cfg.p_opt}, m={het.m}, alpha={het.alpha})"
            )

    if problems:
        raise ConfigError("; ".join(problems))
    return cfg
