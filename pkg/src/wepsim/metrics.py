"""Lifetime metrics (FND/HND/LND), stable/unstable regions and energy split."""

from __future__ import annotations

import math
import statistics
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

METRICS = (
    "fnd",
    "hnd",
    "lnd",
    "stable_len",
    "unstable_len",
    "stable_energy_fraction",
    "unstable_energy_fraction",
    "residual_energy_fraction",
)


@dataclass(frozen=True)
class RunSummary:
    protocol: str
    seed: int
    n: int
    rounds: int
    fnd: Optional[int]
    hnd: Optional[int]
    lnd: Optional[int]
    stable_len: int
    unstable_len: Optional[int]
    total_initial_energy: float
    stable_energy: float
    unstable_energy: float
    stable_energy_fraction: float
    unstable_energy_fraction: float
    # energy still held by nodes (negative part: final over-debits)
    residual_energy_fraction: float
    alive_series: tuple[int, ...]
    energy_series: tuple[float, ...]

    def to_dict(self, series: bool = False) -> dict:
        d = asdict(self)
        if not series:
            del d["alive_series"], d["energy_series"]
        return d


def _first(mask: np.ndarray) -> Optional[int]:
    hit = np.flatnonzero(mask)
    return int(hit[0]) + 1 if hit.size else None


def summarize_series(
    alive: Sequence[int],
    energy: Sequence[float],
    n: int,
    total_initial_energy: float,
    residual: Optional[Sequence[float]] = None,
    protocol: str = "",
    seed: int = 0,
) -> RunSummary:
    """Summary of one run given its per-round alive counts and energy use.

    ``residual`` is the final per-node energy; when omitted it is inferred
    from conservation.
    """
    alive = np.asarray(alive, dtype=int)
    energy = np.asarray(energy, dtype=float)
    if alive.size == 0:
        raise ValueError("cannot summarize a run with no rounds")
    fnd = _first(alive < n)
    hnd = _first(alive <= n // 2)
    lnd = _first(alive == 0)

    if fnd is None:
        stable_len, unstable_len = int(alive.size), None
        stable_e, unstable_e = math.fsum(energy), 0.0
    else:
        stable_len = fnd - 1
        unstable_len = lnd - fnd + 1 if lnd is not None else None
        end = lnd if lnd is not None else alive.size
        stable_e = math.fsum(energy[: fnd - 1])
        unstable_e = math.fsum(energy[fnd - 1 : end])

    if residual is None:
        residual_e = total_initial_energy - math.fsum(energy)
    else:
        residual_e = math.fsum(residual)

    return RunSummary(
        protocol=protocol,
        seed=int(seed),
        n=int(n),
        rounds=int(alive.size),
        fnd=fnd,
        hnd=hnd,
        lnd=lnd,
        stable_len=stable_len,
        unstable_len=unstable_len,
        total_initial_energy=total_initial_energy,
        stable_energy=stable_e,
        unstable_energy=unstable_e,
        stable_energy_fraction=stable_e / total_initial_energy,
        unstable_energy_fraction=unstable_e / total_initial_energy,
        residual_energy_fraction=residual_e / total_initial_energy,
        alive_series=tuple(alive.tolist()),
        energy_series=tuple(energy.tolist()),
    )


def summarize(run) -> RunSummary:
    return summarize_series(
        run.alive,
        run.energy_consumed,
        run.n,
        run.initial_energy,
        residual=run.final_residual,
        protocol=run.protocol,
        seed=run.seed,
    )


def aggregate(summaries: Sequence[RunSummary]) -> dict[str, dict]:
    """Mean/min/max/population stddev per metric; absent values are skipped
    and counted under ``absent``."""
    if not summaries:
        raise ValueError("aggregate needs at least one summary")
    out = {}
    for name in METRICS:
        values = [getattr(s, name) for s in summaries]
        present = [float(v) for v in values if v is not None]
        stats = {"count": len(present), "absent": len(values) - len(present)}
        if present:
            stats.update(
                mean=statistics.fmean(present),
                min=min(present),
                max=max(present),
                std=statistics.pstdev(present),
            )
        else:
            stats.update(mean=None, min=None, max=None, std=None)
        out[name] = stats
    return out
