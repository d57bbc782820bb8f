"""Experiment files: flat ``key = value`` lines with dotted section keys.

The grammar is the TOML subset below, so files are parsed with a TOML
reader. Every key is optional and falls back to the defaults shown::

    protocols = ["WEP", "SEP", "LEACH"]   # or "WEP, SEP, LEACH"
    n = 100
    p_opt = 0.1
    max_rounds = 10000
    output_dir = "out"                    # --out on the command line wins

    field.width = 100.0
    field.height = 100.0
    bs.x = 50.0
    bs.y = 50.0

    hetero.m = 0.2
    hetero.alpha = 3.0
    hetero.e0 = 0.1

    radio.e_elec = 50e-9
    radio.eps_amp = 100e-12
    radio.e_da = 5e-9
    radio.packet_bits = 4000

    seeds.count = 30                      # seeds = base .. base+count-1
    seeds.base = 1
    # seeds.list = [3, 5, 8]              # explicit list instead

    sweep.alpha = [1, 2, 3, 4]            # used by the sweep command
    sweep.m = [0.2]
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from wepsim.model import (
    ConfigError,
    HeterogeneityConfig,
    Protocol,
    RadioParams,
    SimConfig,
    validate_config,
)

DEFAULT_PROTOCOLS = (Protocol.WEP, Protocol.SEP, Protocol.LEACH)
DEFAULT_SEED_COUNT = 30
DEFAULT_BASE_SEED = 1

_SECTIONS = {
    "field": {"width", "height"},
    "bs": {"x", "y"},
    "hetero": {"m", "alpha", "e0"},
    "radio": {"e_elec", "eps_amp", "e_da", "packet_bits"},
    "seeds": {"count", "base", "list"},
    "sweep": {"alpha", "m"},
}
_TOP = {"n", "p_opt", "max_rounds", "protocols", "protocol", "output_dir"}


@dataclass
class ExperimentSpec:
    base: SimConfig = field(default_factory=SimConfig)
    protocols: list[Protocol] = field(default_factory=lambda: list(DEFAULT_PROTOCOLS))
    seeds: list[int] = field(
        default_factory=lambda: seed_range(DEFAULT_SEED_COUNT, DEFAULT_BASE_SEED)
    )
    sweep_alpha: list[float] = field(default_factory=list)
    sweep_m: list[float] = field(default_factory=list)
    output_dir: Optional[Path] = None

    def __post_init__(self):
        if not self.protocols:
            raise ConfigError("experiment needs at least one protocol")
        if not self.seeds:
            raise ConfigError("experiment needs at least one seed")


def seed_range(count: int, base: int) -> list[int]:
    if count < 1:
        raise ConfigError(f"seed count must be >= 1, got {count}")
    return list(range(base, base + count))


def parse_protocols(value) -> list[Protocol]:
    tokens = value.split(",") if isinstance(value, str) else list(value)
    tokens = [str(t) for t in tokens if str(t).strip()]
    return [Protocol.parse(t) for t in tokens]


def parse_number_list(value, name: str) -> list[float]:
    if isinstance(value, (int, float)):
        return [float(value)]
    tokens = value.split(",") if isinstance(value, str) else list(value)
    try:
        out = [float(t) for t in tokens if str(t).strip()]
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from None
    if not out:
        raise ConfigError(f"{name} list is empty")
    return out


def _number(value, name, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if kind is int:
        if float(value) != int(value):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return int(value)
    return float(value)


def spec_from_mapping(data: dict) -> ExperimentSpec:
    for key, value in data.items():
        if key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"{key} must be a section of dotted keys")
            unknown = set(value) - _SECTIONS[key]
            if unknown:
                raise ConfigError(f"unknown key(s) in {key}: {', '.join(sorted(unknown))}")
        elif key not in _TOP:
            raise ConfigError(f"unknown key {key!r}")

    sec = {name: data.get(name, {}) for name in _SECTIONS}
    d = SimConfig()
    hd, rd = d.hetero, d.radio
    base = SimConfig(
        n=_number(data.get("n", d.n), "n", int),
        field=(
            _number(sec["field"].get("width", d.field[0]), "field.width"),
            _number(sec["field"].get("height", d.field[1]), "field.height"),
        ),
        bs=(
            _number(sec["bs"].get("x", d.bs[0]), "bs.x"),
            _number(sec["bs"].get("y", d.bs[1]), "bs.y"),
        ),
        hetero=HeterogeneityConfig(
            m=_number(sec["hetero"].get("m", hd.m), "hetero.m"),
            alpha=_number(sec["hetero"].get("alpha", hd.alpha), "hetero.alpha"),
            e0=_number(sec["hetero"].get("e0", hd.e0), "hetero.e0"),
        ),
        radio=RadioParams(
            e_elec=_number(sec["radio"].get("e_elec", rd.e_elec), "radio.e_elec"),
            eps_amp=_number(sec["radio"].get("eps_amp", rd.eps_amp), "radio.eps_amp"),
            e_da=_number(sec["radio"].get("e_da", rd.e_da), "radio.e_da"),
            packet_bits=_number(sec["radio"].get("packet_bits", rd.packet_bits), "radio.packet_bits", int),
        ),
        p_opt=_number(data.get("p_opt", d.p_opt), "p_opt"),
        max_rounds=_number(data.get("max_rounds", d.max_rounds), "max_rounds", int),
    )
    validate_config(base)

    raw_protocols = data.get("protocols", data.get("protocol"))
    protocols = parse_protocols(raw_protocols) if raw_protocols is not None else list(DEFAULT_PROTOCOLS)

    seeds_sec = sec["seeds"]
    if "list" in seeds_sec:
        seeds = [_number(s, "seeds.list", int) for s in seeds_sec["list"]]
    else:
        seeds = seed_range(
            _number(seeds_sec.get("count", DEFAULT_SEED_COUNT), "seeds.count", int),
            _number(seeds_sec.get("base", DEFAULT_BASE_SEED), "seeds.base", int),
        )

    sweep = sec["sweep"]
    out = data.get("output_dir")
    return ExperimentSpec(
        base=base,
        protocols=protocols,
        seeds=seeds,
        sweep_alpha=parse_number_list(sweep["alpha"], "sweep.alpha") if "alpha" in sweep else [],
        sweep_m=parse_number_list(sweep["m"], "sweep.m") if "m" in sweep else [],
        output_dir=Path(out) if out else None,
    )


def loads(text: str) -> ExperimentSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed experiment file: {exc}") from None
    return spec_from_mapping(data)


def load(path) -> ExperimentSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read experiment file {path}: {exc}") from None
    return loads(text)
