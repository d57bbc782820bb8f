"""Command-line entry point.

    wepsim run   --spec FILE --out DIR [--seeds N] [--base-seed S]
    wepsim sweep --spec FILE --alpha 1,2,3,4 --m 0.2 [--out DIR]
    wepsim figures --out DIR
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from wepsim.engine import run_batch
from wepsim.metrics import aggregate, summarize
from wepsim.model import ConfigError, Protocol, validate_config
from wepsim.plots import emit_plots, region_rows, regions_svg
from wepsim.report import ReportError, emit_csv, summary_document, write_json, write_rows
from wepsim import specfile
from wepsim.specfile import ExperimentSpec, seed_range

log = logging.getLogger("wepsim")

DEFAULT_OUT = Path("wepsim-out")
FIGURE_ALPHAS = (1.0, 2.0, 3.0, 4.0)
FIGURE_M = 0.2
FIGURE_PROTOCOLS = (Protocol.WEP, Protocol.SEP, Protocol.LEACH, Protocol.PEGASIS)
REGION_HEADER = (
    "protocol", "alpha", "m", "seeds", "fnd", "hnd", "lnd",
    "stable_len", "unstable_len", "stable_energy_fraction",
)


def _fmt(v) -> str:
    return "n/a" if v is None else f"{v:.1f}"


def _report_line(label: str, summaries) -> str:
    agg = aggregate(summaries)
    return (
        f"{label:<22} runs={len(summaries):<4d} "
        f"FND={_fmt(agg['fnd']['mean'])} HND={_fmt(agg['hnd']['mean'])} "
        f"LND={_fmt(agg['lnd']['mean'])}"
    )


def run_point(spec: ExperimentSpec, out: Path, alpha=None, m=None, workers: int = 1, echo=print):
    """Run every protocol of ``spec`` at one (alpha, m) point and write the
    per-protocol CSVs and the three plots into ``out``."""
    base = spec.base
    if alpha is not None:
        base = base.with_(alpha=alpha)
    if m is not None:
        base = base.with_(m=m)
    out.mkdir(parents=True, exist_ok=True)
    groups, summaries = {}, {}
    for proto in spec.protocols:
        cfg = validate_config(replace(base, protocol=proto))
        runs = run_batch(cfg, spec.seeds, workers=workers)
        emit_csv(runs, out / f"{proto.value}.csv")
        groups[proto.value] = runs
        summaries[proto.value] = [summarize(r) for r in runs]
        echo(_report_line(proto.value if alpha is None else
                          f"{proto.value} a={base.hetero.alpha:g} m={base.hetero.m:g}",
                          summaries[proto.value]))
    emit_plots(groups, out)
    return base, summaries


def cmd_run(spec: ExperimentSpec, out: Path, workers: int = 1, echo=print) -> int:
    base, summaries = run_point(spec, out, workers=workers, echo=echo)
    doc = summary_document(summaries, {
        "command": "run",
        "seeds": spec.seeds,
        "alpha": base.hetero.alpha,
        "m": base.hetero.m,
        "p_opt": base.p_opt,
    })
    write_json(doc, out / "summary.json")
    return 0


def cmd_sweep(spec: ExperimentSpec, out: Path, alphas: Sequence[float], ms: Sequence[float],
              workers: int = 1, echo=print) -> int:
    if not alphas or not ms:
        raise ConfigError("sweep needs nonempty alpha and m lists")
    out.mkdir(parents=True, exist_ok=True)
    by_point, labelled = {}, {}
    for m in ms:
        for alpha in alphas:
            sub = out / f"a{alpha:g}_m{m:g}"
            _, summaries = run_point(spec, sub, alpha=alpha, m=m, workers=workers, echo=echo)
            for proto, ss in summaries.items():
                by_point[(proto, alpha, m)] = ss
                labelled[f"{proto} a={alpha:g} m={m:g}"] = ss
    rows = region_rows(by_point)
    write_rows(rows, REGION_HEADER, out / "regions.csv")
    for m in ms:
        subset = [r for r in rows if r["m"] == m]
        name = "regions.svg" if len(ms) == 1 else f"regions_m{m:g}.svg"
        (out / name).write_text(
            regions_svg(subset, title=f"Stable and unstable region length (m={m:g})"), encoding="utf-8"
        )
    doc = summary_document(labelled, {
        "command": "sweep",
        "seeds": spec.seeds,
        "alpha": list(alphas),
        "m": list(ms),
        "p_opt": spec.base.p_opt,
    })
    write_json(doc, out / "summary.json")
    return 0


def _float_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wepsim", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_required=True):
        if spec_required:
            p.add_argument("--spec", required=True, type=Path, help="experiment file")
        p.add_argument("--out", type=Path, help="output directory (created if missing)")
        p.add_argument("--seeds", type=int, help="number of seeds")
        p.add_argument("--base-seed", type=int, help="first seed")
        p.add_argument("--workers", type=int, default=1, help="parallel runs")

    common(sub.add_parser("run", help="compare protocols at one configuration"))
    sweep = sub.add_parser("sweep", help="protocol x alpha x m sweep")
    common(sweep)
    sweep.add_argument("--alpha", type=_float_list, help="comma-separated alpha values")
    sweep.add_argument("--m", type=_float_list, help="comma-separated m values")
    common(sub.add_parser("figures", help="the four m=0.2, alpha=1..4 heterogeneous cases"), spec_required=False)
    return parser


def _apply_seed_flags(spec: ExperimentSpec, args) -> ExperimentSpec:
    if args.seeds is None and args.base_seed is None:
        return spec
    count = args.seeds if args.seeds is not None else len(spec.seeds)
    base = args.base_seed if args.base_seed is not None else spec.seeds[0]
    return replace(spec, seeds=seed_range(count, base))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "figures":
            spec = ExperimentSpec(protocols=list(FIGURE_PROTOCOLS))
        else:
            spec = specfile.load(args.spec)
        spec = _apply_seed_flags(spec, args)
        out = args.out or spec.output_dir or DEFAULT_OUT
        log.debug("writing to %s", out)

        if args.command == "run":
            return cmd_run(spec, out, workers=args.workers)
        if args.command == "figures":
            return cmd_sweep(spec, out, FIGURE_ALPHAS, [FIGURE_M], workers=args.workers)
        alphas = args.alpha or spec.sweep_alpha
        ms = args.m or spec.sweep_m or [spec.base.hetero.m]
        if not alphas:
            parser.error("sweep needs --alpha (or sweep.alpha in the experiment file)")
        return cmd_sweep(spec, out, alphas, ms, workers=args.workers)
    except (ConfigError, ReportError) as exc:
        print(f"wepsim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wepsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
