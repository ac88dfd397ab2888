"""Command-line entry point: ``osp-prox {run,grid,verify}``.

Exit codes: 0 success, 1 invariant breach or solver failure, 2 bad config.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..errors import ConfigError, OspError
from .config import ALGORITHMS, ExperimentConfig
from .output import render_svg, write_csv
from .runner import run_experiment
from .verify import run_verify

GRID_CASES = ("case1", "case2", "case3", "case4")
PLOT_LABELS = {"oppm": "OPPM", "optoppm": "OptOPPM", "optoppm_multi": "OptOPPM (multi)"}
THREADS_ENV = "OSP_PROX_THREADS"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="osp-prox", description="Online saddle-point experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, hlp in (("run", "run one configuration"),
                      ("grid", "run 4 cases x 3 algorithms and plot every panel"),
                      ("verify", "run the invariant and oracle suites")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("--out", help="output directory")
        s.add_argument("--seed", type=int)
        s.add_argument("--rounds", type=int)
        s.add_argument("--config", help="JSON file with ExperimentConfig fields")
        if name == "run":
            s.add_argument("--environment")
            s.add_argument("--algorithm", choices=ALGORITHMS)
    return p


def _load(args, **extra) -> ExperimentConfig:
    overrides = {"seed": args.seed, "rounds": args.rounds, **extra}
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig.from_dict({k: v for k, v in overrides.items() if v is not None})


def _out_dir(args, cfg: ExperimentConfig | None = None) -> Path:
    out = Path(args.out or (cfg.out if cfg and cfg.out else "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _report(res) -> int:
    if res.invariants.total == 0:
        return 0
    for name, info in res.invariants.summary().items():
        print(f"error: invariant '{name}' violated {info['count']} time(s) in {res.config.label}, "
              f"first at round {info['first_round']}: {res.invariants.details[name]}",
              file=sys.stderr)
    return 1


def cmd_run(args) -> int:
    cfg = _load(args, environment=args.environment, algorithm=args.algorithm)
    out = _out_dir(args, cfg)
    res = run_experiment(cfg)
    write_csv(res.records, out / f"{cfg.label}.csv")
    render_svg([(PLOT_LABELS[cfg.algorithm], res.records)], "dgap_avg", out / f"{cfg.label}.svg",
               title=f"Average D-Gap, {cfg.environment}")
    snap = res.final
    nereg = "n/a" if snap.nereg_avg is None else f"{snap.nereg_avg:.6g}"
    print(f"{cfg.label}: T={cfg.rounds} avg D-Gap {snap.dgap_avg:.6g}, avg NE-Reg {nereg}, "
          f"{res.doublings} doublings, {res.elapsed:.1f}s")
    return _report(res)


def _grid_worker(cfg_dict: dict):
    return run_experiment(ExperimentConfig.from_dict(cfg_dict))


def grid_workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError(f"{THREADS_ENV} must be >= 0")
    return n


def cmd_grid(args) -> int:
    base = _load(args)
    out = _out_dir(args, base)
    cfgs = [base.replace(environment=env, algorithm=alg, name=f"{env}_{alg}", lags=None,
                         hedge_T_guess=base.hedge_T_guess if alg == "optoppm_multi" else None)
            for env in GRID_CASES for alg in ALGORITHMS]
    workers = min(grid_workers(), len(cfgs))
    if workers <= 1:
        results = [run_experiment(c) for c in cfgs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_grid_worker, [c.to_dict() for c in cfgs]))
    status = 0
    by_env = {}
    for res in results:
        cfg = res.config
        write_csv(res.records, out / f"{cfg.label}.csv")
        by_env.setdefault(cfg.environment, []).append((PLOT_LABELS[cfg.algorithm], res.records))
        nereg = res.final.nereg_avg
        print(f"{cfg.label}: avg D-Gap {res.final.dgap_avg:.6g}, avg NE-Reg "
              f"{'n/a' if nereg is None else f'{nereg:.6g}'}, {res.elapsed:.1f}s")
        status = max(status, _report(res))
    for env in GRID_CASES:
        for metric, word in (("dgap_avg", "D-Gap"), ("nereg_avg", "NE-Reg")):
            render_svg(by_env[env], metric, out / f"{env}_{metric.split('_')[0]}.svg",
                       title=f"Average {word}, {env}")
    return status


def cmd_verify(args) -> int:
    cfg = _load(args) if args.config else None
    rounds = args.rounds or 2000
    seed = args.seed if args.seed is not None else (cfg.seed if cfg else 1)
    suites = run_verify(rounds=rounds, seed=seed)
    lines = []
    for s in suites:
        lines.append(s.line())
        lines.extend(f"  {f}" for f in s.failures[:20])
    text = "\n".join(lines)
    print(text)
    if args.out:
        (_out_dir(args) / "verify_report.txt").write_text(text + "\n", encoding="utf-8")
    return 0 if all(s.passed for s in suites) else 1


def cli_main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    handler = {"run": cmd_run, "grid": cmd_grid, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (OspError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
