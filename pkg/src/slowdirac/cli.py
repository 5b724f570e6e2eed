"""Command-line entry point.

    slowdirac spectrum  [--config FILE] [--out DIR] [--profile.theta 75 ...]
    slowdirac evolve    ...
    slowdirac zero-mode ...
    slowdirac scenario NAME ...
    slowdirac ensemble  [--noise.a 0.3] [--ensemble.n_seeds 50] ...

Flags mirror the config keys and override values from ``--config``.  On failure
a single JSON line ``{"error": ..., "message": ...}`` goes to stderr and the exit
code is nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments, output
from .config import CATALOG, KEYS, parse_entries, resolve
from .errors import CatalogError, ConfigParseError, ConfigurationError, DomainError

EXIT_USAGE = 2
EXIT_FAILURE = 1

_TASK_OF = {"spectrum": "spectrum", "evolve": "evolve", "zero-mode": "zero-mode"}


class _Parser(argparse.ArgumentParser):
    """Usage errors are reported as one JSON line like every other failure."""

    def error(self, message):
        _fail("usage", f"{self.prog}: {message}", EXIT_USAGE)
        raise SystemExit(EXIT_USAGE)


def _add_common(p):
    p.add_argument("--config", metavar="FILE", help="key=value config file")
    p.add_argument("--out", metavar="DIR", help="output directory (default: output.dir or .)")
    g = p.add_argument_group("config keys")
    for key in KEYS:
        if key in ("scenario", "output.dir"):
            continue
        g.add_argument(f"--{key}", dest=f"key:{key}", metavar="VALUE", default=None)


def build_parser():
    parser = _Parser(prog="slowdirac", description="Dirac solitons in spinor slow light")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("spectrum", "transmission/reflection sweep"),
        ("evolve", "split-step wave-packet evolution"),
        ("zero-mode", "zero-mode profile and residual"),
    ):
        _add_common(sub.add_parser(name, help=desc))
    sc = sub.add_parser("scenario", help="run a catalog scenario")
    sc.add_argument("name", help=f"one of: {', '.join(CATALOG)}")
    _add_common(sc)
    en = sub.add_parser("ensemble", help="noise ensemble over seeds 1..n_seeds")
    _add_common(en)
    return parser


def _resolve_args(args):
    entries = {}
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(exc.errno, f"cannot read {args.config}: {exc.strerror}") from exc
        entries.update(parse_entries(text))
    scenario = entries.pop("scenario", None)
    if args.command == "scenario":
        scenario = args.name
    elif args.command == "ensemble" and scenario is None:
        scenario = "fig5b-noise30"
    for dest, value in vars(args).items():
        if dest.startswith("key:") and value is not None:
            entries[dest[4:]] = value
    if args.out is not None:
        entries["output.dir"] = args.out
    if args.command in _TASK_OF:
        entries["task"] = _TASK_OF[args.command]
    return resolve(scenario, entries)


def _run(args):
    cfg = _resolve_args(args)
    out_dir = output.ensure_dir(cfg.out)
    if args.command == "ensemble":
        amps = cfg.noise_sweep or (cfg.noise_a,)
        report = {}
        result = experiments.ScenarioResult(cfg)
        for a in amps:
            rep = experiments.noise_ensemble(a, cfg.n_seeds, cfg)
            result.ensembles[a] = rep
            report[f"{a:g}"] = rep.as_dict()
        result.summary["ensembles"] = report
    else:
        result = experiments.run_config(cfg)
    paths = output.write_result(result, out_dir)
    print(json.dumps({"status": "ok", "files": [str(p) for p in paths]}))
    return 0


def _fail(kind, message, code, **extra):
    payload = {"error": kind, "message": message}
    payload.update(extra)
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            return _run(args)
    except ConfigParseError as exc:
        return _fail("config", str(exc), EXIT_USAGE, key=exc.key)
    except CatalogError as exc:
        return _fail("catalog", str(exc), EXIT_USAGE)
    except (ConfigurationError, DomainError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_USAGE)
    except OSError as exc:
        return _fail("io", str(exc), EXIT_FAILURE)
    except (ArithmeticError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), EXIT_FAILURE)


if __name__ == "__main__":
    sys.exit(main())
