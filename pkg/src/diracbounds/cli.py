"""Command-line front end: ``diracbounds {constants,verify,count}``.

Exit status: 0 when every check passes, 1 on a failed check, 2 on usage or
configuration errors, 3 on numerical failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

import numpy as np

from . import __version__, suites
from .config import COUNT_SUITES, VERIFY_SUITES, RunConfig
from .errors import ComputationError, DiracBoundsError, UsageError
from .report import ReportEnvelope

log = logging.getLogger("diracbounds")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _run_suites(command: str, cfg: RunConfig, registry: dict, names) -> ReportEnvelope:
    env = ReportEnvelope(command, cfg.to_dict())
    for name in cfg.selected(names):
        t0 = time.perf_counter()
        log.info("running suite %s", name)
        env.checks.extend(registry[name](cfg))
        env.timings[name] = time.perf_counter() - t0
    return env


def cmd_constants(cfg: RunConfig) -> ReportEnvelope:
    t0 = time.perf_counter()
    env = ReportEnvelope("constants", cfg.to_dict(), table=suites.constants_table(cfg))
    env.timings["constants"] = time.perf_counter() - t0
    return env


def cmd_verify(cfg: RunConfig) -> ReportEnvelope:
    return _run_suites("verify", cfg, suites.VERIFY, VERIFY_SUITES)


def cmd_count(cfg: RunConfig) -> ReportEnvelope:
    return _run_suites("count", cfg, suites.COUNT, COUNT_SUITES)


COMMANDS = {"constants": cmd_constants, "verify": cmd_verify, "count": cmd_count}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diracbounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} command")
        p.add_argument("--config", help="JSON config file (flat keys; defaults apply to missing keys)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--no-timings", action="store_true",
                       help="omit wall-clock timings so reruns are byte-identical")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        with np.errstate(all="ignore"):
            env = COMMANDS[args.command](cfg)
        text = env.to_csv() if args.format == "csv" else env.to_json(timings=not args.no_timings)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc}") from exc
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"diracbounds: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ComputationError as exc:
        print(f"diracbounds: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DiracBoundsError as exc:
        print(f"diracbounds: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"diracbounds: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for c in env.failed:
        print(c.line(), file=sys.stderr)
    return EXIT_OK if env.all_passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
