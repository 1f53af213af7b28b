# BSD 3-Clause License
#
# Copyright (c) 2025, Faster Speeding
# All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.
#
# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.
#
# * Neither the name of the copyright holder nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.
"""Command line interface for generating curves, running flows and checking inequalities."""
from __future__ import annotations

__all__: list[str] = ["EXIT_FAILED", "EXIT_INVALID", "EXIT_OK", "main", "run_cli"]

import argparse
import concurrent.futures
import csv
import importlib.metadata
import io
import logging
import math
import os
import pathlib
import sys
import typing

import typing_extensions

from . import config
from . import errors
from . import flows
from . import inequalities
from . import mixed
from . import serialisation
from . import support

if typing.TYPE_CHECKING:
    from collections import abc as collections


EXIT_OK: typing.Final[int] = 0
"""Exit code for success."""

EXIT_INVALID: typing.Final[int] = 1
"""Exit code for invalid arguments or input files."""

EXIT_FAILED: typing.Final[int] = 2
"""Exit code for a failed check or a flow which lost convexity."""

_LOGGER = logging.getLogger("convexflow.cli")
_CUSTOM_FAMILIES = (flows.Family.CUSTOM_K, flows.Family.CUSTOM_INV_K)
_FLOW_FAMILIES = [family.value for family in flows.Family if family not in _CUSTOM_FAMILIES]
_SWEEP_HEADER = ("r", "L", "A", "entropy", "ipd", "ipr")


class _UsageError(Exception):
    __slots__ = ()


class _ArgumentParser(argparse.ArgumentParser):
    @typing_extensions.override
    def error(self, message: str) -> typing.NoReturn:
        error_message = f"{self.prog}: error: {message}"
        raise _UsageError(error_message)


class _LevelFormatter(logging.Formatter):
    _COLOURS: typing.ClassVar[dict[int, str]] = {
        logging.DEBUG: "\x1b[36m",
        logging.INFO: "\x1b[32m",
        logging.WARNING: "\x1b[33m",
        logging.ERROR: "\x1b[31m",
        logging.CRITICAL: "\x1b[1;31m",
    }

    def __init__(self, *, colour: bool) -> None:
        super().__init__("%(levelname)s %(name)s: %(message)s")
        self._colour = colour

    @typing_extensions.override
    def format(self, record: logging.LogRecord) -> str:
        if self._colour and (prefix := self._COLOURS.get(record.levelno)):
            record = logging.makeLogRecord(record.__dict__)
            record.levelname = f"{prefix}{record.levelname}\x1b[0m"

        return super().format(record)


def _make_handler(verbosity: int, /) -> logging.Handler:
    colour = "NO_COLOR" not in os.environ and sys.stderr.isatty()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_LevelFormatter(colour=colour))
    handler.setLevel(logging.DEBUG if verbosity > 0 else logging.WARNING if verbosity < 0 else logging.INFO)
    return handler


def _positive_float(value: str, /) -> float:
    try:
        result = float(value)

    except ValueError:
        error_message = f"{value!r} isn't a number"
        raise argparse.ArgumentTypeError(error_message) from None

    if not (math.isfinite(result) and result > 0.0):
        error_message = f"{value!r} isn't a positive number"
        raise argparse.ArgumentTypeError(error_message)

    return result


def _positive_int(value: str, /) -> int:
    try:
        result = int(value)

    except ValueError:
        error_message = f"{value!r} isn't an integer"
        raise argparse.ArgumentTypeError(error_message) from None

    if result < 1:
        error_message = f"{value!r} isn't a positive integer"
        raise argparse.ArgumentTypeError(error_message)

    return result


def _version() -> str:
    try:
        return importlib.metadata.version("convexflow")

    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="convexflow", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug output.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Only log warnings and errors.")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = commands.add_parser("gen", help="Generate random convex curves.")
    gen.add_argument("--seed", type=int, default=config.DEFAULT_CORPUS.seed)
    gen.add_argument("--order", type=int, default=config.DEFAULT_CORPUS.order)
    gen.add_argument("--decay", type=_positive_float, default=config.DEFAULT_CORPUS.decay)
    gen.add_argument("--margin", type=_positive_float, default=config.DEFAULT_CORPUS.margin_floor)
    gen.add_argument("--count", type=_positive_int, default=1, help="Write this many curves into a directory.")
    gen.add_argument("--jobs", type=_positive_int, default=1)
    gen.add_argument("-o", "--output", type=pathlib.Path, required=True)

    summarize = commands.add_parser("summarize", help="Print a curve's summary as JSON.")
    summarize.add_argument("curve", type=pathlib.Path)

    flow = commands.add_parser("flow", help="Run a flow and write its trace.")
    flow.add_argument("--family", choices=_FLOW_FAMILIES, required=True)
    flow.add_argument("--curve", type=pathlib.Path, required=True)
    flow.add_argument("--t-max", type=_positive_float, required=True)
    flow.add_argument("--ipr-tol", type=_positive_float, default=config.DEFAULT_STEP_CONTROL.ipr_tol)
    flow.add_argument("--dt-init", type=_positive_float, default=config.DEFAULT_STEP_CONTROL.dt_init)
    flow.add_argument("--unit-lambda", type=float, default=-1.0, help="λ₀ of the unit normal flow.")
    flow.add_argument("--record-every", type=_positive_int, default=config.DEFAULT_STEP_CONTROL.record_every)
    flow.add_argument("--snapshot-every", type=_positive_int, default=100)
    flow.add_argument("--snapshots", type=pathlib.Path, default=None, help="Directory to write snapshots into.")
    flow.add_argument("--trace", type=pathlib.Path, required=True)

    verify = commands.add_parser("verify", help="Run the inequality battery on curve files or directories.")
    verify.add_argument("paths", type=pathlib.Path, nargs="+")
    verify.add_argument(
        "--only", default=None, help=f"Comma separated checks out of {', '.join(inequalities.BATTERY)}."
    )
    verify.add_argument("--tol", type=_positive_float, default=config.DEFAULT_TOLERANCES.tol)
    verify.add_argument("--jobs", type=_positive_int, default=1)

    relate = commands.add_parser("relate", help="Print the mixed report of a curve pair as JSON.")
    relate.add_argument("first", type=pathlib.Path)
    relate.add_argument("second", type=pathlib.Path)
    relate.add_argument("--tol", type=_positive_float, default=config.DEFAULT_TOLERANCES.tol)

    sweep = commands.add_parser("parallel-sweep", help="Tabulate a curve's parallel offsets.")
    sweep.add_argument("--curve", type=pathlib.Path, required=True)
    sweep.add_argument("--r-max", type=_positive_float, required=True)
    sweep.add_argument("--steps", type=_positive_int, required=True)
    sweep.add_argument("--curves", type=pathlib.Path, default=None, help="Directory to write the offset curves into.")
    sweep.add_argument("-o", "--output", type=pathlib.Path, required=True)
    return parser


def _require_file(path: pathlib.Path, /) -> None:
    if not path.is_file():
        error_message = f"{path} isn't a file"
        raise FileNotFoundError(error_message)


def _require_parent(path: pathlib.Path, /) -> None:
    if not path.parent.is_dir():
        error_message = f"Directory {path.parent} doesn't exist"
        raise FileNotFoundError(error_message)


def _gen(args: argparse.Namespace, /) -> int:
    corpus = config.CorpusConfig(
        seed=args.seed, order=args.order, decay=args.decay, margin_floor=args.margin, count=args.count
    )
    output: pathlib.Path = args.output
    _require_parent(output)
    if corpus.count == 1:
        curve = support.random_convex(corpus.seed, corpus.order, corpus.decay, corpus.margin_floor)
        serialisation.write_curve(curve, output)
        return EXIT_OK

    output.mkdir(exist_ok=True)

    def generate(seed: int, /) -> support.FourierSupport:
        return support.random_convex(seed, corpus.order, corpus.decay, corpus.margin_floor)

    with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as executor:
        for index, curve in enumerate(executor.map(generate, corpus.seeds)):
            serialisation.write_curve(curve, output / f"curve_{index}.json")

    _LOGGER.info("Wrote %s curves to %s", corpus.count, output)
    return EXIT_OK


def _summarize(args: argparse.Namespace, /) -> int:
    _require_file(args.curve)
    curve = serialisation.read_curve(args.curve)
    sys.stdout.write(serialisation.dumps_report(support.summarize(curve).to_dict()))
    return EXIT_OK


def _flow(args: argparse.Namespace, /) -> int:
    _require_file(args.curve)
    _require_parent(args.trace)
    if args.snapshots is not None:
        _require_parent(args.snapshots)

    curve = serialisation.read_curve(args.curve)
    family = flows.Family(args.family)
    if family is flows.Family.UNIT_NORMAL:
        spec = flows.FlowSpec.unit_normal(args.unit_lambda)

    else:
        spec = flows.FlowSpec(family)

    control = config.StepControl(
        dt_init=args.dt_init,
        dt_max=max(args.dt_init, config.DEFAULT_STEP_CONTROL.dt_max),
        t_max=args.t_max,
        ipr_tol=args.ipr_tol,
        record_every=args.record_every,
        snapshot_every=args.snapshot_every if args.snapshots is not None else 0,
    )
    trace = flows.run(spec, curve, control)
    serialisation.write_trace(trace, args.trace)
    if args.snapshots is not None:
        serialisation.write_snapshots(trace.snapshots, args.snapshots)

    result = {"termination": trace.termination.to_dict(), "final": support.summarize(trace.final).to_dict()}
    sys.stdout.write(serialisation.dumps_report(result))
    if isinstance(trace.termination, flows.ConvexityLost | flows.NumericFailure):
        _LOGGER.error("Flow stopped abnormally: %s", trace.termination)
        return EXIT_FAILED

    return EXIT_OK


def _expand_paths(paths: collections.Iterable[pathlib.Path], /) -> list[pathlib.Path]:
    expanded: list[pathlib.Path] = []
    for path in paths:
        if path.is_dir():
            expanded.extend(sorted(path.glob("*.json")))

        else:
            _require_file(path)
            expanded.append(path)

    return expanded


def _verify(args: argparse.Namespace, /) -> int:
    only = None if args.only is None else [name.strip() for name in args.only.split(",") if name.strip()]
    if only is not None and (unknown := [name for name in only if name not in inequalities.BATTERY]):
        error_message = f"Unknown checks: {', '.join(unknown)}"
        raise ValueError(error_message)

    paths = _expand_paths(args.paths)
    curves = [serialisation.read_curve(path) for path in paths]
    tolerances = config.Tolerances(tol=args.tol)

    def check(curve: support.FourierSupport, /) -> list[inequalities.InequalityReport]:
        return inequalities.run_battery(curve, only=only, tolerances=tolerances)

    results: list[dict[str, typing.Any]] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=args.jobs) as executor:
        for path, reports in zip(paths, executor.map(check, curves), strict=True):
            holds = all(report.holds for report in reports)
            if not holds:
                _LOGGER.warning("%s fails %s", path, ", ".join(report.name for report in reports if not report.holds))

            results.append({"path": str(path), "holds": holds, "reports": [report.to_dict() for report in reports]})

    sys.stdout.write(serialisation.dumps_report(results))
    return EXIT_OK if all(result["holds"] for result in results) else EXIT_FAILED


def _relate(args: argparse.Namespace, /) -> int:
    _require_file(args.first)
    _require_file(args.second)
    first = serialisation.read_curve(args.first)
    second = serialisation.read_curve(args.second)
    report = mixed.mixed_report(first, second, tol=args.tol)
    sys.stdout.write(serialisation.dumps_report(report.to_dict()))
    return EXIT_OK


def _parallel_sweep(args: argparse.Namespace, /) -> int:
    _require_file(args.curve)
    _require_parent(args.output)
    if args.curves is not None:
        _require_parent(args.curves)
        args.curves.mkdir(exist_ok=True)

    curve = serialisation.read_curve(args.curve)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_SWEEP_HEADER)
    for index in range(args.steps + 1):
        r = args.r_max * index / args.steps
        offset = support.parallel_offset(curve, r)
        summary = support.summarize(offset)
        entropy = math.nan if summary.entropy is None else summary.entropy
        row = (r, summary.length, summary.area, entropy, summary.ipd, summary.ipr)
        writer.writerow(format(value, ".17g") for value in row)
        if args.curves is not None:
            serialisation.write_curve(offset, args.curves / f"offset_{index}.json")

    args.output.write_text(buffer.getvalue(), encoding="utf-8", newline="\n")
    return EXIT_OK


_COMMANDS: dict[str, collections.Callable[[argparse.Namespace], int]] = {
    "gen": _gen,
    "summarize": _summarize,
    "flow": _flow,
    "verify": _verify,
    "relate": _relate,
    "parallel-sweep": _parallel_sweep,
}


def run_cli(argv: collections.Sequence[str] | None = None, /) -> int:
    """Run the command line interface.

    Parameters
    ----------
    argv
        Arguments excluding the program name; defaults to [sys.argv][].

    Returns
    -------
    int
        [EXIT_OK][convexflow.cli.EXIT_OK], [EXIT_INVALID][convexflow.cli.EXIT_INVALID]
        or [EXIT_FAILED][convexflow.cli.EXIT_FAILED].
    """
    try:
        args = _build_parser().parse_args(argv)

    except _UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INVALID

    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INVALID

    handler = _make_handler(1 if args.verbose else -1 if args.quiet else 0)
    logger = logging.getLogger("convexflow")
    logger.addHandler(handler)
    previous_level = logger.level
    logger.setLevel(logging.DEBUG)
    try:
        return _COMMANDS[args.command](args)

    except (errors.ConvexflowError, ValueError, OSError) as exc:
        _LOGGER.error("%s", exc)  # noqa: TRY400
        return EXIT_INVALID

    finally:
        logger.removeHandler(handler)
        logger.setLevel(previous_level)


def main() -> None:
    """Entry point of the `convexflow` script."""
    sys.exit(run_cli())
