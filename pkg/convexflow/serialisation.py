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
"""Reading and writing curves, flow traces and reports."""
from __future__ import annotations

__all__: list[str] = [
    "TRACE_HEADER",
    "TraceRow",
    "dumps_curve",
    "dumps_report",
    "dumps_trace",
    "loads_curve",
    "loads_trace",
    "read_curve",
    "read_trace",
    "snapshot_name",
    "write_curve",
    "write_snapshots",
    "write_trace",
]

import csv
import io
import json
import math
import pathlib
import typing

import attrs

from . import errors
from . import support

if typing.TYPE_CHECKING:
    from collections import abc as collections

    from . import flows


TRACE_HEADER: typing.Final[tuple[str, ...]] = (
    "t",
    "L",
    "A",
    "ipd",
    "ipr",
    "entropy",
    "int_inv_k",
    "center_x",
    "center_y",
    "margin",
)
"""Column names of a trace CSV, in order."""


def _format_float(value: float, /) -> str:
    return format(value, ".17g")


def dumps_curve(fs: support.FourierSupport, /) -> str:
    """Serialise a curve as `{"order": N, "a": [...], "b": [...]}` with 17 significant digits."""
    cos_coeffs = ", ".join(_format_float(float(value)) for value in fs.cos_coeffs)
    sin_coeffs = ", ".join(_format_float(float(value)) for value in fs.sin_coeffs)
    return f'{{"order": {fs.order}, "a": [{cos_coeffs}], "b": [{sin_coeffs}]}}\n'


def write_curve(fs: support.FourierSupport, path: pathlib.Path, /) -> None:
    """Write a curve to a UTF-8 JSON file."""
    path.write_text(dumps_curve(fs), encoding="utf-8", newline="\n")


def _coefficients(document: dict[str, typing.Any], key: str, order: int, /) -> list[float]:
    values = document.get(key)
    if not isinstance(values, list):
        error_message = f"Field {key!r} must be a list of numbers"
        raise errors.CurveFormatError(error_message, field=key)

    values = typing.cast("list[typing.Any]", values)
    if len(values) != order + 1:
        error_message = f"Field {key!r} must hold order + 1 = {order + 1} values, not {len(values)}"
        raise errors.CurveFormatError(error_message, field=key)

    coefficients: list[float] = []
    for index, value in enumerate(values):
        if isinstance(value, bool) or not isinstance(value, int | float):
            error_message = f"Field {key!r} has a non-finite or non-numeric value at index {index}: {value!r}"
            raise errors.CurveFormatError(error_message, field=key)

        try:
            coefficient = float(value)

        except OverflowError:
            error_message = f"Field {key!r} has a value too large for a float at index {index}"
            raise errors.CurveFormatError(error_message, field=key) from None

        if not math.isfinite(coefficient):
            error_message = f"Field {key!r} has a non-finite or non-numeric value at index {index}: {value!r}"
            raise errors.CurveFormatError(error_message, field=key)

        coefficients.append(coefficient)

    return coefficients


def loads_curve(text: str, /, *, source: str = "<string>") -> support.FourierSupport:
    """Parse a curve from its JSON serialisation.

    Parameters
    ----------
    text
        The JSON document.
    source
        Name of the document's origin, used in error messages.

    Returns
    -------
    convexflow.support.FourierSupport
        The parsed curve.

    Raises
    ------
    convexflow.errors.CurveFormatError
        If the document isn't valid JSON (the error carries the line and
        column) or a field is missing or malformed (the error carries the
        field's name).
    """
    try:
        document = json.loads(text)

    except json.JSONDecodeError as exc:
        error_message = f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}"
        raise errors.CurveFormatError(error_message, line=exc.lineno, column=exc.colno) from None

    except ValueError as exc:
        error_message = f"{source}: {exc}"
        raise errors.CurveFormatError(error_message) from None

    if not isinstance(document, dict):
        error_message = f"{source}: expected a JSON object"
        raise errors.CurveFormatError(error_message)

    document = typing.cast("dict[str, typing.Any]", document)
    order = document.get("order")
    if isinstance(order, bool) or not isinstance(order, int) or order < 2:
        error_message = f"{source}: field 'order' must be an integer >= 2, not {order!r}"
        raise errors.CurveFormatError(error_message, field="order")

    try:
        cos_coeffs = _coefficients(document, "a", order)
        sin_coeffs = _coefficients(document, "b", order)

    except errors.CurveFormatError as exc:
        error_message = f"{source}: {exc}"
        raise errors.CurveFormatError(error_message, field=exc.field) from None

    if sin_coeffs[0] != 0.0:
        error_message = f"{source}: field 'b' must start with 0, not {sin_coeffs[0]!r}"
        raise errors.CurveFormatError(error_message, field="b")

    return support.FourierSupport(cos_coeffs, sin_coeffs)


def read_curve(path: pathlib.Path, /) -> support.FourierSupport:
    """Read a curve from a UTF-8 JSON file.

    Raises
    ------
    convexflow.errors.CurveFormatError
        If the file's contents are malformed.
    OSError
        If the file couldn't be read.
    """
    return loads_curve(path.read_text(encoding="utf-8"), source=str(path))


def _row(t: float, summary: support.CurveSummary, /) -> list[str]:
    entropy = math.nan if summary.entropy is None else summary.entropy
    return [
        _format_float(value)
        for value in (
            t,
            summary.length,
            summary.area,
            summary.ipd,
            summary.ipr,
            entropy,
            summary.int_inv_k,
            summary.center[0],
            summary.center[1],
            summary.margin,
        )
    ]


def dumps_trace(trace: flows.FlowTrace, /) -> str:
    """Serialise a trace's records as CSV with LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    writer.writerows(_row(record.t, record.summary) for record in trace.records)
    return buffer.getvalue()


def write_trace(trace: flows.FlowTrace, path: pathlib.Path, /) -> None:
    """Write a trace's records to a CSV file."""
    path.write_text(dumps_trace(trace), encoding="utf-8", newline="\n")


@attrs.frozen
class TraceRow:
    """One row of a re-read trace CSV."""

    values: dict[str, float]
    """The row's values keyed by [TRACE_HEADER][convexflow.serialisation.TRACE_HEADER] names."""

    def __getitem__(self, key: str, /) -> float:
        return self.values[key]


def loads_trace(text: str, /) -> list[TraceRow]:
    """Parse a trace CSV.

    Raises
    ------
    ValueError
        If the header doesn't match [TRACE_HEADER][convexflow.serialisation.TRACE_HEADER]
        or a value isn't a float.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != TRACE_HEADER:
        error_message = f"Unexpected trace header {header!r}"
        raise ValueError(error_message)

    return [TraceRow(dict(zip(TRACE_HEADER, map(float, row), strict=True))) for row in reader]


def read_trace(path: pathlib.Path, /) -> list[TraceRow]:
    """Read a trace CSV file."""
    return loads_trace(path.read_text(encoding="utf-8"))


def snapshot_name(index: int, t: float, /) -> str:
    """Get the file name of the `index`-th snapshot, taken at `t`."""
    return f"snap_{index}_{_format_float(t)}.json"


def write_snapshots(snapshots: collections.Iterable[flows.Snapshot], directory: pathlib.Path, /) -> list[pathlib.Path]:
    """Write snapshots into a directory as curve JSON files.

    Returns
    -------
    list[pathlib.Path]
        The written paths in snapshot order.
    """
    directory.mkdir(parents=True, exist_ok=True)
    paths: list[pathlib.Path] = []
    for index, snapshot in enumerate(snapshots):
        path = directory / snapshot_name(index, snapshot.t)
        write_curve(snapshot.curve, path)
        paths.append(path)

    return paths


def dumps_report(value: typing.Any, /) -> str:
    """Serialise a JSON compatible report with a trailing newline.

    Non-finite floats are written as `null`.
    """
    return json.dumps(_finite(value), indent=2) + "\n"


def _finite(value: typing.Any, /) -> typing.Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None

    if isinstance(value, dict):
        return {key: _finite(entry) for key, entry in typing.cast("dict[str, typing.Any]", value).items()}

    if isinstance(value, list | tuple):
        return [_finite(entry) for entry in typing.cast("list[typing.Any]", value)]

    return value
