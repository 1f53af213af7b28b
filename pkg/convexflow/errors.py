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
"""Exceptions raised by Convexflow."""
from __future__ import annotations

__all__: list[str] = [
    "AliasingError",
    "ConvexflowError",
    "ConvexityError",
    "CurveFormatError",
    "FlowError",
    "StepRejected",
]


class ConvexflowError(Exception):
    """Base class for all the errors raised by Convexflow."""

    __slots__ = ()


class ConvexityError(ConvexflowError, ValueError):
    """Raised when an operation needs a strictly convex curve and didn't get one."""

    __slots__ = ("margin",)

    def __init__(self, message: str, /, *, margin: float) -> None:
        """Initialise a convexity error.

        Parameters
        ----------
        message
            The error's message.
        margin
            The offending minimum radius of curvature.
        """
        super().__init__(message)
        self.margin = margin
        """The minimum radius of curvature which triggered this error."""


class AliasingError(ConvexflowError, ValueError):
    """Raised when a sample grid is too coarse for the requested curve order."""

    __slots__ = ()


class CurveFormatError(ConvexflowError, ValueError):
    """Raised when a serialised curve is malformed."""

    __slots__ = ("column", "field", "line")

    def __init__(
        self, message: str, /, *, field: str | None = None, line: int | None = None, column: int | None = None
    ) -> None:
        """Initialise a curve format error.

        Parameters
        ----------
        message
            The error's message.
        field
            Name of the offending field, if known.
        line
            1-indexed line of a JSON syntax error, if applicable.
        column
            1-indexed column of a JSON syntax error, if applicable.
        """
        super().__init__(message)
        self.field = field
        """Name of the offending field, if known."""

        self.line = line
        """1-indexed line of the JSON syntax error, if applicable."""

        self.column = column
        """1-indexed column of the JSON syntax error, if applicable."""


class StepRejected(ConvexflowError):
    """Raised when a single time step cannot be completed.

    Adaptive drivers catch this and retry with a smaller step.
    """

    __slots__ = ("reason",)

    def __init__(self, reason: str, /) -> None:
        """Initialise a step rejection.

        Parameters
        ----------
        reason
            Diagnostic describing which stage failed and why.
        """
        super().__init__(reason)
        self.reason = reason
        """Diagnostic describing which stage failed and why."""


class FlowError(ConvexflowError, RuntimeError):
    """Raised when a comparison run terminates abnormally."""

    __slots__ = ()
