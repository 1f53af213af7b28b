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
"""Internal spectral helpers used by Convexflow."""
from __future__ import annotations

__all__: list[str] = [
    "CONVEXITY_THRESHOLD",
    "dense_grid_size",
    "from_spectrum",
    "integrate",
    "mode_numbers",
    "next_power_of_two",
    "relative_tolerance",
    "require_convex",
    "spread_within",
    "stepping_grid_size",
    "theta_grid",
    "to_spectrum",
]

import math
import typing

import numpy

from .. import errors

if typing.TYPE_CHECKING:
    from collections import abc as collections

    import numpy.typing as npt

    _FloatArray = npt.NDArray[numpy.float64]


CONVEXITY_THRESHOLD: typing.Final[float] = 1e-9
"""Smallest radius of curvature still treated as strictly convex."""

_DENSE_GRID_FLOOR = 1024
_STEPPING_GRID_FLOOR = 16


def next_power_of_two(value: int, /) -> int:
    """Get the smallest power of two which is greater than or equal to `value`."""
    if value <= 1:
        return 1

    return 1 << (value - 1).bit_length()


def dense_grid_size(order: int, /) -> int:
    """Get the quadrature grid used for margins and integrals of an order `order` curve."""
    return next_power_of_two(max(_DENSE_GRID_FLOOR, 8 * order))


def stepping_grid_size(order: int, /) -> int:
    """Get the collocation grid used by the time steppers."""
    return max(_STEPPING_GRID_FLOOR, next_power_of_two(4 * order))


def theta_grid(grid_size: int, /) -> _FloatArray:
    """Get the `grid_size` uniform angles over [0, 2π)."""
    return 2.0 * math.pi * numpy.arange(grid_size, dtype=numpy.float64) / grid_size


def mode_numbers(order: int, /) -> _FloatArray:
    """Get the mode numbers 0..order as floats."""
    return numpy.arange(order + 1, dtype=numpy.float64)


def integrate(values: _FloatArray, /) -> float:
    """Integrate periodic samples over [0, 2π) with the trapezoid rule."""
    return float(2.0 * math.pi * numpy.sum(values) / values.shape[0])


def to_spectrum(cos_coeffs: _FloatArray, sin_coeffs: _FloatArray, grid_size: int, /) -> npt.NDArray[numpy.complex128]:
    """Pack support coefficients into the half spectrum `numpy.fft.irfft` expects.

    The caller must ensure `grid_size >= 2 * order + 2` so that no stored mode
    lands on (or past) the Nyquist bin.
    """
    spectrum = numpy.zeros(grid_size // 2 + 1, dtype=numpy.complex128)
    order = cos_coeffs.shape[0] - 1
    spectrum[: order + 1] = 0.5 * grid_size * (cos_coeffs - 1j * sin_coeffs)
    return spectrum


def from_spectrum(
    spectrum: npt.NDArray[numpy.complex128], grid_size: int, order: int, /
) -> tuple[_FloatArray, _FloatArray]:
    """Unpack an `numpy.fft.rfft` half spectrum into cosine and sine coefficients.

    Modes above `order` are dropped and missing modes are zero filled.
    """
    cos_coeffs = numpy.zeros(order + 1, dtype=numpy.float64)
    sin_coeffs = numpy.zeros(order + 1, dtype=numpy.float64)
    kept = min(order + 1, spectrum.shape[0])
    scaled = spectrum[:kept] * (2.0 / grid_size)
    cos_coeffs[:kept] = scaled.real
    sin_coeffs[:kept] = -scaled.imag
    sin_coeffs[0] = 0.0
    return cos_coeffs, sin_coeffs


def relative_tolerance(tol: float, /, *values: float) -> float:
    """Scale `tol` by one plus the sum of the magnitudes of `values`."""
    return tol * (1.0 + sum(abs(value) for value in values))


def spread_within(values: collections.Sequence[float], tol: float, /) -> bool:
    """Whether `values` all agree within `tol * (1 + max |value|)`."""
    largest = max(abs(value) for value in values)
    return max(values) - min(values) <= tol * (1.0 + largest)


def require_convex(margin: float, what: str, /) -> None:
    """Raise [ConvexityError][convexflow.errors.ConvexityError] unless `margin` is strictly positive.

    Parameters
    ----------
    margin
        The curve's convexity margin.
    what
        Name of the operation needing convexity, used in the message.
    """
    if margin <= CONVEXITY_THRESHOLD:
        error_message = f"{what} needs a strictly convex curve, but its convexity margin is {margin!r}"
        raise errors.ConvexityError(error_message, margin=margin)
