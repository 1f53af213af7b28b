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
"""Convex plane curves represented by the Fourier series of their support function.

A curve is stored as the coefficients of

    u(θ) = a[0] / 2 + Σ_{n=1..N} (a[n] cos nθ + b[n] sin nθ)

where θ is the outward normal angle. The radius of curvature is
`u_θθ + u`, under which mode n is scaled by `1 - n²`; the first harmonic is
therefore a pure translation.
"""
from __future__ import annotations

__all__: list[str] = [
    "CurveSummary",
    "FourierSupport",
    "SampledField",
    "analyze",
    "area",
    "coefficient_distance",
    "convexity_margin",
    "embed",
    "higher_integrals",
    "length",
    "locate_margin",
    "parallel_offset",
    "random_convex",
    "random_corpus",
    "summarize",
    "synthesize",
    "translate_dilate",
]

import logging
import math
import typing

import attrs
import numpy

from . import _internal
from . import errors

if typing.TYPE_CHECKING:
    from collections import abc as collections

    import numpy.typing as npt
    from typing_extensions import Self

    from . import config as config_

    _FloatArray = npt.NDArray[numpy.float64]


_LOGGER = logging.getLogger("convexflow.support")
_LOG_FLOOR = 1e-300


def _to_coefficients(value: npt.ArrayLike, /) -> _FloatArray:
    array = numpy.array(value, dtype=numpy.float64)
    if array.ndim != 1:
        error_message = f"Expected a 1 dimensional coefficient sequence, got shape {array.shape}"
        raise ValueError(error_message)

    array.setflags(write=False)
    return array


@attrs.frozen(eq=False)
class FourierSupport:
    """A convex curve given by the truncated Fourier series of its support function.

    Instances are immutable and their coefficient arrays are read-only.
    """

    cos_coeffs: _FloatArray = attrs.field(converter=_to_coefficients)
    """Cosine coefficients `a[0..N]`; `a[0] / 2` is the constant term."""

    sin_coeffs: _FloatArray = attrs.field(converter=_to_coefficients)
    """Sine coefficients `b[0..N]`; `b[0]` is always 0."""

    def __attrs_post_init__(self) -> None:
        if self.cos_coeffs.shape != self.sin_coeffs.shape:
            error_message = (
                f"Cosine and sine coefficients must have the same length, "
                f"got {self.cos_coeffs.shape[0]} and {self.sin_coeffs.shape[0]}"
            )
            raise ValueError(error_message)

        if self.cos_coeffs.shape[0] < 3:
            error_message = f"A support function needs order >= 2, got {self.cos_coeffs.shape[0] - 1}"
            raise ValueError(error_message)

        if not (numpy.all(numpy.isfinite(self.cos_coeffs)) and numpy.all(numpy.isfinite(self.sin_coeffs))):
            error_message = "Support coefficients must all be finite"
            raise ValueError(error_message)

        if self.sin_coeffs[0] != 0.0:
            error_message = f"b[0] must be 0, not {self.sin_coeffs[0]!r}"
            raise ValueError(error_message)

    @classmethod
    def from_harmonics(
        cls,
        a0: float,
        /,
        *,
        cos: collections.Mapping[int, float] | None = None,
        sin: collections.Mapping[int, float] | None = None,
        order: int | None = None,
    ) -> Self:
        """Build a support function from its non-zero harmonics.

        Parameters
        ----------
        a0
            The `a[0]` coefficient (twice the mean of the support function).
        cos
            Mapping of mode numbers to cosine coefficients.
        sin
            Mapping of mode numbers to sine coefficients.
        order
            Truncation order.

            Defaults to the highest mode given (and at least 2).

        Returns
        -------
        Self
            The built support function.

        Raises
        ------
        ValueError
            If a mode is out of range for `order`.
        """
        cos = cos or {}
        sin = sin or {}
        highest = max([2, *cos.keys(), *sin.keys()])
        order = highest if order is None else order
        cos_coeffs = numpy.zeros(order + 1)
        sin_coeffs = numpy.zeros(order + 1)
        cos_coeffs[0] = a0
        for coeffs, modes in ((cos_coeffs, cos), (sin_coeffs, sin)):
            for mode, value in modes.items():
                if not 1 <= mode <= order:
                    error_message = f"Mode {mode} is out of range for order {order}"
                    raise ValueError(error_message)

                coeffs[mode] = value

        return cls(cos_coeffs, sin_coeffs)

    @classmethod
    def circle(cls, radius: float, /, *, center: tuple[float, float] = (0.0, 0.0), order: int = 2) -> Self:
        """Build the support function of a circle.

        Parameters
        ----------
        radius
            The circle's radius.
        center
            The circle's center.
        order
            Truncation order of the returned coefficients.

        Returns
        -------
        Self
            The circle's support function.
        """
        return cls.from_harmonics(2.0 * radius, cos={1: center[0]}, sin={1: center[1]}, order=order)

    @property
    def order(self) -> int:
        """Truncation order N of the series."""
        return self.cos_coeffs.shape[0] - 1

    def with_order(self, order: int, /) -> Self:
        """Zero pad or truncate this series to `order`."""
        cos_coeffs = numpy.zeros(order + 1)
        sin_coeffs = numpy.zeros(order + 1)
        kept = min(order, self.order) + 1
        cos_coeffs[:kept] = self.cos_coeffs[:kept]
        sin_coeffs[:kept] = self.sin_coeffs[:kept]
        return type(self)(cos_coeffs, sin_coeffs)

    def mode_energies(self) -> _FloatArray:
        """Get `a[n]² + b[n]²` for every mode."""
        return self.cos_coeffs**2 + self.sin_coeffs**2


def coefficient_distance(left: FourierSupport, right: FourierSupport, /) -> float:
    """Get the largest absolute coefficient difference between two curves.

    The lower order curve is zero padded.
    """
    order = max(left.order, right.order)
    left = left.with_order(order)
    right = right.with_order(order)
    return float(
        max(
            numpy.max(numpy.abs(left.cos_coeffs - right.cos_coeffs)),
            numpy.max(numpy.abs(left.sin_coeffs - right.sin_coeffs)),
        )
    )


def _check_grid_size(grid_size: int, /) -> None:
    if grid_size < 4 or grid_size % 2:
        error_message = f"Grid size must be even and at least 4, not {grid_size}"
        raise ValueError(error_message)


def _to_samples(value: npt.ArrayLike, /) -> _FloatArray:
    array = numpy.array(value, dtype=numpy.float64)
    if array.ndim != 1:
        error_message = f"Expected 1 dimensional samples, got shape {array.shape}"
        raise ValueError(error_message)

    _check_grid_size(array.shape[0])
    array.setflags(write=False)
    return array


@attrs.frozen(eq=False)
class SampledField:
    """Real samples of a periodic function at `θ_j = 2πj / M`."""

    values: _FloatArray = attrs.field(converter=_to_samples)
    """The `M` samples, read-only."""

    @classmethod
    def from_function(cls, function: collections.Callable[[_FloatArray], npt.ArrayLike], grid_size: int, /) -> Self:
        """Sample a vectorised function over a uniform grid.

        Parameters
        ----------
        function
            Function of the grid angles (a numpy array) to sample.
        grid_size
            Number of samples; must be even and at least 4.

        Returns
        -------
        Self
            The sampled field.
        """
        _check_grid_size(grid_size)
        thetas = _internal.theta_grid(grid_size)
        return cls(numpy.broadcast_to(numpy.asarray(function(thetas), dtype=numpy.float64), thetas.shape))

    @property
    def grid_size(self) -> int:
        """Number of samples M."""
        return self.values.shape[0]

    @property
    def thetas(self) -> _FloatArray:
        """The sample angles."""
        return _internal.theta_grid(self.grid_size)

    def integral(self) -> float:
        """Integrate this field over [0, 2π) with the trapezoid rule."""
        return _internal.integrate(self.values)


def _support_and_radius(fs: FourierSupport, grid_size: int, /) -> tuple[_FloatArray, _FloatArray]:
    if grid_size < 2 * fs.order + 2:
        error_message = f"Grid size {grid_size} aliases an order {fs.order} curve, needs at least {2 * fs.order + 2}"
        raise errors.AliasingError(error_message)

    spectrum = _internal.to_spectrum(fs.cos_coeffs, fs.sin_coeffs, grid_size)
    support = numpy.fft.irfft(spectrum, n=grid_size)
    modes = numpy.arange(spectrum.shape[0], dtype=numpy.float64)
    radius = numpy.fft.irfft(spectrum * (1.0 - modes**2), n=grid_size)
    return support, radius


def synthesize(fs: FourierSupport, grid_size: int, /) -> tuple[SampledField, SampledField]:
    """Sample a curve's support function and radius of curvature.

    Parameters
    ----------
    fs
        The curve.
    grid_size
        Number of uniform samples M.

    Returns
    -------
    tuple[SampledField, SampledField]
        The support function `u` and the radius of curvature `u_θθ + u`.

    Raises
    ------
    convexflow.errors.AliasingError
        If `grid_size < 2 * order + 2`.
    ValueError
        If `grid_size` is odd or less than 4.
    """
    _check_grid_size(grid_size)
    support, radius = _support_and_radius(fs, grid_size)
    return SampledField(support), SampledField(radius)


def analyze(samples: SampledField, /) -> FourierSupport:
    """Get the Fourier coefficients of a sampled field.

    The returned order is `M / 2 - 1` (the Nyquist mode is dropped), raised
    to 2 for the smallest grids.
    """
    order = max(2, samples.grid_size // 2 - 1)
    spectrum = numpy.fft.rfft(samples.values)
    cos_coeffs, sin_coeffs = _internal.from_spectrum(spectrum, samples.grid_size, order)
    if samples.grid_size // 2 - 1 < order:
        kept = samples.grid_size // 2
        cos_coeffs[kept:] = 0.0
        sin_coeffs[kept:] = 0.0

    return FourierSupport(cos_coeffs, sin_coeffs)


def _dense_radius(fs: FourierSupport, /) -> _FloatArray:
    return _support_and_radius(fs, _internal.dense_grid_size(fs.order))[1]


def locate_margin(fs: FourierSupport, /) -> tuple[float, float]:
    """Get the convexity margin and the normal angle it's attained at."""
    radius = _dense_radius(fs)
    index = int(numpy.argmin(radius))
    return float(radius[index]), 2.0 * math.pi * index / radius.shape[0]


def convexity_margin(fs: FourierSupport, /) -> float:
    """Get the minimum radius of curvature over the dense grid.

    A negative (or tiny) result means the coefficients don't describe a
    strictly convex curve; deciding what to do about that is up to the caller.
    """
    return float(numpy.min(_dense_radius(fs)))


def length(fs: FourierSupport, /) -> float:
    """Get the curve's length `π a[0]`."""
    return math.pi * float(fs.cos_coeffs[0])


def area(fs: FourierSupport, /) -> float:
    """Get the enclosed area `π a[0]² / 4 + (π / 2) Σ (1 - n²)(a[n]² + b[n]²)`."""
    modes = _internal.mode_numbers(fs.order)
    energies = fs.mode_energies()[1:]
    return math.pi * float(fs.cos_coeffs[0]) ** 2 / 4.0 + 0.5 * math.pi * float(
        numpy.sum((1.0 - modes[1:] ** 2) * energies)
    )


def _int_inv_k(fs: FourierSupport, area_: float, /) -> float:
    modes = _internal.mode_numbers(fs.order)
    return math.pi * float(numpy.sum(modes**2 * (modes**2 - 1.0) * fs.mode_energies())) + 2.0 * area_


def _entropy(radius: _FloatArray, area_: float, /) -> float:
    return -_internal.integrate(numpy.log(numpy.maximum(radius, _LOG_FLOOR))) + math.pi * math.log(area_ / math.pi)


def higher_integrals(fs: FourierSupport, /) -> tuple[float, float]:
    """Get `∫(1/k) ds` and the curve's entropy.

    Parameters
    ----------
    fs
        The curve.

    Returns
    -------
    tuple[float, float]
        `∫(1/k) ds = ∫(u_θθ + u)² dθ` (closed form) and the entropy
        `∫ log(k √(A/π)) dθ` (dense quadrature).

    Raises
    ------
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    radius = _dense_radius(fs)
    _internal.require_convex(float(numpy.min(radius)), "Entropy")
    area_ = area(fs)
    return _int_inv_k(fs, area_), _entropy(radius, area_)


@attrs.frozen(kw_only=True)
class CurveSummary:
    """Scalar quantities derived from a curve."""

    length: float
    """Length L."""

    area: float
    """Enclosed area A."""

    ipd: float
    """Isoperimetric difference `L² - 4πA`."""

    ipr: float
    """Isoperimetric ratio `L² / 4πA`."""

    entropy: float | None
    """Entropy `∫ log(k √(A/π)) dθ`, [None][] when the curve isn't strictly convex."""

    int_inv_k: float
    """`∫(1/k) ds`."""

    center: tuple[float, float]
    """Average position vector `(a[1], b[1])`."""

    margin: float
    """Minimum radius of curvature over the dense grid."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this summary to a JSON compatible dict."""
        return {
            "length": self.length,
            "area": self.area,
            "ipd": self.ipd,
            "ipr": self.ipr,
            "entropy": self.entropy,
            "int_inv_k": self.int_inv_k,
            "center": list(self.center),
            "margin": self.margin,
        }


def summarize(fs: FourierSupport, /) -> CurveSummary:
    """Compute every scalar summary of a curve.

    The entropy is only reported when the curve is strictly convex.
    """
    radius = _dense_radius(fs)
    margin = float(numpy.min(radius))
    length_ = length(fs)
    area_ = area(fs)
    entropy = _entropy(radius, area_) if margin > _internal.CONVEXITY_THRESHOLD else None
    return CurveSummary(
        length=length_,
        area=area_,
        ipd=length_**2 - 4.0 * math.pi * area_,
        ipr=length_**2 / (4.0 * math.pi * area_) if area_ > 0.0 else math.inf,
        entropy=entropy,
        int_inv_k=_int_inv_k(fs, area_),
        center=(float(fs.cos_coeffs[1]), float(fs.sin_coeffs[1])),
        margin=margin,
    )


def embed(fs: FourierSupport, theta: float, /) -> tuple[float, float]:
    """Get the point of the curve with outward normal angle `theta`.

    This is `u(θ)(cos θ, sin θ) + u_θ(θ)(-sin θ, cos θ)`.
    """
    modes = _internal.mode_numbers(fs.order)
    cos_terms = numpy.cos(modes * theta)
    sin_terms = numpy.sin(modes * theta)
    terms = fs.cos_coeffs * cos_terms + fs.sin_coeffs * sin_terms
    support = float(fs.cos_coeffs[0]) / 2.0 + float(numpy.sum(terms[1:]))
    derivative = float(numpy.sum(modes * (fs.sin_coeffs * cos_terms - fs.cos_coeffs * sin_terms)))
    cos_theta = math.cos(theta)
    sin_theta = math.sin(theta)
    return (support * cos_theta - derivative * sin_theta, support * sin_theta + derivative * cos_theta)


def parallel_offset(fs: FourierSupport, r: float, /) -> FourierSupport:
    """Get the parallel curve at normal distance `r`.

    Parameters
    ----------
    fs
        The curve.
    r
        Offset distance; negative values give inner parallels.

    Returns
    -------
    FourierSupport
        The offset curve (`a[0]` increased by `2r`).

    Raises
    ------
    convexflow.errors.ConvexityError
        If an inner offset reaches past the convexity margin.
    """
    if r < 0.0:
        margin = convexity_margin(fs)
        if margin + r <= _internal.CONVEXITY_THRESHOLD:
            error_message = f"Inner offset {r!r} would pass the convexity margin {margin!r}"
            raise errors.ConvexityError(error_message, margin=margin + r)

    cos_coeffs = fs.cos_coeffs.copy()
    cos_coeffs[0] += 2.0 * r
    return FourierSupport(cos_coeffs, fs.sin_coeffs)


def translate_dilate(fs: FourierSupport, scale: float, a: float = 0.0, b: float = 0.0, /) -> FourierSupport:
    """Dilate a curve by `scale` about the origin then translate it by `(a, b)`.

    Raises
    ------
    ValueError
        If `scale` isn't positive.
    """
    if scale <= 0.0:
        error_message = f"Dilation factor must be positive, not {scale!r}"
        raise ValueError(error_message)

    cos_coeffs = fs.cos_coeffs * scale
    sin_coeffs = fs.sin_coeffs * scale
    cos_coeffs[1] += a
    sin_coeffs[1] += b
    return FourierSupport(cos_coeffs, sin_coeffs)


def random_convex(seed: int, order: int, decay: float, margin_floor: float, /) -> FourierSupport:
    """Draw a deterministic random convex curve.

    Parameters
    ----------
    seed
        Seed for [numpy.random.default_rng][].
    order
        Truncation order (at least 2).
    decay
        Coefficients of mode n are drawn uniformly from `[-n^-decay, n^-decay]`.
    margin_floor
        Guaranteed lower bound for the returned curve's convexity margin.

    Returns
    -------
    FourierSupport
        The generated curve.

    Raises
    ------
    ValueError
        If `order < 2` or `decay`/`margin_floor` aren't positive.
    """
    if order < 2:
        error_message = f"Order must be at least 2, not {order}"
        raise ValueError(error_message)

    if decay <= 0.0 or margin_floor <= 0.0:
        error_message = f"decay and margin_floor must be positive, got {decay!r} and {margin_floor!r}"
        raise ValueError(error_message)

    rng = numpy.random.default_rng(seed)
    modes = _internal.mode_numbers(order)[1:]
    bounds = modes**-decay
    cos_coeffs = numpy.zeros(order + 1)
    sin_coeffs = numpy.zeros(order + 1)
    cos_coeffs[1:] = rng.uniform(-bounds, bounds)
    sin_coeffs[1:] = rng.uniform(-bounds, bounds)
    # radius >= a[0] / 2 - Σ (n² - 1)(|a[n]| + |b[n]|) >= margin_floor
    weighted = modes**2 * (numpy.abs(cos_coeffs[1:]) + numpy.abs(sin_coeffs[1:]))
    cos_coeffs[0] = 2.0 * (float(numpy.sum(weighted)) + margin_floor)
    _LOGGER.debug("Generated order %s curve from seed %s with a[0]=%s", order, seed, cos_coeffs[0])
    return FourierSupport(cos_coeffs, sin_coeffs)


def random_corpus(config: config_.CorpusConfig, /) -> list[FourierSupport]:
    """Generate every curve of a corpus, in seed order."""
    return [random_convex(seed, config.order, config.decay, config.margin_floor) for seed in config.seeds]
