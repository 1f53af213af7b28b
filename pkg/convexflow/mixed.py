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
"""Minkowski sums, mixed areas and the homothetic/parallel classification of curve pairs."""
from __future__ import annotations

__all__: list[str] = [
    "Homothetic",
    "MixedReport",
    "Neither",
    "Parallel",
    "ParallelDerivatives",
    "Relation",
    "classify_relation",
    "harmonic_decoy",
    "ipd_of_combination",
    "minkowski_sum",
    "mixed_area",
    "mixed_area_quadrature",
    "mixed_report",
    "parallel_derivatives",
]

import logging
import math
import typing

import attrs
import numpy

from . import _internal
from . import config
from . import support

if typing.TYPE_CHECKING:
    import numpy.typing as npt

    _FloatArray = npt.NDArray[numpy.float64]


_LOGGER = logging.getLogger("convexflow.mixed")


def _aligned(
    fs1: support.FourierSupport, fs2: support.FourierSupport, /
) -> tuple[support.FourierSupport, support.FourierSupport]:
    order = max(fs1.order, fs2.order)
    return fs1.with_order(order), fs2.with_order(order)


def _require_convex_pair(fs1: support.FourierSupport, fs2: support.FourierSupport, what: str, /) -> None:
    _internal.require_convex(support.convexity_margin(fs1), what)
    _internal.require_convex(support.convexity_margin(fs2), what)


def minkowski_sum(fs1: support.FourierSupport, fs2: support.FourierSupport, /) -> support.FourierSupport:
    """Get the Minkowski sum of two curves; support functions add."""
    fs1, fs2 = _aligned(fs1, fs2)
    return support.FourierSupport(fs1.cos_coeffs + fs2.cos_coeffs, fs1.sin_coeffs + fs2.sin_coeffs)


def _mixed_area(fs1: support.FourierSupport, fs2: support.FourierSupport, /) -> float:
    fs1, fs2 = _aligned(fs1, fs2)
    modes = _internal.mode_numbers(fs1.order)[1:]
    products = fs1.cos_coeffs[1:] * fs2.cos_coeffs[1:] + fs1.sin_coeffs[1:] * fs2.sin_coeffs[1:]
    return math.pi * float(fs1.cos_coeffs[0] * fs2.cos_coeffs[0]) / 4.0 + 0.5 * math.pi * float(
        numpy.sum((1.0 - modes**2) * products)
    )


def mixed_area(fs1: support.FourierSupport, fs2: support.FourierSupport, /) -> float:
    """Get the mixed area `A12 = ½ ∫u₁ (u₂'' + u₂) dθ` in closed form.

    This is `(π/4) a₀¹ a₀² + (π/2) Σ_{n≥1} (1 - n²)(aₙ¹ aₙ² + bₙ¹ bₙ²)`.

    Raises
    ------
    convexflow.errors.ConvexityError
        If either curve isn't strictly convex.
    """
    _require_convex_pair(fs1, fs2, "The mixed area")
    return _mixed_area(fs1, fs2)


def mixed_area_quadrature(
    fs1: support.FourierSupport, fs2: support.FourierSupport, /, *, grid_size: int | None = None
) -> float:
    """Get the mixed area by trapezoid quadrature of `½ ∫u₁ (u₂'' + u₂) dθ`."""
    fs1, fs2 = _aligned(fs1, fs2)
    grid_size = grid_size or _internal.dense_grid_size(fs1.order)
    support1, _ = support.synthesize(fs1, grid_size)
    _, radius2 = support.synthesize(fs2, grid_size)
    return 0.5 * _internal.integrate(support1.values * radius2.values)


def ipd_of_combination(fs1: support.FourierSupport, fs2: support.FourierSupport, alpha: float, beta: float, /) -> float:
    """Get the IPD of the curve with support function `α u₁ + β u₂`.

    This equals `α² I₁ + β² I₂ + 2αβ (L₁ L₂ - 4π A12)`.
    """
    fs1, fs2 = _aligned(fs1, fs2)
    combined = support.FourierSupport(
        alpha * fs1.cos_coeffs + beta * fs2.cos_coeffs, alpha * fs1.sin_coeffs + beta * fs2.sin_coeffs
    )
    return support.length(combined) ** 2 - 4.0 * math.pi * support.area(combined)


@attrs.frozen
class Homothetic:
    """`u₂ = λ u₁ + a cos θ + b sin θ`."""

    scale: float
    """The dilation factor λ."""

    shift: tuple[float, float]
    """The translation `(a, b)`."""

    note: str | None = None
    """Set to `"parallel"` when the pair is also parallel (circles)."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this relation to a JSON compatible dict."""
        return {"kind": "homothetic", "lambda": self.scale, "r": None, "shift": list(self.shift), "note": self.note}


@attrs.frozen
class Parallel:
    """`u₂ = u₁ + r + a cos θ + b sin θ`."""

    distance: float
    """The offset r."""

    shift: tuple[float, float]
    """The translation `(a, b)`."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this relation to a JSON compatible dict."""
        return {"kind": "parallel", "lambda": None, "r": self.distance, "shift": list(self.shift)}


@attrs.frozen
class Neither:
    """The pair is neither homothetic nor parallel."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this relation to a JSON compatible dict."""
        return {"kind": "neither", "lambda": None, "r": None, "shift": None}


Relation = Homothetic | Parallel | Neither
"""How two convex curves are related."""


def _tail_matches(fs1: support.FourierSupport, fs2: support.FourierSupport, scale: float, tol: float, /) -> bool:
    # modes n >= 2 of u₂ must equal scale times those of u₁
    difference = numpy.concatenate(
        (fs2.cos_coeffs[2:] - scale * fs1.cos_coeffs[2:], fs2.sin_coeffs[2:] - scale * fs1.sin_coeffs[2:])
    )
    magnitude = float(
        numpy.max(numpy.abs(numpy.concatenate((fs1.cos_coeffs, fs1.sin_coeffs, fs2.cos_coeffs, fs2.sin_coeffs))))
    )
    return float(numpy.max(numpy.abs(difference))) <= tol * (1.0 + magnitude)


def _classify(
    fs1: support.FourierSupport, fs2: support.FourierSupport, tol: float, /
) -> Relation:
    fs1, fs2 = _aligned(fs1, fs2)
    length1, length2 = support.length(fs1), support.length(fs2)
    area1, area2 = support.area(fs1), support.area(fs2)
    area12 = _mixed_area(fs1, fs2)
    iprs = (
        length1**2 / (4.0 * math.pi * area1),
        length2**2 / (4.0 * math.pi * area2),
        length1 * length2 / (4.0 * math.pi * area12),
    )
    ipds = (
        length1**2 - 4.0 * math.pi * area1,
        length2**2 - 4.0 * math.pi * area2,
        length1 * length2 - 4.0 * math.pi * area12,
    )
    homothetic = _internal.spread_within(iprs, tol)
    parallel = _internal.spread_within(ipds, tol)

    if homothetic:
        scale = float(fs2.cos_coeffs[0] / fs1.cos_coeffs[0])
        if _tail_matches(fs1, fs2, scale, tol):
            shift = (
                float(fs2.cos_coeffs[1] - scale * fs1.cos_coeffs[1]),
                float(fs2.sin_coeffs[1] - scale * fs1.sin_coeffs[1]),
            )
            return Homothetic(scale, shift, "parallel" if parallel else None)

    if parallel and _tail_matches(fs1, fs2, 1.0, tol):
        distance = float(fs2.cos_coeffs[0] - fs1.cos_coeffs[0]) / 2.0
        shift = (float(fs2.cos_coeffs[1] - fs1.cos_coeffs[1]), float(fs2.sin_coeffs[1] - fs1.sin_coeffs[1]))
        return Parallel(distance, shift)

    return Neither()


def classify_relation(
    fs1: support.FourierSupport, fs2: support.FourierSupport, /, *, tol: float = config.DEFAULT_TOLERANCES.tol
) -> Relation:
    """Classify a pair of curves as homothetic, parallel or neither.

    Homothety is detected by the three IPRs (`L₁²/4πA₁`, `L₂²/4πA₂` and
    `L₁L₂/4πA12`) agreeing and parallelism by the three IPDs agreeing, both
    within `tol * (1 + max)`. The parameters are then recovered from the
    coefficients and validated against every mode n >= 2. Circle pairs meet
    both criteria and are reported as homothetic with a `"parallel"` note.

    Raises
    ------
    convexflow.errors.ConvexityError
        If either curve isn't strictly convex.
    """
    _require_convex_pair(fs1, fs2, "Relation classification")
    return _classify(fs1, fs2, tol)


@attrs.frozen(kw_only=True)
class MixedReport:
    """Mixed isoperimetric quantities of a curve pair."""

    mixed_area: float
    """The mixed area A12."""

    mixed_ipd: float
    """`L₁L₂ - 4πA12`."""

    mixed_ipr: float
    """`L₁L₂ / 4πA12`."""

    favard_lo: float
    """`-√(I₁ I₂)`."""

    favard_hi: float
    """`√(I₁ I₂)`."""

    minkowski_slack: float
    """`A12 - √(A₁ A₂)`."""

    sum_identity_residual: float
    """`IPD(Ω₁ + Ω₂) - (I₁ + I₂ + 2 mixed_ipd)`."""

    lower_equality: bool
    """Whether the lower Favard bound is attained."""

    upper_equality: bool
    """Whether the upper Favard bound is attained."""

    relation: Relation
    """How the two curves are related."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this report to a JSON compatible dict."""
        return {
            "mixed_area": self.mixed_area,
            "mixed_ipd": self.mixed_ipd,
            "mixed_ipr": self.mixed_ipr,
            "favard_lo": self.favard_lo,
            "favard_hi": self.favard_hi,
            "minkowski_slack": self.minkowski_slack,
            "sum_identity_residual": self.sum_identity_residual,
            "lower_equality": self.lower_equality,
            "upper_equality": self.upper_equality,
            "relation": self.relation.to_dict(),
        }


def _is_constant(values: _FloatArray, tol: float, /) -> bool:
    return float(numpy.ptp(values)) <= tol * (1.0 + float(numpy.max(numpy.abs(values))))


def mixed_report(
    fs1: support.FourierSupport, fs2: support.FourierSupport, /, *, tol: float = config.DEFAULT_TOLERANCES.tol
) -> MixedReport:
    """Compute the mixed IPD/IPR, Favard and Minkowski bounds and the relation of a pair.

    The Favard bounds `-√(I₁I₂) <= L₁L₂ - 4πA12 <= √(I₁I₂)` are attained
    exactly when `√I₂/k₁ + √I₁/k₂` (lower) or `√I₂/k₁ - √I₁/k₂` (upper) is
    constant. When either curve is a circle both bounds collapse to 0 and
    attainment reduces to the mixed IPD vanishing.

    Raises
    ------
    convexflow.errors.ConvexityError
        If either curve isn't strictly convex.
    """
    _require_convex_pair(fs1, fs2, "The mixed report")
    fs1, fs2 = _aligned(fs1, fs2)
    length1, length2 = support.length(fs1), support.length(fs2)
    area1, area2 = support.area(fs1), support.area(fs2)
    area12 = _mixed_area(fs1, fs2)
    ipd1 = max(length1**2 - 4.0 * math.pi * area1, 0.0)
    ipd2 = max(length2**2 - 4.0 * math.pi * area2, 0.0)
    mixed_ipd = length1 * length2 - 4.0 * math.pi * area12
    bound = math.sqrt(ipd1 * ipd2)

    combined = minkowski_sum(fs1, fs2)
    sum_ipd = support.length(combined) ** 2 - 4.0 * math.pi * support.area(combined)
    sum_residual = sum_ipd - (
        (length1**2 - 4.0 * math.pi * area1) + (length2**2 - 4.0 * math.pi * area2) + 2.0 * mixed_ipd
    )

    scaled = _internal.relative_tolerance(tol, length1 * length2)
    if bound <= scaled:
        lower = upper = abs(mixed_ipd) <= scaled

    else:
        grid_size = _internal.dense_grid_size(fs1.order)
        _, radius1 = support.synthesize(fs1, grid_size)
        _, radius2 = support.synthesize(fs2, grid_size)
        weighted1 = math.sqrt(ipd2) * radius1.values
        weighted2 = math.sqrt(ipd1) * radius2.values
        lower = _is_constant(weighted1 + weighted2, tol)
        upper = _is_constant(weighted1 - weighted2, tol)

    relation = _classify(fs1, fs2, tol)
    _LOGGER.debug("Classified pair as %s", relation)
    return MixedReport(
        mixed_area=area12,
        mixed_ipd=mixed_ipd,
        mixed_ipr=length1 * length2 / (4.0 * math.pi * area12),
        favard_lo=-bound,
        favard_hi=bound,
        minkowski_slack=area12 - math.sqrt(area1 * area2),
        sum_identity_residual=sum_residual,
        lower_equality=lower,
        upper_equality=upper,
        relation=relation,
    )


@attrs.frozen(kw_only=True)
class ParallelDerivatives:
    """Finite difference derivatives of L, A and the IPD along parallel offsets."""

    d_length: float
    """`dL/dr`, expected `2π`."""

    d_area: float
    """`dA/dr`, expected `L(r)`."""

    d_ipd: float
    """`d(L² - 4πA)/dr`, expected 0."""

    length_residual: float
    """`dL/dr - 2π`."""

    area_residual: float
    """`dA/dr - L(r)`."""

    ipd_residual: float
    """`d(L² - 4πA)/dr`."""


def parallel_derivatives(fs: support.FourierSupport, r: float = 0.0, h: float = 1e-5, /) -> ParallelDerivatives:
    """Get centered finite differences of L, A and the IPD at offset `r`.

    Raises
    ------
    ValueError
        If `r` is negative or `h` isn't positive.
    convexflow.errors.ConvexityError
        If the inner sample `r - h` loses convexity.
    """
    if r < 0.0 or h <= 0.0:
        error_message = f"Expected r >= 0 and h > 0, got {r!r} and {h!r}"
        raise ValueError(error_message)

    inner = support.parallel_offset(fs, r - h)
    outer = support.parallel_offset(fs, r + h)

    def ipd(curve: support.FourierSupport, /) -> float:
        return support.length(curve) ** 2 - 4.0 * math.pi * support.area(curve)

    d_length = (support.length(outer) - support.length(inner)) / (2.0 * h)
    d_area = (support.area(outer) - support.area(inner)) / (2.0 * h)
    d_ipd = (ipd(outer) - ipd(inner)) / (2.0 * h)
    return ParallelDerivatives(
        d_length=d_length,
        d_area=d_area,
        d_ipd=d_ipd,
        length_residual=d_length - 2.0 * math.pi,
        area_residual=d_area - support.length(support.parallel_offset(fs, r)),
        ipd_residual=d_ipd,
    )


def harmonic_decoy(fs: support.FourierSupport, mode: int, /) -> support.FourierSupport:
    """Flip the sign of one harmonic of a curve.

    The result has the same length, area and IPD but isn't homothetic or
    parallel to the original unless that harmonic vanishes.

    Raises
    ------
    ValueError
        If `mode` isn't in `2..order`.
    convexflow.errors.ConvexityError
        If the flipped curve isn't strictly convex.
    """
    if not 2 <= mode <= fs.order:
        error_message = f"Mode must be in 2..{fs.order}, not {mode}"
        raise ValueError(error_message)

    cos_coeffs = fs.cos_coeffs.copy()
    sin_coeffs = fs.sin_coeffs.copy()
    cos_coeffs[mode] = -cos_coeffs[mode]
    sin_coeffs[mode] = -sin_coeffs[mode]
    decoy = support.FourierSupport(cos_coeffs, sin_coeffs)
    _internal.require_convex(support.convexity_margin(decoy), "The decoy")
    return decoy
