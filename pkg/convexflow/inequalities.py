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
"""Numerical checks of the isoperimetric-type inequalities for convex curves."""
from __future__ import annotations

__all__: list[str] = [
    "BATTERY",
    "InequalityReport",
    "Monotone",
    "check_andrews",
    "check_entropy",
    "check_gage",
    "check_isoperimetric",
    "check_pan_yang",
    "check_poincare",
    "check_refined",
    "entropy_parallel_sweep",
    "entropy_rate_parallel",
    "run_battery",
]

import enum
import math
import typing

import attrs
import numpy

from . import _internal
from . import config
from . import support

if typing.TYPE_CHECKING:
    from collections import abc as collections

    import numpy.typing as npt

    _FloatArray = npt.NDArray[numpy.float64]


class Monotone(enum.StrEnum):
    """Monotonicity of the map passed to [check_andrews][convexflow.inequalities.check_andrews]."""

    INCREASING = "increasing"
    DECREASING = "decreasing"


@attrs.frozen(kw_only=True)
class InequalityReport:
    """The outcome of checking one inequality on one input.

    `slack` is oriented so that a non-negative value means the inequality
    holds: `lhs - rhs` for `lhs >= rhs` and `rhs - lhs` for `lhs <= rhs`.
    """

    name: str
    """Name of the inequality."""

    lhs: float
    """Value of the left hand side."""

    rhs: float
    """Value of the right hand side."""

    slack: float
    """Oriented slack; non-negative when the inequality holds."""

    holds: bool
    """Whether `slack >= -tol`."""

    equality: bool
    """Whether `|slack| <= tol`."""

    classifier: str | None = None
    """Structural note on the input, e.g. which harmonics it has."""

    @classmethod
    def build(
        cls, name: str, lhs: float, rhs: float, /, *, at_least: bool, tol: float, classifier: str | None = None
    ) -> InequalityReport:
        """Build a report for `lhs >= rhs` (`at_least`) or `lhs <= rhs`.

        `tol` is scaled by `1 + |lhs| + |rhs|`.
        """
        slack = lhs - rhs if at_least else rhs - lhs
        scaled = _internal.relative_tolerance(tol, lhs, rhs)
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            slack=slack,
            holds=slack >= -scaled,
            equality=abs(slack) <= scaled,
            classifier=classifier,
        )

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this report to a JSON compatible dict."""
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "equality": self.equality,
            "classifier": self.classifier,
        }


def _harmonics_above(fs: support.FourierSupport, mode: int, coefficient_tol: float, /) -> bool:
    tail = numpy.abs(numpy.concatenate((fs.cos_coeffs[mode + 1 :], fs.sin_coeffs[mode + 1 :])))
    return bool(tail.size) and float(numpy.max(tail)) >= coefficient_tol


def _dense(fs: support.FourierSupport, /) -> tuple[_FloatArray, _FloatArray]:
    support_field, radius_field = support.synthesize(fs, _internal.dense_grid_size(fs.order))
    return support_field.values, radius_field.values


def check_gage(fs: support.FourierSupport, /, *, tol: float = config.DEFAULT_TOLERANCES.tol) -> InequalityReport:
    """Check `∫k dθ >= πL / A`.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    _, radius = _dense(fs)
    _internal.require_convex(float(numpy.min(radius)), "Gage's inequality")
    rhs = math.pi * support.length(fs) / support.area(fs)
    return InequalityReport.build("gage", _internal.integrate(1.0 / radius), rhs, at_least=True, tol=tol)


def check_pan_yang(fs: support.FourierSupport, /, *, tol: float = config.DEFAULT_TOLERANCES.tol) -> InequalityReport:
    """Check `∫(1/k) ds >= (L² - 2πA) / π`.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    int_inv_k, _ = support.higher_integrals(fs)
    length = support.length(fs)
    area = support.area(fs)
    rhs = (length**2 - 2.0 * math.pi * area) / math.pi
    return InequalityReport.build("pan-yang", int_inv_k, rhs, at_least=True, tol=tol)


def check_refined(
    fs: support.FourierSupport, /, *, tolerances: config.Tolerances = config.DEFAULT_TOLERANCES
) -> InequalityReport:
    """Check `∫(1/k) ds >= (2/π)(L² - 4πA) + 2A`.

    Equality holds exactly when the support function has no harmonics above
    the second; the report's classifier records which case the input is in.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    int_inv_k, _ = support.higher_integrals(fs)
    length = support.length(fs)
    area = support.area(fs)
    rhs = 2.0 * (length**2 - 4.0 * math.pi * area) / math.pi + 2.0 * area
    classifier = "harmonics > 2" if _harmonics_above(fs, 2, tolerances.coefficient_tol) else "harmonics <= 2"
    return InequalityReport.build(
        "refined-pan-yang", int_inv_k, rhs, at_least=True, tol=tolerances.tol, classifier=classifier
    )


def check_andrews(
    xi: support.SampledField,
    monotone: Monotone,
    function: collections.Callable[[_FloatArray], npt.ArrayLike],
    /,
    *,
    tol: float = config.DEFAULT_TOLERANCES.tol,
) -> InequalityReport:
    """Check `∫ξ ∫F(ξ) <= 2π ∫ξ F(ξ)` for increasing `F` (reversed for decreasing `F`).

    Parameters
    ----------
    xi
        Samples of `ξ` over the circle.
    monotone
        Whether `F` is increasing or decreasing.
    function
        Vectorised `F`.
    tol
        Slack tolerance.

    Returns
    -------
    InequalityReport
        The report, with `lhs = ∫ξ ∫F(ξ)` and `rhs = 2π ∫ξ F(ξ)`.

    Raises
    ------
    ValueError
        If `F` isn't finite on the samples.
    """
    mapped = numpy.broadcast_to(numpy.asarray(function(xi.values), dtype=numpy.float64), xi.values.shape)
    if not numpy.all(numpy.isfinite(mapped)):
        error_message = "F produced non-finite values on the samples"
        raise ValueError(error_message)

    lhs = xi.integral() * _internal.integrate(mapped)
    rhs = 2.0 * math.pi * _internal.integrate(xi.values * mapped)
    return InequalityReport.build("andrews", lhs, rhs, at_least=monotone is Monotone.DECREASING, tol=tol)


def check_poincare(f: support.SampledField, /, *, tol: float = config.DEFAULT_TOLERANCES.tol) -> InequalityReport:
    """Check `2π ∫f (f'' + f) <= (∫f)²` for a 2π-periodic `f`.

    The second derivative is taken spectrally.
    """
    spectrum = numpy.fft.rfft(f.values)
    modes = numpy.arange(spectrum.shape[0], dtype=numpy.float64)
    shifted = numpy.fft.irfft(spectrum * (1.0 - modes**2), n=f.grid_size)
    lhs = 2.0 * math.pi * _internal.integrate(f.values * shifted)
    return InequalityReport.build("poincare", lhs, f.integral() ** 2, at_least=False, tol=tol)


def check_entropy(fs: support.FourierSupport, /, *, tol: float = config.DEFAULT_TOLERANCES.tol) -> InequalityReport:
    """Check that the curve's entropy `∫ log(k √(A/π)) dθ` is non-negative.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    _, entropy = support.higher_integrals(fs)
    return InequalityReport.build("entropy", entropy, 0.0, at_least=True, tol=tol)


def entropy_parallel_sweep(
    fs: support.FourierSupport, r_grid: collections.Iterable[float], /
) -> list[tuple[float, float]]:
    """Get the entropy of the parallel curves at each offset in `r_grid`.

    The entropy is non-increasing in the offset and tends to 0.

    Raises
    ------
    ValueError
        If `r_grid` has negative or non-increasing offsets.
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    results: list[tuple[float, float]] = []
    previous = -math.inf
    for r in r_grid:
        if r < 0.0 or r <= previous:
            error_message = f"Offsets must be non-negative and increasing, got {r!r} after {previous!r}"
            raise ValueError(error_message)

        previous = r
        results.append((r, support.higher_integrals(support.parallel_offset(fs, r))[1]))

    return results


def entropy_rate_parallel(fs: support.FourierSupport, r: float = 0.0, /) -> float:
    """Get the derivative of the entropy along parallel offsets at offset `r`.

    This is `-∫k_r dθ + π L_r / A_r`, which Gage's inequality makes non-positive.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the offset curve isn't strictly convex.
    """
    offset = support.parallel_offset(fs, r)
    _, radius = _dense(offset)
    _internal.require_convex(float(numpy.min(radius)), "The entropy rate")
    return -_internal.integrate(1.0 / radius) + math.pi * support.length(offset) / support.area(offset)


def check_isoperimetric(
    fs: support.FourierSupport, /, *, tolerances: config.Tolerances = config.DEFAULT_TOLERANCES
) -> InequalityReport:
    """Check `L² >= 4πA`, with equality exactly for circles (harmonics <= 1)."""
    length = support.length(fs)
    rhs = 4.0 * math.pi * support.area(fs)
    classifier = "harmonics > 1" if _harmonics_above(fs, 1, tolerances.coefficient_tol) else "harmonics <= 1"
    return InequalityReport.build(
        "isoperimetric", length**2, rhs, at_least=True, tol=tolerances.tol, classifier=classifier
    )


def _andrews_on_radius(fs: support.FourierSupport, tolerances: config.Tolerances, /) -> InequalityReport:
    _, radius = _dense(fs)
    _internal.require_convex(float(numpy.min(radius)), "Andrews' inequality on the radius of curvature")
    return check_andrews(support.SampledField(radius), Monotone.DECREASING, numpy.reciprocal, tol=tolerances.tol)


def _poincare_on_support(fs: support.FourierSupport, tolerances: config.Tolerances, /) -> InequalityReport:
    support_values, _ = _dense(fs)
    return check_poincare(support.SampledField(support_values), tol=tolerances.tol)


_BATTERY: dict[str, collections.Callable[[support.FourierSupport, config.Tolerances], InequalityReport]] = {
    "gage": lambda fs, tolerances: check_gage(fs, tol=tolerances.tol),
    "pan-yang": lambda fs, tolerances: check_pan_yang(fs, tol=tolerances.tol),
    "refined-pan-yang": lambda fs, tolerances: check_refined(fs, tolerances=tolerances),
    "isoperimetric": lambda fs, tolerances: check_isoperimetric(fs, tolerances=tolerances),
    "entropy": lambda fs, tolerances: check_entropy(fs, tol=tolerances.tol),
    "andrews": _andrews_on_radius,
    "poincare": _poincare_on_support,
}

BATTERY: typing.Final[tuple[str, ...]] = tuple(_BATTERY)
"""Names of the checks [run_battery][convexflow.inequalities.run_battery] knows, in run order."""


def run_battery(
    fs: support.FourierSupport,
    /,
    *,
    only: collections.Iterable[str] | None = None,
    tolerances: config.Tolerances = config.DEFAULT_TOLERANCES,
) -> list[InequalityReport]:
    """Run every (or a selection of) inequality check on a curve.

    Andrews' inequality is checked with `ξ = 1/k` and the decreasing map
    `F(z) = 1/z`; the Poincaré inequality with `f = u`.

    Parameters
    ----------
    fs
        The curve.
    only
        Names of the checks to run, see [BATTERY][convexflow.inequalities.BATTERY].

        Defaults to all of them.
    tolerances
        Tolerances to check with.

    Returns
    -------
    list[InequalityReport]
        The reports in battery order.

    Raises
    ------
    ValueError
        If `only` names an unknown check.
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    names = BATTERY if only is None else tuple(only)
    if unknown := [name for name in names if name not in _BATTERY]:
        error_message = f"Unknown checks: {', '.join(unknown)}; expected any of {', '.join(BATTERY)}"
        raise ValueError(error_message)

    return [_BATTERY[name](fs, tolerances) for name in BATTERY if name in names]
