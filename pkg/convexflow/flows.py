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
"""Nonlocal curvature flows of convex curves in support function form.

Every flow moves the curve with normal speed `φ` along the inward normal,
`∂X/∂t = φ N_in`, which makes the support function evolve as `u_t = -φ`.
Speeds are split as

    φ = F - λ - μ u

where `F` is a local term in the curvature `k` (or the radius of curvature
`1/k`), `λ` a scalar which may depend on global quantities of the curve and
`μ` a scalar weight on the support function itself.
"""
from __future__ import annotations

__all__: list[str] = [
    "ConvexityLost",
    "Converged",
    "EquivalenceReport",
    "Family",
    "FlowRecord",
    "FlowSpec",
    "FlowTrace",
    "FunctionalRates",
    "NumericFailure",
    "Snapshot",
    "SpeedTerms",
    "Termination",
    "TimeExhausted",
    "dual_closed_form",
    "dual_limit",
    "dual_relation_residual",
    "functional_rates",
    "heat_semigroup",
    "ipd_rate_andrews",
    "linear_mode_evolve",
    "linear_mode_limit",
    "macheng_closed_form",
    "normal_speed",
    "panyang_closed_form",
    "reparam_equivalence",
    "run",
    "speed_terms",
    "step",
    "support_heat_closed_form",
]

import enum
import logging
import math
import typing

import attrs
import numpy

from . import _internal
from . import config
from . import errors
from . import support

if typing.TYPE_CHECKING:
    from collections import abc as collections

    import numpy.typing as npt
    from typing_extensions import Self

    _FloatArray = npt.NDArray[numpy.float64]
    _Derivative = collections.Callable[[support.FourierSupport, float], tuple[_FloatArray, _FloatArray, float]]


_LOGGER = logging.getLogger("convexflow.flows")


class Family(enum.StrEnum):
    """The supported flow families, valued by their command line names."""

    CSF = "csf"
    """Curve shortening flow, `φ = k`."""

    UNIT_NORMAL = "unit"
    """Constant speed normal flow, `φ = -λ₀`."""

    GAGE = "gage"
    """Area-preserving flow `φ = k - 2π/L`."""

    JIANG_PAN = "jiangpan"
    """Length-decreasing, area-increasing flow `φ = k - L/2A`."""

    MA_ZHU = "mazhu"
    """Length-preserving flow `φ = k - (1/2π) ∫k² ds`."""

    PAN_YANG = "panyang"
    """Length-preserving flow `φ = L/2π - 1/k`."""

    MA_CHENG = "macheng"
    """Area-preserving flow `φ = (1/L) ∫(1/k) ds - 1/k`."""

    DUAL = "dual"
    """Length and area increasing flow `φ = 2A/L - 1/k`."""

    GRAD_IPD = "gradipd"
    """Gradient flow of `L² - 4πA`, `φ = 2Lk - 4π`."""

    GRAD_IPR = "gradipr"
    """Gradient flow of `L² / 4πA`, `φ = (L / 2πA)(k - L/2A)`."""

    SUPPORT_AREA_K = "s1"
    """Area-preserving flow `φ = k - (π/A) u`."""

    SUPPORT_LENGTH_K = "s2"
    """Length-preserving flow `φ = k - ((1/L) ∫k² ds) u`."""

    SUPPORT_AREA_INV_K = "s3"
    """Area-preserving flow `φ = ((1/2A) ∫(1/k) ds) u - 1/k`."""

    SUPPORT_LENGTH_INV_K = "s4"
    """Length-preserving flow `φ = u - 1/k`, the heat equation on `u`."""

    CUSTOM_K = "custom-k"
    """`φ = k - p(t)` for a caller supplied `p`."""

    CUSTOM_INV_K = "custom-inv-k"
    """`φ = q(t) - 1/k` for a caller supplied `q`."""

    @property
    def uses_curvature(self) -> bool:
        """Whether this family's local term is the curvature `k`."""
        return self in _CURVATURE_FAMILIES

    @property
    def uses_radius(self) -> bool:
        """Whether this family's local term is `-1/k`."""
        return self in _RADIUS_FAMILIES

    @property
    def conserves(self) -> typing.Literal["area", "length"] | None:
        """Which quantity this family keeps constant, if any."""
        if self in _AREA_PRESERVING:
            return "area"

        if self in _LENGTH_PRESERVING:
            return "length"

        return None


_CURVATURE_FAMILIES = frozenset(
    (
        Family.CSF,
        Family.GAGE,
        Family.JIANG_PAN,
        Family.MA_ZHU,
        Family.GRAD_IPD,
        Family.GRAD_IPR,
        Family.SUPPORT_AREA_K,
        Family.SUPPORT_LENGTH_K,
        Family.CUSTOM_K,
    )
)
_RADIUS_FAMILIES = frozenset(
    (
        Family.PAN_YANG,
        Family.MA_CHENG,
        Family.DUAL,
        Family.SUPPORT_AREA_INV_K,
        Family.SUPPORT_LENGTH_INV_K,
        Family.CUSTOM_INV_K,
    )
)
_AREA_PRESERVING = frozenset((Family.GAGE, Family.MA_CHENG, Family.SUPPORT_AREA_K, Family.SUPPORT_AREA_INV_K))
_LENGTH_PRESERVING = frozenset((Family.MA_ZHU, Family.PAN_YANG, Family.SUPPORT_LENGTH_K, Family.SUPPORT_LENGTH_INV_K))
_CUSTOM_FAMILIES = frozenset((Family.CUSTOM_K, Family.CUSTOM_INV_K))


@attrs.frozen
class FlowSpec:
    """Which flow to run, along with its parameters.

    Examples
    --------
    ```py
    dual = convexflow.FlowSpec(convexflow.Family.DUAL)
    shrinking = convexflow.FlowSpec.custom_k(lambda t: 1.0 + t)
    ```
    """

    family: Family
    """The flow family."""

    unit_lambda: float = attrs.field(default=-1.0, kw_only=True)
    """`λ₀` of the unit normal flow (ignored by other families)."""

    time_function: collections.Callable[[float], float] | None = attrs.field(default=None, kw_only=True)
    """`p(t)` for [Family.CUSTOM_K][convexflow.flows.Family.CUSTOM_K] or `q(t)` for
    [Family.CUSTOM_INV_K][convexflow.flows.Family.CUSTOM_INV_K]."""

    lambda_shift: float = attrs.field(default=0.0, kw_only=True)
    """Constant added to the family's `λ`."""

    support_weight: float = attrs.field(default=0.0, kw_only=True)
    """Constant added to the family's `μ`, the weight of the `-μ u` term."""

    def __attrs_post_init__(self) -> None:
        if self.family in _CUSTOM_FAMILIES and self.time_function is None:
            error_message = f"The {self.family.value} family needs a time function"
            raise ValueError(error_message)

        if self.family not in _CUSTOM_FAMILIES and self.time_function is not None:
            error_message = f"The {self.family.value} family doesn't take a time function"
            raise ValueError(error_message)

    @classmethod
    def custom_k(cls, p: collections.Callable[[float], float], /) -> Self:
        """Build the k-type flow `φ = k - p(t)`."""
        return cls(Family.CUSTOM_K, time_function=p)

    @classmethod
    def custom_inv_k(cls, q: collections.Callable[[float], float], /) -> Self:
        """Build the 1/k-type flow `φ = q(t) - 1/k`."""
        return cls(Family.CUSTOM_INV_K, time_function=q)

    @classmethod
    def unit_normal(cls, unit_lambda: float = -1.0, /) -> Self:
        """Build the constant speed flow `φ = -λ₀`."""
        return cls(Family.UNIT_NORMAL, unit_lambda=unit_lambda)

    def shifted(self, *, lambda_shift: float | None = None, support_weight: float | None = None) -> Self:
        """Copy this spec with a different `λ` shift or support weight."""
        return attrs.evolve(
            self,
            lambda_shift=self.lambda_shift if lambda_shift is None else lambda_shift,
            support_weight=self.support_weight if support_weight is None else support_weight,
        )


@attrs.frozen(eq=False)
class SpeedTerms:
    """A speed split as `φ = local - shift - support_weight * u` on a sample grid."""

    local: _FloatArray
    """Samples of the local term `F`."""

    shift: float
    """The scalar `λ`."""

    support_weight: float
    """The scalar `μ`."""

    time_factor: float
    """How much faster than its base flow this flow runs (`2L`, `L / 2πA` or 1)."""

    support: _FloatArray
    """Samples of the support function."""

    radius: _FloatArray
    """Samples of the radius of curvature."""

    def speed(self) -> _FloatArray:
        """Get the samples of `φ`."""
        return self.local - self.shift - self.support_weight * self.support


def speed_terms(
    spec: FlowSpec, fs: support.FourierSupport, /, *, t: float = 0.0, grid_size: int | None = None
) -> SpeedTerms:
    """Split a flow's speed on a curve into its local and global terms.

    Parameters
    ----------
    spec
        The flow.
    fs
        The current curve.
    t
        Current time, only used by the custom families.
    grid_size
        Sample grid; defaults to the dense quadrature grid.

    Returns
    -------
    SpeedTerms
        The speed's terms.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the family divides by k or uses 1/k and the curve isn't strictly
        convex on the grid.
    """
    grid_size = grid_size or _internal.dense_grid_size(fs.order)
    support_field, radius_field = support.synthesize(fs, grid_size)
    radius = radius_field.values
    family = spec.family
    if family.uses_curvature or family.uses_radius:
        _internal.require_convex(float(numpy.min(radius)), f"The {family.value} flow")

    length = support.length(fs)
    area = support.area(fs)
    time_factor = 1.0
    weight = 0.0
    match family:
        case Family.CSF:
            local, shift = 1.0 / radius, 0.0
        case Family.UNIT_NORMAL:
            local, shift = numpy.zeros_like(radius), spec.unit_lambda
        case Family.GAGE:
            local, shift = 1.0 / radius, 2.0 * math.pi / length
        case Family.JIANG_PAN:
            local, shift = 1.0 / radius, length / (2.0 * area)
        case Family.MA_ZHU:
            local = 1.0 / radius
            shift = _internal.integrate(local) / (2.0 * math.pi)
        case Family.PAN_YANG:
            local, shift = -radius, -length / (2.0 * math.pi)
        case Family.MA_CHENG:
            local, shift = -radius, -_internal.integrate(radius**2) / length
        case Family.DUAL:
            local, shift = -radius, -2.0 * area / length
        case Family.GRAD_IPD:
            time_factor = 2.0 * length
            local, shift = time_factor / radius, 4.0 * math.pi
        case Family.GRAD_IPR:
            time_factor = length / (2.0 * math.pi * area)
            local, shift = time_factor / radius, time_factor * length / (2.0 * area)
        case Family.SUPPORT_AREA_K:
            local, shift, weight = 1.0 / radius, 0.0, math.pi / area
        case Family.SUPPORT_LENGTH_K:
            local, shift = 1.0 / radius, 0.0
            weight = _internal.integrate(local) / length
        case Family.SUPPORT_AREA_INV_K:
            local, shift, weight = -radius, 0.0, -_internal.integrate(radius**2) / (2.0 * area)
        case Family.SUPPORT_LENGTH_INV_K:
            local, shift, weight = -radius, 0.0, -1.0
        case Family.CUSTOM_K:
            assert spec.time_function is not None
            local, shift = 1.0 / radius, float(spec.time_function(t))
        case Family.CUSTOM_INV_K:
            assert spec.time_function is not None
            local, shift = -radius, -float(spec.time_function(t))
        case _:
            typing.assert_never(family)

    return SpeedTerms(
        local=local,
        shift=shift + spec.lambda_shift,
        support_weight=weight + spec.support_weight,
        time_factor=time_factor,
        support=support_field.values,
        radius=radius,
    )


def normal_speed(
    spec: FlowSpec, fs: support.FourierSupport, /, *, t: float = 0.0, grid_size: int | None = None
) -> support.SampledField:
    """Sample the normal speed `φ` of a flow on a curve.

    The flow is `∂X/∂t = φ N_in`, so the support function evolves as `u_t = -φ`.

    Parameters
    ----------
    spec
        The flow.
    fs
        The current curve.
    t
        Current time, only used by the custom families.
    grid_size
        Sample grid; defaults to the dense quadrature grid.

    Returns
    -------
    convexflow.support.SampledField
        Samples of `φ`.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the family divides by k or uses 1/k and the curve isn't strictly
        convex.
    """
    return support.SampledField(speed_terms(spec, fs, t=t, grid_size=grid_size).speed())


def _advance(
    fs: support.FourierSupport, derivative: tuple[_FloatArray, _FloatArray, float], h: float, /
) -> support.FourierSupport:
    cos_coeffs = fs.cos_coeffs + h * derivative[0]
    sin_coeffs = fs.sin_coeffs + h * derivative[1]
    if not (numpy.all(numpy.isfinite(cos_coeffs)) and numpy.all(numpy.isfinite(sin_coeffs))):
        error_message = "Non-finite coefficients produced"
        raise errors.StepRejected(error_message)

    return support.FourierSupport(cos_coeffs, sin_coeffs)


def _rk4(
    derivative: _Derivative, fs: support.FourierSupport, clock: float, h: float, /
) -> tuple[support.FourierSupport, float]:
    k1 = derivative(fs, clock)
    k2 = derivative(_advance(fs, k1, h / 2.0), clock + h * k1[2] / 2.0)
    k3 = derivative(_advance(fs, k2, h / 2.0), clock + h * k2[2] / 2.0)
    k4 = derivative(_advance(fs, k3, h), clock + h * k3[2])
    combined = (
        (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0,
        (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0,
        (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0,
    )
    return _advance(fs, combined, h), clock + h * combined[2]


def _support_derivative(spec: FlowSpec, /, *, reparametrise: bool = False) -> _Derivative:
    def derivative(fs: support.FourierSupport, clock: float, /) -> tuple[_FloatArray, _FloatArray, float]:
        grid_size = _internal.stepping_grid_size(fs.order)
        try:
            terms = speed_terms(spec, fs, t=clock, grid_size=grid_size)

        except errors.ConvexityError as exc:
            error_message = f"Stage at t={clock!r} lost convexity (margin {exc.margin!r})"
            raise errors.StepRejected(error_message) from exc

        speed = terms.speed()
        if not numpy.all(numpy.isfinite(speed)):
            error_message = f"Stage at t={clock!r} produced a non-finite speed"
            raise errors.StepRejected(error_message)

        # Modes above the stored order are dropped here.
        cos_rate, sin_rate = _internal.from_spectrum(numpy.fft.rfft(-speed), grid_size, fs.order)
        return cos_rate, sin_rate, terms.time_factor if reparametrise else 1.0

    return derivative


def step(spec: FlowSpec, fs: support.FourierSupport, dt: float, /, *, t: float = 0.0) -> support.FourierSupport:
    """Advance a curve by one explicit RK4 step of `u_t = -φ`.

    Every stage synthesises the curve on the stepping grid, evaluates the
    speed (recomputing its global terms) and analyses `-φ` back into
    coefficients truncated to the curve's order.

    Parameters
    ----------
    spec
        The flow.
    fs
        The current curve.
    dt
        Step size.
    t
        Current time, only used by the custom families.

    Returns
    -------
    convexflow.support.FourierSupport
        The curve after the step.

    Raises
    ------
    convexflow.errors.StepRejected
        If a stage loses convexity (for families using k or 1/k) or produces
        non-finite values.
    ValueError
        If `dt` isn't positive.
    """
    if dt <= 0.0:
        error_message = f"Step size must be positive, not {dt!r}"
        raise ValueError(error_message)

    return _rk4(_support_derivative(spec), fs, t, dt)[0]


def _stiffness_cap(spec: FlowSpec, fs: support.FourierSupport, margin: float, safety: float, /) -> float:
    family = spec.family
    if not (family.uses_curvature or family.uses_radius):
        return math.inf

    top_mode = max(fs.order**2 - 1, 1)
    time_factor = 1.0
    if family is Family.GRAD_IPD:
        time_factor = 2.0 * support.length(fs)

    elif family is Family.GRAD_IPR:
        time_factor = support.length(fs) / (2.0 * math.pi * support.area(fs))

    if family.uses_curvature:
        return safety * margin**2 / (top_mode * time_factor)

    return safety / top_mode


@attrs.frozen
class Converged:
    """The run stopped because `ipr - 1` dropped below the tolerance."""

    t: float
    """Time the run stopped at."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this to a JSON compatible dict."""
        return {"kind": "converged", "t": self.t}


@attrs.frozen
class TimeExhausted:
    """The run reached `t_max`."""

    t: float
    """Time the run stopped at."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this to a JSON compatible dict."""
        return {"kind": "time-exhausted", "t": self.t}


@attrs.frozen
class ConvexityLost:
    """The convexity margin dropped below the floor."""

    t: float
    """Time the run stopped at."""

    theta: float
    """Normal angle where the radius of curvature is smallest."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this to a JSON compatible dict."""
        return {"kind": "convexity-lost", "t": self.t, "theta": self.theta}


@attrs.frozen
class NumericFailure:
    """Step size control gave up."""

    t: float
    """Time the run stopped at."""

    reason: str
    """Diagnostic of the last rejected step."""

    def to_dict(self) -> dict[str, typing.Any]:
        """Convert this to a JSON compatible dict."""
        return {"kind": "numeric-failure", "t": self.t, "reason": self.reason}


Termination = Converged | TimeExhausted | ConvexityLost | NumericFailure
"""Why a flow run stopped."""


@attrs.frozen
class FlowRecord:
    """A recorded summary of the evolving curve."""

    t: float
    """Time of the record."""

    summary: support.CurveSummary
    """Summary of the curve at `t`."""


@attrs.frozen
class Snapshot:
    """A recorded copy of the evolving curve's coefficients."""

    t: float
    """Time of the snapshot."""

    curve: support.FourierSupport
    """The curve at `t`."""


@attrs.frozen
class FlowTrace:
    """The outcome of a flow run."""

    spec: FlowSpec
    """The flow which was run."""

    records: tuple[FlowRecord, ...]
    """Summaries in strictly increasing time order."""

    snapshots: tuple[Snapshot, ...]
    """Coefficient snapshots in strictly increasing time order."""

    termination: Termination
    """Why the run stopped."""

    final: support.FourierSupport
    """The curve when the run stopped."""


def run(
    spec: FlowSpec, fs0: support.FourierSupport, control: config.StepControl | None = None, /
) -> FlowTrace:
    """Run a flow with adaptive RK4 steps until it terminates.

    Rejected steps are halved; accepted steps grow to `dt / safety`, capped by
    `dt_max` and a stiffness cap of `safety r_min² / ((N² - 1) s)` for k-type
    families (`safety / (N² - 1)` for 1/k-type families) where `s` is the
    family's time factor.

    Parameters
    ----------
    spec
        The flow to run.
    fs0
        The initial curve.
    control
        Step and termination control.

        Defaults to [DEFAULT_STEP_CONTROL][convexflow.config.DEFAULT_STEP_CONTROL].

    Returns
    -------
    FlowTrace
        The recorded run; its termination is always set.
    """
    control = control or config.DEFAULT_STEP_CONTROL
    _LOGGER.info("Running %s flow on an order %s curve until t=%s", spec.family.value, fs0.order, control.t_max)
    t = 0.0
    fs = fs0
    dt = control.dt_init
    steps = 0
    retrying = False
    summary = support.summarize(fs)
    records = [FlowRecord(t, summary)]
    snapshots = [Snapshot(t, fs)]
    margin, theta = support.locate_margin(fs)
    termination: Termination | None = None
    if margin < control.margin_floor:
        termination = ConvexityLost(t, theta)

    elif summary.ipr - 1.0 < control.ipr_tol:
        termination = Converged(t)

    while termination is None:
        if t >= control.t_max:
            termination = TimeExhausted(t)
            break

        remaining = control.t_max - t
        h = min(dt, control.dt_max, remaining, _stiffness_cap(spec, fs, margin, control.safety))
        if remaining - h < control.dt_min and not retrying:
            # never leave a sliver shorter than dt_min before t_max
            h = remaining

        if h < control.dt_min:
            termination = NumericFailure(t, f"Step size {h!r} fell below dt_min")
            break

        try:
            candidate = step(spec, fs, h, t=t)

        except errors.StepRejected as exc:
            dt = h / 2.0
            _LOGGER.debug("Rejected step of %s at t=%s (%s), retrying with %s", h, t, exc.reason, dt)
            if dt < control.dt_min:
                termination = NumericFailure(t, exc.reason)

            retrying = True
            continue

        retrying = False
        t = control.t_max if h >= remaining else t + h
        fs = candidate
        steps += 1
        margin, theta = support.locate_margin(fs)
        if margin < control.margin_floor:
            _LOGGER.warning("Convexity lost at t=%s, theta=%s (margin %s)", t, theta, margin)
            termination = ConvexityLost(t, theta)
            break

        length = support.length(fs)
        if length**2 / (4.0 * math.pi * support.area(fs)) - 1.0 < control.ipr_tol:
            termination = Converged(t)
            break

        if steps % control.record_every == 0:
            records.append(FlowRecord(t, support.summarize(fs)))

        if control.snapshot_every and steps % control.snapshot_every == 0:
            snapshots.append(Snapshot(t, fs))

        dt = min(h / control.safety, control.dt_max)

    if records[-1].t < t:
        records.append(FlowRecord(t, support.summarize(fs)))

    if snapshots[-1].t < t:
        snapshots.append(Snapshot(t, fs))

    assert termination is not None
    _LOGGER.info("%s flow stopped after %s steps: %s", spec.family.value, steps, termination)
    return FlowTrace(
        spec=spec, records=tuple(records), snapshots=tuple(snapshots), termination=termination, final=fs
    )


def _check_time(t: float, /) -> None:
    if not t >= 0.0:
        error_message = f"Time must be non-negative, not {t!r}"
        raise ValueError(error_message)


def _linear_factors(order: int, t: float, /) -> _FloatArray:
    # e^{(1 - n²) t} for n >= 1; modes 0 and 1 are left at 1
    modes = _internal.mode_numbers(order)
    if math.isinf(t):
        return (modes <= 1).astype(numpy.float64)

    factors = numpy.exp((1.0 - modes**2) * t)
    factors[:2] = 1.0
    return factors


def dual_closed_form(fs0: support.FourierSupport, t: float, /) -> support.FourierSupport:
    """Get the exact solution of the dual flow at time `t`.

    Mode n >= 1 decays as `e^{(1 - n²) t}` while
    `a[0](t)² = a[0]² + 2 Σ (1 - e^{2(1 - n²) t})(a[n]² + b[n]²)`.

    `t` may be infinite, giving the limit circle (see [dual_limit][convexflow.flows.dual_limit]).

    Raises
    ------
    ValueError
        If `t` is negative.
    """
    _check_time(t)
    factors = _linear_factors(fs0.order, t)
    energies = fs0.mode_energies()
    radicand = float(fs0.cos_coeffs[0]) ** 2 + 2.0 * float(numpy.sum((1.0 - factors[1:] ** 2) * energies[1:]))
    cos_coeffs = fs0.cos_coeffs * factors
    cos_coeffs[0] = math.sqrt(radicand)
    return support.FourierSupport(cos_coeffs, fs0.sin_coeffs * factors)


def dual_limit(fs0: support.FourierSupport, /) -> support.FourierSupport:
    """Get the limit circle of the dual flow.

    This is `c + a[1] cos θ + b[1] sin θ` with
    `c = ½ √(a[0]² + 2 Σ_{n≥2} (a[n]² + b[n]²))`; its length is `2πc`.
    """
    return dual_closed_form(fs0, math.inf)


def macheng_closed_form(fs0: support.FourierSupport, t: float, /) -> support.FourierSupport:
    """Get the exact solution of the area-preserving 1/k flow at time `t`.

    Mode n >= 1 decays as `e^{(1 - n²) t}` while
    `a[0](t)² = a[0]² - 2 Σ_{n≥2} (n² - 1)(1 - e^{2(1 - n²) t})(a[n]² + b[n]²)`.
    The limit (`t` infinite) is the circle of radius `√(A(0) / π)`.

    Raises
    ------
    ValueError
        If `t` is negative or the radicand isn't positive (the initial area
        isn't positive).
    """
    _check_time(t)
    factors = _linear_factors(fs0.order, t)
    modes = _internal.mode_numbers(fs0.order)
    energies = fs0.mode_energies()
    radicand = float(fs0.cos_coeffs[0]) ** 2 - 2.0 * float(
        numpy.sum((modes[1:] ** 2 - 1.0) * (1.0 - factors[1:] ** 2) * energies[1:])
    )
    if radicand <= 0.0:
        error_message = f"Non-positive radicand {radicand!r}, the initial area must be positive"
        raise ValueError(error_message)

    cos_coeffs = fs0.cos_coeffs * factors
    cos_coeffs[0] = math.sqrt(radicand)
    return support.FourierSupport(cos_coeffs, fs0.sin_coeffs * factors)


def panyang_closed_form(fs0: support.FourierSupport, t: float, /) -> support.FourierSupport:
    """Get the exact solution of the length-preserving 1/k flow at time `t`.

    `a[0]` is constant and mode n >= 1 decays as `e^{(1 - n²) t}`.
    """
    _check_time(t)
    factors = _linear_factors(fs0.order, t)
    return support.FourierSupport(fs0.cos_coeffs * factors, fs0.sin_coeffs * factors)


def support_heat_closed_form(fs0: support.FourierSupport, t: float, /) -> support.FourierSupport:
    """Get the exact solution of `u_t = u_θθ` (the `s4` family) at time `t`.

    Every mode n decays as `e^{-n² t}`.
    """
    _check_time(t)
    modes = _internal.mode_numbers(fs0.order)
    factors = (modes == 0).astype(numpy.float64) if math.isinf(t) else numpy.exp(-(modes**2) * t)
    return support.FourierSupport(fs0.cos_coeffs * factors, fs0.sin_coeffs * factors)


def _scale_modes(
    field: support.SampledField, rates: collections.Callable[[_FloatArray], _FloatArray], /
) -> support.SampledField:
    spectrum = numpy.fft.rfft(field.values)
    modes = numpy.arange(spectrum.shape[0], dtype=numpy.float64)
    return support.SampledField(numpy.fft.irfft(spectrum * rates(modes), n=field.grid_size))


def linear_mode_evolve(field0: support.SampledField, t: float, /) -> support.SampledField:
    """Solve `σ_t = σ_θθ + σ`, scaling mode n by `e^{(1 - n²) t}`.

    The mean grows as `e^t`; the solution stays bounded only for zero-mean data.
    """
    _check_time(t)
    return _scale_modes(field0, lambda modes: numpy.exp((1.0 - modes**2) * t))


def linear_mode_limit(field0: support.SampledField, /, *, tol: float = 1e-12) -> support.SampledField:
    """Get the `t → ∞` limit of [linear_mode_evolve][convexflow.flows.linear_mode_evolve].

    This is the first harmonic projection of the initial data.

    Raises
    ------
    ValueError
        If the data's mean isn't zero (the solution is unbounded).
    """
    mean = float(numpy.mean(field0.values))
    if abs(mean) > _internal.relative_tolerance(tol, float(numpy.max(numpy.abs(field0.values)))):
        error_message = f"The solution is unbounded for data with non-zero mean {mean!r}"
        raise ValueError(error_message)

    return _scale_modes(field0, lambda modes: (modes == 1).astype(numpy.float64))


def heat_semigroup(field0: support.SampledField, t: float, /) -> support.SampledField:
    """Solve the heat equation `w_t = w_θθ`, scaling mode n by `e^{-n² t}`."""
    _check_time(t)
    return _scale_modes(field0, lambda modes: numpy.exp(-(modes**2) * t))


@attrs.frozen
class FunctionalRates:
    """Instantaneous rates of change of a curve's global quantities."""

    d_length: float
    """`dL/dt = -∫φ dθ`."""

    d_area: float
    """`dA/dt = -∫φ / k dθ`."""

    d_ipd: float
    """`d(L² - 4πA)/dt`."""

    d_ipr: float
    """`d(L² / 4πA)/dt`."""


def functional_rates(spec: FlowSpec, fs: support.FourierSupport, /, *, t: float = 0.0) -> FunctionalRates:
    """Get the instantaneous rates of L, A, the IPD and the IPR under a flow.

    Raises
    ------
    convexflow.errors.ConvexityError
        If the family divides by k or uses 1/k and the curve isn't strictly
        convex.
    """
    terms = speed_terms(spec, fs, t=t)
    speed = terms.speed()
    length = support.length(fs)
    area = support.area(fs)
    d_length = -_internal.integrate(speed)
    d_area = -_internal.integrate(speed * terms.radius)
    return FunctionalRates(
        d_length=d_length,
        d_area=d_area,
        d_ipd=2.0 * length * d_length - 4.0 * math.pi * d_area,
        d_ipr=(2.0 * length * d_length * area - length**2 * d_area) / (4.0 * math.pi * area**2),
    )


def ipd_rate_andrews(spec: FlowSpec, fs: support.FourierSupport, /, *, t: float = 0.0) -> float:
    """Get the IPD rate in the form `2 [∫k ds ∫F ds - ∫ds ∫F k ds]`.

    `λ` doesn't appear in this form, so it only holds for speeds `F(k) - λ`.

    Raises
    ------
    ValueError
        If the speed has a support function term.
    convexflow.errors.ConvexityError
        If the family divides by k or uses 1/k and the curve isn't strictly
        convex.
    """
    terms = speed_terms(spec, fs, t=t)
    if terms.support_weight != 0.0:
        error_message = "The Andrews form only covers speeds without a support function term"
        raise ValueError(error_message)

    length = support.length(fs)
    return 2.0 * (
        2.0 * math.pi * _internal.integrate(terms.local * terms.radius) - length * _internal.integrate(terms.local)
    )


def dual_relation_residual(fs: support.FourierSupport, p: float, /) -> float:
    """Get `p dL/dt (q - 1/k flow) - dA/dt (k - p flow)` with `q = 1/p`.

    This vanishes for every convex curve.

    Raises
    ------
    ValueError
        If `p` isn't positive.
    convexflow.errors.ConvexityError
        If the curve isn't strictly convex.
    """
    if p <= 0.0:
        error_message = f"p must be positive, not {p!r}"
        raise ValueError(error_message)

    k_rates = functional_rates(FlowSpec.custom_k(lambda _: p), fs)
    inv_k_rates = functional_rates(FlowSpec.custom_inv_k(lambda _: 1.0 / p), fs)
    return p * inv_k_rates.d_length - k_rates.d_area


_REPARAMETRISED_BASES: dict[Family, Family] = {Family.GRAD_IPD: Family.GAGE, Family.GRAD_IPR: Family.JIANG_PAN}


@attrs.frozen
class EquivalenceReport:
    """Comparison of a gradient flow against its time reparametrised base flow."""

    gradient: Family
    """The gradient flow, run in τ."""

    base: Family
    """The base flow, run in t."""

    tau_max: float
    """How far the gradient flow was run."""

    t_final: float
    """The base flow time matched to `tau_max`."""

    steps: int
    """Number of τ steps taken."""

    max_discrepancy: float
    """Largest coefficient difference over every matched pair of curves."""


def reparam_equivalence(
    fs0: support.FourierSupport,
    tau_max: float,
    /,
    *,
    gradient: Family = Family.GRAD_IPD,
    control: config.StepControl | None = None,
    step_fraction: float = 0.05,
) -> EquivalenceReport:
    """Check that a gradient flow is its base flow run on a different clock.

    The gradient flow is integrated in τ together with `dt/dτ = s` (`2L` for
    the IPD gradient against the `gage` flow, `L / 2πA` for the IPR gradient
    against the `jiangpan` flow) and the base flow is integrated in t to each
    matched time.

    Parameters
    ----------
    fs0
        The initial curve.
    tau_max
        How far to run the gradient flow.
    gradient
        Either [Family.GRAD_IPD][convexflow.flows.Family.GRAD_IPD] or
        [Family.GRAD_IPR][convexflow.flows.Family.GRAD_IPR].
    control
        Supplies `safety` and `dt_max` for the steps.
    step_fraction
        Fraction of the stiffness cap used as the (fixed) step size.

    Returns
    -------
    EquivalenceReport
        The comparison.

    Raises
    ------
    convexflow.errors.FlowError
        If either flow fails a step.
    ValueError
        If `gradient` has no base flow or `tau_max` is negative.
    """
    if gradient not in _REPARAMETRISED_BASES:
        error_message = f"{gradient.value} isn't a reparametrised gradient flow"
        raise ValueError(error_message)

    _check_time(tau_max)
    control = control or config.DEFAULT_STEP_CONTROL
    gradient_spec = FlowSpec(gradient)
    base_spec = FlowSpec(_REPARAMETRISED_BASES[gradient])
    gradient_derivative = _support_derivative(gradient_spec, reparametrise=True)
    base_derivative = _support_derivative(base_spec)

    margin = support.convexity_margin(fs0)
    _internal.require_convex(margin, "Reparametrisation equivalence")
    tau_step = min(control.dt_max, step_fraction * _stiffness_cap(gradient_spec, fs0, margin, 1.0))
    steps = max(1, math.ceil(tau_max / tau_step)) if tau_max > 0.0 else 0
    tau_step = tau_max / steps if steps else 0.0

    current = base = fs0
    t = 0.0
    discrepancy = 0.0
    try:
        for _ in range(steps):
            current, t_next = _rk4(gradient_derivative, current, t, tau_step)
            base_cap = step_fraction * _stiffness_cap(base_spec, base, support.convexity_margin(base), 1.0)
            substeps = max(1, math.ceil((t_next - t) / min(base_cap, control.dt_max)))
            sub_step = (t_next - t) / substeps
            for index in range(substeps):
                base, _ = _rk4(base_derivative, base, t + index * sub_step, sub_step)

            t = t_next
            discrepancy = max(discrepancy, support.coefficient_distance(current, base))

    except errors.StepRejected as exc:
        error_message = f"Comparison run failed at t={t!r}: {exc.reason}"
        raise errors.FlowError(error_message) from exc

    _LOGGER.debug("%s vs %s matched to t=%s over %s steps", gradient.value, base_spec.family.value, t, steps)
    return EquivalenceReport(
        gradient=gradient,
        base=base_spec.family,
        tau_max=tau_max,
        t_final=t,
        steps=steps,
        max_discrepancy=discrepancy,
    )
