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

import math

import numpy
import pytest

from convexflow import config
from convexflow import errors
from convexflow import flows
from convexflow import support

ELLIPTIC = support.FourierSupport.from_harmonics(2.0, cos={2: 0.1})
SKEWED = support.FourierSupport.from_harmonics(2.0, cos={2: 0.1}, sin={3: 0.05})
GENTLE = support.FourierSupport.from_harmonics(2.0, cos={1: 0.2, 2: 0.05}, sin={1: -0.1, 3: 0.01})
FINE_CONTROL = config.StepControl(dt_init=1e-3, dt_max=1e-2, t_max=1.0, snapshot_every=10)

PRESERVING_FAMILIES = [
    flows.Family.GAGE,
    flows.Family.JIANG_PAN,
    flows.Family.MA_ZHU,
    flows.Family.PAN_YANG,
    flows.Family.MA_CHENG,
    flows.Family.DUAL,
    flows.Family.GRAD_IPD,
    flows.Family.GRAD_IPR,
    flows.Family.SUPPORT_AREA_K,
    flows.Family.SUPPORT_LENGTH_K,
    flows.Family.SUPPORT_AREA_INV_K,
    flows.Family.SUPPORT_LENGTH_INV_K,
]
SHIFTED_FAMILIES = [
    flows.Family.CSF,
    flows.Family.GAGE,
    flows.Family.JIANG_PAN,
    flows.Family.MA_ZHU,
    flows.Family.PAN_YANG,
    flows.Family.MA_CHENG,
    flows.Family.DUAL,
    flows.Family.GRAD_IPD,
    flows.Family.GRAD_IPR,
]
CONSERVING_FAMILIES = [family for family in flows.Family if family.conserves is not None]
IPD_DECREASING_FAMILIES = [
    flows.Family.GAGE,
    flows.Family.JIANG_PAN,
    flows.Family.MA_ZHU,
    flows.Family.PAN_YANG,
    flows.Family.MA_CHENG,
    flows.Family.DUAL,
]


def test_family_properties() -> None:
    assert flows.Family.GAGE.uses_curvature
    assert not flows.Family.GAGE.uses_radius
    assert flows.Family.DUAL.uses_radius
    assert not flows.Family.UNIT_NORMAL.uses_curvature
    assert not flows.Family.UNIT_NORMAL.uses_radius
    assert flows.Family.MA_CHENG.conserves == "area"
    assert flows.Family.SUPPORT_LENGTH_INV_K.conserves == "length"
    assert flows.Family.CSF.conserves is None


def test_flow_spec_custom_family_needs_time_function() -> None:
    with pytest.raises(ValueError, match="The custom-k family needs a time function"):
        flows.FlowSpec(flows.Family.CUSTOM_K)


def test_flow_spec_rejects_unused_time_function() -> None:
    with pytest.raises(ValueError, match="The gage family doesn't take a time function"):
        flows.FlowSpec(flows.Family.GAGE, time_function=lambda t: t)


def test_flow_spec_shifted() -> None:
    spec = flows.FlowSpec(flows.Family.CSF).shifted(lambda_shift=2.0)

    assert spec.lambda_shift == 2.0
    assert spec.shifted(support_weight=0.5) == flows.FlowSpec(flows.Family.CSF, lambda_shift=2.0, support_weight=0.5)


@pytest.mark.parametrize("family", PRESERVING_FAMILIES)
def test_normal_speed_vanishes_on_circles(family: flows.Family) -> None:
    speed = flows.normal_speed(flows.FlowSpec(family), support.FourierSupport.circle(1.3))

    numpy.testing.assert_allclose(speed.values, 0.0, atol=1e-12)


def test_normal_speed_dual() -> None:
    speed = flows.normal_speed(flows.FlowSpec(flows.Family.DUAL), ELLIPTIC)

    assert speed.values[0] == pytest.approx(0.285, abs=1e-12)


def test_normal_speed_gage() -> None:
    speed = flows.normal_speed(flows.FlowSpec(flows.Family.GAGE), ELLIPTIC)

    assert speed.values[0] == pytest.approx(1.0 / 0.7 - 1.0, abs=1e-12)
    assert speed.values[0] == pytest.approx(0.428571, abs=1e-6)


def test_normal_speed_unit_normal() -> None:
    speed = flows.normal_speed(flows.FlowSpec.unit_normal(-2.0), ELLIPTIC)

    numpy.testing.assert_allclose(speed.values, 2.0)


def test_normal_speed_custom_families_use_time() -> None:
    k_speed = flows.normal_speed(flows.FlowSpec.custom_k(lambda t: 1.0 + t), support.FourierSupport.circle(1.0), t=2.0)
    inv_k_speed = flows.normal_speed(
        flows.FlowSpec.custom_inv_k(lambda t: 1.0 + t), support.FourierSupport.circle(1.0), t=2.0
    )

    numpy.testing.assert_allclose(k_speed.values, -2.0)
    numpy.testing.assert_allclose(inv_k_speed.values, 2.0)


def test_normal_speed_rejects_non_convex() -> None:
    with pytest.raises(errors.ConvexityError, match="The gage flow needs a strictly convex curve"):
        flows.normal_speed(flows.FlowSpec(flows.Family.GAGE), support.FourierSupport.from_harmonics(2.0, cos={2: 0.4}))


def test_speed_terms_support_weight() -> None:
    terms = flows.speed_terms(flows.FlowSpec(flows.Family.SUPPORT_AREA_K, support_weight=0.5), ELLIPTIC)

    assert terms.support_weight == pytest.approx(math.pi / support.area(ELLIPTIC) + 0.5)
    assert terms.time_factor == 1.0


@pytest.mark.parametrize("family", PRESERVING_FAMILIES)
def test_step_keeps_circles(family: flows.Family) -> None:
    circle = support.FourierSupport.circle(1.0, order=4)

    stepped = flows.step(flows.FlowSpec(family), circle, 0.01)

    assert support.coefficient_distance(stepped, circle) <= 1e-14


def test_step_dual_matches_closed_form() -> None:
    stepped = flows.step(flows.FlowSpec(flows.Family.DUAL), ELLIPTIC, 1e-4)

    assert support.coefficient_distance(stepped, flows.dual_closed_form(ELLIPTIC, 1e-4)) <= 1e-14


def test_step_support_heat_matches_closed_form() -> None:
    stepped = flows.step(flows.FlowSpec(flows.Family.SUPPORT_LENGTH_INV_K), SKEWED, 1e-3)

    assert support.coefficient_distance(stepped, flows.support_heat_closed_form(SKEWED, 1e-3)) <= 1e-12


def test_step_ma_zhu_keeps_length() -> None:
    fs = support.random_convex(4, 6, 3.0, 0.2)

    stepped = flows.step(flows.FlowSpec(flows.Family.MA_ZHU), fs, 1e-3)

    assert abs(support.length(stepped) - support.length(fs)) <= 1e-8


def test_step_rejects_non_positive_dt() -> None:
    with pytest.raises(ValueError, match="Step size must be positive"):
        flows.step(flows.FlowSpec(flows.Family.CSF), ELLIPTIC, 0.0)


def test_step_rejects_non_convex_stage() -> None:
    with pytest.raises(errors.StepRejected, match="lost convexity") as exc_info:
        flows.step(flows.FlowSpec(flows.Family.CSF), support.FourierSupport.from_harmonics(2.0, cos={2: 0.4}), 1e-3)

    assert isinstance(exc_info.value.__cause__, errors.ConvexityError)


def test_run_dual() -> None:
    trace = flows.run(flows.FlowSpec(flows.Family.DUAL), SKEWED, FINE_CONTROL)
    ipd0 = trace.records[0].summary.ipd

    assert isinstance(trace.termination, flows.TimeExhausted)
    assert trace.termination.t == 1.0
    assert [record.t for record in trace.records] == sorted({record.t for record in trace.records})
    for previous, record in zip(trace.records, trace.records[1:], strict=False):
        assert record.summary.ipd <= ipd0 * math.exp(-2.0 * record.t) + 1e-8
        assert record.summary.length >= previous.summary.length - 1e-12
        assert record.summary.area >= previous.summary.area - 1e-12

    assert len(trace.snapshots) > 2
    for snapshot in trace.snapshots:
        assert support.coefficient_distance(snapshot.curve, flows.dual_closed_form(SKEWED, snapshot.t)) <= 1e-6


def test_run_dual_converges_to_its_limit_circle() -> None:
    control = config.StepControl(dt_max=0.05, t_max=20.0)

    trace = flows.run(flows.FlowSpec(flows.Family.DUAL), GENTLE, control)

    assert isinstance(trace.termination, flows.Converged)
    limit = flows.dual_limit(GENTLE)
    assert support.coefficient_distance(trace.final, limit) <= 1e-4
    _, radius = support.synthesize(trace.final, 64)
    assert float(numpy.max(numpy.abs(radius.values - support.length(trace.final) / (2.0 * math.pi)))) <= 1e-4


def test_run_ma_cheng() -> None:
    area0 = support.area(SKEWED)

    trace = flows.run(flows.FlowSpec(flows.Family.MA_CHENG), SKEWED, FINE_CONTROL)

    for record in trace.records:
        assert abs(record.summary.area - area0) <= 1e-7
        assert record.summary.center == pytest.approx((0.0, 0.0), abs=1e-8)

    for snapshot in trace.snapshots:
        assert support.coefficient_distance(snapshot.curve, flows.macheng_closed_form(SKEWED, snapshot.t)) <= 1e-6


def test_run_ma_cheng_keeps_center() -> None:
    trace = flows.run(flows.FlowSpec(flows.Family.MA_CHENG), GENTLE, FINE_CONTROL)

    assert support.summarize(trace.final).center == pytest.approx((0.2, -0.1), abs=1e-8)


@pytest.mark.parametrize("family", [flows.Family.PAN_YANG, flows.Family.DUAL])
def test_run_radius_families_keep_center(family: flows.Family) -> None:
    trace = flows.run(flows.FlowSpec(family), GENTLE, FINE_CONTROL)

    for record in trace.records:
        assert record.summary.center == pytest.approx((0.2, -0.1), abs=1e-8)


def test_run_gage() -> None:
    area0 = support.area(GENTLE)

    trace = flows.run(flows.FlowSpec(flows.Family.GAGE), GENTLE, FINE_CONTROL)

    for previous, record in zip(trace.records, trace.records[1:], strict=False):
        assert abs(record.summary.area - area0) <= 1e-7
        assert record.summary.length <= previous.summary.length + 1e-12


@pytest.mark.parametrize(
    ("family", "conserved"),
    [
        (flows.Family.SUPPORT_AREA_K, "area"),
        (flows.Family.SUPPORT_AREA_INV_K, "area"),
        (flows.Family.MA_ZHU, "length"),
        (flows.Family.PAN_YANG, "length"),
        (flows.Family.SUPPORT_LENGTH_K, "length"),
        (flows.Family.SUPPORT_LENGTH_INV_K, "length"),
    ],
)
def test_run_conserves(family: flows.Family, conserved: str) -> None:
    control = config.StepControl(dt_init=1e-3, dt_max=1e-2, t_max=0.5)
    initial = getattr(support.summarize(GENTLE), conserved)

    trace = flows.run(flows.FlowSpec(family), GENTLE, control)

    assert family.conserves == conserved
    for record in trace.records:
        assert abs(getattr(record.summary, conserved) - initial) <= 1e-6 * initial


def test_run_converges_immediately_for_circle() -> None:
    trace = flows.run(flows.FlowSpec(flows.Family.GAGE), support.FourierSupport.circle(1.0))

    assert trace.termination == flows.Converged(0.0)
    assert len(trace.records) == 1
    assert len(trace.snapshots) == 1


def test_run_reports_initial_convexity_loss() -> None:
    trace = flows.run(flows.FlowSpec(flows.Family.CSF), support.FourierSupport.from_harmonics(2.0, cos={2: 0.4}))

    assert isinstance(trace.termination, flows.ConvexityLost)
    assert trace.termination.t == 0.0


def test_run_unit_normal_shrinks_until_convexity_is_lost() -> None:
    control = config.StepControl(t_max=1.0)

    trace = flows.run(flows.FlowSpec.unit_normal(), ELLIPTIC, control)

    assert isinstance(trace.termination, flows.ConvexityLost)
    assert 0.65 <= trace.termination.t <= 0.76
    assert min(abs(trace.termination.theta), abs(trace.termination.theta - math.pi)) < 1e-9
    assert trace.termination.to_dict()["kind"] == "convexity-lost"


def test_run_unit_normal_moves_parallel() -> None:
    control = config.StepControl(t_max=0.2)
    ipd0 = support.summarize(ELLIPTIC).ipd

    trace = flows.run(flows.FlowSpec.unit_normal(), ELLIPTIC, control)

    assert trace.termination == flows.TimeExhausted(0.2)
    final = trace.records[-1]
    assert final.t == 0.2
    assert final.summary.length == pytest.approx(2.0 * math.pi * 0.8)
    assert final.summary.ipd == pytest.approx(ipd0, abs=1e-10)


def test_run_gives_up_when_steps_get_too_small() -> None:
    control = config.StepControl(dt_min=1e-2, dt_init=1e-2, dt_max=5e-2)
    curve = support.FourierSupport.from_harmonics(2.0, cos={2: 0.3})

    trace = flows.run(flows.FlowSpec(flows.Family.CSF), curve, control)

    assert isinstance(trace.termination, flows.NumericFailure)
    assert trace.termination.t == 0.0
    assert "fell below dt_min" in trace.termination.reason


def test_run_records_every() -> None:
    control = config.StepControl(dt_init=1e-2, dt_max=1e-2, t_max=0.1, record_every=3)

    trace = flows.run(flows.FlowSpec(flows.Family.PAN_YANG), ELLIPTIC, control)

    assert [record.t for record in trace.records] == pytest.approx([0.0, 0.03, 0.06, 0.09, 0.1])
    assert [snapshot.t for snapshot in trace.snapshots] == pytest.approx([0.0, 0.1])


def _random_curve(seed: int, /) -> support.FourierSupport:
    return support.random_convex(seed, 16, 3.0, 0.1)


@pytest.mark.parametrize("seed", range(5))
def test_run_dual_matches_closed_form_on_random_curves(seed: int) -> None:
    curve = _random_curve(seed)
    control = config.StepControl(t_max=1.0, snapshot_every=20, record_every=20)

    trace = flows.run(flows.FlowSpec(flows.Family.DUAL), curve, control)

    assert len(trace.snapshots) > 2
    for snapshot in trace.snapshots:
        assert support.coefficient_distance(snapshot.curve, flows.dual_closed_form(curve, snapshot.t)) <= 1e-8


@pytest.mark.timeout(60)
@pytest.mark.parametrize("seed", range(3))
def test_run_ma_cheng_reaches_its_limit_circle_on_random_curves(seed: int) -> None:
    curve = _random_curve(seed)
    control = config.StepControl(t_max=5.0, snapshot_every=100, record_every=50)

    trace = flows.run(flows.FlowSpec(flows.Family.MA_CHENG), curve, control)

    assert not isinstance(trace.termination, flows.ConvexityLost | flows.NumericFailure)
    for snapshot in trace.snapshots:
        assert support.coefficient_distance(snapshot.curve, flows.macheng_closed_form(curve, snapshot.t)) <= 1e-6

    center = (float(curve.cos_coeffs[1]), float(curve.sin_coeffs[1]))
    for record in trace.records:
        assert record.summary.center == pytest.approx(center, abs=1e-8)

    final = support.summarize(trace.final)
    assert trace.final.cos_coeffs[0] / 2.0 == pytest.approx(math.sqrt(support.area(curve) / math.pi), rel=1e-6)
    assert final.ipr - 1.0 <= 1e-6


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("family", IPD_DECREASING_FAMILIES)
def test_run_never_increases_ipd_on_random_curves(seed: int, family: flows.Family) -> None:
    control = config.StepControl(t_max=1.0, record_every=5)

    trace = flows.run(flows.FlowSpec(family), _random_curve(seed), control)

    assert not isinstance(trace.termination, flows.ConvexityLost | flows.NumericFailure)
    ipd0 = trace.records[0].summary.ipd
    for previous, record in zip(trace.records, trace.records[1:], strict=False):
        assert record.summary.ipd <= previous.summary.ipd + 1e-9 * ipd0


@pytest.mark.timeout(60)
@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("family", CONSERVING_FAMILIES)
def test_run_conserves_on_random_curves(seed: int, family: flows.Family) -> None:
    curve = _random_curve(seed)
    control = config.StepControl(t_max=5.0, record_every=25)
    conserved = family.conserves
    assert conserved is not None
    initial = getattr(support.summarize(curve), conserved)

    trace = flows.run(flows.FlowSpec(family), curve, control)

    assert not isinstance(trace.termination, flows.ConvexityLost | flows.NumericFailure)
    for record in trace.records:
        assert abs(getattr(record.summary, conserved) - initial) <= 1e-7 * initial


@pytest.mark.timeout(60)
@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("family", [flows.Family.PAN_YANG, flows.Family.MA_CHENG, flows.Family.DUAL])
def test_run_radius_families_keep_center_on_random_curves(seed: int, family: flows.Family) -> None:
    curve = _random_curve(seed)
    control = config.StepControl(t_max=5.0, record_every=25)

    trace = flows.run(flows.FlowSpec(family), curve, control)

    center = (float(curve.cos_coeffs[1]), float(curve.sin_coeffs[1]))
    for record in trace.records:
        assert record.summary.center == pytest.approx(center, abs=1e-8)


def test_termination_to_dict() -> None:
    assert flows.Converged(1.5).to_dict() == {"kind": "converged", "t": 1.5}
    assert flows.TimeExhausted(2.0).to_dict() == {"kind": "time-exhausted", "t": 2.0}
    assert flows.NumericFailure(0.5, "oops").to_dict() == {"kind": "numeric-failure", "t": 0.5, "reason": "oops"}


def test_dual_closed_form_at_zero_is_identity() -> None:
    assert support.coefficient_distance(flows.dual_closed_form(SKEWED, 0.0), SKEWED) == 0.0


def test_dual_closed_form_keeps_circles() -> None:
    circle = support.FourierSupport.circle(1.5, center=(0.1, 0.2))

    assert support.coefficient_distance(flows.dual_closed_form(circle, 3.0), circle) == 0.0


def test_dual_closed_form_values() -> None:
    evolved = flows.dual_closed_form(ELLIPTIC, 1.0)

    assert evolved.cos_coeffs[2] == pytest.approx(0.1 * math.exp(-3.0))
    assert evolved.cos_coeffs[0] == pytest.approx(math.sqrt(4.0 + 2.0 * (1.0 - math.exp(-6.0)) * 0.01))


def test_dual_limit() -> None:
    limit = flows.dual_limit(GENTLE)
    c = 0.5 * math.sqrt(4.0 + 2.0 * (0.05**2 + 0.01**2))

    assert support.coefficient_distance(limit, support.FourierSupport.circle(c, center=(0.2, -0.1), order=3)) < 1e-14
    assert support.length(limit) == pytest.approx(2.0 * math.pi * c)


def test_closed_forms_reject_negative_time() -> None:
    with pytest.raises(ValueError, match="Time must be non-negative"):
        flows.dual_closed_form(ELLIPTIC, -1.0)


def test_macheng_closed_form_keeps_circles() -> None:
    circle = support.FourierSupport.circle(2.0)

    assert support.coefficient_distance(flows.macheng_closed_form(circle, 1.0), circle) == 0.0


def test_macheng_closed_form_limit() -> None:
    limit = flows.macheng_closed_form(ELLIPTIC, math.inf)

    assert limit.cos_coeffs[0] / 2.0 == pytest.approx(math.sqrt(0.985))
    assert limit.cos_coeffs[0] / 2.0 == pytest.approx(0.992472, abs=1e-6)


@pytest.mark.parametrize("t", [0.0, 0.1, 1.0, 10.0, math.inf])
def test_macheng_closed_form_keeps_area(t: float) -> None:
    assert support.area(flows.macheng_closed_form(SKEWED, t)) == pytest.approx(support.area(SKEWED), abs=1e-12)


def test_macheng_closed_form_rejects_negative_area() -> None:
    with pytest.raises(ValueError, match="Non-positive radicand"):
        flows.macheng_closed_form(support.FourierSupport.from_harmonics(2.0, cos={2: 0.9}), math.inf)


def test_panyang_closed_form_keeps_length() -> None:
    evolved = flows.panyang_closed_form(SKEWED, 0.5)

    assert support.length(evolved) == support.length(SKEWED)
    assert evolved.sin_coeffs[3] == pytest.approx(0.05 * math.exp(-4.0))


def test_panyang_substitution_solves_heat_equation() -> None:
    t = 0.4
    length = support.length(SKEWED)
    _, radius0 = support.synthesize(SKEWED, 64)
    _, radius_t = support.synthesize(flows.panyang_closed_form(SKEWED, t), 64)
    w0 = support.SampledField(radius0.values - length / (2.0 * math.pi))

    expected = flows.heat_semigroup(w0, t)

    numpy.testing.assert_allclose(
        math.exp(-t) * (radius_t.values - length / (2.0 * math.pi)), expected.values, atol=1e-12
    )


def test_linear_mode_evolve() -> None:
    cosine = support.SampledField.from_function(numpy.cos, 32)
    double = support.SampledField.from_function(lambda thetas: numpy.cos(2.0 * thetas), 32)

    numpy.testing.assert_allclose(flows.linear_mode_evolve(cosine, 5.0).values, cosine.values, atol=1e-14)
    numpy.testing.assert_allclose(
        flows.linear_mode_evolve(double, 1.0).values, math.exp(-3.0) * double.values, atol=1e-14
    )
    numpy.testing.assert_allclose(flows.linear_mode_evolve(support.SampledField(numpy.ones(8)), 1.0).values, math.e)


def test_linear_mode_limit() -> None:
    field = support.SampledField.from_function(lambda thetas: numpy.cos(thetas) + numpy.sin(3.0 * thetas), 32)

    limit = flows.linear_mode_limit(field)

    numpy.testing.assert_allclose(limit.values, numpy.cos(field.thetas), atol=1e-14)


def test_linear_mode_limit_rejects_non_zero_mean() -> None:
    with pytest.raises(ValueError, match="unbounded"):
        flows.linear_mode_limit(support.SampledField(numpy.ones(8)))


def test_heat_semigroup() -> None:
    constant = support.SampledField(numpy.full(16, 2.5))
    wave = support.SampledField.from_function(lambda thetas: numpy.sin(3.0 * thetas), 32)

    numpy.testing.assert_allclose(flows.heat_semigroup(constant, 3.0).values, 2.5)
    numpy.testing.assert_allclose(flows.heat_semigroup(wave, 0.5).values, math.exp(-4.5) * wave.values, atol=1e-14)


@pytest.mark.parametrize("family", PRESERVING_FAMILIES)
def test_functional_rates_vanish_on_circles(family: flows.Family) -> None:
    rates = flows.functional_rates(flows.FlowSpec(family), support.FourierSupport.circle(1.0))

    assert rates.d_length == pytest.approx(0.0, abs=1e-11)
    assert rates.d_area == pytest.approx(0.0, abs=1e-11)
    assert rates.d_ipd == pytest.approx(0.0, abs=1e-10)
    assert rates.d_ipr == pytest.approx(0.0, abs=1e-11)


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("family", SHIFTED_FAMILIES)
def test_ipd_rate_ignores_lambda(seed: int, family: flows.Family) -> None:
    fs = support.random_convex(seed, 6, 3.0, 0.1)
    spec = flows.FlowSpec(family)

    rates = flows.functional_rates(spec, fs)
    shifted = flows.functional_rates(spec.shifted(lambda_shift=5.0), fs)

    assert shifted.d_ipd == pytest.approx(rates.d_ipd, abs=1e-9)
    assert rates.d_ipd <= 1e-10
    assert flows.ipd_rate_andrews(spec, fs) == pytest.approx(rates.d_ipd, abs=1e-9)


def test_ipd_rate_andrews_rejects_support_term() -> None:
    with pytest.raises(ValueError, match="without a support function term"):
        flows.ipd_rate_andrews(flows.FlowSpec(flows.Family.SUPPORT_AREA_K), ELLIPTIC)


@pytest.mark.parametrize("seed", range(5))
def test_jiang_pan_grows_area_and_shortens_length(seed: int) -> None:
    rates = flows.functional_rates(flows.FlowSpec(flows.Family.JIANG_PAN), support.random_convex(seed, 8, 3.0, 0.1))

    assert rates.d_length <= 1e-12
    assert rates.d_area >= -1e-12


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("weight", [-1.0, 0.5, 3.0])
def test_ipr_rate_ignores_support_weight(seed: int, weight: float) -> None:
    fs = support.random_convex(seed, 6, 3.0, 0.1)
    spec = flows.FlowSpec(flows.Family.CSF)

    plain = flows.functional_rates(spec, fs)
    weighted = flows.functional_rates(spec.shifted(support_weight=weight), fs)

    assert weighted.d_ipr == pytest.approx(plain.d_ipr, abs=1e-10)


def test_support_weighted_families_share_ipr_rate() -> None:
    fs = support.random_convex(9, 6, 3.0, 0.1)

    csf = flows.functional_rates(flows.FlowSpec(flows.Family.CSF), fs)
    weighted = flows.functional_rates(flows.FlowSpec(flows.Family.SUPPORT_AREA_K), fs)

    assert weighted.d_ipr == pytest.approx(csf.d_ipr, abs=1e-10)


def test_pure_support_speed_scales_curve() -> None:
    fs = support.random_convex(2, 6, 3.0, 0.1)
    spec = flows.FlowSpec(flows.Family.UNIT_NORMAL, unit_lambda=0.0, support_weight=-1.0)

    rates = flows.functional_rates(spec, fs)

    assert rates.d_ipr == pytest.approx(0.0, abs=1e-10)
    assert rates.d_ipd == pytest.approx(-2.0 * support.summarize(fs).ipd, abs=1e-10)


def test_dual_relation_residual_on_circle() -> None:
    assert flows.dual_relation_residual(support.FourierSupport.circle(1.0), 1.0) == pytest.approx(0.0, abs=1e-12)


def test_dual_relation_residual_on_elliptic_curve() -> None:
    assert abs(flows.dual_relation_residual(ELLIPTIC, 1.0)) <= 1e-9


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("p", [0.5, 2.0])
def test_dual_relation_residual_on_corpus(seed: int, p: float) -> None:
    assert abs(flows.dual_relation_residual(support.random_convex(seed, 8, 3.0, 0.1), p)) <= 1e-9


def test_dual_relation_residual_rejects_non_positive_p() -> None:
    with pytest.raises(ValueError, match="p must be positive"):
        flows.dual_relation_residual(ELLIPTIC, 0.0)


def test_reparam_equivalence_on_circle() -> None:
    report = flows.reparam_equivalence(support.FourierSupport.circle(1.0), 0.05)

    assert report.base is flows.Family.GAGE
    assert report.max_discrepancy == pytest.approx(0.0, abs=1e-12)


@pytest.mark.timeout(60)
def test_reparam_equivalence_ipd_gradient() -> None:
    report = flows.reparam_equivalence(ELLIPTIC, 0.05)

    assert report.steps > 0
    assert report.t_final == pytest.approx(0.05 * 2.0 * support.length(ELLIPTIC), rel=1e-2)
    assert report.max_discrepancy <= 1e-5


@pytest.mark.timeout(60)
def test_reparam_equivalence_ipr_gradient() -> None:
    report = flows.reparam_equivalence(ELLIPTIC, 0.05, gradient=flows.Family.GRAD_IPR)

    assert report.base is flows.Family.JIANG_PAN
    assert report.max_discrepancy <= 1e-5


def test_reparam_equivalence_rejects_other_families() -> None:
    with pytest.raises(ValueError, match="isn't a reparametrised gradient flow"):
        flows.reparam_equivalence(ELLIPTIC, 0.05, gradient=flows.Family.DUAL)


@pytest.mark.timeout(60)
@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("gradient", [flows.Family.GRAD_IPD, flows.Family.GRAD_IPR])
def test_reparam_equivalence_on_random_curves(seed: int, gradient: flows.Family) -> None:
    report = flows.reparam_equivalence(_random_curve(seed), 0.01, gradient=gradient)

    assert report.steps > 0
    assert report.max_discrepancy <= 1e-6
