# Convexflow Examples - A collection of examples for Convexflow.
# Written in 2025 by Faster Speeding
#
# To the extent possible under law, the author(s) have dedicated all copyright
# and related and neighboring rights to this software to the public domain worldwide.
# This software is distributed without any warranty.
#
# You should have received a copy of the CC0 Public Domain Dedication along with this software.
# If not, see <https://creativecommons.org/publicdomain/zero/1.0/>.

# pyright: reportUnusedFunction=none


def curve_example() -> None:
    import convexflow

    # An ellipse-like curve: u(θ) = 1 + 0.1 cos 2θ.
    curve = convexflow.FourierSupport.from_harmonics(2.0, cos={2: 0.1})
    summary = convexflow.support.summarize(curve)
    print(summary.length, summary.area, summary.ipr, summary.margin)

    # Parallel offsets keep the isoperimetric difference.
    offset = convexflow.support.parallel_offset(curve, 0.5)
    print(convexflow.support.summarize(offset).ipd == summary.ipd)


def flow_example() -> None:
    import convexflow

    curve = convexflow.support.random_convex(7, 12, 3.0, 0.1)
    control = convexflow.config.StepControl(t_max=5.0, snapshot_every=100)

    trace = convexflow.flows.run(convexflow.FlowSpec(convexflow.Family.GAGE), curve, control)
    print(trace.termination)

    for record in trace.records[::10]:
        print(record.t, record.summary.area, record.summary.ipr)


def custom_flow_example() -> None:
    import math

    import convexflow

    # φ = k - p(t) with an explicit time dependent shift.
    spec = convexflow.FlowSpec.custom_k(lambda t: 1.0 + 0.5 * math.sin(t))
    curve = convexflow.FourierSupport.from_harmonics(2.0, cos={2: 0.05})
    trace = convexflow.flows.run(spec, curve, convexflow.config.StepControl(t_max=0.5))
    print(trace.final.cos_coeffs)


def inequality_example() -> None:
    import convexflow

    curve = convexflow.support.random_convex(3, 16, 3.0, 0.1)
    for report in convexflow.inequalities.run_battery(curve):
        print(report.name, report.holds, report.slack)


def mixed_example() -> None:
    import convexflow

    first = convexflow.support.random_convex(1, 8, 3.0, 0.1)
    second = convexflow.support.parallel_offset(first, 0.25)

    report = convexflow.mixed.mixed_report(first, second)
    print(report.mixed_ipd, report.favard_hi, report.relation)
