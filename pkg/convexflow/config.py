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
"""Configuration classes for Convexflow's flows, corpora and checks."""
from __future__ import annotations

__all__: list[str] = [
    "DEFAULT_CORPUS",
    "DEFAULT_STEP_CONTROL",
    "DEFAULT_TOLERANCES",
    "CorpusConfig",
    "StepControl",
    "Tolerances",
]

import typing

import attrs

if typing.TYPE_CHECKING:
    from collections import abc as collections


def _check_open_unit(_: object, attribute: attrs.Attribute[float], value: float, /) -> None:
    if not 0.0 < value < 1.0:
        error_message = f"{attribute.name} must be in (0, 1), not {value!r}"
        raise ValueError(error_message)


@attrs.frozen(kw_only=True)
class StepControl:
    """Step size and termination control for flow runs.

    Examples
    --------
    ```py
    control = convexflow.config.StepControl(t_max=5.0, snapshot_every=100)
    trace = convexflow.flows.run(spec, curve, control)
    ```
    """

    dt_init: float = attrs.field(default=1e-3, validator=attrs.validators.gt(0.0))
    """Size of the first attempted step."""

    dt_min: float = attrs.field(default=1e-12, validator=attrs.validators.gt(0.0))
    """Smallest step size before a run gives up with a numeric failure."""

    dt_max: float = attrs.field(default=5e-2, validator=attrs.validators.gt(0.0))
    """Largest step size a run may grow to."""

    safety: float = attrs.field(default=0.5, validator=_check_open_unit)
    """Safety factor applied to the stiffness cap and used as the growth divisor.

    Accepted steps grow the next step to `dt / safety`.
    """

    t_max: float = attrs.field(default=10.0, validator=attrs.validators.gt(0.0))
    """Time after which a run stops with [TimeExhausted][convexflow.flows.TimeExhausted]."""

    ipr_tol: float = attrs.field(default=1e-10, validator=attrs.validators.gt(0.0))
    """A run has converged once `ipr - 1` drops below this."""

    margin_floor: float = attrs.field(default=1e-6, validator=attrs.validators.gt(0.0))
    """A run stops with [ConvexityLost][convexflow.flows.ConvexityLost] once the margin drops below this."""

    snapshot_every: int = attrs.field(default=0, validator=attrs.validators.ge(0))
    """Take a coefficient snapshot every this many accepted steps.

    `0` only snapshots the initial and final curves.
    """

    record_every: int = attrs.field(default=1, validator=attrs.validators.ge(1))
    """Record a summary every this many accepted steps.

    The initial and final curves are always recorded.
    """

    def __attrs_post_init__(self) -> None:
        if not self.dt_min <= self.dt_init <= self.dt_max:
            error_message = (
                f"Expected dt_min <= dt_init <= dt_max, got {self.dt_min!r}, {self.dt_init!r}, {self.dt_max!r}"
            )
            raise ValueError(error_message)


@attrs.frozen(kw_only=True)
class CorpusConfig:
    """Configuration for a deterministic random curve corpus."""

    seed: int = attrs.field(default=0, validator=attrs.validators.ge(0))
    """Seed of the first curve; the i-th curve uses `seed + i`."""

    order: int = attrs.field(default=16, validator=attrs.validators.ge(2))
    """Truncation order of the generated support functions."""

    decay: float = attrs.field(default=3.0, validator=attrs.validators.gt(0.0))
    """Coefficients of mode n are drawn from [-n^-decay, n^-decay]."""

    margin_floor: float = attrs.field(default=0.1, validator=attrs.validators.gt(0.0))
    """Guaranteed lower bound of every generated curve's convexity margin."""

    count: int = attrs.field(default=1, validator=attrs.validators.ge(1))
    """How many curves the corpus holds."""

    @property
    def seeds(self) -> collections.Sequence[int]:
        """Seeds of the corpus' curves in order."""
        return range(self.seed, self.seed + self.count)


@attrs.frozen(kw_only=True)
class Tolerances:
    """Tolerances used by the inequality checks and pair classification."""

    tol: float = attrs.field(default=1e-9, validator=attrs.validators.gt(0.0))
    """Slack tolerance, scaled by `1 + |lhs| + |rhs|` per check."""

    coefficient_tol: float = attrs.field(default=1e-12, validator=attrs.validators.gt(0.0))
    """Magnitude below which a Fourier coefficient counts as structurally zero."""


DEFAULT_STEP_CONTROL: typing.Final[StepControl] = StepControl()
"""Step control used when a run isn't given one."""

DEFAULT_CORPUS: typing.Final[CorpusConfig] = CorpusConfig()
"""Corpus configuration used by `gen` when no flags override it."""

DEFAULT_TOLERANCES: typing.Final[Tolerances] = Tolerances()
"""Tolerances used when a check isn't given explicit ones."""
