"""Spin-oscillator measurement model: closed forms and a Lindblad oracle."""

import json

from ._core import (  # noqa: F401
    DerivedRates,
    Error,
    NumericalError,
    SosParams,
    TunnelingResult,
    ValidationError,
    binary_entropy,
    coherent_state,
    derive_rates,
    displaced_thermal_state,
    efficiency,
    epsilon_finite_t,
    epsilon_zero_t,
    failure_probability,
    maximize_efficiency,
    min_work,
    noise_temperature,
    quasistatic_work,
    run_criterion,
    trace_distance,
    tunneling_flow_oracle,
    tunneling_noise_temperature,
    tunneling_rate,
    uhlmann_fidelity,
    w_se,
    w_se_faulty,
)
from . import _core


def params(**values):
    """SosParams from keyword arguments (omega0, D, T, G_o_omega0, ...)."""
    return SosParams.from_json(json.dumps(values))


def min_total_work(**inputs):
    """Work estimate for N gates; theta may be a number or a string like "300K"."""
    return json.loads(_core.min_total_work_json(json.dumps(inputs)))


def measure(c_minus, phase=0.0, dim=48, **values):
    """Measurement protocol report as a dict."""
    return json.loads(_core.measure_json(c_minus, phase, params(**values), dim))["report"]


def run_command(command, sweeps=(), **values):
    """Runs a CLI command in-process; returns (output dict, exit code)."""
    text, code = _core.run_command_json(command, json.dumps(values), list(sweeps), "json")
    return json.loads(text), code
