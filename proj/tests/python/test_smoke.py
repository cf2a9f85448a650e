import math

import numpy as np
import pytest

import sosim


def test_noise_temperatures():
    assert sosim.noise_temperature(1.0, 1.0) == pytest.approx(0.5 / math.tanh(0.5), rel=1e-14)
    assert sosim.tunneling_noise_temperature(1.0, 1.0) == pytest.approx(1.4039015408187168, rel=1e-13)
    r = sosim.derive_rates(sosim.params(D=1.0, T=1.0))
    assert r.w_bar == pytest.approx(2.0)
    assert r.epsilon == pytest.approx(sosim.epsilon_finite_t(1.0, 1.0, 1.0), rel=1e-12)


def test_fidelity_law():
    plus = sosim.displaced_thermal_state(1.0, 1.0, 1.0, 64)
    minus = sosim.displaced_thermal_state(-1.0, 1.0, 1.0, 64)
    assert plus.shape == (64, 64)
    assert np.trace(plus).real == pytest.approx(1.0, abs=1e-12)
    f = sosim.uhlmann_fidelity(plus, minus)
    assert f * f == pytest.approx(math.exp(-4.0 * math.tanh(0.5)), abs=1e-8)


def test_coherent_overlap():
    a = sosim.coherent_state(0.5 + 0.2j, 40)
    b = sosim.coherent_state(-0.3j, 40)
    assert sosim.trace_distance(a, a) == pytest.approx(0.0, abs=1e-14)
    overlap = np.trace(a @ b).real
    assert overlap == pytest.approx(math.exp(-abs(0.5 + 0.5j) ** 2), rel=1e-10)


def test_tunneling_rates():
    p = sosim.params(D=1.0, G_1_0=1.0)
    assert sosim.tunneling_rate(p).rate == pytest.approx(0.5 * math.exp(-4.0), rel=1e-14)
    assert sosim.tunneling_flow_oracle(p) == pytest.approx(0.5 * math.exp(-4.0), rel=1e-6)
    p.T = 1.0
    r = sosim.tunneling_rate(p)
    assert r.regime == "finite_t_exact"
    assert sosim.tunneling_flow_oracle(p, 64) == pytest.approx(r.rate, rel=1e-3)


def test_szilard():
    eps_bar, eta_bar = sosim.maximize_efficiency(1.0, 1.0)
    assert abs(eps_bar - 0.06) <= 0.01
    assert abs(eta_bar - 0.17) <= 0.01
    assert sosim.w_se(1.0, 1.0) == pytest.approx(0.3798854930417224, rel=1e-14)
    work, reference, closure = sosim.quasistatic_work(1.0, 1.0, 0.0, 1000.0)
    assert work == pytest.approx(reference, rel=3e-3)
    assert closure < 1e-8


def test_cost():
    w = sosim.min_total_work(N=1e21, kappa=1e-8, delta=1e-4, theta="300K")
    assert w["joules"] == pytest.approx(314.72711879965647, rel=1e-12)
    assert sosim.failure_probability(1e6, 1e-8, 40.0, 1.0) == pytest.approx(1e14 * math.exp(-40.0), rel=1e-12)


def test_measure_born_rule():
    report = sosim.measure(math.sqrt(0.5), dim=36, D=1.0)
    assert report["p_minus"] == pytest.approx(0.5, abs=1e-4)
    assert report["average_work"] == pytest.approx(2.0, rel=1e-9)


def test_commands_and_errors():
    out, code = sosim.run_command("tunneling", sweeps=["D:0:1:3:lin"])
    assert code == 0
    assert out["table"]["columns"][:3] == ["D", "T", "rate_exact"]
    assert len(out["table"]["rows"]) == 3
    with pytest.raises(sosim.ValidationError):
        sosim.run_command("tunneling", gamma=1.0)
    with pytest.raises(sosim.ValidationError):
        sosim.params(D=-1.0)
    passed, line = sosim.run_criterion(9)
    assert passed and line.startswith("[PASS] C9")
