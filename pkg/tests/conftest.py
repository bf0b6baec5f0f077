from __future__ import annotations

import numpy as np
import pytest

from sublqt.config import worked_example_config
from sublqt.costsim import build_closed_loop, error_state, simulate
from sublqt.design import synthesize
from sublqt.example import rng as seeded_rng
from sublqt.graph import gamma_spectrum

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def rng():
    return seeded_rng()


@pytest.fixture(scope="session")
def example_config():
    return worked_example_config()


@pytest.fixture(scope="session")
def example_request(example_config):
    return example_config.design_request()


@pytest.fixture(scope="session")
def example_spectrum(example_request):
    return gamma_spectrum(example_request.network)


@pytest.fixture(scope="session")
def example_cert(example_request, example_spectrum):
    return synthesize(example_request, example_spectrum)


@pytest.fixture(scope="session")
def example_states(example_config):
    return example_config.initial_states()


@pytest.fixture(scope="session")
def example_e0(example_states):
    x0, xr0 = example_states
    return error_state(x0, xr0, 2)


@pytest.fixture(scope="session")
def example_loop(example_request, example_cert):
    return build_closed_loop(example_request.agent, example_request.network, example_cert.k, example_request.cost)


@pytest.fixture(scope="session")
def example_trajectory(example_request, example_cert, example_states):
    x0, xr0 = example_states
    req = example_request
    return simulate(req.agent, req.network, example_cert.k, x0, xr0, req.cost, t_final=30.0, dt=1e-3)


@pytest.fixture(scope="session")
def uncontrolled_trajectory(example_request, example_states):
    x0, xr0 = example_states
    req = example_request
    return simulate(req.agent, req.network, np.zeros((1, 2)), x0, xr0, req.cost, t_final=30.0, dt=1e-3)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        _ACCEPTANCE.append((marker.args[0], report.outcome.upper(), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, detail in _ACCEPTANCE:
        status = "PASS" if outcome == "PASSED" else "FAIL"
        line = f"[{status}] {label}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
