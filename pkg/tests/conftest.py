import numpy as np
import pytest

from irs_secure.channel import ChannelSet, ScenarioConfig, generate_channels
from irs_secure.phase_opt import build_quadratic

ACCEPTANCE_LINES = []


def unit_channels(rng, L, n_tx):
    """Channels with CN(0, 1) entries, no path loss."""
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return ChannelSet.from_arrays(cn(L, n_tx), cn(L), cn(n_tx), cn(L), cn(n_tx))


def unit_quadratic(rng, L, n_tx=4):
    return build_quadratic(unit_channels(rng, L, n_tx))


def scenario_quadratic(L, seed, normalized=True):
    qf = build_quadratic(generate_channels(ScenarioConfig(n_irs=L), seed))
    return qf.scaled(qf.bound()) if normalized else qf


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
