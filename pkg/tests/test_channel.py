import math
from dataclasses import replace

import numpy as np
import pytest

from irs_secure.channel import (ChannelSet, ScenarioConfig, db_to_linear, dbm_to_watt,
                                derive_seed, effective_bob_channel, effective_eve_channel,
                                generate_channels, path_loss_db, reflection_phases)
from irs_secure.phase_opt import build_quadratic, quadratic_objective, random_phases

from conftest import unit_channels


def test_path_loss():
    assert path_loss_db(1.0, 3.7, -30.0, 1.0) == -30.0
    assert path_loss_db(10.0, 2.0, -30.0, 1.0) == pytest.approx(-50.0)
    assert path_loss_db(50.0, 2.0, -30.0, 1.0) == pytest.approx(-63.9794, abs=1e-4)
    with pytest.raises(ValueError):
        path_loss_db(0.0, 2.0)


def test_unit_conversions():
    assert dbm_to_watt(-90) == pytest.approx(1e-12)
    assert dbm_to_watt(5) == pytest.approx(3.1623e-3, rel=1e-4)
    assert db_to_linear(10) == pytest.approx(10.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ScenarioConfig(n_tx=1)
    with pytest.raises(ValueError):
        ScenarioConfig(d_ab=0.0)
    with pytest.raises(ValueError):
        ScenarioConfig(rho_ie=-1.0)
    with pytest.raises(ValueError):
        ScenarioConfig(qos_db=math.inf)
    with pytest.raises(ValueError):
        ScenarioConfig(algorithm="sdr")


def test_generate_deterministic():
    cfg = ScenarioConfig(n_irs=8)
    a, b = generate_channels(cfg, 7), generate_channels(cfg, 7)
    for name in ("H_ai", "h_ib", "h_ie", "h_ab", "h_ae"):
        assert getattr(a, name).tobytes() == getattr(b, name).tobytes()
    c = generate_channels(cfg, 8)
    assert not np.array_equal(a.H_ai, c.H_ai)
    assert a.H_ai.shape == (8, 5) and a.h_ab.shape == (5,)


def test_unit_gain_variance():
    cfg = ScenarioConfig(n_tx=100, n_irs=1000, pl0_db=0.0, d_ai=1, d_ib=1, d_ie=1, d_ab=1, d_ae=1)
    cs = generate_channels(cfg, 3)
    assert np.mean(np.abs(cs.H_ai) ** 2) == pytest.approx(1.0, rel=0.02)
    # real and imaginary parts carry half the power each
    assert np.var(cs.H_ai.real) == pytest.approx(0.5, rel=0.03)
    assert abs(np.mean(cs.H_ai)) < 0.01


def test_default_direct_link_moment():
    cfg = ScenarioConfig(n_tx=1000, n_irs=1)
    samples = np.concatenate([generate_channels(cfg, s).h_ab for s in range(100)])
    expected = 10 ** ((-30 - 30 * math.log10(48)) / 10)
    assert expected == pytest.approx(9.04e-9, rel=1e-3)
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(expected, rel=0.05)


def test_all_link_moments():
    cfg = ScenarioConfig(n_tx=100, n_irs=100)
    draws = [generate_channels(cfg, s) for s in range(10)]
    for link, attr in (("ai", "H_ai"), ("ib", "h_ib"), ("ie", "h_ie"), ("ab", "h_ab"),
                       ("ae", "h_ae")):
        x = np.concatenate([getattr(cs, attr).ravel() for cs in draws])
        assert x.size >= 1000
        tol = 0.05 if x.size >= 1e4 else 0.15
        assert np.mean(np.abs(x) ** 2) == pytest.approx(cfg.link_gain(link), rel=tol)


def test_scalar_effective_channel():
    cs = ChannelSet.from_arrays([[1.0]], [1.0], [1.0])
    assert effective_bob_channel(cs, np.array([1.0]))[0] == pytest.approx(2.0)
    assert abs(effective_bob_channel(cs, np.array([-1.0]))[0]) < 1e-15
    assert effective_bob_channel(cs, None)[0] == 1.0


def test_effective_channel_matches_definition(rng):
    cs = unit_channels(rng, 6, 3)
    q = random_phases(rng, 6)
    Q = np.diag(q.conj())
    row = cs.h_ib.conj() @ Q @ cs.H_ai + cs.h_ab.conj()
    assert np.allclose(effective_bob_channel(cs, q).conj(), row)
    row_e = cs.h_ie.conj() @ Q @ cs.H_ai + cs.h_ae.conj()
    assert np.allclose(effective_eve_channel(cs, q).conj(), row_e)
    theta = reflection_phases(q)
    assert np.allclose(np.exp(1j * theta), q.conj())


def test_dimension_mismatch(rng):
    cs = unit_channels(rng, 4, 2)
    with pytest.raises(ValueError):
        effective_bob_channel(cs, np.ones(3))


@pytest.mark.parametrize("seed", range(5))
def test_gain_identity(seed):
    cs = generate_channels(ScenarioConfig(n_irs=16), seed)
    qf = build_quadratic(cs)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        q = random_phases(rng, 16)
        h_b = effective_bob_channel(cs, q)
        gain = np.vdot(h_b, h_b).real
        assert quadratic_objective(qf, q) + qf.c0 == pytest.approx(gain, rel=1e-9)


def test_derive_seed():
    assert derive_seed(1, 2, 3) == derive_seed(1, 2, 3)
    assert derive_seed(1, 2, 3) != derive_seed(1, 3, 2)
    assert 0 <= derive_seed(0) < 2**64


def test_config_replace_keeps_validation():
    with pytest.raises(ValueError):
        replace(ScenarioConfig(), n_irs=0)
