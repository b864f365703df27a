import math
from dataclasses import replace

import numpy as np
import pytest

from irs_secure.channel import ChannelSet, ScenarioConfig, effective_bob_channel, generate_channels
from irs_secure.phase_opt import build_quadratic, mm_solve, random_phases
from irs_secure.transmit import (TransmitDesign, an_covariance, design_transmission,
                                 min_power_and_beamformer, secrecy_rate)


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def rate_oracle(h_b, h_e, w, R, nb, ne):
    """Term-by-term secrecy rate with explicit sums."""
    n = len(w)
    sb = abs(sum(h_b[i].conjugate() * w[i] for i in range(n))) ** 2
    se = abs(sum(h_e[i].conjugate() * w[i] for i in range(n))) ** 2
    jb = sum(h_b[i].conjugate() * R[i][j] * h_b[j] for i in range(n) for j in range(n)).real
    je = sum(h_e[i].conjugate() * R[i][j] * h_e[j] for i in range(n) for j in range(n)).real
    cb = math.log(1 + sb / (nb + jb)) / math.log(2)
    ce = math.log(1 + se / (ne + je)) / math.log(2)
    return max(cb - ce, 0.0)


def test_min_power_examples(rng):
    h = crandn(rng, 4)
    h *= math.sqrt(1e-9) / np.linalg.norm(h)
    w, p = min_power_and_beamformer(h, 10.0, 1e-12)
    assert p == pytest.approx(1e-2, rel=1e-12)
    assert np.vdot(w, w).real == pytest.approx(p, rel=1e-10)
    assert abs(np.vdot(h, w)) ** 2 / 1e-12 == pytest.approx(10.0, rel=1e-10)
    _, p2 = min_power_and_beamformer(h * math.sqrt(2), 10.0, 1e-12)
    assert p2 == pytest.approx(p / 2, rel=1e-12)
    w0, p0 = min_power_and_beamformer(np.zeros(3), 10.0, 1e-12)
    assert p0 == math.inf and not np.any(w0)


def test_an_covariance_examples(rng):
    assert not np.any(an_covariance(crandn(rng, 4), 0.0))
    R = an_covariance(np.array([1.0, 0, 0]), 2.0)
    assert np.allclose(R, np.diag([0.0, 1.0, 1.0]), atol=1e-15)
    h = crandn(rng, 5)
    R = an_covariance(h, 0.7)
    assert abs(np.vdot(h, R @ h)) <= 1e-10 * 0.7 * np.vdot(h, h).real
    assert np.trace(R).real == pytest.approx(0.7, rel=1e-10)
    eig = np.linalg.eigvalsh(R)
    assert eig.min() >= -1e-15 and np.sum(eig > 1e-9) == 4
    with pytest.raises(ValueError):
        an_covariance(h, -1.0)


def make_design(h_b, gamma, nb, p_total):
    w, p_t = min_power_and_beamformer(h_b, gamma, nb)
    return TransmitDesign(w, an_covariance(h_b, p_total - p_t), p_t, p_total - p_t, True)


def test_rate_without_eve(rng):
    h_b = crandn(rng, 4) * 1e-4
    d = make_design(h_b, 10.0, 1e-12, 1e-3)
    rep = secrecy_rate(h_b, np.zeros(4), d, 1e-12, 1e-12)
    assert rep.secrecy_rate == pytest.approx(math.log2(11.0), rel=1e-10)


def test_rate_symmetric_channels_is_zero(rng):
    h_b = crandn(rng, 3)
    w, p_t = min_power_and_beamformer(h_b, 4.0, 1.0)
    d = TransmitDesign(w, np.zeros((3, 3), complex), p_t, 0.0, True)
    assert secrecy_rate(h_b, h_b, d, 1.0, 1.0).secrecy_rate == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_rate_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    h_b, h_e = crandn(rng, 5), crandn(rng, 5)
    d = make_design(h_b, 3.0, 0.5, 20.0)
    rep = secrecy_rate(h_b, h_e, d, 0.5, 0.8)
    expected = rate_oracle(list(h_b), list(h_e), list(d.w), d.R_an.tolist(), 0.5, 0.8)
    assert rep.secrecy_rate == pytest.approx(expected, abs=1e-12)
    assert rep.secrecy_rate == max(rep.rate_bob - rep.rate_eve, 0.0)


def test_design_limits():
    cfg = ScenarioConfig(n_irs=10)
    cs = generate_channels(cfg, 1)
    q = random_phases(np.random.default_rng(1), 10)
    design, rep = design_transmission(cs, q, replace(cfg, qos_db=-80.0))
    assert design.p_jam == pytest.approx(cfg.p_total, rel=1e-6)
    assert rep.rate_bob < 1e-7 and rep.secrecy_rate < 1e-7
    design, rep = design_transmission(cs, q, replace(cfg, qos_db=60.0))
    assert not design.feasible and rep.secrecy_rate == 0.0 and not rep.feasible


def test_design_without_irs_uses_direct_path():
    cfg = ScenarioConfig()
    cs = generate_channels(cfg, 4)
    design, _ = design_transmission(cs, None, cfg)
    gain = np.vdot(cs.h_ab, cs.h_ab).real
    assert design.p_signal == pytest.approx(cfg.gamma * cfg.noise_bob / gain, rel=1e-12)


def test_solver_api_does_not_need_eve():
    # Eve's links never enter the optimization problem
    rng = np.random.default_rng(5)
    cs = generate_channels(ScenarioConfig(n_irs=8), 5)
    blind = ChannelSet.from_arrays(cs.H_ai, cs.h_ib, cs.h_ab)
    a, b = build_quadratic(cs), build_quadratic(blind)
    assert np.array_equal(a.A, b.A) and np.array_equal(a.b, b.b)


def test_phase_optimization_beats_random_phases():
    cfg = ScenarioConfig(n_irs=30)
    wins = total = 0
    for seed in range(5):
        cs = generate_channels(cfg, seed)
        rng = np.random.default_rng(seed)
        q_opt, _ = mm_solve(build_quadratic(cs), random_phases(rng, 30))
        g_opt = np.linalg.norm(effective_bob_channel(cs, q_opt)) ** 2
        for _ in range(100):
            g_rand = np.linalg.norm(effective_bob_channel(cs, random_phases(rng, 30))) ** 2
            wins += g_opt >= g_rand
            total += 1
    assert wins / total >= 0.99
