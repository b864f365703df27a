"""Minimum-power MRT beamforming, null-space artificial noise and secrecy rates."""

import math
from dataclasses import dataclass

import numpy as np

from .channel import effective_bob_channel, effective_eve_channel
from .numerics import rank1_nullspace_basis


@dataclass(frozen=True, eq=False)
class TransmitDesign:
    w: np.ndarray
    R_an: np.ndarray
    p_signal: float
    p_jam: float
    feasible: bool


@dataclass(frozen=True)
class RateReport:
    rate_bob: float
    rate_eve: float
    secrecy_rate: float
    sinr_bob: float
    sinr_eve: float
    feasible: bool = True


def min_power_and_beamformer(h_b, gamma_lin, noise_bob):
    """MRT beamformer meeting Bob's SNR target with equality.

    Returns ``(w, p_t)``; a zero channel gives ``p_t = inf`` and ``w = 0``.
    """
    if not gamma_lin > 0:
        raise ValueError("gamma_lin must be > 0")
    h_b = np.asarray(h_b, dtype=complex).ravel()
    gain = float(np.real(np.vdot(h_b, h_b)))
    if gain == 0.0:
        return np.zeros_like(h_b), math.inf
    p_t = gamma_lin * noise_bob / gain
    w = math.sqrt(p_t) * h_b / math.sqrt(gain)
    return w, p_t


def an_covariance(h_b, p_jam):
    """Isotropic AN covariance ``p_jam/(N_t-1) U U^H`` on the null space of ``h_b``."""
    if p_jam < 0:
        raise ValueError(f"negative jamming power {p_jam}")
    h_b = np.asarray(h_b, dtype=complex).ravel()
    n = h_b.size
    if p_jam == 0:
        return np.zeros((n, n), dtype=complex)
    U = rank1_nullspace_basis(h_b)
    return (p_jam / (n - 1)) * (U @ U.conj().T)


def _hermitian_form(h, R):
    return max(float(np.real(np.vdot(h, R @ h))), 0.0)


def secrecy_rate(h_b, h_e, design, noise_bob, noise_eve):
    """Rates in bits per channel use; the secrecy rate is clamped at zero."""
    if not (noise_bob > 0 and noise_eve > 0):
        raise ValueError("noise powers must be > 0")
    h_b = np.asarray(h_b, dtype=complex).ravel()
    h_e = np.asarray(h_e, dtype=complex).ravel()
    sig_b = abs(np.vdot(h_b, design.w)) ** 2
    sig_e = abs(np.vdot(h_e, design.w)) ** 2
    sinr_b = sig_b / (noise_bob + _hermitian_form(h_b, design.R_an))
    sinr_e = sig_e / (noise_eve + _hermitian_form(h_e, design.R_an))
    r_b = math.log2(1.0 + sinr_b)
    r_e = math.log2(1.0 + sinr_e)
    return RateReport(r_b, r_e, max(r_b - r_e, 0.0), sinr_b, sinr_e, design.feasible)


def _infeasible(n_tx, p_signal):
    zero = np.zeros(n_tx, dtype=complex)
    design = TransmitDesign(zero, np.zeros((n_tx, n_tx), dtype=complex), p_signal, 0.0, False)
    return design, RateReport(0.0, 0.0, 0.0, 0.0, 0.0, False)


def design_transmission(cs, q, cfg):
    """Full transmit design for phase vector ``q`` (``None``: IRS absent).

    Eve's channel is used only to evaluate the resulting rates.
    """
    h_b = effective_bob_channel(cs, q)
    w, p_t = min_power_and_beamformer(h_b, cfg.gamma, cfg.noise_bob)
    p_a = cfg.p_total
    if not p_t <= p_a:
        return _infeasible(cs.n_tx, p_t)
    p_j = p_a - p_t
    design = TransmitDesign(w, an_covariance(h_b, p_j), p_t, p_j, True)
    h_e = effective_eve_channel(cs, q)
    return design, secrecy_rate(h_b, h_e, design, cfg.noise_bob, cfg.noise_eve)
