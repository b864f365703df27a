"""Scenario configuration, Rayleigh channel draws and effective channels."""

import math
from dataclasses import dataclass, field, fields

import numpy as np

LINKS = ("ai", "ib", "ie", "ab", "ae")
ALGORITHMS = ("om", "mm", "random", "no_irs")
CG_RULES = ("paper", "polak_ribiere")


@dataclass(frozen=True)
class ScenarioConfig:
    """Physical constants and solver settings of one scenario.

    Powers are in dBm, gains and thresholds in dB, distances in metres.
    Defaults reproduce the simulation section of the reference scenario.
    """

    n_tx: int = 5
    n_irs: int = 50
    p_total_dbm: float = 5.0
    noise_bob_dbm: float = -90.0
    noise_eve_dbm: float = -90.0
    qos_db: float = 10.0
    pl0_db: float = -30.0
    d0_m: float = 1.0
    rho_ai: float = 2.0
    rho_ib: float = 2.5
    rho_ie: float = 2.5
    rho_ab: float = 3.0
    rho_ae: float = 3.0
    d_ai: float = 50.0
    d_ib: float = 6.0
    d_ie: float = 7.0
    d_ab: float = 48.0
    d_ae: float = 45.0
    # solver settings
    algorithm: str = "om"
    tol_om: float = 1e-4
    tol_mm: float = 1e-6
    max_iter: int = 2000
    eta0: float = 0.3
    cg_rule: str = "paper"

    def __post_init__(self):
        if int(self.n_tx) != self.n_tx or self.n_tx < 2:
            raise ValueError(f"n_tx must be an integer >= 2, got {self.n_tx}")
        if int(self.n_irs) != self.n_irs or self.n_irs < 1:
            raise ValueError(f"n_irs must be an integer >= 1, got {self.n_irs}")
        for link in LINKS:
            if not getattr(self, f"d_{link}") > 0:
                raise ValueError(f"d_{link} must be > 0")
            if not getattr(self, f"rho_{link}") >= 0:
                raise ValueError(f"rho_{link} must be >= 0")
        if not self.d0_m > 0:
            raise ValueError("d0_m must be > 0")
        for name in ("p_total_dbm", "qos_db", "noise_bob_dbm", "noise_eve_dbm", "pl0_db"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.cg_rule not in CG_RULES:
            raise ValueError(f"cg_rule must be one of {CG_RULES}")
        if not (self.tol_om > 0 and self.tol_mm > 0):
            raise ValueError("solver tolerances must be > 0")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if not 0 < self.eta0:
            raise ValueError("eta0 must be > 0")

    @property
    def p_total(self):
        return dbm_to_watt(self.p_total_dbm)

    @property
    def noise_bob(self):
        return dbm_to_watt(self.noise_bob_dbm)

    @property
    def noise_eve(self):
        return dbm_to_watt(self.noise_eve_dbm)

    @property
    def gamma(self):
        return db_to_linear(self.qos_db)

    def link_gain(self, link):
        """Linear large-scale power gain of ``link`` (one of ``LINKS``)."""
        pl = path_loss_db(getattr(self, f"d_{link}"), getattr(self, f"rho_{link}"),
                          self.pl0_db, self.d0_m)
        return db_to_linear(pl)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One channel realization.

    ``H_ai`` is ``(L, N_t)``; the vectors are 1-D arrays.
    """

    H_ai: np.ndarray
    h_ib: np.ndarray
    h_ie: np.ndarray
    h_ab: np.ndarray
    h_ae: np.ndarray
    seed: object = field(default=None)

    def __post_init__(self):
        L, n = self.H_ai.shape
        if self.h_ib.shape != (L,) or self.h_ie.shape != (L,):
            raise ValueError("IRS-side vectors must have length L")
        if self.h_ab.shape != (n,) or self.h_ae.shape != (n,):
            raise ValueError("direct-link vectors must have length N_t")
        for a in (self.H_ai, self.h_ib, self.h_ie, self.h_ab, self.h_ae):
            a.setflags(write=False)

    @property
    def n_irs(self):
        return self.H_ai.shape[0]

    @property
    def n_tx(self):
        return self.H_ai.shape[1]

    @classmethod
    def from_arrays(cls, H_ai, h_ib, h_ab, h_ie=None, h_ae=None, seed=None):
        """Build a channel set from array-likes; Eve links default to zero."""
        H_ai = np.atleast_2d(np.asarray(H_ai, dtype=complex))
        h_ib = np.asarray(h_ib, dtype=complex).ravel()
        h_ab = np.asarray(h_ab, dtype=complex).ravel()
        h_ie = np.zeros_like(h_ib) if h_ie is None else np.asarray(h_ie, dtype=complex).ravel()
        h_ae = np.zeros_like(h_ab) if h_ae is None else np.asarray(h_ae, dtype=complex).ravel()
        return cls(H_ai.copy(), h_ib.copy(), h_ie.copy(), h_ab.copy(), h_ae.copy(), seed)


def path_loss_db(d, rho, pl0_db=-30.0, d0_m=1.0):
    """Large-scale gain ``PL0 - 10 rho log10(d/d0)`` in dB."""
    if not d > 0:
        raise ValueError(f"distance must be > 0, got {d}")
    if not d0_m > 0:
        raise ValueError(f"reference distance must be > 0, got {d0_m}")
    return pl0_db - 10.0 * rho * math.log10(d / d0_m)


def dbm_to_watt(p_dbm):
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def db_to_linear(x_db):
    return 10.0 ** (x_db / 10.0)


def derive_seed(*keys):
    """Deterministic 64-bit sub-seed from a tuple of non-negative integers."""
    state = np.random.SeedSequence([int(k) for k in keys]).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def make_rng(seed, stream=0):
    """Counter-based generator for ``(seed, stream)``; streams are independent."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


def complex_gaussian(rng, shape, variance):
    """CN(0, variance) samples from two independent real normals."""
    scale = math.sqrt(variance / 2.0)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return scale * (re + 1j * im)


def generate_channels(cfg, seed):
    """Draw a Rayleigh-faded channel set for ``cfg``; pure in ``(cfg, seed)``."""
    rng = make_rng(seed, stream=0)
    L, n = cfg.n_irs, cfg.n_tx
    H_ai = complex_gaussian(rng, (L, n), cfg.link_gain("ai"))
    h_ib = complex_gaussian(rng, L, cfg.link_gain("ib"))
    h_ie = complex_gaussian(rng, L, cfg.link_gain("ie"))
    h_ab = complex_gaussian(rng, n, cfg.link_gain("ab"))
    h_ae = complex_gaussian(rng, n, cfg.link_gain("ae"))
    return ChannelSet(H_ai, h_ib, h_ie, h_ab, h_ae, seed=seed)


# The phase vector q holds the conjugated reflection coefficients:
# Q = diag(conj(q)), so that h_B^H = h_IB^H Q H_AI + h_AB^H gives
# h_B = H_AI^H (h_IB * q) + h_AB and |h_B|^2 = q^H(-A)q + 2Re{q^H b} + |h_AB|^2.

def _effective(H_ai, h_irs, h_direct, q):
    if q is None:
        return h_direct.copy()
    q = np.asarray(q, dtype=complex).ravel()
    if q.shape != h_irs.shape:
        raise ValueError(f"phase vector has length {q.size}, expected {h_irs.size}")
    return H_ai.conj().T @ (h_irs * q) + h_direct


def effective_bob_channel(cs, q):
    """Column vector ``h_B``; ``q=None`` removes the IRS path."""
    return _effective(cs.H_ai, cs.h_ib, cs.h_ab, q)


def effective_eve_channel(cs, q):
    return _effective(cs.H_ai, cs.h_ie, cs.h_ae, q)


def reflection_phases(q):
    """IRS element phase shifts theta_i for a phase vector ``q``."""
    return np.mod(-np.angle(q), 2 * np.pi)
