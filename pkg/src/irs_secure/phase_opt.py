"""IRS phase optimization: problem construction, OM and MM solvers, grid oracle.

The phase vector ``q`` maximizes

    g(q) = q^H (-A) q + 2 Re{q^H b},    |q_i| = 1,

which equals ``|h_B|^2 - |h_AB|^2``. The manifold solver minimizes the
reciprocal ``f = 1/g`` by Riemannian conjugate gradient; the MM solver
maximizes ``g`` directly through a linear surrogate with closed-form phases.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .numerics import ZERO_MODULUS, lambda_max, real_inner, unit_normalize

SINGULAR_G = 1e-12
ALPHA_CAP = 10.0
ARMIJO_C = 1e-4
MAX_HALVINGS = 30
MAX_RESTARTS = 5


class ObjectiveSingularity(ValueError):
    """Raised when the reciprocal objective is evaluated at ``g(q) ~ 0``."""


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """The pair ``(A, b)`` of the unit-modulus quadratic program.

    ``c0`` is the direct-path power ``|h_AB|^2`` so that ``g(q) + c0`` recovers
    the effective channel gain.
    """

    A: np.ndarray
    b: np.ndarray
    c0: float = 0.0

    @property
    def n(self):
        return self.b.size

    def bound(self):
        """Upper bound on ``|g(q)|`` over the unit-modulus set."""
        return float(np.sum(np.abs(self.A)) + 2.0 * np.sum(np.abs(self.b)))

    def scaled(self, s):
        return QuadraticForm(self.A / s, self.b / s, self.c0 / s)


@dataclass
class SolveTrace:
    algorithm: str
    objective: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    status: str = "running"
    wall_time: float = 0.0
    loop_time: float = 0.0
    restarts: int = 0
    fallback_steps: int = 0

    @property
    def failed(self):
        return self.status == "failed"


def build_quadratic(cs):
    """``A = -diag(h_IB^H) H_AI H_AI^H diag(h_IB)``, ``b = diag(h_IB^H) H_AI h_AB``."""
    Phi = cs.h_ib.conj()[:, None] * cs.H_ai
    A = -(Phi @ Phi.conj().T)
    A = 0.5 * (A + A.conj().T)
    b = Phi @ cs.h_ab
    c0 = float(np.real(np.vdot(cs.h_ab, cs.h_ab)))
    return QuadraticForm(A, b, c0)


def random_phases(rng, n):
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))


def _objective(A, b, q, Aq=None):
    if Aq is None:
        Aq = A @ q
    return float(-np.real(np.vdot(q, Aq)) + 2.0 * np.real(np.vdot(q, b)))


def quadratic_objective(qf, q):
    """``g(q) = q^H(-A)q + 2Re{q^H b}``."""
    return _objective(qf.A, qf.b, np.asarray(q, dtype=complex))


def p3_objective(qf, q):
    """Minimization form ``q^H A q - q^H b - b^H q``, i.e. ``-g(q)``."""
    return -quadratic_objective(qf, q)


def _g_and_egrad(A, b, q):
    Aq = A @ q
    g = _objective(A, b, q, Aq)
    if abs(g) < SINGULAR_G:
        raise ObjectiveSingularity(f"objective singularity (g = {g:.3e})")
    return g, -2.0 * (b - Aq) / g**2


def euclidean_gradient(qf, q):
    """Gradient of ``f = 1/g`` w.r.t. the real inner product ``Re{x^H y}``."""
    return _g_and_egrad(qf.A, qf.b, np.asarray(q, dtype=complex))[1]


def _tangent_project(v, q):
    return v - np.real(v * q.conj()) * q


def riemannian_gradient(egrad, q):
    """Project ``egrad`` onto the tangent space of the phase manifold at ``q``."""
    return _tangent_project(np.asarray(egrad, dtype=complex), np.asarray(q, dtype=complex))


def vector_transport(mu, q_next):
    """Carry a tangent vector into the tangent space at ``q_next``."""
    return _tangent_project(np.asarray(mu, dtype=complex), np.asarray(q_next, dtype=complex))


def cg_coefficient(grad_next, grad_curr, alpha_cap=ALPHA_CAP):
    """Norm-ratio conjugate-gradient coefficient, clamped to ``[0, alpha_cap]``.

    ``om_solve`` feeds it Riemannian gradients: the radial part of the
    Euclidean gradient does not vanish at a critical point, which pins the
    ratio near 1 and stalls the iteration.
    """
    den = real_inner(grad_curr, grad_curr)
    if np.sqrt(den) < 1e-300:
        return 0.0
    return float(min(max(real_inner(grad_next, grad_next) / den, 0.0), alpha_cap))


def polak_ribiere_coefficient(grad_next, grad_curr_transported, grad_curr, alpha_cap=ALPHA_CAP):
    """Textbook PR+ coefficient on Riemannian gradients."""
    den = real_inner(grad_curr, grad_curr)
    if np.sqrt(den) < 1e-300:
        return 0.0
    num = real_inner(grad_next, grad_next - grad_curr_transported)
    return float(min(max(num / den, 0.0), alpha_cap))


def retract(q, eta, mu):
    """``unt(q + eta mu)``; an entry that lands on zero keeps its old phase."""
    q = np.asarray(q, dtype=complex)
    if eta == 0:
        return q.copy()
    v = q + eta * np.asarray(mu, dtype=complex)
    mod = np.abs(v)
    out = np.where(mod < ZERO_MODULUS, q, v / np.where(mod < ZERO_MODULUS, 1.0, mod))
    return out


def secant_estimate(slope0, slope1, eta_prev):
    """Zero of the secant through ``(0, slope0)`` and ``(eta_prev, slope1)``.

    Returns ``None`` for a degenerate denominator.
    """
    denom = slope1 - slope0
    if not np.isfinite(denom) or abs(denom) < 1e-18:
        return None
    return -eta_prev * slope0 / denom


def _armijo(A, b, q, mu, f0, slope, eta_start):
    eta = eta_start
    for _ in range(MAX_HALVINGS + 1):
        qn = retract(q, eta, mu)
        g_new = _objective(A, b, qn)
        if g_new > SINGULAR_G and 1.0 / g_new <= f0 + ARMIJO_C * eta * slope:
            return eta
        eta *= 0.5
    return 0.0


def secant_step_size(qf, q, d, eta_prev, mu=None):
    """Step size for the conjugate-gradient update.

    The secant rule on the directional derivative of ``f`` along the ambient
    direction ``d`` is tried first. It is accepted when finite, positive, no
    larger than ``1e3 * eta_prev`` and (when ``mu`` is given) when it yields
    sufficient decrease of ``f`` along the retracted direction. Otherwise
    Armijo backtracking from ``eta_prev`` is used.

    Parameters
    ----------
    qf : QuadraticForm
    q : ndarray
        Current unit-modulus iterate.
    d : ndarray
        Euclidean search direction.
    eta_prev : float
        Previous step size (> 0).
    mu : ndarray, optional
        Tangent search direction used for retraction; defaults to the
        projection of ``d``.

    Returns
    -------
    eta : float
        Step size, 0 on stagnation.
    fallback : bool
        True when the secant estimate was rejected.
    """
    if not eta_prev > 0:
        raise ValueError("eta_prev must be > 0")
    q = np.asarray(q, dtype=complex)
    d = np.asarray(d, dtype=complex)
    if not np.any(d):
        return 0.0, False
    A, b = qf.A, qf.b
    g0, grad0 = _g_and_egrad(A, b, q)
    f0 = 1.0 / g0
    if mu is None:
        mu = _tangent_project(d, q)
    slope_mu = real_inner(grad0, mu)

    eta = None
    slope0 = real_inner(grad0, d)
    try:
        _, grad1 = _g_and_egrad(A, b, q + eta_prev * d)
        eta = secant_estimate(slope0, real_inner(grad1, d), eta_prev)
    except ObjectiveSingularity:
        eta = None
    if eta is not None and np.isfinite(eta) and 0 < eta <= 1e3 * eta_prev:
        g_new = _objective(A, b, retract(q, eta, mu))
        if slope_mu < 0 and g_new > SINGULAR_G and 1.0 / g_new <= f0 + ARMIJO_C * eta * slope_mu:
            return float(eta), False
    if not slope_mu < 0:
        return 0.0, True
    return _armijo(A, b, q, mu, f0, slope_mu, eta_prev), True


def _feasible_start(A, b, q0, rng, trace):
    # g(-q) = 2 q^H(-A)q - g(q) > 0 whenever g(q) <= 0 (unless both vanish),
    # so the negated start is tried before drawing fresh random phases.
    q = unit_normalize(q0)
    tried_flip = False
    while True:
        g = _objective(A, b, q)
        if g > SINGULAR_G:
            return q
        if trace.restarts >= MAX_RESTARTS:
            return None
        trace.restarts += 1
        if not tried_flip:
            q, tried_flip = -q, True
        else:
            q = random_phases(rng, q.size)


def om_solve(qf, q0, tol=1e-4, max_iter=2000, eta0=0.3, cg_rule="paper", rng=None,
             normalize=True, callback=None):
    """Oblique-manifold conjugate gradient on ``f = 1/g``.

    Each iteration computes a step size, retracts, evaluates the Riemannian
    gradient, transports the previous direction and forms the new conjugate
    direction. The loop stops when the Riemannian gradient norm drops to
    ``tol``.

    With ``normalize`` the form is divided by ``qf.bound()`` first, so ``tol``
    applies to a problem with ``|g| <= 1`` regardless of the channel's
    absolute power scale. Objective values in the trace are always in the
    units of ``qf``. ``callback(q)`` is invoked on the start point and on
    every accepted iterate.

    Returns
    -------
    q : ndarray
        Best iterate by ``g``.
    trace : SolveTrace
    """
    t_start = time.perf_counter()
    trace = SolveTrace("om")
    s = qf.bound() if normalize else 1.0
    if s <= 0:
        s = 1.0
    A, b = qf.A / s, qf.b / s
    rng = np.random.default_rng(0) if rng is None else rng

    q = _feasible_start(A, b, q0, rng, trace)
    if q is None:
        trace.status = "failed"
        trace.wall_time = time.perf_counter() - t_start
        return unit_normalize(q0), trace

    g, egrad = _g_and_egrad(A, b, q)
    rgrad = _tangent_project(egrad, q)
    mu, d = -rgrad, -egrad
    eta = eta0
    best_q, best_g = q, g
    trace.objective.append(g * s)
    trace.grad_norm.append(float(np.linalg.norm(rgrad)))
    if callback is not None:
        callback(q)

    t_loop = time.perf_counter()
    for _ in range(max_iter):
        if trace.grad_norm[-1] <= tol:
            trace.converged = True
            break
        if real_inner(rgrad, mu) >= 0:
            mu, d = -rgrad, -egrad
        eta_new, fallback = secant_step_size(QuadraticForm(A, b), q, d, eta, mu)
        trace.fallback_steps += fallback
        if eta_new == 0.0:
            if np.any(mu != -rgrad):
                # conjugate direction failed, retry along steepest descent
                mu, d = -rgrad, -egrad
                eta_new, fallback = secant_step_size(QuadraticForm(A, b), q, d, eta0, mu)
                trace.fallback_steps += fallback
            if eta_new == 0.0:
                trace.status = "stagnated"
                break
        eta = eta_new
        q_next = retract(q, eta, mu)
        g_next, egrad_next = _g_and_egrad(A, b, q_next)
        rgrad_next = _tangent_project(egrad_next, q_next)
        mu_t = _tangent_project(mu, q_next)
        if cg_rule == "paper":
            alpha = cg_coefficient(rgrad_next, rgrad)
        else:
            alpha = polak_ribiere_coefficient(rgrad_next, _tangent_project(rgrad, q_next), rgrad)
        mu = -rgrad_next + alpha * mu_t
        d = -egrad_next + alpha * d
        q, g, egrad, rgrad = q_next, g_next, egrad_next, rgrad_next
        trace.iterations += 1
        trace.objective.append(g * s)
        trace.grad_norm.append(float(np.linalg.norm(rgrad)))
        if callback is not None:
            callback(q)
        if g > best_g:
            best_q, best_g = q, g
    else:
        trace.converged = trace.grad_norm[-1] <= tol

    if trace.status == "running":
        trace.status = "converged" if trace.converged else "max_iter"
    now = time.perf_counter()
    trace.loop_time = now - t_loop
    trace.wall_time = now - t_start
    return best_q, trace


def mm_beta(qf, q_k, lam=None):
    """Surrogate vector ``(lam I - A) q_k + b``."""
    if lam is None:
        lam = lambda_max(qf.A)
    q_k = np.asarray(q_k, dtype=complex)
    return lam * q_k - qf.A @ q_k + qf.b


def mm_surrogate(qf, q, q_k, lam):
    """Majorizer of the minimization objective at ``q``, touching it at ``q_k``."""
    q = np.asarray(q, dtype=complex)
    q_k = np.asarray(q_k, dtype=complex)
    beta = mm_beta(qf, q_k, lam)
    quad = float(np.real(np.vdot(q_k, qf.A @ q_k)))
    return lam * float(np.real(np.vdot(q, q))) + lam * float(np.real(np.vdot(q_k, q_k))) \
        - 2.0 * float(np.real(np.vdot(q, beta))) - quad


def mm_step(beta, q_prev=None):
    """Closed-form maximizer of ``Re{q^H beta}`` over unit-modulus ``q``."""
    beta = np.asarray(beta, dtype=complex)
    mod = np.abs(beta)
    tiny = mod < ZERO_MODULUS
    fallback = np.ones_like(beta) if q_prev is None else np.asarray(q_prev, dtype=complex)
    return np.where(tiny, fallback, beta / np.where(tiny, 1.0, mod))


def mm_solve(qf, q0, tol=1e-6, max_iter=2000, normalize=True, lam=None, callback=None):
    """Minorization-maximization on ``g`` with closed-form phase updates.

    Stops when ``|g_{k+1} - g_k| <= tol * max(1, |g_k|)`` on the normalized
    form (see ``om_solve``). ``lam`` defaults to the largest eigenvalue of
    ``A``, computed once. ``callback(q)`` sees every iterate.
    """
    t_start = time.perf_counter()
    trace = SolveTrace("mm")
    s = qf.bound() if normalize else 1.0
    if s <= 0:
        s = 1.0
    A, b = qf.A / s, qf.b / s
    lam = lambda_max(A) if lam is None else lam / s
    work = QuadraticForm(A, b)

    q = unit_normalize(q0)
    g = _objective(A, b, q)
    trace.objective.append(g * s)
    if callback is not None:
        callback(q)
    t_loop = time.perf_counter()
    for _ in range(max_iter):
        q_next = mm_step(mm_beta(work, q, lam), q)
        if callback is not None:
            callback(q_next)
        g_next = _objective(A, b, q_next)
        trace.iterations += 1
        trace.objective.append(g_next * s)
        done = abs(g_next - g) <= tol * max(1.0, abs(g))
        q, g = q_next, g_next
        if done:
            trace.converged = True
            break
    trace.status = "converged" if trace.converged else "max_iter"
    now = time.perf_counter()
    trace.loop_time = now - t_loop
    trace.wall_time = now - t_start
    return q, trace


def _grid_values(A, b, Q):
    AQ = Q @ A.T
    return -np.real(np.sum(Q.conj() * AQ, axis=1)) + 2.0 * np.real(Q.conj() @ b)


def grid_oracle(qf, resolution=512):
    """Exhaustive search of ``g`` over the phase grid ``exp(2j pi k / resolution)``.

    Only for ``L <= 3``; the cost is ``resolution ** L``.

    Returns
    -------
    q_best : ndarray
    g_best : float
    """
    n = qf.n
    if n > 3:
        raise ValueError(f"grid oracle refused for L = {n} > 3")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    pts = np.exp(2j * np.pi * np.arange(resolution) / resolution)
    A, b = qf.A, qf.b
    if n == 1:
        Q = pts[:, None]
        vals = _grid_values(A, b, Q)
        k = int(np.argmax(vals))
        return Q[k].copy(), float(vals[k])
    tail = np.stack([x.ravel() for x in np.meshgrid(*([pts] * (n - 1)), indexing="ij")], axis=1)
    best_g, best_q = -np.inf, None
    for p in pts:
        Q = np.hstack([np.full((tail.shape[0], 1), p), tail])
        vals = _grid_values(A, b, Q)
        k = int(np.argmax(vals))
        if vals[k] > best_g:
            best_g, best_q = float(vals[k]), Q[k].copy()
    return best_q, best_g
