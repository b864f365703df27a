"""Small dense complex linear-algebra kernels."""

import numpy as np

HERMITIAN_TOL = 1e-9
ZERO_MODULUS = 1e-300


def check_hermitian(M, tol=HERMITIAN_TOL):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    scale = max(np.max(np.abs(M)), 1.0) if M.size else 1.0
    asym = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if asym > tol * scale:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3e})")
    return M


def lambda_max(M, rtol=1e-12, max_iter=10_000):
    """Largest eigenvalue of a Hermitian matrix by shifted power iteration.

    The matrix is shifted by its infinity norm so that every eigenvalue of
    ``M + s I`` is non-negative and the top one dominates in magnitude.
    Iteration stops once successive Rayleigh quotients agree to ``rtol``
    relative to the shift.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Hermitian matrix.
    rtol : float
        Stopping threshold on the change of the Rayleigh quotient.
    max_iter : int
        Iteration cap.

    Returns
    -------
    float
        Estimate of the largest eigenvalue. It never exceeds the true value
        by more than rounding, since a Rayleigh quotient is bounded by it.
    """
    M = check_hermitian(M)
    n = M.shape[0]
    if n == 0:
        raise ValueError("empty matrix")
    M = 0.5 * (M + M.conj().T)
    shift = float(np.max(np.sum(np.abs(M), axis=1)))
    if shift == 0.0:
        return 0.0
    S = M + shift * np.eye(n)

    # Deterministic start with a component along every eigenvector (almost surely).
    v = np.exp(1j * np.arange(1, n + 1) * 0.7071) * (1.0 + np.arange(n) / n)
    v /= np.linalg.norm(v)
    rq = np.real(np.vdot(v, S @ v))
    for _ in range(max_iter):
        u = S @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            break
        v = u / nu
        rq_next = np.real(np.vdot(v, S @ v))
        if abs(rq_next - rq) < rtol * shift:
            rq = rq_next
            break
        rq = rq_next
    return float(rq - shift)


def rank1_nullspace_basis(h):
    """Orthonormal basis of the orthogonal complement of ``h``.

    A Householder reflector ``P`` with ``P (h/|h|) = c e_1`` (``|c| = 1``) is
    unitary and Hermitian, so its columns 2..n are orthonormal and orthogonal
    to ``h``.

    Returns
    -------
    ndarray, shape (n, n-1)
    """
    h = np.asarray(h, dtype=complex).ravel()
    n = h.size
    if n < 2:
        raise ValueError("null space of a rank-one matrix needs n >= 2")
    nh = np.linalg.norm(h)
    if nh == 0.0:
        raise ValueError("zero vector has no well-defined null space for AN")
    x = h / nh
    x0 = x[0]
    phase = x0 / abs(x0) if abs(x0) > 0 else 1.0 + 0j
    u = x.copy()
    u[0] += phase
    u /= np.linalg.norm(u)
    P = np.eye(n, dtype=complex) - 2.0 * np.outer(u, u.conj())
    return P[:, 1:]


def unit_normalize(v):
    """Entrywise ``v_i / |v_i|``."""
    v = np.asarray(v, dtype=complex)
    mod = np.abs(v)
    if np.any(mod < ZERO_MODULUS):
        raise ValueError("zero-modulus entry")
    return v / mod


def real_inner(x, y):
    """Real inner product ``Re{x^H y}``, the metric used on the phase manifold."""
    return float(np.real(np.vdot(x, y)))
