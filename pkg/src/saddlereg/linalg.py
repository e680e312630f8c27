"""Dense symmetric eigensolver and finite-difference derivative stencils.

Self-contained routines for small dimensions (n up to a few hundred): a
cyclic Jacobi eigensolver that preserves symmetry exactly, plus central
difference gradient / Hessian / third-derivative stencils that serve as
independent oracles for analytic derivatives throughout the package.
"""

from dataclasses import dataclass

import numpy as np


class NumericalError(RuntimeError):
    """An iterative numerical procedure failed to converge."""


def as_vector(x):
    """Coerce to a finite 1-D float array; reject NaN/Inf and higher ranks."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def check_symmetric(a):
    """Validate a square, finite, exactly symmetric matrix and return it."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    return a


def symmetrize(a):
    """Exact symmetrization by averaging, (A + A^T)/2."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


@dataclass
class EigenDecomposition:
    """Eigenvalues ascending; eigenvectors[:, i] is the unit vector for eigenvalues[i]."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def sym_eigen(a, max_sweeps=100, tol=1e-14):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps annihilate every off-diagonal pair in fixed cyclic order until the
    off-diagonal Frobenius norm falls below tol * max(1, ||A||_F). Bounded at
    `max_sweeps`; raises NumericalError if that bound is hit.
    """
    A = check_symmetric(a).copy()
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return EigenDecomposition(A[0].copy(), V)

    scale = max(1.0, float(np.linalg.norm(A)))
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A[off_mask]))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                sgn = 1.0 if theta >= 0.0 else -1.0
                t = sgn / (abs(theta) + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # two-sided rotation, columns then rows, keeps A symmetric
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                v_p, v_q = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * v_p - s * v_q
                V[:, q] = s * v_p + c * v_q
    else:
        raise NumericalError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")

    eigvals = np.diag(A).copy()
    order = np.argsort(eigvals, kind="stable")
    return EigenDecomposition(eigvals[order], V[:, order])


def spectral_norm(a):
    """Largest absolute eigenvalue of a symmetric matrix."""
    dec = sym_eigen(a)
    return float(np.max(np.abs(dec.eigenvalues)))


def _default_h(x, base):
    return base * max(1.0, float(np.max(np.abs(x)))) if x.size else base


def _eval(f, x):
    v = float(f(x))
    if not np.isfinite(v):
        raise NumericalError(f"objective evaluation returned non-finite value at {x}")
    return v


def fd_gradient(f, x, h=None):
    """Central-difference gradient of a scalar field, componentwise O(h^2).

    Default h = 1e-5 * max(1, ||x||_inf).
    """
    x = as_vector(x)
    if h is None:
        h = _default_h(x, 1e-5)
    if h <= 0:
        raise ValueError("h must be positive")
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (_eval(f, x + e) - _eval(f, x - e)) / (2.0 * h)
    return g


def fd_hessian(f, x, h=None):
    """Second-order central stencil Hessian, symmetrized by averaging.

    Default h = 1e-4 * max(1, ||x||_inf).
    """
    x = as_vector(x)
    if h is None:
        h = _default_h(x, 1e-4)
    if h <= 0:
        raise ValueError("h must be positive")
    n = x.size
    H = np.empty((n, n))
    f0 = _eval(f, x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        H[i, i] = (_eval(f, x + ei) - 2.0 * f0 + _eval(f, x - ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            H[i, j] = (
                _eval(f, x + ei + ej)
                - _eval(f, x + ei - ej)
                - _eval(f, x - ei + ej)
                + _eval(f, x - ei - ej)
            ) / (4.0 * h * h)
            H[j, i] = H[i, j]
    return symmetrize(H)


def third_directional(f, x, v, h=None):
    """Third directional derivative d^3/dt^3 f(x + t v) at t = 0.

    Central difference in t of the second central difference of f along v,
    which collapses to the 4-point stencil
    (f(x+2hv) - 2 f(x+hv) + 2 f(x-hv) - f(x-2hv)) / (2 h^3).
    Requires ||v|| = 1. Default h = 1e-4 * max(1, ||x||_inf).
    """
    x = as_vector(x)
    v = as_vector(v)
    if v.size != x.size:
        raise ValueError("direction and point dimensions differ")
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if h is None:
        h = _default_h(x, 1e-4)
    if h <= 0:
        raise ValueError("h must be positive")
    return (
        _eval(f, x + 2.0 * h * v)
        - 2.0 * _eval(f, x + h * v)
        + 2.0 * _eval(f, x - h * v)
        - _eval(f, x - 2.0 * h * v)
    ) / (2.0 * h ** 3)
