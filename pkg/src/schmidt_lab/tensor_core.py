"""Uniform two-variable grids, sampled amplitude matrices, and dense linear algebra.

A two-particle amplitude psi(p, q) is discretized on a uniform n x n mesh
into a complex matrix A with A[j1, j2] = psi(p_j1, q_j2).  Everything
downstream (Schmidt decomposition, entanglement measures, coherence) works
on these matrices, so the conventions are fixed here once: row index runs
over p, column index over q, and nodes are placed at the window endpoints
inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

HERMITICITY_RTOL = 1e-10
NORM_ATOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Uniform rectangular mesh for a two-variable amplitude.

    Both axes carry ``n`` nodes including the endpoints, so the spacings
    are ``(p_max - p_min) / (n - 1)`` and ``(q_max - q_min) / (n - 1)``.
    """

    p_min: float
    p_max: float
    q_min: float
    q_max: float
    n: int

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.n - 1)

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.n - 1)

    def p_nodes(self) -> np.ndarray:
        """Node positions along the first (row) axis."""
        return np.linspace(self.p_min, self.p_max, self.n)

    def q_nodes(self) -> np.ndarray:
        """Node positions along the second (column) axis."""
        return np.linspace(self.q_min, self.q_max, self.n)


def make_grid(p_min: float, p_max: float, q_min: float, q_max: float, n: int) -> Grid:
    """Validate window bounds and node count, returning a Grid.

    Raises
    ------
    ValueError
        If any bound is non-finite, a window is empty or reversed, or n < 2.
    """
    bounds = (p_min, p_max, q_min, q_max)
    if not all(np.isfinite(b) for b in bounds):
        raise ValueError(f"grid bounds must be finite, got {bounds}")
    if not p_min < p_max:
        raise ValueError(f"need p_min < p_max, got [{p_min}, {p_max}]")
    if not q_min < q_max:
        raise ValueError(f"need q_min < q_max, got [{q_min}, {q_max}]")
    n = int(n)
    if n < 2:
        raise ValueError(f"need at least 2 nodes per axis, got n={n}")
    return Grid(float(p_min), float(p_max), float(q_min), float(q_max), n)


@dataclass(frozen=True, eq=False)
class AmplitudeMatrix:
    """A discretized two-variable amplitude on a Grid.

    ``entries[j1, j2] = psi(p_j1, q_j2)``.  ``normalized`` records whether
    the sum of squared moduli has been scaled to 1; operations that require
    unit norm check this flag.
    """

    grid: Grid
    entries: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        e = self.entries
        if e.shape != (self.grid.n, self.grid.n):
            raise ValueError(
                f"entries shape {e.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(e.real)) or not np.all(np.isfinite(e.imag)):
            raise ValueError("amplitude entries must be finite")
        if self.normalized:
            total = float(np.sum(np.abs(e) ** 2))
            if abs(total - 1.0) > NORM_ATOL:
                raise ValueError(
                    f"matrix flagged normalized but squared-modulus sum is {total!r}"
                )

    def norm(self) -> float:
        """Frobenius norm, i.e. sqrt of the total squared modulus."""
        return float(np.linalg.norm(self.entries))


def sample_amplitude(f: Callable, grid: Grid) -> AmplitudeMatrix:
    """Evaluate ``f(p, q)`` on the mesh and wrap the result.

    ``f`` may be vectorized over numpy arrays or a plain scalar function;
    vectorized evaluation is tried first.  The result is not normalized.

    Raises
    ------
    ValueError
        If any sampled value is non-finite; the message names the first
        offending node by index and coordinates.
    """
    p = grid.p_nodes()
    q = grid.q_nodes()
    P, Q = np.meshgrid(p, q, indexing="ij")
    try:
        vals = np.asarray(f(P, Q), dtype=complex)
        if vals.shape != P.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.empty((grid.n, grid.n), dtype=complex)
        for j1 in range(grid.n):
            for j2 in range(grid.n):
                vals[j1, j2] = complex(f(p[j1], q[j2]))
    bad = ~(np.isfinite(vals.real) & np.isfinite(vals.imag))
    if np.any(bad):
        j1, j2 = (int(i) for i in np.argwhere(bad)[0])
        raise ValueError(
            f"amplitude is not finite at node ({j1}, {j2}), "
            f"(p, q) = ({p[j1]!r}, {q[j2]!r})"
        )
    return AmplitudeMatrix(grid=grid, entries=vals, normalized=False)


def normalize(A: AmplitudeMatrix) -> AmplitudeMatrix:
    """Scale so the sum of squared moduli is 1.

    Raises
    ------
    ValueError
        If the matrix is identically zero.
    """
    nrm = A.norm()
    if nrm == 0.0:
        raise ValueError("cannot normalize an all-zero amplitude matrix")
    return AmplitudeMatrix(grid=A.grid, entries=A.entries / nrm, normalized=True)


def _check_square_finite(M: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise ValueError(f"{name} must have finite entries")
    return M.astype(complex)


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues (non-increasing) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(M: np.ndarray) -> EigenSystem:
    """Full eigensystem of a Hermitian matrix, eigenvalues non-increasing.

    Raises
    ------
    ValueError
        If M is not square, not finite, or deviates from Hermiticity by
        more than 1e-10 relative to its largest modulus.
    """
    M = _check_square_finite(M, "hermitian_eig input")
    scale = float(np.max(np.abs(M))) or 1.0
    dev = float(np.max(np.abs(M - M.conj().T)))
    if dev > HERMITICITY_RTOL * scale:
        raise ValueError(
            f"matrix is not Hermitian: max |M - M^+| = {dev:.3e} "
            f"exceeds {HERMITICITY_RTOL:.0e} relative to max |M| = {scale:.3e}"
        )
    vals, vecs = np.linalg.eigh(M)
    return EigenSystem(eigenvalues=vals[::-1].copy(), eigenvectors=vecs[:, ::-1].copy())


def svd(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full singular value decomposition ``A = U @ diag(s) @ V``.

    Returns ``(U, s, V)`` where the columns of U and the rows of V are
    orthonormal and s is non-negative and non-increasing.
    """
    A = _check_square_finite(A, "svd input")
    U, s, Vh = np.linalg.svd(A)
    return U, s, Vh
