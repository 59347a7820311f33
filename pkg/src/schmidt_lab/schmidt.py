"""Schmidt decomposition of discretized two-variable amplitudes.

A normalized matrix A factors as A = sum_k sqrt(lambda_k) u_k v_k^T with
orthonormal discrete modes u_k (in p) and v_k (in q) and non-negative
weights lambda_k summing to 1.  The weights are the squared singular
values of A; they carry all entanglement information through the Schmidt
number K = 1 / sum(lambda^2) and the entropy S = -sum(lambda log2 lambda).

Two routes produce the factorization: a direct SVD, and an eigendecomposition
of the Gram matrix A A^+ followed by projection of the q-modes.  Both are
exposed so one can cross-check the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import AmplitudeMatrix, Grid, hermitian_eig, svd

GAUGES = ("largest-real-positive", "none")
METHODS = ("svd", "gram-eig")
WEIGHT_SUM_ATOL = 1e-10


@dataclass(frozen=True)
class DecompositionOptions:
    """Knobs for schmidt_decompose.

    truncation_threshold
        Relative weight cutoff: modes with lambda_k / lambda_1 below it are
        dropped.  Must lie in [0, 1).
    regularization_epsilon
        Additive regularizer used by the gram-eig route when inverting the
        eigenvalue matrix.  Must lie in [1e-16, 1e-10].
    gauge
        "largest-real-positive" rotates each p-mode so its largest-modulus
        component is real and positive (the paired q-mode absorbs the
        inverse phase, leaving every rank-1 term unchanged); "none" keeps
        the raw factor phases.
    method
        "svd" or "gram-eig".
    """

    truncation_threshold: float = 1e-14
    regularization_epsilon: float = 1e-12
    gauge: str = "largest-real-positive"
    method: str = "svd"

    def __post_init__(self):
        if not 0.0 <= self.truncation_threshold < 1.0:
            raise ValueError(
                f"truncation_threshold must be in [0, 1), got {self.truncation_threshold}"
            )
        if not 1e-16 <= self.regularization_epsilon <= 1e-10:
            raise ValueError(
                "regularization_epsilon must be in [1e-16, 1e-10], "
                f"got {self.regularization_epsilon}"
            )
        if self.gauge not in GAUGES:
            raise ValueError(f"gauge must be one of {GAUGES}, got {self.gauge!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    """Outcome of a Schmidt decomposition.

    lambdas
        Kept weights, non-increasing, renormalized to sum to 1.
    modes_p, modes_q
        Arrays of shape (rank, n); row k holds the k-th discrete mode in
        the p and q variable respectively, each with unit Euclidean norm.
    reconstruction_error
        Relative Frobenius error committed by the truncation, i.e. the
        square root of the discarded weight mass (0.0 when nothing was
        dropped).
    """

    lambdas: np.ndarray
    modes_p: np.ndarray
    modes_q: np.ndarray
    rank: int
    schmidt_number: float
    entropy: float
    reconstruction_error: float


def _xlog2x(w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    pos = w > 0.0
    out[pos] = w[pos] * np.log2(w[pos])
    return out


def _check_weights(lambdas, op: str) -> np.ndarray:
    w = np.asarray(lambdas, dtype=float).ravel()
    if w.size == 0:
        raise ValueError(f"{op}: empty weight vector")
    if np.any(w < 0.0):
        raise ValueError(f"{op}: weights must be non-negative, min is {w.min()!r}")
    total = float(w.sum())
    if total == 0.0:
        raise ValueError(f"{op}: all weights are zero")
    if abs(total - 1.0) > WEIGHT_SUM_ATOL:
        raise ValueError(f"{op}: weights must sum to 1 within 1e-10, got {total!r}")
    return w


def schmidt_number(lambdas) -> float:
    """Effective mode count K = 1 / sum(lambda_k^2) of a weight spectrum."""
    w = _check_weights(lambdas, "schmidt_number")
    return float(1.0 / np.sum(w**2))


def entanglement_entropy(lambdas) -> float:
    """Entropy S = -sum(lambda_k log2 lambda_k) in bits; 0 log 0 counts as 0."""
    w = _check_weights(lambdas, "entanglement_entropy")
    return float(-np.sum(_xlog2x(w)))


def _apply_gauge(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Make the largest-modulus component of each p-mode real and positive."""
    for k in range(u.shape[0]):
        i = int(np.argmax(np.abs(u[k])))
        a = u[k][i]
        if a == 0:
            continue
        phase = a / abs(a)
        u[k] = u[k] / phase
        v[k] = v[k] * phase
    return u, v


def schmidt_decompose(
    A: AmplitudeMatrix, opts: DecompositionOptions = DecompositionOptions()
) -> SchmidtResult:
    """Factor a normalized amplitude matrix into Schmidt modes and weights.

    Raises
    ------
    ValueError
        If A is not flagged normalized.
    """
    if not A.normalized:
        raise ValueError("schmidt_decompose requires a normalized AmplitudeMatrix")
    psi = A.entries

    if opts.method == "svd":
        U, s, Vh = svd(psi)
        lam_raw = s**2
        u = U.T.copy()
        v = Vh.copy()
    else:
        # Gram route: diagonalize M = psi psi^+, then project the q-modes
        # out of psi with a regularized inverse square root of the spectrum.
        eig = hermitian_eig(psi @ psi.conj().T)
        lam_raw = np.clip(eig.eigenvalues, 0.0, None)
        u = eig.eigenvectors.T.copy()
        inv_sqrt = 1.0 / np.sqrt(lam_raw + opts.regularization_epsilon)
        v = (inv_sqrt[:, None] * u.conj()) @ psi

    total = float(lam_raw.sum())
    lam_raw = lam_raw / total

    keep = lam_raw >= opts.truncation_threshold * lam_raw[0]
    rank = int(np.count_nonzero(keep))
    lam_kept = lam_raw[:rank]
    u = u[:rank]
    v = v[:rank]

    if opts.method == "gram-eig":
        # The regularizer shrinks projected q-mode norms by
        # sqrt(lam / (lam + eps)); restore unit norm on the kept modes.
        norms = np.linalg.norm(v, axis=1)
        norms[norms == 0.0] = 1.0
        v = v / norms[:, None]

    if opts.gauge == "largest-real-positive":
        u, v = _apply_gauge(u, v)

    discarded = max(float(lam_raw[rank:].sum()), 0.0)
    lam = lam_kept / float(lam_kept.sum())
    return SchmidtResult(
        lambdas=lam,
        modes_p=u,
        modes_q=v,
        rank=rank,
        schmidt_number=schmidt_number(lam),
        entropy=entanglement_entropy(lam),
        reconstruction_error=float(np.sqrt(discarded)),
    )


def truncate_rank(result: SchmidtResult, r: int) -> SchmidtResult:
    """Keep only the r dominant modes, renormalizing the weights.

    The reconstruction error grows by the newly discarded weight mass,
    measured in the original (untruncated) normalization.
    """
    if not 1 <= r <= result.rank:
        raise ValueError(f"rank must be in [1, {result.rank}], got {r}")
    captured_before = 1.0 - result.reconstruction_error**2
    lam_raw = result.lambdas * captured_before
    lam = lam_raw[:r] / float(lam_raw[:r].sum())
    discarded = 1.0 - float(lam_raw[:r].sum())
    return SchmidtResult(
        lambdas=lam,
        modes_p=result.modes_p[:r],
        modes_q=result.modes_q[:r],
        rank=r,
        schmidt_number=schmidt_number(lam),
        entropy=entanglement_entropy(lam),
        reconstruction_error=float(np.sqrt(max(discarded, 0.0))),
    )


def reconstruct(result: SchmidtResult, grid: Grid) -> AmplitudeMatrix:
    """Assemble sum_k sqrt(lambda_k) u_k v_k^T from a decomposition.

    Weights are rescaled to their share of the original unit norm, so a
    truncated result reproduces the dominant part of the amplitude and the
    remaining Frobenius mismatch equals ``result.reconstruction_error``.
    """
    n = result.modes_p.shape[1]
    if grid.n != n:
        raise ValueError(f"grid has n={grid.n} but modes have length {n}")
    captured = 1.0 - result.reconstruction_error**2
    lam_raw = result.lambdas * captured
    entries = (result.modes_p.T * np.sqrt(lam_raw)) @ result.modes_q
    return AmplitudeMatrix(
        grid=grid, entries=entries, normalized=result.reconstruction_error == 0.0
    )


def mode_overlap(a: np.ndarray, b: np.ndarray) -> complex:
    """Inner product <a|b> with the first argument conjugated.

    Raises
    ------
    ValueError
        On shape mismatch or an identically zero vector.
    """
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        raise ValueError(f"mode length mismatch: {a.shape} vs {b.shape}")
    if np.linalg.norm(a) == 0.0 or np.linalg.norm(b) == 0.0:
        raise ValueError("mode_overlap is undefined for an all-zero vector")
    return complex(np.vdot(a, b))
