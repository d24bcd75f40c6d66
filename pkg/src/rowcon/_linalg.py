"""Shared dense linear-algebra helpers.

Everything here operates on plain complex numpy arrays.  Rank decisions
are always made against an explicit relative cutoff so that callers can
pin them via ToleranceConfig.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "numerical_rank",
    "orthonormal_range",
    "orthonormal_nullspace",
    "orthonormalize",
    "word_closure",
    "algebra_span_dim",
    "psd_sqrt",
    "polar_unitary",
    "cond2",
    "random_complex",
]


def numerical_rank(m: np.ndarray, rtol: float, scale: float | None = None) -> int:
    """Count singular values above rtol * max(sigma_max, scale).

    ``scale`` anchors the cutoff for matrices that are numerically zero
    relative to their natural context (e.g. a defect operator compared
    against the identity).
    """
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    ref = s[0] if scale is None else max(s[0], scale)
    if ref == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * ref))


def orthonormal_range(m: np.ndarray, rtol: float, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) for the numerical range of m."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    ref = s[0] if len(s) else 0.0
    if scale is not None:
        ref = max(ref, scale)
    if ref == 0.0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    r = int(np.count_nonzero(s > rtol * ref))
    return u[:, :r]


def orthonormal_nullspace(m: np.ndarray, rtol: float, scale: float | None = None) -> np.ndarray:
    """Orthonormal basis (columns) for the numerical nullspace of m."""
    cols = m.shape[1]
    if m.size == 0:
        return np.eye(cols, dtype=complex)
    u, s, vh = np.linalg.svd(m)
    ref = s[0] if len(s) else 0.0
    if scale is not None:
        ref = max(ref, scale)
    if ref == 0.0:
        return np.eye(cols, dtype=complex)
    r = int(np.count_nonzero(s > rtol * ref))
    return vh[r:].conj().T


def orthonormalize(vectors: np.ndarray, rtol: float) -> np.ndarray:
    """Orthonormal basis for the span of the given columns."""
    return orthonormal_range(np.asarray(vectors, dtype=complex), rtol)


def word_closure(ops: list[np.ndarray], seeds: np.ndarray, rtol: float) -> np.ndarray:
    """Smallest subspace containing the seed columns and invariant under
    every operator in ops; returned as orthonormal columns.

    Grows a basis by applying each operator to the current frontier and
    keeping new directions; stabilizes after at most dim steps.
    """
    k = ops[0].shape[0] if ops else seeds.shape[0]
    basis = orthonormalize(seeds, rtol)
    if basis.shape[1] == 0:
        return basis
    frontier = basis
    while frontier.shape[1] > 0 and basis.shape[1] < k:
        images = np.hstack([op @ frontier for op in ops])
        resid = images - basis @ (basis.conj().T @ images)
        new = orthonormal_range(resid, rtol, scale=1.0)
        # one re-orthogonalization pass keeps the basis clean
        new = new - basis @ (basis.conj().T @ new)
        new = orthonormal_range(new, rtol, scale=1.0)
        if new.shape[1] == 0:
            break
        basis = np.hstack([basis, new])
        frontier = new
    return basis


def algebra_span_dim(ops: list[np.ndarray], rtol: float, max_len: int | None = None) -> int:
    """Dimension of the unital algebra generated by ops, as a linear span.

    Words are grown by left multiplication until the span stabilizes;
    the word length is capped at dim**2 (span growth is monotone).
    """
    k = ops[0].shape[0]
    cap = max_len if max_len is not None else k * k
    basis = np.eye(k, dtype=complex).reshape(-1, 1) / np.sqrt(k)
    frontier = [np.eye(k, dtype=complex)]
    length = 0
    while frontier and basis.shape[1] < k * k and length < cap:
        products = [op @ w for w in frontier for op in ops]
        vecs = np.stack([p.reshape(-1) for p in products], axis=1)
        resid = vecs - basis @ (basis.conj().T @ vecs)
        new = orthonormal_range(resid, rtol, scale=1.0)
        new = new - basis @ (basis.conj().T @ new)
        new = orthonormal_range(new, rtol, scale=1.0)
        if new.shape[1] == 0:
            break
        basis = np.hstack([basis, new])
        frontier = [c.reshape(k, k) for c in new.T]
        length += 1
    return basis.shape[1]


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix (tiny negatives clipped)."""
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def polar_unitary(x: np.ndarray) -> np.ndarray:
    """Unitary factor of the polar decomposition x = U |x|."""
    u, _, vh = np.linalg.svd(x)
    return u @ vh


def cond2(x: np.ndarray) -> float:
    """Spectral condition number; inf for singular matrices."""
    s = np.linalg.svd(x, compute_uv=False)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])


def random_complex(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Standard complex Gaussian array."""
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
