"""Contractive matrix tuples and their completely positive transfer map.

A row contraction is an n-tuple A = (A_1, ..., A_n) of complex d x d
matrices with sum A_i A_i* <= I.  This module defines the tuple type,
the transfer map Phi(X) = sum A_i X A_i*, its matrix realization, its
iterated limit Phi^inf(I), fixed-point spaces, and the generators used
throughout the test suite (atomic tuples, rank-one states, seeded random
contractions).

Convention: vec is column-stacking, so the transfer matrix is
T_Phi = sum conj(A_i) kron A_i and unvec(T_Phi vec(X)) = Phi(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .errors import (
    BadWord,
    DimensionMismatch,
    NoConvergence,
    NotContractive,
    NotUnit,
    NotUnitary,
)

__all__ = [
    "ToleranceConfig",
    "DEFAULT_CONFIG",
    "RowContraction",
    "TransferOperator",
    "ValidationReport",
    "validate",
    "phi_apply",
    "transfer_matrix",
    "phi_infinity",
    "fixed_point_space",
    "pure_rank",
    "gauge_transform",
    "make_atomic",
    "make_cuntz_state",
    "random_contraction",
    "reference_pair",
    "require_contractive",
    "vec",
    "unvec",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical knobs threaded through every rank/limit decision.

    rank_rtol      relative singular-value cutoff for all rank decisions
    fix_atol       residual cutoff for fixed-point iterations
    max_doublings  cap on squaring steps when computing Phi^inf(I)
    seed           seed for every randomized search
    """

    rank_rtol: float = 1e-8
    fix_atol: float = 1e-10
    max_doublings: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rank_rtol <= 0 or self.fix_atol <= 0 or self.max_doublings <= 0:
            raise ValueError("tolerances must be strictly positive")

    def rng(self, *salt: int) -> np.random.Generator:
        """Deterministic generator derived from the seed and a salt."""
        return np.random.default_rng([self.seed, *salt])


DEFAULT_CONFIG = ToleranceConfig()


def _as_matrix_tuple(matrices) -> tuple[np.ndarray, ...]:
    out = []
    for m in matrices:
        a = np.array(m, dtype=complex)
        a.setflags(write=False)
        out.append(a)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class RowContraction:
    """An ordered n-tuple of complex d x d matrices."""

    matrices: tuple[np.ndarray, ...] = field()

    def __init__(self, matrices) -> None:
        mats = _as_matrix_tuple(matrices)
        if not mats:
            raise DimensionMismatch("a tuple needs at least one matrix")
        d = mats[0].shape[0]
        for m in mats:
            if m.ndim != 2 or m.shape != (d, d):
                raise DimensionMismatch(
                    f"all matrices must be {d}x{d}, got shape {m.shape}"
                )
        object.__setattr__(self, "matrices", mats)

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def d(self) -> int:
        return self.matrices[0].shape[0]

    def row_gram(self) -> np.ndarray:
        """sum A_i A_i* (the value Phi(I))."""
        return sum(a @ a.conj().T for a in self.matrices)

    def defect_matrix(self) -> np.ndarray:
        """I - sum A_i A_i*."""
        return np.eye(self.d) - self.row_gram()

    def word(self, letters) -> np.ndarray:
        """Product A_w = A_{i1} ... A_{ik} for a word over 1..n."""
        out = np.eye(self.d, dtype=complex)
        for i in letters:
            if not 1 <= i <= self.n:
                raise BadWord(f"letter {i} outside 1..{self.n}")
            out = out @ self.matrices[i - 1]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RowContraction):
            return NotImplemented
        return (
            self.n == other.n
            and self.d == other.d
            and all(np.array_equal(a, b) for a, b in zip(self.matrices, other.matrices))
        )


@dataclass(frozen=True)
class TransferOperator:
    """Matrix realization of Phi on column-stacked d x d matrices."""

    dim: int
    matrix: np.ndarray
    vec_convention: str = "column-stacking"


@dataclass(frozen=True)
class ValidationReport:
    is_contractive: bool
    is_cuntz: bool
    defect_eigenvalues: tuple[float, ...]


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(x, dtype=complex).T.reshape(-1)


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    """Inverse of vec for d x d matrices."""
    return np.asarray(v, dtype=complex).reshape(d, d).T


def validate(t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> ValidationReport:
    """Check contractivity, detect the Cuntz case, report defect spectrum.

    Raises NotContractive when lambda_max(sum A_i A_i*) > 1 + tol.
    """
    defect = t.defect_matrix()
    eigs = np.linalg.eigvalsh(0.5 * (defect + defect.conj().T))
    lam_max = 1.0 - eigs.min()
    if lam_max > 1.0 + cfg.rank_rtol:
        raise NotContractive(
            f"largest eigenvalue of sum A_i A_i* is {lam_max:.6g} > 1"
        )
    is_cuntz = bool(np.linalg.norm(defect, 2) <= cfg.rank_rtol)
    return ValidationReport(
        is_contractive=True,
        is_cuntz=is_cuntz,
        defect_eigenvalues=tuple(sorted((float(e) for e in eigs), reverse=True)),
    )


def require_contractive(t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> None:
    validate(t, cfg)


def phi_apply(t: RowContraction, x: np.ndarray) -> np.ndarray:
    """Phi(X) = sum A_i X A_i*."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (t.d, t.d):
        raise DimensionMismatch(f"X must be {t.d}x{t.d}, got {x.shape}")
    out = np.zeros((t.d, t.d), dtype=complex)
    for a in t.matrices:
        out += a @ x @ a.conj().T
    return out


def transfer_matrix(t: RowContraction) -> TransferOperator:
    """T_Phi = sum conj(A_i) kron A_i acting on column-stacked matrices."""
    m = sum(np.kron(a.conj(), a) for a in t.matrices)
    return TransferOperator(dim=t.d * t.d, matrix=m)


def phi_infinity(t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Limit of Phi^k(I) by repeated squaring of the transfer matrix.

    Raises NoConvergence when the squaring cap is reached while the
    fixed-point residual still exceeds 100 * fix_atol.
    """
    require_contractive(t, cfg)
    d = t.d
    power = transfer_matrix(t).matrix
    x = unvec(power @ vec(np.eye(d)), d)
    residual = np.linalg.norm(np.eye(d) - x)
    if residual < cfg.fix_atol:
        limit = np.eye(d, dtype=complex)
        residual = 0.0
    else:
        limit = x
        for _ in range(cfg.max_doublings):
            residual = np.linalg.norm(limit - phi_apply(t, limit))
            if residual < cfg.fix_atol:
                break
            power = power @ power
            limit = unvec(power @ vec(np.eye(d)), d)
        else:
            residual = np.linalg.norm(limit - phi_apply(t, limit))
            if residual > 100.0 * cfg.fix_atol:
                raise NoConvergence(
                    f"Phi^k(I) residual {residual:.3e} after "
                    f"{cfg.max_doublings} doublings"
                )
    limit = 0.5 * (limit + limit.conj().T)
    eigs = np.linalg.eigvalsh(limit)
    if eigs.min() < -100.0 * cfg.fix_atol or eigs.max() > 1.0 + 100.0 * cfg.fix_atol:
        raise NoConvergence(
            f"Phi^inf(I) spectrum [{eigs.min():.3e}, {eigs.max():.3e}] "
            "escaped [0, 1]"
        )
    return limit


def fixed_point_space(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of {X : Phi(X) = X}."""
    require_contractive(t, cfg)
    d = t.d
    m = transfer_matrix(t).matrix - np.eye(d * d)
    null = la.orthonormal_nullspace(m, cfg.rank_rtol, scale=1.0)
    return [unvec(null[:, j], d) for j in range(null.shape[1])]


def pure_rank(t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> int:
    """rank(I - sum A_i A_i*), the multiplicity of the pure part."""
    require_contractive(t, cfg)
    return la.numerical_rank(t.defect_matrix(), cfg.rank_rtol, scale=1.0)


def gauge_transform(t: RowContraction, u: np.ndarray) -> RowContraction:
    """Replace A_j by sum_i u_ij A_i for a unitary n x n matrix u.

    The transfer map is unchanged: sum_j A'_j X A'_j* = Phi(X).
    """
    u = np.asarray(u, dtype=complex)
    if u.shape != (t.n, t.n):
        raise DimensionMismatch(f"gauge matrix must be {t.n}x{t.n}")
    if np.linalg.norm(u.conj().T @ u - np.eye(t.n)) > 1e-10:
        raise NotUnitary("gauge matrix is not unitary within 1e-10")
    new = [
        sum(u[i, j] * t.matrices[i] for i in range(t.n))
        for j in range(t.n)
    ]
    return RowContraction(new)


def make_atomic(word, lam: complex = 1.0, n: int | None = None) -> RowContraction:
    """Partial-isometry tuple of the cyclic atomic representation.

    ``word`` is a sequence of letters in 1..n (string digits accepted);
    d = len(word); A_j e_k = delta(j, word[k]) e_{k+1} with the last
    basis vector wrapping to lam * e_1.
    """
    letters = [int(c) for c in word]
    if not letters:
        raise BadWord("word must be nonempty")
    if abs(abs(lam) - 1.0) > 1e-10:
        raise NotUnit(f"|lambda| = {abs(lam):.6g} != 1")
    n_eff = max(letters) if n is None else n
    if any(not 1 <= c <= n_eff for c in letters):
        raise BadWord(f"letters {letters} outside 1..{n_eff}")
    d = len(letters)
    mats = [np.zeros((d, d), dtype=complex) for _ in range(n_eff)]
    for k, letter in enumerate(letters):
        if k + 1 < d:
            mats[letter - 1][k + 1, k] = 1.0
        else:
            mats[letter - 1][0, k] += lam
    return RowContraction(mats)


def make_cuntz_state(eta) -> RowContraction:
    """d = 1 Cuntz tuple A_i = [eta_i] for a unit vector eta."""
    eta = np.asarray(eta, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(eta)
    if abs(nrm - 1.0) > 1e-10:
        raise NotUnit(f"|eta| = {nrm:.6g} != 1")
    return RowContraction([np.array([[e]]) for e in eta])


def random_contraction(
    n: int, d: int, target_norm: float = 0.9, seed: int = 0
) -> RowContraction:
    """Gaussian tuple rescaled so lambda_max(sum A_i A_i*) = target_norm**2."""
    if not 0.0 < target_norm <= 1.0:
        raise ValueError("target_norm must be in (0, 1]")
    rng = np.random.default_rng(seed)
    mats = [la.random_complex(rng, (d, d)) for _ in range(n)]
    lam = np.linalg.eigvalsh(sum(a @ a.conj().T for a in mats)).max()
    scale = target_norm / np.sqrt(lam)
    return RowContraction([scale * a for a in mats])


def reference_pair() -> RowContraction:
    """The built-in 2x2 worked-example pair used across the suite and by
    the ``gen paper-7`` CLI command."""
    a1 = np.array([[0.0, 0.5], [0.5, 0.0]])
    a2 = np.array([[0.5, 0.0], [0.0, 0.0]])
    return RowContraction([a1, a2])
