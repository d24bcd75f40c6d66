"""Explicit truncated model of the minimal isometric dilation.

The dilation lives on C^d + (words of length < N) x D, where D is the
range of the defect operator D_A = (I_nd - A*A)^(1/2) and A is the row
operator [A_1 ... A_n].  Each S_i maps the C^d part by A_i and inserts
the defect component at the empty word, and shifts word levels up by
prepending the letter i; the top level is truncated.  All assertions
are made on the interior (levels < N-1), where the construction is
exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .core import (
    DEFAULT_CONFIG,
    RowContraction,
    ToleranceConfig,
    pure_rank,
    require_contractive,
)
from .errors import DimensionMismatch, Inconsistent

__all__ = [
    "FockWord",
    "TruncatedDilation",
    "CheckReport",
    "WoldProjections",
    "defect",
    "build_dilation",
    "verify_dilation",
    "level_one_wandering_dim",
    "wold_projection",
]


@dataclass(frozen=True)
class FockWord:
    """A word over the letters 1..n indexing a Fock basis vector."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 1 for c in self.letters):
            raise DimensionMismatch("letters must be positive integers")

    def __len__(self) -> int:
        return len(self.letters)

    def prepend(self, letter: int) -> "FockWord":
        return FockWord((letter, *self.letters))

    @staticmethod
    def empty() -> "FockWord":
        return FockWord(())


def _word_index(letters: tuple[int, ...], n: int) -> int:
    """Lexicographic index of a word among all words of its length."""
    idx = 0
    for c in letters:
        idx = idx * n + (c - 1)
    return idx


@dataclass(frozen=True)
class TruncatedDilation:
    """Matrices of the dilation isometries on the truncated Fock model.

    ambient = C^d + defect_dim * (number of words of length < level);
    the interior (levels < level-1 plus C^d) is where the isometry and
    co-invariance relations hold exactly.
    """

    level: int
    n: int
    d: int
    defect_dim: int
    ambient_dim: int
    interior_dim: int
    isometries: tuple[np.ndarray, ...] = field()
    v_embed: np.ndarray = field()
    truncated: bool = True

    def interior_projector(self) -> np.ndarray:
        p = np.zeros((self.ambient_dim, self.ambient_dim))
        p[: self.interior_dim, : self.interior_dim] = np.eye(self.interior_dim)
        return p


@dataclass(frozen=True)
class CheckReport:
    isometry_residual: float
    orthogonality_residual: float
    coinvariance_residual: float
    minimality_rank: int
    interior_dim: int


@dataclass(frozen=True)
class WoldProjections:
    p_pure: np.ndarray
    p_cuntz: np.ndarray
    level0_wandering_rank: int


def defect(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, np.ndarray]:
    """Defect operator D_A = (I_nd - A*A)^(1/2) of the row operator
    A = [A_1 ... A_n], with an orthonormal basis of its range.

    The rank cutoff is applied to the eigenvalues of I - A*A before the
    square root (cutting afterwards would halve the usable precision);
    eigenvalues below the cutoff are zeroed so that the returned basis
    spans the range of the returned operator exactly.
    """
    require_contractive(t, cfg)
    row = np.hstack(t.matrices)
    gram = row.conj().T @ row
    m = np.eye(t.n * t.d) - 0.5 * (gram + gram.conj().T)
    vals, vecs = np.linalg.eigh(m)
    vals = np.clip(vals, 0.0, None)
    keep = vals > cfg.rank_rtol * max(float(vals.max(initial=0.0)), 1.0)
    vals[~keep] = 0.0
    d_a = (vecs * np.sqrt(vals)) @ vecs.conj().T
    range_basis = vecs[:, keep]
    return d_a, range_basis


def _level_sizes(n: int, delta: int, level: int) -> list[int]:
    return [delta * n**k for k in range(level)]


def build_dilation(
    t: RowContraction, level: int = 6, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> TruncatedDilation:
    """Assemble the truncated dilation isometries at the given level."""
    if level < 1:
        raise ValueError("level must be at least 1")
    n, d = t.n, t.d
    d_a, range_basis = defect(t, cfg)
    delta = range_basis.shape[1]
    sizes = _level_sizes(n, delta, level)
    offsets = [d]
    for s in sizes[:-1]:
        offsets.append(offsets[-1] + s)
    ambient = d + sum(sizes)
    interior = d + sum(sizes[:-1]) if level >= 1 else d

    # defect insertion at the empty word: coords of D_A (e_i kron h)
    inserts = []
    for i in range(n):
        block = d_a[:, i * d : (i + 1) * d]
        inserts.append(range_basis.conj().T @ block)

    mats = []
    for i in range(n):
        s = np.zeros((ambient, ambient), dtype=complex)
        s[:d, :d] = t.matrices[i]
        if delta > 0:
            s[offsets[0] : offsets[0] + delta, :d] = inserts[i]
            for k in range(level - 1):
                src = offsets[k]
                dst = offsets[k + 1]
                for w in range(n**k):
                    tgt = i * n**k + w
                    s[
                        dst + tgt * delta : dst + (tgt + 1) * delta,
                        src + w * delta : src + (w + 1) * delta,
                    ] = np.eye(delta)
        mats.append(s)

    v_embed = np.zeros((ambient, d), dtype=complex)
    v_embed[:d, :d] = np.eye(d)
    return TruncatedDilation(
        level=level,
        n=n,
        d=d,
        defect_dim=delta,
        ambient_dim=ambient,
        interior_dim=interior,
        isometries=tuple(mats),
        v_embed=v_embed,
    )


def verify_dilation(
    dil: TruncatedDilation,
    t: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> CheckReport:
    """Residuals of the defining relations on the interior, plus the
    minimality rank of span{S_w V : |w| <= level-1}."""
    ni = dil.interior_dim
    iso = 0.0
    orth = 0.0
    for i, si in enumerate(dil.isometries):
        for j, sj in enumerate(dil.isometries):
            block = (si.conj().T @ sj)[:ni, :ni]
            if i == j:
                iso = max(iso, np.linalg.norm(block - np.eye(ni), 2))
            else:
                orth = max(orth, np.linalg.norm(block, 2))
    coin = max(
        np.linalg.norm(si.conj().T @ dil.v_embed - dil.v_embed @ a.conj().T, 2)
        for si, a in zip(dil.isometries, t.matrices)
    )
    cols = [dil.v_embed]
    frontier = dil.v_embed
    for _ in range(dil.level - 1):
        frontier = np.hstack([si @ frontier for si in dil.isometries])
        cols.append(frontier)
    stacked = np.hstack(cols)[:ni, :]
    rank = la.numerical_rank(stacked, cfg.rank_rtol, scale=1.0)
    return CheckReport(
        isometry_residual=float(iso),
        orthogonality_residual=float(orth),
        coinvariance_residual=float(coin),
        minimality_rank=rank,
        interior_dim=ni,
    )


def level_one_wandering_dim(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> int:
    """dim of W = (V + sum S_i V) - V, computed in a level-2 truncation.

    Always between (n-1)d and nd.
    """
    dil = build_dilation(t, 2, cfg)
    cols = [dil.v_embed] + [s @ dil.v_embed for s in dil.isometries]
    total = la.numerical_rank(np.hstack(cols), cfg.rank_rtol, scale=1.0)
    return total - t.d


def wold_projection(
    dil: TruncatedDilation,
    t: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> WoldProjections:
    """Projections onto the truncated pure part and its interior
    complement; the level-0 wandering rank must equal pure_rank(t)."""
    ni = dil.interior_dim
    gap = np.eye(dil.ambient_dim, dtype=complex)
    for s in dil.isometries:
        gap = gap - s @ s.conj().T
    gap_int = gap[:ni, :ni]
    x_int = la.orthonormal_range(gap_int, cfg.rank_rtol, scale=1.0)
    rank0 = x_int.shape[1]
    expected = pure_rank(t, cfg)
    if rank0 != expected:
        raise Inconsistent(
            f"interior wandering rank {rank0} != pure rank {expected}"
        )
    x_full = np.zeros((dil.ambient_dim, rank0), dtype=complex)
    x_full[:ni, :] = x_int
    cols = [x_full]
    frontier = x_full
    for _ in range(dil.level - 1):
        if frontier.shape[1] == 0:
            break
        frontier = np.hstack([s @ frontier for s in dil.isometries])
        cols.append(frontier)
    pure_basis = la.orthonormalize(np.hstack(cols), cfg.rank_rtol)
    p_pure = pure_basis @ pure_basis.conj().T
    # interior vectors orthogonal to the pure span
    if pure_basis.shape[1]:
        cuntz_int = la.orthonormal_nullspace(
            pure_basis.conj().T[:, :ni], cfg.rank_rtol, scale=1.0
        )
    else:
        cuntz_int = np.eye(ni, dtype=complex)
    cuntz_full = np.zeros((dil.ambient_dim, cuntz_int.shape[1]), dtype=complex)
    cuntz_full[:ni, :] = cuntz_int
    p_cuntz = cuntz_full @ cuntz_full.conj().T
    return WoldProjections(
        p_pure=p_pure, p_cuntz=p_cuntz, level0_wandering_rank=rank0
    )
