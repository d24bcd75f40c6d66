"""Intertwiner solvers and equivalence decisions for matrix tuples.

The basic object is the joint intertwiner space {X : X A_i = B_i X}.
Unitary equivalence of irreducible tuples reduces to a one-dimensional
intertwiner space whose generator has scalar X*X; similarity to the
existence of a well-conditioned invertible intertwiner.  Representation
level comparisons (pure rank plus matched Cuntz blocks) delegate to the
structure module.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _linalg as la
from .core import DEFAULT_CONFIG, RowContraction, ToleranceConfig, pure_rank
from .errors import (
    AmbiguousIntertwinerSpace,
    BlockingFailure,
    DimensionMismatch,
    NotApplicable,
    Undecided,
)

__all__ = [
    "IntertwinerSpace",
    "ComparisonReport",
    "joint_intertwiners",
    "unitarily_equivalent_tuples",
    "compare_unitary",
    "similar_direct",
    "cuntz_part_similarity_check",
    "friedland_five",
]

INVERTIBILITY_COND_CAP = 1e8
UNITARY_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class IntertwinerSpace:
    """Orthonormal (Frobenius) basis of {X : X A_i = B_i X for all i}
    (mode "direct") or of the adjoint-side variant (mode "adjoint")."""

    mode: str
    shape: tuple[int, int]
    basis: tuple[np.ndarray, ...] = field()

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class ComparisonReport:
    mode: str
    verdict: bool
    witness: np.ndarray | None
    invariant_summary: dict


def joint_intertwiners(
    ta: RowContraction,
    tb: RowContraction,
    mode: str = "direct",
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> IntertwinerSpace:
    """Nullspace of the stacked Sylvester system X A_i - B_i X = 0.

    X has shape (tb.d, ta.d); column-stacked vec convention.
    """
    if ta.n != tb.n:
        raise DimensionMismatch(f"tuples have n={ta.n} and n={tb.n}")
    if mode not in ("direct", "adjoint"):
        raise ValueError(f"unknown mode {mode!r}")
    da, db = ta.d, tb.d
    blocks = []
    for a, b in zip(ta.matrices, tb.matrices):
        if mode == "adjoint":
            a = a.conj().T
            b = b.conj().T
        blocks.append(np.kron(a.T, np.eye(db)) - np.kron(np.eye(da), b))
    system = np.vstack(blocks)
    null = la.orthonormal_nullspace(system, cfg.rank_rtol, scale=1.0)
    mats = tuple(
        null[:, j].reshape(da, db).T for j in range(null.shape[1])
    )
    return IntertwinerSpace(mode=mode, shape=(db, da), basis=mats)


def _residual(x: np.ndarray, ta: RowContraction, tb: RowContraction) -> float:
    return max(
        np.linalg.norm(x @ a - b @ x, 2)
        for a, b in zip(ta.matrices, tb.matrices)
    )


def _scalar_normalized_unitary(x: np.ndarray, tol: float) -> np.ndarray | None:
    """If x*x is (a positive scalar) * I within tol, return x rescaled to
    a unitary; otherwise None."""
    d = x.shape[0]
    if x.shape[0] != x.shape[1]:
        return None
    gram = x.conj().T @ x
    c = float(np.trace(gram).real) / d
    if c <= 0:
        return None
    if np.linalg.norm(gram - c * np.eye(d), 2) > tol * c:
        return None
    return x / np.sqrt(c)


def unitary_between_irreducible(
    ta: RowContraction,
    tb: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
    on_similar_only: str = "false",
) -> np.ndarray | None:
    """Unitary U with U A_i U* = B_i for irreducible inputs, or None.

    The intertwiner space of irreducible tuples is at most a line; the
    tuples are unitarily equivalent iff its generator has scalar X*X.
    ``on_similar_only`` controls the invertible-but-not-unitary case:
    "false" reports inequivalence, "raise" raises BlockingFailure (used
    when grouping Cuntz blocks, where that case signals tolerance
    breakdown).
    """
    if ta.d != tb.d:
        return None
    space = joint_intertwiners(ta, tb, "direct", cfg)
    if space.dim == 0:
        return None
    if space.dim > 1:
        raise AmbiguousIntertwinerSpace(
            f"{space.dim}-dimensional intertwiner space for inputs "
            "certified irreducible"
        )
    x = space.basis[0]
    u = _scalar_normalized_unitary(x, 1e-6)
    if u is not None and _residual(u, ta, tb) <= UNITARY_RESIDUAL_TOL:
        return u
    if on_similar_only == "raise" and la.cond2(x) < INVERTIBILITY_COND_CAP:
        raise BlockingFailure(
            "invertible intertwiner between blocks does not scale to a "
            f"unitary: ||X*X - cI|| too large (cond={la.cond2(x):.3g})"
        )
    return None


def unitarily_equivalent_tuples(
    ta: RowContraction,
    tb: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> tuple[bool, np.ndarray | None]:
    """Decide whether U A_i U* = B_i for some unitary U.

    Intended for irreducible tuples, where the verdict is exact via the
    Schur argument.  For reducible inputs the routine searches the
    intertwiner space for a verified unitary witness and falls back to
    block matching for Cuntz tuples; it raises AmbiguousIntertwinerSpace
    when it cannot certify either verdict.
    """
    if ta.d != tb.d or ta.n != tb.n:
        return False, None
    space = joint_intertwiners(ta, tb, "direct", cfg)
    if space.dim == 0:
        return False, None
    if space.dim == 1:
        # exact either way: any unitary witness would span this line
        u = _scalar_normalized_unitary(space.basis[0], 1e-6)
        if u is not None and _residual(u, ta, tb) <= UNITARY_RESIDUAL_TOL:
            return True, u
        return False, None
    # high-dimensional space: look for a verified witness
    rng = cfg.rng(7001)
    for _ in range(50):
        coeffs = la.random_complex(rng, (space.dim,))
        x = sum(c * b for c, b in zip(coeffs, space.basis))
        u = la.polar_unitary(x)
        if _residual(u, ta, tb) <= UNITARY_RESIDUAL_TOL:
            return True, u
    verdict = _match_cuntz_block_structures(ta, tb, cfg)
    if verdict is not None:
        return verdict, None
    raise AmbiguousIntertwinerSpace(
        f"cannot certify equivalence: intertwiner space has dim {space.dim} "
        "and no verified unitary witness was found"
    )


def _match_cuntz_block_structures(ta, tb, cfg) -> bool | None:
    """Block-multiset matching, valid when both tuples are Cuntz with
    tilde-V equal to the whole space (direct sums of irreducible Cuntz
    blocks).  Returns None when that hypothesis fails."""
    from .core import validate
    from .structure import tilde_v, wedderburn_blocks

    for t in (ta, tb):
        if not validate(t, cfg).is_cuntz:
            return None
        span, _ = tilde_v(t, cfg)
        if span.dim != t.d:
            return None
    return _blocks_match(
        wedderburn_blocks(ta, cfg), wedderburn_blocks(tb, cfg), cfg
    )[0]


def _blocks_match(blocks_a, blocks_b, cfg):
    """Perfect matching between block lists with equal (d_g, m_g) and
    unitarily equivalent representatives; returns (bool, pairing)."""
    if len(blocks_a) != len(blocks_b):
        return False, []
    used = [False] * len(blocks_b)
    pairing = []
    for ia, ba in enumerate(blocks_a):
        hit = None
        for ib, bb in enumerate(blocks_b):
            if used[ib] or ba.d_g != bb.d_g or ba.m_g != bb.m_g:
                continue
            u = unitary_between_irreducible(ba.rep_tuple, bb.rep_tuple, cfg)
            if u is not None:
                hit = (ib, u)
                break
        if hit is None:
            return False, []
        used[hit[0]] = True
        pairing.append((ia, hit[0], hit[1]))
    return True, pairing


def _assemble_tilde_witness(ta, tb, blocks_a, blocks_b, pairing):
    """Partial isometry W mapping tilde-V(A) onto tilde-V(B) that
    intertwines the compressions block by block."""
    d_a, d_b = ta.d, tb.d
    w = np.zeros((d_b, d_a), dtype=complex)
    for ia, ib, u_rep in pairing:
        ba, bb = blocks_a[ia], blocks_b[ib]
        for copy_a, ua, copy_b, ub in zip(
            ba.copies, ba.copy_unitaries, bb.copies, bb.copy_unitaries
        ):
            # ua maps rep coords to copy coords; route copy_a -> rep_a
            # -> rep_b -> copy_b
            w += copy_b.basis @ (ub @ u_rep @ ua.conj().T) @ copy_a.basis.conj().T
    return w


def compare_unitary(
    ta: RowContraction,
    tb: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> ComparisonReport:
    """Unitary equivalence of the induced representations: equal pure
    ranks plus matched Cuntz block structures."""
    from .structure import wedderburn_blocks

    if ta.n != tb.n:
        raise DimensionMismatch(f"tuples have n={ta.n} and n={tb.n}")
    rank_a = pure_rank(ta, cfg)
    rank_b = pure_rank(tb, cfg)
    blocks_a = wedderburn_blocks(ta, cfg)
    blocks_b = wedderburn_blocks(tb, cfg)
    matched, pairing = _blocks_match(blocks_a, blocks_b, cfg)
    verdict = bool(rank_a == rank_b and matched)
    witness = None
    if verdict and pairing:
        witness = _assemble_tilde_witness(ta, tb, blocks_a, blocks_b, pairing)
    summary = {
        "pure_rank_a": rank_a,
        "pure_rank_b": rank_b,
        "blocks_a": sorted((b.d_g, b.m_g) for b in blocks_a),
        "blocks_b": sorted((b.d_g, b.m_g) for b in blocks_b),
        "block_pairing": [(ia, ib) for ia, ib, _ in pairing],
    }
    return ComparisonReport(
        mode="unitary", verdict=verdict, witness=witness,
        invariant_summary=summary,
    )


def similar_direct(
    ta: RowContraction,
    tb: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> tuple[bool, np.ndarray | None]:
    """Search the intertwiner space for an invertible element.

    Raises Undecided when intertwiners exist but none of condition
    number <= 1e8 is found; callers treat that as a failed comparison.
    """
    if ta.n != tb.n:
        raise DimensionMismatch(f"tuples have n={ta.n} and n={tb.n}")
    if ta.d != tb.d:
        return False, None
    space = joint_intertwiners(ta, tb, "direct", cfg)
    if space.dim == 0:
        return False, None
    if space.dim == 1:
        x = space.basis[0]
        if la.cond2(x) <= INVERTIBILITY_COND_CAP:
            return True, x
        raise Undecided(
            f"single intertwiner has condition number {la.cond2(x):.3g}"
        )
    rng = cfg.rng(7002)
    best: np.ndarray | None = None
    best_cond = np.inf
    for _ in range(50):
        coeffs = la.random_complex(rng, (space.dim,))
        x = sum(c * b for c, b in zip(coeffs, space.basis))
        c = la.cond2(x)
        if c < best_cond:
            best, best_cond = x, c
    if best is not None and best_cond <= INVERTIBILITY_COND_CAP:
        return True, best
    raise Undecided(
        f"no invertible intertwiner found in a {space.dim}-dimensional "
        f"space (best condition number {best_cond:.3g})"
    )


def cuntz_part_similarity_check(
    ta: RowContraction,
    tb: RowContraction,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> bool:
    """Necessary condition for similarity: the block structures of the
    two Cuntz parts match unitarily."""
    from .structure import wedderburn_blocks

    if ta.n != tb.n:
        raise DimensionMismatch(f"tuples have n={ta.n} and n={tb.n}")
    return _blocks_match(
        wedderburn_blocks(ta, cfg), wedderburn_blocks(tb, cfg), cfg
    )[0]


def friedland_five(
    ta: RowContraction, tb: RowContraction, tol: float = 1e-8
) -> bool:
    """Five-trace similarity test for irreducible pairs of 2x2 matrices.

    Applicable only when n = d = 2 and neither pair is simultaneously
    triangularizable (certified by the generated algebra being all of
    M_2); raises NotApplicable otherwise.
    """
    if ta.n != 2 or tb.n != 2 or ta.d != 2 or tb.d != 2:
        raise NotApplicable("the five-trace test needs n = 2 and d = 2")
    for label, t in (("first", ta), ("second", tb)):
        if la.algebra_span_dim(list(t.matrices), 1e-10) != 4:
            raise NotApplicable(
                f"{label} tuple is reducible (simultaneously "
                "triangularizable); the five traces are insufficient"
            )
    a1, a2 = ta.matrices
    b1, b2 = tb.matrices
    checks = [
        np.trace(a1) - np.trace(b1),
        np.trace(a2) - np.trace(b2),
        np.trace(a1 @ a1) - np.trace(b1 @ b1),
        np.trace(a2 @ a2) - np.trace(b2 @ b2),
        np.trace(a1 @ a2) - np.trace(b1 @ b2),
    ]
    return bool(max(abs(c) for c in checks) <= tol)
