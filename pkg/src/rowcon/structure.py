"""Structure of the minimal isometric dilation, computed from the tuple.

The Cuntz subspace V_c is the eigenvalue-1 eigenspace of Phi^inf(I);
the span tilde-V of all minimal coinvariant subspaces inside V_c
determines the Cuntz part of the dilation, whose compressed algebra is
a finite dimensional C*-algebra with Wedderburn blocks M_{d_g} x C^{m_g}.
The structure report assembles pure rank, block data, and the total
wandering multiplicity alpha = (n-1) sum d_g m_g + pure_rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _linalg as la
from .core import (
    DEFAULT_CONFIG,
    RowContraction,
    ToleranceConfig,
    fixed_point_space,
    phi_infinity,
    pure_rank,
    require_contractive,
    validate,
)
from .equivalence import unitary_between_irreducible
from .errors import Inconsistent, IncompleteFamily, NotCoinvariant, SearchFailed

__all__ = [
    "Subspace",
    "CuntzBlock",
    "StructureReport",
    "Irreducibility",
    "compress",
    "cuntz_subspace",
    "minimal_costar_invariant",
    "tilde_v",
    "wedderburn_blocks",
    "is_pure",
    "is_irreducible",
    "structure_report",
]

COINVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^ambient_dim given by orthonormal basis columns."""

    ambient_dim: int
    basis: np.ndarray = field()

    def __post_init__(self) -> None:
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ValueError(f"basis shape {b.shape} does not match ambient")
        gram = b.conj().T @ b
        if b.shape[1] and np.linalg.norm(gram - np.eye(b.shape[1])) > 1e-10:
            raise ValueError("basis columns are not orthonormal within 1e-10")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, np.zeros((ambient_dim, 0)))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, np.eye(ambient_dim))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def contains_vector(self, v: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=complex).reshape(-1)
        resid = v - self.basis @ (self.basis.conj().T @ v)
        return bool(np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(v)))


@dataclass(frozen=True)
class CuntzBlock:
    """One Wedderburn block: a representative minimal coinvariant
    subspace, its compressed Cuntz tuple, and the unitaries carrying the
    representative onto each equivalent copy."""

    block_basis: Subspace
    d_g: int
    m_g: int
    rep_tuple: RowContraction
    copies: tuple[Subspace, ...]
    copy_unitaries: tuple[np.ndarray, ...]


class Irreducibility(str, Enum):
    PURE_RANK_ONE = "PureRankOne"
    CUNTZ_IRREDUCIBLE = "CuntzIrreducible"
    REDUCIBLE = "Reducible"


@dataclass(frozen=True)
class StructureReport:
    pure_rank: int
    dim_vc: int
    dim_tilde_v: int
    blocks: tuple[CuntzBlock, ...]
    alpha: int
    is_pure: bool
    is_cuntz: bool
    irreducibility: Irreducibility
    basis_tilde_v: np.ndarray

    def block_summary(self) -> list[tuple[int, int]]:
        return sorted((b.d_g, b.m_g) for b in self.blocks)

    def to_json_dict(self) -> dict:
        return {
            "pure_rank": self.pure_rank,
            "alpha": self.alpha,
            "is_pure": self.is_pure,
            "is_cuntz": self.is_cuntz,
            "irreducibility": self.irreducibility.value,
            "blocks": [{"d": b.d_g, "m": b.m_g} for b in self.blocks],
            "dim_Vc": self.dim_vc,
            "dim_tildeV": self.dim_tilde_v,
            "basis_tildeV": [
                [[float(z.real), float(z.imag)] for z in row]
                for row in self.basis_tilde_v
            ],
        }


def compress(t: RowContraction, sub: Subspace) -> RowContraction:
    """Compression Q* A_i Q of the tuple to a subspace."""
    q = sub.basis
    return RowContraction([q.conj().T @ a @ q for a in t.matrices])


def _coinvariance_residual(t: RowContraction, basis: np.ndarray) -> float:
    if basis.shape[1] == 0:
        return 0.0
    p = basis @ basis.conj().T
    comp = np.eye(t.d) - p
    return max(
        np.linalg.norm(comp @ a.conj().T @ basis, 2) for a in t.matrices
    )


def cuntz_subspace(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> Subspace:
    """V_c = eigenspace of Phi^inf(I) at eigenvalue 1 (within rank_rtol).

    The result is invariant under every A_i*, and the compression of the
    tuple to it is a Cuntz tuple; both are asserted.
    """
    limit = phi_infinity(t, cfg)
    vals, vecs = np.linalg.eigh(limit)
    keep = vals >= 1.0 - cfg.rank_rtol
    sub = Subspace(t.d, vecs[:, keep])
    if _coinvariance_residual(t, sub.basis) > COINVARIANCE_TOL:
        raise Inconsistent("Cuntz subspace is not coinvariant within 1e-8")
    if sub.dim:
        comp = compress(t, sub)
        defect = np.linalg.norm(comp.defect_matrix(), 2)
        if defect > COINVARIANCE_TOL:
            raise Inconsistent(
                f"compression to V_c has defect {defect:.3e}, expected Cuntz"
            )
    return sub


def _minimal_invariant_local(
    ops: list[np.ndarray],
    rtol: float,
    rng: np.random.Generator,
    max_restarts: int = 20,
) -> np.ndarray:
    """Minimal joint invariant subspace of the given operators, in local
    coordinates, with a Burnside certificate of minimality.

    A random element's eigenvectors seed invariant-subspace closures;
    the smallest closure either certifies minimal (its restricted
    algebra is full) or the search recurses inside it.
    """
    k = ops[0].shape[0]
    embed = np.eye(k, dtype=complex)
    restarts = 0
    while True:
        m = embed.shape[1]
        cur = [embed.conj().T @ op @ embed for op in ops]
        if m == 1:
            return embed
        coeffs = la.random_complex(rng, (len(ops),))
        r = sum(c * op for c, op in zip(coeffs, cur))
        _, vecs = np.linalg.eig(r)
        best = None
        for idx in range(m):
            closure = la.word_closure(cur, vecs[:, idx : idx + 1], rtol)
            if best is None or closure.shape[1] < best.shape[1]:
                best = closure
            if best.shape[1] == 1:
                break
        if best is not None and best.shape[1] < m:
            embed = embed @ best
            continue
        if la.algebra_span_dim(cur, rtol) == m * m:
            return embed
        restarts += 1
        if restarts >= max_restarts:
            raise SearchFailed(
                f"no minimal invariant subspace certified after "
                f"{max_restarts} restarts (stuck at dimension {m} of {k})"
            )


def minimal_costar_invariant(
    t: RowContraction,
    within: Subspace,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> Subspace:
    """A minimal subspace of ``within`` invariant under every A_i*.

    ``within`` must itself be coinvariant.  Minimality is certified by
    Burnside: the algebra generated by the restricted adjoints together
    with the identity has dimension (dim result)^2.
    """
    if within.dim == 0:
        raise NotCoinvariant("cannot search inside the zero subspace")
    if _coinvariance_residual(t, within.basis) > COINVARIANCE_TOL:
        raise NotCoinvariant("search subspace is not invariant under the A_i*")
    q = within.basis
    ops = [q.conj().T @ a.conj().T @ q for a in t.matrices]
    local = _minimal_invariant_local(ops, cfg.rank_rtol, cfg.rng(2001, within.dim))
    return Subspace(t.d, q @ local)


def _group_family(
    t: RowContraction,
    family: list[Subspace],
    cfg: ToleranceConfig,
) -> list[CuntzBlock]:
    """Group minimal coinvariant subspaces by unitary equivalence of
    their compressed tuples."""
    groups: list[dict] = []
    for sub in family:
        comp = compress(t, sub)
        placed = False
        for g in groups:
            if comp.d != g["rep"].d:
                continue
            u = unitary_between_irreducible(
                g["rep"], comp, cfg, on_similar_only="raise"
            )
            if u is not None:
                g["copies"].append(sub)
                g["unitaries"].append(u)
                placed = True
                break
        if not placed:
            groups.append(
                {
                    "rep": comp,
                    "basis": sub,
                    "copies": [sub],
                    "unitaries": [np.eye(comp.d, dtype=complex)],
                }
            )
    return [
        CuntzBlock(
            block_basis=g["basis"],
            d_g=g["rep"].d,
            m_g=len(g["copies"]),
            rep_tuple=g["rep"],
            copies=tuple(g["copies"]),
            copy_unitaries=tuple(g["unitaries"]),
        )
        for g in groups
    ]


def tilde_v(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> tuple[Subspace, list[Subspace]]:
    """Span of all minimal coinvariant subspaces carrying the Cuntz part,
    together with a maximal pairwise orthogonal family of them.

    Members are extracted greedily from the remainder of V_c after
    removing the forward-algebra orbit of the family found so far.  The
    family is certified complete post hoc: the fixed-point space of the
    compression to tilde-V must have dimension sum m_g^2.
    """
    vc = cuntz_subspace(t, cfg)
    if vc.dim == 0:
        return Subspace.zero(t.d), []
    tc = compress(t, vc)
    fwd = list(tc.matrices)
    adj = [a.conj().T for a in tc.matrices]
    rng = cfg.rng(2002)
    found_local: list[np.ndarray] = []
    remainder = np.eye(vc.dim, dtype=complex)
    while remainder.shape[1] > 0:
        resid = max(
            np.linalg.norm(
                (np.eye(vc.dim) - remainder @ remainder.conj().T)
                @ a @ remainder,
                2,
            )
            for a in adj
        )
        if resid > COINVARIANCE_TOL:
            raise IncompleteFamily(
                f"greedy remainder lost coinvariance (residual {resid:.3e})"
            )
        local_ops = [remainder.conj().T @ a @ remainder for a in adj]
        member = remainder @ _minimal_invariant_local(
            local_ops, cfg.rank_rtol, rng
        )
        found_local.append(member)
        orbit = la.word_closure(fwd, np.hstack(found_local), cfg.rank_rtol)
        remainder = la.orthonormal_nullspace(
            orbit.conj().T, cfg.rank_rtol, scale=1.0
        )
    family = [Subspace(t.d, vc.basis @ m) for m in found_local]
    span_local = np.hstack(found_local)
    span = Subspace(t.d, vc.basis @ la.orthonormalize(span_local, cfg.rank_rtol))
    blocks = _group_family(t, family, cfg)
    expected = sum(b.m_g**2 for b in blocks)
    fixed_dim = len(fixed_point_space(compress(t, span), cfg))
    if fixed_dim != expected:
        raise IncompleteFamily(
            f"family fails the commutant certificate: fixed space of the "
            f"tilde-V compression has dimension {fixed_dim}, expected "
            f"sum m_g^2 = {expected}"
        )
    return span, family


def wedderburn_blocks(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> list[CuntzBlock]:
    """Wedderburn block data of the compressed C*-algebra on tilde-V."""
    _, family = tilde_v(t, cfg)
    return _group_family(t, family, cfg)


def is_pure(t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """True iff the dilation has no Cuntz part (Phi^inf(I) = 0).

    Cross-checked against the algebraic criterion: the forward orbit of
    the defect range spans the whole space.
    """
    tol = np.sqrt(cfg.fix_atol)
    spectral = bool(np.linalg.norm(phi_infinity(t, cfg), 2) <= tol)
    defect_range = la.orthonormal_range(t.defect_matrix(), cfg.rank_rtol, scale=1.0)
    orbit_dim = la.word_closure(
        list(t.matrices), defect_range, cfg.rank_rtol
    ).shape[1]
    algebraic = bool(orbit_dim == t.d)
    if spectral != algebraic:
        raise Inconsistent(
            f"purity criteria disagree: ||Phi^inf(I)|| test says {spectral}, "
            f"defect-orbit rank {orbit_dim} of {t.d} says {algebraic}"
        )
    return spectral


def is_irreducible(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> Irreducibility:
    """Classify the dilation: pure rank one, irreducible Cuntz, or
    reducible.  Both the transfer-map criteria and the subspace-level
    criteria are evaluated; disagreement raises Inconsistent.
    """
    require_contractive(t, cfg)
    rank = pure_rank(t, cfg)
    cuntz = validate(t, cfg).is_cuntz
    pure = bool(np.linalg.norm(phi_infinity(t, cfg), 2) <= np.sqrt(cfg.fix_atol))
    fixed_dim = len(fixed_point_space(t, cfg))

    crit_1p = rank == 1 and pure
    crit_2p = cuntz and fixed_dim == 1

    # subspace-level cross-checks
    crit_1 = False
    if rank == 1:
        v = la.orthonormal_range(t.defect_matrix(), cfg.rank_rtol, scale=1.0)
        crit_1 = la.word_closure(list(t.matrices), v, cfg.rank_rtol).shape[1] == t.d
    if crit_1 != crit_1p:
        raise Inconsistent(
            "rank-one criteria disagree: defect-vector cyclicity "
            f"{crit_1} vs (rank 1 and pure) {crit_1p}"
        )
    crit_2 = False
    if cuntz:
        m0 = minimal_costar_invariant(t, Subspace.full(t.d), cfg)
        orbit = la.word_closure(list(t.matrices), m0.basis, cfg.rank_rtol)
        crit_2 = orbit.shape[1] == t.d
    if crit_2 != crit_2p:
        raise Inconsistent(
            "Cuntz criteria disagree: minimal-subspace cyclicity "
            f"{crit_2} vs one-dimensional fixed space {crit_2p}"
        )

    if crit_1p:
        return Irreducibility.PURE_RANK_ONE
    if crit_2p:
        return Irreducibility.CUNTZ_IRREDUCIBLE
    return Irreducibility.REDUCIBLE


def structure_report(
    t: RowContraction, cfg: ToleranceConfig = DEFAULT_CONFIG
) -> StructureReport:
    """Full classification of the dilation determined by the tuple."""
    rank = pure_rank(t, cfg)
    rep = validate(t, cfg)
    span, family = tilde_v(t, cfg)
    blocks = tuple(_group_family(t, family, cfg))
    vc = cuntz_subspace(t, cfg)
    total_block_dim = sum(b.d_g * b.m_g for b in blocks)
    if total_block_dim != span.dim:
        raise Inconsistent(
            f"block bookkeeping broke: sum d_g m_g = {total_block_dim} "
            f"but dim tilde-V = {span.dim}"
        )
    alpha = (t.n - 1) * total_block_dim + rank
    return StructureReport(
        pure_rank=rank,
        dim_vc=vc.dim,
        dim_tilde_v=span.dim,
        blocks=blocks,
        alpha=alpha,
        is_pure=is_pure(t, cfg),
        is_cuntz=rep.is_cuntz,
        irreducibility=is_irreducible(t, cfg),
        basis_tilde_v=span.basis,
    )
