import numpy as np
import pytest

from rowcon.core import (
    RowContraction,
    fixed_point_space,
    make_atomic,
    phi_infinity,
    random_contraction,
    reference_pair,
    validate,
)
from rowcon.errors import NotCoinvariant
from rowcon.structure import (
    Irreducibility,
    Subspace,
    compress,
    cuntz_subspace,
    is_irreducible,
    is_pure,
    minimal_costar_invariant,
    structure_report,
    tilde_v,
    wedderburn_blocks,
)


def direct_sum(ta, tb):
    mats = []
    for a, b in zip(ta.matrices, tb.matrices):
        m = np.zeros((ta.d + tb.d, ta.d + tb.d), dtype=complex)
        m[: ta.d, : ta.d] = a
        m[ta.d :, ta.d :] = b
        mats.append(m)
    return RowContraction(mats)


def conjugate(t, s):
    s_inv = np.linalg.inv(s)
    return RowContraction([s @ a @ s_inv for a in t.matrices])


# ------------------------------------------------------------ cuntz_subspace

def test_cuntz_subspace_strict_contraction_is_zero(cfg):
    t = random_contraction(2, 3, 0.6, seed=2)
    assert cuntz_subspace(t, cfg).dim == 0


def test_cuntz_subspace_cuntz_tuple_is_full(pair3, cfg):
    assert cuntz_subspace(pair3, cfg).dim == 3


def test_cuntz_subspace_mixed_is_first_coordinate(b_pair, cfg):
    sub = cuntz_subspace(b_pair, cfg)
    assert sub.dim == 1
    assert abs(abs(sub.basis[0, 0]) - 1.0) < 1e-10
    # iteration oracle: the limit fixes the line C e1
    lim = phi_infinity(b_pair, cfg)
    assert np.linalg.norm(lim @ sub.basis - sub.basis) < 1e-9


def test_cuntz_subspace_coinvariant_and_cuntz(pair3, mixed3, cfg):
    for t in (pair3, mixed3):
        sub = cuntz_subspace(t, cfg)
        if sub.dim == 0:
            continue
        p = sub.projector()
        comp = np.eye(t.d) - p
        for a in t.matrices:
            assert np.linalg.norm(comp @ a.conj().T @ p, 2) <= 1e-8
        c = compress(t, sub)
        assert np.linalg.norm(c.defect_matrix(), 2) <= 1e-8


# -------------------------------------------------- minimal_costar_invariant

def test_minimal_subspace_pair3_lies_in_scalar_plane(pair3, cfg):
    # the compression to span{e1, e3} is scalar, so every line inside is
    # minimal coinvariant; the search must return one of them
    sub = minimal_costar_invariant(pair3, Subspace.full(3), cfg)
    assert sub.dim == 1
    assert abs(sub.basis[1, 0]) < 1e-8


def test_minimal_subspace_scalar_tuple(cfg):
    t = random_contraction(3, 1, 0.9, seed=4)
    sub = minimal_costar_invariant(t, Subspace.full(1), cfg)
    assert sub.dim == 1


def test_minimal_subspace_unique_line(sigma11_pair, cfg):
    sub = minimal_costar_invariant(sigma11_pair, Subspace.full(2), cfg)
    assert sub.dim == 1
    assert abs(abs(sub.basis[0, 0]) - 1.0) < 1e-10


def test_minimal_subspace_of_doubled_block(cfg):
    from rowcon.equivalence import unitary_between_irreducible

    c = make_atomic("12")
    t = direct_sum(c, c)
    sub = minimal_costar_invariant(t, Subspace.full(4), cfg)
    assert sub.dim == 2
    restricted = compress(t, sub)
    assert unitary_between_irreducible(restricted, c, cfg) is not None


def test_minimal_subspace_rejects_non_coinvariant(sigma11_pair, cfg):
    bad = Subspace(2, np.array([[0.0], [1.0]]))
    with pytest.raises(NotCoinvariant):
        minimal_costar_invariant(sigma11_pair, bad, cfg)


# ----------------------------------------------------------------- tilde_v

def test_tilde_v_pair3_is_scalar_plane(pair3, cfg):
    span, family = tilde_v(pair3, cfg)
    assert span.dim == 2
    for vec in span.basis.T:
        assert abs(vec[1]) < 1e-8
    assert [m.dim for m in family] == [1, 1]
    # family members are pairwise orthogonal and norm-preserving for A*
    m1, m2 = family
    assert abs((m1.basis.conj().T @ m2.basis)[0, 0]) < 1e-10
    for m in family:
        v = m.basis[:, 0]
        total = sum(
            np.linalg.norm(a.conj().T @ v) ** 2 for a in pair3.matrices
        )
        assert abs(total - 1.0) < 1e-10


def test_tilde_v_primitive_atomic_word_is_full(cfg):
    from rowcon._linalg import algebra_span_dim

    t = make_atomic("12")
    span, family = tilde_v(t, cfg)
    assert span.dim == 2
    assert len(family) == 1
    adj = [a.conj().T for a in t.matrices]
    assert algebra_span_dim(adj, cfg.rank_rtol) == 4


def test_tilde_v_strict_contraction_empty(cfg):
    t = random_contraction(2, 2, 0.7, seed=6)
    span, family = tilde_v(t, cfg)
    assert span.dim == 0 and family == []


def test_tilde_v_mixed3(mixed3, cfg):
    span, family = tilde_v(mixed3, cfg)
    assert span.dim == 1
    assert abs(abs(span.basis[0, 0]) - 1.0) < 1e-8


# --------------------------------------------------------- wedderburn_blocks

def test_blocks_pair3_single_block_multiplicity_two(pair3, cfg):
    blocks = wedderburn_blocks(pair3, cfg)
    assert [(b.d_g, b.m_g) for b in blocks] == [(1, 2)]
    b = blocks[0]
    # the scalar representative tuple is (1/sqrt2, 1/sqrt2)
    vals = [m[0, 0] for m in b.rep_tuple.matrices]
    assert np.allclose(np.abs(vals), 1 / np.sqrt(2), atol=1e-10)


def test_blocks_irreducible_cuntz(cfg):
    t = make_atomic("12")
    blocks = wedderburn_blocks(t, cfg)
    assert [(b.d_g, b.m_g) for b in blocks] == [(2, 1)]


def test_blocks_doubled_cuntz(cfg):
    c = make_atomic("12")
    t = direct_sum(c, c)
    blocks = wedderburn_blocks(t, cfg)
    assert [(b.d_g, b.m_g) for b in blocks] == [(2, 2)]
    assert len(fixed_point_space(t, cfg)) == 4
    b = blocks[0]
    # copy unitaries really intertwine the representative with each copy
    for sub, u in zip(b.copies, b.copy_unitaries):
        comp = compress(t, sub)
        for rep_m, copy_m in zip(b.rep_tuple.matrices, comp.matrices):
            assert np.linalg.norm(u @ rep_m @ u.conj().T - copy_m) < 1e-8


def test_blocks_inequivalent_sum(cfg):
    t = direct_sum(make_atomic("1", n=2), make_atomic("2", n=2))
    blocks = wedderburn_blocks(t, cfg)
    assert sorted((b.d_g, b.m_g) for b in blocks) == [(1, 1), (1, 1)]


# ------------------------------------------------------------------ is_pure

def test_is_pure_examples(pair3, b_pair, cfg):
    assert is_pure(reference_pair(), cfg)
    assert not is_pure(pair3, cfg)
    assert not is_pure(b_pair, cfg)


# ------------------------------------------------------------ is_irreducible

def test_irreducible_sigma11(sigma11_pair, cfg):
    assert is_irreducible(sigma11_pair, cfg) is Irreducibility.CUNTZ_IRREDUCIBLE


def test_irreducible_triple3(triple3, cfg):
    assert is_irreducible(triple3, cfg) is Irreducibility.CUNTZ_IRREDUCIBLE


def test_irreducible_pure_rank_one(cfg):
    mats = [np.zeros((3, 3)) for _ in range(3)]
    mats[0][0, 0] = 0.5
    mats[1][1, 0] = 1.0
    mats[2][2, 0] = 1.0
    t = RowContraction(mats)
    assert is_irreducible(t, cfg) is Irreducibility.PURE_RANK_ONE


def test_irreducible_reducible_cases(pair3, cfg):
    zero = RowContraction([np.zeros((3, 3)), np.zeros((3, 3))])
    assert is_irreducible(zero, cfg) is Irreducibility.REDUCIBLE
    assert is_irreducible(pair3, cfg) is Irreducibility.REDUCIBLE
    # a non-primitive word gives a reducible atomic representation
    assert is_irreducible(make_atomic("11"), cfg) is Irreducibility.REDUCIBLE


# ---------------------------------------------------------- structure_report

def test_report_reference_pair(cfg):
    rep = structure_report(reference_pair(), cfg)
    assert rep.pure_rank == 2
    assert rep.dim_tilde_v == 0
    assert rep.alpha == 2
    assert rep.is_pure and not rep.is_cuntz
    assert rep.blocks == ()


def test_report_atomic_letter(cfg):
    rep = structure_report(make_atomic("1", n=2), cfg)
    assert rep.pure_rank == 0
    assert rep.block_summary() == [(1, 1)]
    assert rep.alpha == 1
    assert rep.is_cuntz


def test_report_zero_tuple(cfg):
    rep = structure_report(RowContraction([np.zeros((2, 2))] * 2), cfg)
    assert rep.pure_rank == 2
    assert rep.blocks == ()
    assert rep.alpha == 2


def test_report_mixed3(mixed3, cfg):
    rep = structure_report(mixed3, cfg)
    assert rep.pure_rank == 2
    assert rep.dim_vc == 1
    assert rep.block_summary() == [(1, 1)]
    assert rep.alpha == 3
    assert rep.irreducibility is Irreducibility.REDUCIBLE


def test_report_alpha_bookkeeping(pair3, cfg):
    rep = structure_report(pair3, cfg)
    total = sum(d * m for d, m in rep.block_summary())
    assert total == rep.dim_tilde_v == 2
    assert rep.alpha == (pair3.n - 1) * total + rep.pure_rank
    assert len(fixed_point_space(compress(pair3, Subspace(3, rep.basis_tilde_v)), cfg)) == sum(
        m * m for _, m in rep.block_summary()
    )


def test_report_unitary_covariance(pair3, cfg):
    rng = np.random.default_rng(99)
    base = structure_report(pair3, cfg)
    for _ in range(5):
        z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        u, _ = np.linalg.qr(z)
        t2 = RowContraction([u @ a @ u.conj().T for a in pair3.matrices])
        rep = structure_report(t2, cfg)
        assert rep.pure_rank == base.pure_rank
        assert rep.block_summary() == base.block_summary()
        assert rep.alpha == base.alpha


def test_report_json_roundtrip(pair3, cfg):
    import json

    rep = structure_report(pair3, cfg)
    data = json.loads(json.dumps(rep.to_json_dict()))
    assert data["pure_rank"] == 0
    assert data["alpha"] == 2
    assert data["blocks"] == [{"d": 1, "m": 2}]
    assert data["irreducibility"] == "Reducible"
    assert len(data["basis_tildeV"]) == 3
