import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetalocus.siegel import (
    BlockShape,
    DegenerateActionError,
    PeriodMatrix,
    SiegelError,
    SymplecticMatrix,
    act,
    block_embed,
    block_sum,
    embed_grouping,
    generators,
    gl_embedding,
    is_block_diagonal,
    is_member,
    is_symplectic,
    permutation,
    random_word,
    sample_generic,
    standard_form,
    translation,
)

seeds = st.integers(0, 2**64 - 1)


def test_member_examples():
    assert is_member(np.array([[1j]]))
    assert not is_member(np.array([[1.0 + 0j]]))
    assert not is_member(np.array([[1j, 0.5], [0.4, 1j]]))
    assert is_member(np.diag([2j, 1j, 0.5j]))


def test_rejections_name_invariant():
    with pytest.raises(SiegelError, match="symmetry"):
        PeriodMatrix([[1j, 0.5], [0.4, 1j]])
    with pytest.raises(SiegelError, match="positive-definite"):
        PeriodMatrix([[1j, 0], [0, -1j]])
    with pytest.raises(SiegelError, match="square"):
        PeriodMatrix(np.ones((2, 3)) * 1j)


def test_small_asymmetry_is_symmetrized():
    p = PeriodMatrix([[1j, 0.1 + 1e-12], [0.1, 1j]])
    assert np.array_equal(p.matrix, p.matrix.T)
    with pytest.raises(ValueError):
        p.matrix[0, 0] = 0


def test_sample_generic_frozen_values():
    m = sample_generic(2, 1).matrix
    assert m[0, 0] == pytest.approx(-0.15358165825457348 + 1.0137212466933168j, abs=1e-15)
    assert m[0, 1] == pytest.approx(0.01881488576744128 - 0.03458017140724291j, abs=1e-15)
    assert m[1, 1] == pytest.approx(0.2967187879268611 + 1.0901983957389125j, abs=1e-15)
    assert sample_generic(2, 2).matrix[0, 0] == pytest.approx(0.53641937 + 1.02193786j, abs=1e-8)
    assert sample_generic(2, 1) == sample_generic(2, 1)


@given(st.integers(1, 4), seeds)
def test_sample_generic_in_siegel_space(g, seed):
    omega = sample_generic(g, seed)
    assert omega.genus == g
    assert omega.min_imag_eigenvalue() >= 1.0 - 1e-12


def test_block_helpers():
    parts = [sample_generic(2, 3), sample_generic(1, 4)]
    omega = block_sum(parts)
    assert is_block_diagonal(omega, [2, 1])
    assert is_block_diagonal(omega, BlockShape((2, 1)))
    assert not is_block_diagonal(omega, [1, 2])
    moved = embed_grouping(parts, [(0, 2), (1,)])
    assert is_block_diagonal(moved, [(0, 2), (1,)])
    assert moved.matrix[1, 1] == parts[1].matrix[0, 0]
    with pytest.raises(SiegelError):
        BlockShape((2, 0))


def test_standard_form_and_generators_symplectic():
    j = standard_form(3)
    assert is_symplectic(j)
    for g in (1, 2, 3):
        gens = generators(g)
        assert all(is_symplectic(m.matrix) for m in gens)
        inv = {m.inverse() for m in gens}
        assert inv <= set(gens)
    with pytest.raises(SiegelError):
        SymplecticMatrix([[1, 1], [1, 1]])


def test_random_word_frozen():
    assert random_word(2, 6, 7).tolist() == [[0, 1, -1, 0], [1, 0, 1, -1], [1, 1, 0, 0], [0, 1, 0, 0]]
    assert random_word(3, 0, 1) == SymplecticMatrix.identity(3)


def test_act_examples():
    omega = PeriodMatrix([[2j]])
    j = SymplecticMatrix(standard_form(1))
    # J . Omega = -Omega^{-1}
    assert act(j, omega).matrix[0, 0] == pytest.approx(0.5j)
    assert act(translation([[1]]), omega).matrix[0, 0] == pytest.approx(1 + 2j)
    with pytest.raises(SiegelError):
        act(SymplecticMatrix.identity(2), omega)


def test_degenerate_action():
    # J sends Omega to -Omega^{-1}; this Omega is within 1e-14 of a singular matrix
    eps = 1e-14
    omega = PeriodMatrix([[1 + eps * 1j, 1], [1, 1 + eps * 1j]], tol=1e-16)
    with pytest.raises(DegenerateActionError):
        act(SymplecticMatrix(standard_form(2)), omega)


def test_level2_and_permutation():
    assert translation([[2, 0], [0, 2]]).is_level2()
    assert not translation([[1, 0], [0, 0]]).is_level2()
    p = permutation([1, 0])
    omega = sample_generic(2, 9)
    swapped = act(p, omega).matrix
    assert swapped[0, 0] == pytest.approx(omega.matrix[1, 1])
    with pytest.raises(SiegelError):
        gl_embedding([[2, 0], [0, 1]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), seeds, seeds, st.integers(0, 8))
def test_action_properties(g, s1, s2, length):
    omega = sample_generic(g, s1)
    m = random_word(g, length, s2)
    image = act(m, omega)
    # closure, inverse and identity
    assert is_member(image.matrix)
    back = act(m.inverse(), image).matrix
    assert np.allclose(back, omega.matrix, atol=1e-7 * max(1.0, float(np.max(np.abs(image.matrix)))))
    assert np.array_equal(act(SymplecticMatrix.identity(g), omega).matrix, omega.matrix)


@settings(max_examples=30, deadline=None)
@given(seeds, seeds, seeds)
def test_action_is_a_group_action(s1, s2, s3):
    omega = sample_generic(2, s1)
    m1, m2 = random_word(2, 3, s2), random_word(2, 3, s3)
    lhs = act(m1 @ m2, omega).matrix
    rhs = act(m1, act(m2, omega)).matrix
    assert np.allclose(lhs, rhs, atol=1e-8)


def test_block_embed_preserves_block_shape():
    parts = [sample_generic(2, 1), sample_generic(1, 2)]
    m = block_embed([random_word(2, 4, 5), random_word(1, 4, 6)])
    assert is_block_diagonal(act(m, block_sum(parts)), [2, 1], tol=1e-12)


def test_json_roundtrip():
    omega = sample_generic(3, 11)
    assert PeriodMatrix.from_json(omega.to_json()) == omega
    with pytest.raises(SiegelError, match="im"):
        PeriodMatrix.from_json({"genus": 2, "re": [[0, 0], [0, 0]]})
