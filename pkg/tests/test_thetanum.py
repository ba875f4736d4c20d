import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from oracles import box_theta, scalar_theta
from thetalocus.charalg import ODD, Characteristic, direct_sum, enumerate_characteristics, parity
from thetalocus.siegel import PeriodMatrix, block_sum, sample_generic
from thetalocus.thetanum import (
    INDETERMINATE,
    TruncationError,
    classify,
    eval_theta,
    eval_thetanull,
    heat_residual,
    jet_at_zero,
    periodicity_sign,
    shift_multiplier,
    shift_multiplier_check,
    shift_ratio_check,
    tail_bound,
    theta_sum_at_radius,
    vanishing_order_at_zero,
)

seeds = st.integers(0, 2**64 - 1)
TAU_I = PeriodMatrix([[1j]])


def random_z(rng, g, size=0.4):
    return rng.uniform(-size, size, g) + 1j * rng.uniform(-size, size, g)


def test_theta_at_i_closed_form():
    # theta_3(e^{-pi}) = pi^{1/4} / Gamma(3/4)
    v = eval_theta(Characteristic("0", "0"), TAU_I)
    assert abs(v.value - math.pi**0.25 / gamma(0.75)) < 1e-14
    assert v.tail_bound <= 1e-10


def test_jacobi_quartic_identity():
    tau = PeriodMatrix([[0.3 + 0.9j]])
    t00, t01, t10 = (eval_thetanull(Characteristic(a, b), tau).value for a, b in ("00", "01", "10"))
    assert abs(t00**4 - t01**4 - t10**4) < 1e-12


@pytest.mark.parametrize("tb", ["00", "01", "10", "11"])
def test_genus1_matches_scalar_oracle(tb):
    tau, z = 0.2 + 0.8j, 0.13 - 0.07j
    v = eval_theta(Characteristic(tb[0], tb[1]), PeriodMatrix([[tau]]), np.array([z]))
    ref = scalar_theta(tau, int(tb[0]) / 2, int(tb[1]) / 2, z)
    assert abs(v.value - ref) < 1e-12


@pytest.mark.parametrize("g, seed", [(2, 1), (2, 5), (3, 2)])
def test_matches_box_oracle(g, seed):
    rng = np.random.default_rng(seed)
    omega = sample_generic(g, seed)
    z = random_z(rng, g)
    n = 9 if g == 2 else 6
    for delta in enumerate_characteristics(g)[:: 3 if g == 3 else 1]:
        v = eval_theta(delta, omega, z)
        ref = box_theta(delta.top, delta.bottom, omega.matrix, z, n)
        assert abs(v.value - ref) < 1e-10


def test_fixture_point_matches_oracle(data_dir):
    from thetalocus.io import load_period_matrix, load_vector

    omega = load_period_matrix(data_dir / "omega_g3.json")
    z = load_vector(data_dir / "z_g3.json", 3)
    delta = Characteristic.parse("[110|100]")
    v = eval_theta(delta, omega, z)
    assert abs(v.value - box_theta(delta.top, delta.bottom, omega.matrix, z, 6)) < 1e-10


def test_jet_matches_oracle_derivatives():
    omega = sample_generic(2, 3)
    for delta in (Characteristic("10", "10"), Characteristic("01", "00")):
        jet = jet_at_zero(delta, omega)
        for j in range(2):
            assert abs(jet.gradient[j] - box_theta(delta.top, delta.bottom, omega.matrix, n=9, derivative=(j,))) < 1e-9
            for k in range(2):
                ref = box_theta(delta.top, delta.bottom, omega.matrix, n=9, derivative=(j, k))
                assert abs(jet.hessian[j, k] - ref) < 1e-8
        assert np.allclose(jet.hessian, jet.hessian.T)


def test_truncation_error_for_impossible_tolerance():
    with pytest.raises(TruncationError) as info:
        eval_theta(Characteristic("0", "0"), TAU_I, tol=1e-30)
    assert info.value.best_bound > 1e-30


def test_small_imaginary_part_needs_larger_radius():
    thin = PeriodMatrix([[0.05j]])
    v = eval_theta(Characteristic("0", "0"), thin, tol=1e-8)
    # modular inversion: theta(i t) = t^{-1/2} theta(i / t)
    assert abs(v.value - eval_theta(Characteristic("0", "0"), PeriodMatrix([[20j]])).value / math.sqrt(0.05)) < 1e-7
    with pytest.raises(TruncationError):
        eval_theta(Characteristic("0", "0"), PeriodMatrix([[1e-4j]]), tol=1e-10, max_radius=1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), seeds, seeds)
def test_tail_bound_is_sound(g, s1, s2):
    """Doubling the radius moves the value by at most the reported bound."""
    rng = np.random.default_rng(s2 % 2**32)
    chars = enumerate_characteristics(g)
    delta = chars[s2 % len(chars)]
    omega = sample_generic(g, s1)
    z = random_z(rng, g, 0.5)
    v = eval_theta(delta, omega, z, tol=1e-3)
    assert v.tail_bound <= 1e-3
    assert abs(theta_sum_at_radius(delta, omega, z, 2 * v.radius) - v.value) <= v.tail_bound


def test_tail_bound_against_exact_genus1_tail():
    # lattice Z with unit spacing: sum_{|m| > R} exp(-pi m^2)
    for radius in (1.5, 2.5, 3.5):
        exact = 2 * sum(math.exp(-math.pi * m * m) for m in range(math.floor(radius) + 1, 40))
        assert exact <= tail_bound(1, radius, 1.0)
    assert tail_bound(2, 3.0, 1.0) < tail_bound(2, 2.0, 1.0)
    assert tail_bound(2, 3.0, 1.0, order=2) > tail_bound(2, 3.0, 1.0)
    assert tail_bound(2, 0.5, 1.0) == math.inf


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), seeds)
def test_odd_thetanulls_vanish(g, seed):
    omega = sample_generic(g, seed)
    for delta in enumerate_characteristics(g, ODD):
        v = eval_thetanull(delta, omega)
        assert abs(v.value) < 1e-8
        assert classify(v.normalized()) == "zero"


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), seeds, st.integers(0, 63))
def test_parity_under_z_negation(g, seed, idx):
    chars = enumerate_characteristics(g)
    delta = chars[idx % len(chars)]
    omega = sample_generic(g, seed)
    z = random_z(np.random.default_rng(seed % 2**32), g)
    sign = -1 if parity(delta) == ODD else 1
    assert abs(eval_theta(delta, omega, -z).value - sign * eval_theta(delta, omega, z).value) < 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), seeds, st.integers(0, 63), st.integers(0, 2))
def test_quasi_periodicity(g, seed, idx, j):
    j %= g
    chars = enumerate_characteristics(g)
    delta = chars[idx % len(chars)]
    omega = sample_generic(g, seed)
    z = random_z(np.random.default_rng(seed % 2**32), g, 0.2)
    e = np.zeros(g)
    e[j] = 1.0
    base = eval_theta(delta, omega, z).value
    assert abs(eval_theta(delta, omega, z + e).value - periodicity_sign(delta, j) * base) < 1e-9
    factor = np.exp(-1j * math.pi * omega.matrix[j, j] - 2j * math.pi * z[j]) * (-1) ** delta.bottom[j]
    shifted = eval_theta(delta, omega, z + omega.matrix @ e).value
    assert abs(shifted - factor * base) < 1e-8 * max(1.0, abs(factor))


def test_block_factorization_single_case():
    parts = [sample_generic(2, 4), sample_generic(1, 5)]
    omega = block_sum(parts)
    z = np.array([0.1, -0.2j, 0.05 + 0.05j])
    a, b = Characteristic("10", "11"), Characteristic("1", "0")
    full = eval_theta(direct_sum([a, b]), omega, z).value
    prod = eval_theta(a, parts[0], z[:2]).value * eval_theta(b, parts[1], z[2:]).value
    assert abs(full - prod) < 1e-9


@pytest.mark.parametrize("g, j, k", [(1, 0, 0), (2, 0, 1), (2, 1, 1), (3, 0, 2), (3, 1, 2)])
def test_heat_equation(g, j, k):
    omega = sample_generic(g, 10 + g)
    for delta in enumerate_characteristics(g)[:: max(1, 4 ** (g - 1) // 4)]:
        res = heat_residual(delta, omega, j, k)
        h = abs(jet_at_zero(delta, omega).hessian[j, k])
        assert res / max(1.0, h) < 1e-4


def test_heat_index_error():
    with pytest.raises(IndexError):
        heat_residual(Characteristic("00", "00"), sample_generic(2, 1), 0, 2)


def test_vanishing_orders():
    omega = sample_generic(2, 7)
    assert vanishing_order_at_zero(Characteristic("00", "00"), omega) == 0
    assert vanishing_order_at_zero(Characteristic("10", "10"), omega) == 1
    # odd (+) odd on a block-diagonal point vanishes to order exactly 2
    red = block_sum([sample_generic(1, 1), sample_generic(1, 2)])
    assert vanishing_order_at_zero(Characteristic("11", "11"), red) == 2


def test_classify_thresholds():
    assert classify(1e-9) == "zero"
    assert classify(1e-6) == "indeterminate"
    assert classify(1e-3) == "nonzero"
    assert INDETERMINATE.startswith(">=3")


def test_shift_relation_literal_form_depends_on_z():
    omega = sample_generic(2, 3)
    zs = [np.array([0.1, 0.0]), np.array([0.0, 0.2j]), np.array([-0.1, 0.1])]
    assert shift_ratio_check(Characteristic.zero(2), omega, zs) < 1e-12
    assert shift_ratio_check(Characteristic("10", "00"), omega, zs) > 1e-3


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), seeds, st.integers(0, 63))
def test_reindexing_identity(g, seed, idx):
    chars = enumerate_characteristics(g)
    delta = chars[idx % len(chars)]
    omega = sample_generic(g, seed)
    rng = np.random.default_rng(seed % 2**32)
    z = random_z(rng, g, 0.3)
    a, b = delta.shifts()
    lhs = eval_theta(delta, omega, z).value
    rhs = shift_multiplier(delta, omega, z) * eval_theta(Characteristic.zero(g), omega, z + b + omega.matrix @ a).value
    assert abs(lhs - rhs) < 1e-9
    zs = [random_z(rng, g, 0.3) for _ in range(4)]
    assert shift_multiplier_check(delta, omega, zs) < 1e-9


def test_genus1_second_derivative_oracle():
    jet = jet_at_zero(Characteristic("0", "0"), TAU_I)
    ref = -4 * math.pi**2 * sum(m * m * math.exp(-math.pi * m * m) for m in range(-20, 21))
    assert abs(jet.hessian[0, 0] - ref) < 1e-12
    assert abs(jet.gradient[0]) < 1e-14


def test_nearly_degenerate_imaginary_part_rejected():
    from thetalocus.siegel import SiegelError

    with pytest.raises(SiegelError, match="degenerate"):
        eval_theta(Characteristic("0", "0"), PeriodMatrix([[5e-9j]], tol=1e-12))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), seeds, st.integers(0, 63))
def test_parity_within_twice_tail_bound(g, seed, idx):
    chars = enumerate_characteristics(g)
    delta = chars[idx % len(chars)]
    omega = sample_generic(g, seed)
    z = random_z(np.random.default_rng(seed % 2**32), g)
    plus, minus = eval_theta(delta, omega, z), eval_theta(delta, omega, -z)
    sign = -1 if parity(delta) == ODD else 1
    assert abs(plus.value - sign * minus.value) <= plus.tail_bound + minus.tail_bound
