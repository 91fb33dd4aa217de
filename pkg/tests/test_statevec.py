import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from qisim import (
    CapExceeded,
    NotNormalized,
    NullInterference,
    Oracle,
    ShapeMismatch,
    StateVector,
    apply_amplitude_noise,
    apply_phase_oracle,
    hadamard_uniform,
    interfere,
    measure,
    renormalize,
)
from qisim.rng import RngStream

log = logging.getLogger(__name__)

DEMO = Oracle.builtin("eq7demo")


def random_state(n, rng):
    amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector(n, amps / np.linalg.norm(amps))


def signs(state):
    return tuple("+" if a.real > 0 else "-" for a in state.amps)


# -- hadamard_uniform --------------------------------------------------------

def test_uniform_zero_qubits():
    s = hadamard_uniform(0)
    assert s.amps.tolist() == [1 + 0j]


def test_uniform_one_qubit():
    np.testing.assert_allclose(hadamard_uniform(1).amps, [1 / math.sqrt(2)] * 2, rtol=0, atol=1e-15)


def test_uniform_three_qubits():
    s = hadamard_uniform(3)
    np.testing.assert_allclose(s.amps, np.full(8, 1 / (2 * math.sqrt(2))), rtol=0, atol=1e-15)
    assert abs(s.amps[0] - 0.353553) < 1e-6
    assert np.all(s.amps.imag == 0)


def test_uniform_cap():
    with pytest.raises(CapExceeded):
        hadamard_uniform(25)
    with pytest.raises(CapExceeded):
        hadamard_uniform(5, cap=4)


def test_state_shape_checked():
    with pytest.raises(ShapeMismatch):
        StateVector(2, np.ones(3))
    with pytest.raises(ValueError):
        StateVector(1, [np.nan, 1])


# -- apply_phase_oracle ------------------------------------------------------

def test_demo_oracle_signs():
    marked = apply_phase_oracle(hadamard_uniform(3), DEMO)
    assert signs(marked) == tuple("-+-+----")


def test_all_true_oracle_is_identity():
    s = hadamard_uniform(3)
    out = apply_phase_oracle(s, Oracle.builtin("all-true", 3))
    assert np.array_equal(out.amps, s.amps)


def test_exclusion_flips_found_solution():
    marked = apply_phase_oracle(hadamard_uniform(3), DEMO, {1})
    assert signs(marked) == tuple("---+----")


def test_oracle_arity_mismatch():
    from qisim import ArityMismatch
    with pytest.raises(ArityMismatch):
        apply_phase_oracle(hadamard_uniform(2), DEMO)


@given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.data())
def test_oracle_involution(seed, n, data):
    rng = np.random.default_rng(seed)
    table = rng.random(1 << n) < 0.5
    excl = data.draw(st.sets(st.integers(0, (1 << n) - 1), max_size=3))
    oracle = Oracle.from_truth_table(table)
    s = random_state(n, rng)
    twice = apply_phase_oracle(apply_phase_oracle(s, oracle, excl), oracle, excl)
    assert np.array_equal(twice.amps, s.amps)
    assert abs(apply_phase_oracle(s, oracle, excl).norm_sq() - 1) < 1e-9


# -- interfere / renormalize -------------------------------------------------

def test_interfere_exposes_solutions():
    u = hadamard_uniform(3)
    out = interfere(apply_phase_oracle(u, DEMO), u)
    expected = np.zeros(8)
    expected[[1, 3]] = 1 / math.sqrt(2)
    np.testing.assert_allclose(out.amps, expected, rtol=0, atol=1e-12)


def test_interfere_with_itself():
    phi = random_state(3, np.random.default_rng(3))
    assert interfere(phi, phi).allclose(phi, 1e-12)


def test_interfere_with_negation_is_null():
    phi = random_state(3, np.random.default_rng(4))
    with pytest.raises(NullInterference):
        interfere(phi, StateVector(3, -phi.amps))


def test_interfere_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        interfere(hadamard_uniform(2), hadamard_uniform(3))


@pytest.mark.parametrize("amps, expected", [
    ([2, 0], [1, 0]),
    ([0.6, 0.8j], [0.6, 0.8j]),
    # norm is sqrt(2)*1e-3
    ([1e-3, 1e-3], [1e-3 / (math.sqrt(2) * 1e-3)] * 2),
])
def test_renormalize(amps, expected):
    out = renormalize(StateVector(1, amps))
    np.testing.assert_allclose(out.amps, expected, rtol=0, atol=1e-15)
    assert abs(out.norm_sq() - 1) < 1e-12


def test_renormalize_null():
    with pytest.raises(NullInterference):
        renormalize(StateVector(1, [1e-6, 0]))


@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.data())
@settings(max_examples=200)
def test_interference_is_projection(seed, n, data):
    rng = np.random.default_rng(seed)
    table = rng.random(1 << n) < 0.4
    excl = data.draw(st.sets(st.integers(0, (1 << n) - 1), max_size=3))
    oracle = Oracle.from_truth_table(table)
    psi = random_state(n, rng)
    keep = table.copy()
    keep[list(excl)] = False
    projected = np.where(keep, psi.amps, 0)
    if np.vdot(projected, projected).real < 1e-9:
        with pytest.raises(NullInterference):
            interfere(apply_phase_oracle(psi, oracle, excl), psi)
        return
    expected = projected / np.linalg.norm(projected)
    out = interfere(apply_phase_oracle(psi, oracle, excl), psi)
    assert np.max(np.abs(out.amps - expected)) < 1e-12
    assert abs(out.norm_sq() - 1) < 1e-9


# -- noise -------------------------------------------------------------------

def test_noise_zero_is_identity():
    s = random_state(3, np.random.default_rng(5))
    out = apply_amplitude_noise(s, 0.0, np.random.default_rng(1))
    assert out is s


def test_noise_recomputed_independently():
    s = hadamard_uniform(3)
    out = apply_amplitude_noise(s, 1e-2, np.random.default_rng(42))
    rng = np.random.default_rng(42)
    re = rng.standard_normal(8)
    im = rng.standard_normal(8)
    ref = [a * (1 + 1e-2 * complex(x, y) / math.sqrt(2)) for a, x, y in zip(s.amps, re, im)]
    norm = math.sqrt(sum(abs(a) ** 2 for a in ref))
    ref = [a / norm for a in ref]
    np.testing.assert_allclose(out.amps, ref, rtol=0, atol=1e-15)
    rel = np.max(np.abs(out.amps - s.amps) / np.abs(s.amps))
    assert 1e-3 < rel < 5e-2
    assert not np.allclose(out.amps, s.amps, atol=1e-6)


def test_noise_deterministic():
    s = hadamard_uniform(4)
    a = apply_amplitude_noise(s, 1e-2, RngStream(9).child())
    b = apply_amplitude_noise(s, 1e-2, RngStream(9).child())
    assert a.amps.tobytes() == b.amps.tobytes()


def test_noise_negative_delta():
    with pytest.raises(ValueError):
        apply_amplitude_noise(hadamard_uniform(1), -1e-3, np.random.default_rng())


def test_noise_continuity():
    s = random_state(3, np.random.default_rng(11))
    ratios = []
    for delta in (1e-3, 1e-4, 1e-5, 1e-6):
        worst = max(
            np.max(np.abs(apply_amplitude_noise(s, delta, RngStream(seed).child()).amps - s.amps))
            for seed in range(100)
        )
        ratios.append(worst / delta)
    c = max(ratios)
    log.info("noise continuity constant C = %.4f (per-delta ratios %s)", c,
             ", ".join(f"{r:.4f}" for r in ratios))
    assert c < 10
    # linear regime: the ratio is stable as delta shrinks
    assert max(ratios) / min(ratios) < 1.5


# -- measure -----------------------------------------------------------------

def test_measure_deterministic_outcome():
    h = measure(StateVector(1, [1, 0]), 100, np.random.default_rng(0))
    assert h.counts == {0: 100} and h.shots == 100


def test_measure_two_solution_state():
    amps = np.zeros(8)
    amps[[1, 3]] = 1 / math.sqrt(2)
    h = measure(StateVector(3, amps), 10**5, np.random.default_rng(7))
    assert set(h.counts) == {1, 3}
    sigma = math.sqrt(1e5 * 0.25)
    for k in (1, 3):
        assert abs(h.counts[k] - 50000) <= 3 * sigma


def test_measure_uniform_two_qubits():
    h = measure(hadamard_uniform(2), 4 * 10**4, np.random.default_rng(8))
    sigma = math.sqrt(4e4 * 0.25 * 0.75)
    assert sum(h.counts.values()) == 4 * 10**4
    for k in range(4):
        assert abs(h.counts[k] - 10**4) <= 3 * sigma


def test_measure_requires_normalized():
    with pytest.raises(NotNormalized):
        measure(StateVector(1, [1, 1]), 10, np.random.default_rng(0))


def test_measure_same_seed_same_histogram():
    s = random_state(4, np.random.default_rng(2))
    assert measure(s, 1000, RngStream(3).child()) == measure(s, 1000, RngStream(3).child())


def test_histogram_modal_tie_breaks_low():
    from qisim import Histogram
    assert Histogram(2, {3: 5, 1: 5, 2: 4}, 14).modal() == 1


def test_sampling_chi_square_single_seed():
    s = random_state(3, np.random.default_rng(12))
    h = measure(s, 10**5, np.random.default_rng(0))
    observed = np.array([h.counts.get(i, 0) for i in range(8)])
    assert stats.chisquare(observed, s.probabilities() * 1e5).pvalue > 1e-3
