import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grover_entanglement import statevector as sv
from grover_entanglement.errors import CapExceeded, DimMismatch, IndexOutOfRange, NotNormalized, SubsetTooLarge

import oracles


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return sv.StateVector(n, v / np.linalg.norm(v))


def test_statevector_validation_and_immutability():
    with pytest.raises(NotNormalized):
        sv.StateVector(1, [1.0, 1.0])
    with pytest.raises(DimMismatch):
        sv.StateVector(2, [1.0, 0.0])
    s = sv.uniform_state(3)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.0
    with pytest.raises(CapExceeded):
        sv.uniform_state(sv.CAP_SINGLE + 1)
    with pytest.raises(IndexOutOfRange):
        sv.apply_oracle(s, [8])


@pytest.mark.parametrize("n,marked", [(3, [5]), (6, [0, 33, 63]), (9, [100])])
def test_trajectory_matches_dense_unitary(n, marked):
    ref = oracles.grover_states(n, marked, 10)
    for got, want in zip(sv.grover_trajectory(n, marked, 10), ref):
        np.testing.assert_allclose(got.amplitudes, want, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 10**6), data=st.data())
def test_oracle_and_diffusion_are_involutions(n, seed, data):
    s = random_state(n, seed)
    marked = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=1, max_size=2**n, unique=True))
    twice = sv.apply_oracle(sv.apply_oracle(s, marked), marked)
    np.testing.assert_allclose(twice.amplitudes, s.amplitudes, atol=1e-14)
    twice = sv.apply_diffusion(sv.apply_diffusion(s))
    np.testing.assert_allclose(twice.amplitudes, s.amplitudes, atol=1e-13)


def test_norm_conservation_over_many_steps():
    state = sv.uniform_state(6)
    worst = 0.0
    for _ in range(10_000):
        state = sv.apply_diffusion(sv.apply_oracle(state, [7, 40]))
        worst = max(worst, abs(float(np.sum(np.abs(state.amplitudes) ** 2)) - 1.0))
    assert worst < 1e-10


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 9), data=st.data())
def test_two_dim_confinement(n, data):
    marked = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=1, max_size=2**n - 1, unique=True))
    k = data.draw(st.integers(0, 30))
    assert sv.two_dim_residual(sv.grover_run(n, marked, k), marked) < 1e-10


def test_reduced_density_matches_index_loops():
    n = 5
    s = random_state(n, 3)
    for keep in ([0], [1, 3], [0, 2, 4], [4], [1, 2, 3, 4]):
        np.testing.assert_allclose(
            sv.reduced_density(s, keep), oracles.partial_trace_loops(s.amplitudes, n, keep), atol=1e-14
        )
    with pytest.raises(SubsetTooLarge):
        sv.reduced_density(random_state(10, 0), range(9))
    with pytest.raises(ValueError):
        sv.reduced_density(s, range(5))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 8), seed=st.integers(0, 10**6), data=st.data())
def test_purity_symmetric_across_complement(n, seed, data):
    s = random_state(n, seed)
    keep = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n - 1, unique=True))
    rest = sv.complement(keep, n)
    assert sv.purity(sv.reduced_density(s, keep)) == pytest.approx(
        sv.purity(sv.reduced_density(s, rest)), abs=1e-10
    )
    assert sv.concurrence_numeric(s, keep) == pytest.approx(sv.concurrence_numeric(s, rest), abs=1e-12)


def test_concurrence_numeric_known_states():
    bell = sv.StateVector(2, np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert sv.concurrence_numeric(bell, [0]) == pytest.approx(1.0)
    assert sv.concurrence_numeric(sv.uniform_state(4), [0, 1]) == pytest.approx(0.0, abs=1e-15)
    s = random_state(6, 9)
    rho = sv.reduced_density(s, [0, 5])
    assert sv.concurrence_numeric(s, [0, 5]) == pytest.approx(oracles.concurrence_eig(rho), abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_single_target_schmidt_rank_two(n):
    for k in range(0, 8):
        s = sv.grover_run(n, [3], k)
        for l in range(1, n):
            data = sv.schmidt_numeric(s, range(l))
            assert data.coefficients[2:].max(initial=0.0) < 1e-10
            assert data.rank() <= 2


def test_schmidt_numeric_reconstructs():
    s = random_state(5, 4)
    data = sv.schmidt_numeric(s, [0, 1])
    np.testing.assert_allclose(data.reconstruct(), s.amplitudes, atol=1e-11)
    assert np.all(np.diff(data.coefficients) <= 1e-15)


def test_trace_distance_and_mixture():
    a = sv.projector_mixture([0, 7], 8)
    assert np.trace(a).real == pytest.approx(1.0)
    assert sv.trace_distance(a, a) == pytest.approx(0.0, abs=1e-15)
    b = sv.projector_mixture([1], 8)
    assert sv.trace_distance(a, b) == pytest.approx(1.0)
    with pytest.raises(DimMismatch):
        sv.trace_distance(a, np.eye(2))


def test_ghz_registers():
    g = sv.ghz_initial(2, 3)
    nz = np.flatnonzero(g.amplitudes)
    assert nz.tolist() == [0, 21, 42, 63]
    rho = sv.register_density(g, 1, 2)
    np.testing.assert_allclose(rho, np.eye(4) / 4, atol=1e-15)
    with pytest.raises(CapExceeded):
        sv.ghz_initial(7, 3)


def test_parallel_step_global_and_local():
    n, l, marked = 3, 2, [0, 7]
    goal = sv.projector_mixture(marked, 8)
    g = sv.parallel_step(sv.ghz_initial(n, l), marked, n, l, "global")
    for j in range(l):
        assert sv.trace_distance(sv.register_density(g, j, n), goal) < 1e-12
    loc = sv.parallel_step(sv.ghz_initial(n, l), marked, n, l, "local")
    assert sv.trace_distance(sv.register_density(loc, 1, n), goal) > 0.1
    with pytest.raises(ValueError):
        sv.parallel_step(sv.ghz_initial(n, l), marked, n, l, "sideways")
    with pytest.raises(DimMismatch):
        sv.parallel_step(sv.ghz_initial(n, l), marked, n, 3)
