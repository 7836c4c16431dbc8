"""Dense statevector simulation of Grover search and its bipartite entanglement.

Qubit 0 is the most significant bit of a basis index, so "the first l qubits"
are the l leading bits.  States are immutable: every operation returns a new
:class:`StateVector`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, DimMismatch, IndexOutOfRange, NotNormalized, SubsetTooLarge
from .linalg import SchmidtData, jacobi_eigh, pair_product_sum

CAP_SINGLE = 14
CAP_TOTAL = 20
CAP_KEEP = 8
NORM_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_qubits,):
            raise DimMismatch(f"{amps.shape[0]} amplitudes for {self.n_qubits} qubits")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"squared norm {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def probability(self, indices: Iterable[int]) -> float:
        idx = list(indices)
        return float(np.sum(np.abs(self.amplitudes[idx]) ** 2))

    def _evolve(self, amps: np.ndarray) -> "StateVector":
        return StateVector(self.n_qubits, amps)


def _check_cap(n: int, cap: int) -> None:
    if n < 1 or n > cap:
        raise CapExceeded(f"{n} qubits outside the supported range [1, {cap}]")


def _check_indices(marked: Iterable[int], dim: int) -> np.ndarray:
    idx = np.fromiter((int(m) for m in marked), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= dim):
        raise IndexOutOfRange(f"marked index outside [0, {dim})")
    return idx


def uniform_state(n: int, cap: int = CAP_SINGLE) -> StateVector:
    _check_cap(n, cap)
    N = 2**n
    return StateVector(n, np.full(N, 1.0 / math.sqrt(N), dtype=complex))


def apply_oracle(state: StateVector, marked: Iterable[int]) -> StateVector:
    idx = _check_indices(marked, state.dim)
    amps = state.amplitudes.copy()
    amps[idx] *= -1
    return state._evolve(amps)


def apply_diffusion(state: StateVector) -> StateVector:
    """2|S0><S0|psi> - psi, i.e. inversion of every amplitude about the mean."""
    amps = state.amplitudes
    mean = np.sum(amps) / amps.shape[0]
    return state._evolve(2.0 * mean - amps)


def grover_trajectory(n: int, marked: Iterable[int], k_max: int) -> Iterator[StateVector]:
    """Yield the states after 0, 1, ..., k_max Grover iterations."""
    marked = list(marked)
    state = uniform_state(n)
    _check_indices(marked, state.dim)
    yield state
    for _ in range(k_max):
        state = apply_diffusion(apply_oracle(state, marked))
        yield state


def grover_run(n: int, marked: Iterable[int], k: int) -> StateVector:
    if k < 0:
        raise ValueError(f"iteration count must be non-negative, got {k}")
    for state in grover_trajectory(n, marked, k):
        pass
    return state


def two_dim_residual(state: StateVector, marked: Iterable[int]) -> float:
    """Norm of the component orthogonal to span{|t>, |t_perp>}."""
    idx = _check_indices(marked, state.dim)
    mask = np.zeros(state.dim, dtype=bool)
    mask[idx] = True
    amps = state.amplitudes
    resid = np.where(mask, amps - amps[mask].mean(), amps - amps[~mask].mean())
    return float(np.linalg.norm(resid))


# -- bipartitions -----------------------------------------------------------

def _normalise_subset(keep: Iterable[int], n: int) -> list[int]:
    keep = sorted(set(int(i) for i in keep))
    if not keep or len(keep) >= n or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep={keep} must be a nonempty proper subset of range({n})")
    return keep


def _coefficient_matrix(state: StateVector, keep: Sequence[int]) -> np.ndarray:
    """Amplitudes reshaped to (kept basis) x (traced basis)."""
    n = state.n_qubits
    keep = _normalise_subset(keep, n)
    rest = [i for i in range(n) if i not in keep]
    psi = state.amplitudes.reshape((2,) * n)
    if keep != list(range(len(keep))):
        psi = np.transpose(psi, keep + rest)
    return psi.reshape(2 ** len(keep), -1)


def reduced_density(state: StateVector, keep: Iterable[int], cap: int = CAP_KEEP) -> np.ndarray:
    keep = _normalise_subset(keep, state.n_qubits)
    if len(keep) > cap:
        raise SubsetTooLarge(f"{len(keep)} kept qubits exceed the cap of {cap}")
    m = _coefficient_matrix(state, keep)
    return m @ m.conj().T


def complement(keep: Iterable[int], n: int) -> list[int]:
    keep = set(keep)
    return [i for i in range(n) if i not in keep]


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.vdot(rho, rho)))


def concurrence_numeric(state: StateVector, keep: Iterable[int]) -> float:
    """Concurrence sqrt(2(1 - tr rho^2)) across ``keep`` | rest.

    Evaluated as 2 sqrt(sum_{j<k} s_j^2 s_k^2) from the singular values of the
    coefficient matrix: the two forms agree for normalised states, but the
    purity form loses ~1e-8 absolute accuracy next to product states.
    """
    m = _coefficient_matrix(state, list(keep))
    sv = np.linalg.svd(m, compute_uv=False)
    return 2.0 * math.sqrt(pair_product_sum(sv * sv))


def schmidt_numeric(state: StateVector, keep: Iterable[int], cap: int = CAP_KEEP) -> SchmidtData:
    """Schmidt spectrum and vectors via a Jacobi eigensolve of the kept-side density."""
    keep = _normalise_subset(keep, state.n_qubits)
    rho = reduced_density(state, keep, cap)
    w, v = jacobi_eigh(rho)
    order = np.argsort(w)[::-1]
    mu = np.clip(w[order], 0.0, None)
    left = v[:, order].T
    m = _coefficient_matrix(state, keep)
    right = np.zeros((len(mu), m.shape[1]), dtype=complex)
    for j, (lam, u) in enumerate(zip(mu, left)):
        if lam > 1e-14:
            right[j] = (u.conj() @ m) / math.sqrt(lam)
    degenerate = bool(np.any(np.abs(np.diff(mu[mu > 1e-10])) < 1e-12))
    return SchmidtData(mu, left, right, degenerate)


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    rho1, rho2 = np.asarray(rho1), np.asarray(rho2)
    if rho1.shape != rho2.shape:
        raise DimMismatch(f"shapes {rho1.shape} and {rho2.shape} differ")
    w, _ = jacobi_eigh(rho1 - rho2)
    return 0.5 * float(np.sum(np.abs(w)))


def projector_mixture(indices: Iterable[int], dim: int) -> np.ndarray:
    """(1/r) sum_j |j><j| over the given basis indices."""
    idx = _check_indices(indices, dim)
    rho = np.zeros((dim, dim), dtype=complex)
    rho[idx, idx] = 1.0 / idx.size
    return rho


# -- l entangled registers --------------------------------------------------

def ghz_initial(n: int, l: int) -> StateVector:
    """(1/sqrt N) sum_j |j>^(x l) on l registers of n qubits each."""
    _check_cap(n * l, CAP_TOTAL)
    N = 2**n
    # index of |j>|j>...|j> is j * (1 + N + N^2 + ...)
    stride = sum(N**i for i in range(l))
    amps = np.zeros(N**l, dtype=complex)
    amps[np.arange(N) * stride] = 1.0 / math.sqrt(N)
    return StateVector(n * l, amps)


def parallel_step(
    state: StateVector, marked: Iterable[int], n: int, l: int, reflection: str = "global"
) -> StateVector:
    """One oracle call on register 1 followed by the chosen reflection.

    ``global`` reflects about the initial GHZ state, ``local`` applies the
    single-register diffusion to register 1 and the identity elsewhere.
    """
    if state.n_qubits != n * l:
        raise DimMismatch(f"state has {state.n_qubits} qubits, expected {n * l}")
    N = 2**n
    idx = _check_indices(marked, N)
    amps = state.amplitudes.reshape(N, -1).copy()
    amps[idx, :] *= -1
    if reflection == "global":
        ghz = ghz_initial(n, l).amplitudes
        flat = amps.reshape(-1)
        out = 2.0 * np.vdot(ghz, flat) * ghz - flat
    elif reflection == "local":
        out = (2.0 * amps.mean(axis=0, keepdims=True) - amps).reshape(-1)
    else:
        raise ValueError(f"unknown reflection {reflection!r}")
    return state._evolve(out)


def register_density(state: StateVector, register: int, n: int) -> np.ndarray:
    return reduced_density(state, range(register * n, (register + 1) * n))
