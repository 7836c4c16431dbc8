"""Two-dimensional description of Grover search.

The state after ``k`` iterations lives in span{|t>, |t_perp>}, where |t> is the
uniform superposition of the marked basis states and |t_perp> that of the
unmarked ones.  Everything here is a pure function of exact integers ``N`` and
``r`` plus the derived angle ``theta = arcsin(sqrt(r/N))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import AllMarked, DuplicateMarked, EmptyMarkedSet, IndexOutOfRange

# Analytic mode accepts any N up to this bound; no amplitudes are stored.
MAX_ANALYTIC_N = 2**63


@dataclass(frozen=True)
class SearchParams:
    N: int
    r: int
    n: int | None = None
    marked: tuple[int, ...] | None = None

    @property
    def theta(self) -> float:
        return math.asin(math.sqrt(self.r / self.N))

    @property
    def A0(self) -> float:
        return math.sin(self.theta)

    @property
    def B0(self) -> float:
        return math.cos(self.theta)

    @property
    def tan_theta(self) -> float:
        # sqrt(r/(N-r)) avoids going through the rounded angle
        return math.sqrt(self.r / (self.N - self.r))


@dataclass(frozen=True)
class TwoDimState:
    k: int
    A: float
    B: float


def _check_counts(N: int, r: int) -> None:
    if r < 1:
        raise EmptyMarkedSet("at least one marked state is required")
    if r >= N:
        raise AllMarked(f"r={r} marks the whole database of size N={N}")


def make_params(n: int, marked: Iterable[int]) -> SearchParams:
    """Search instance on ``n`` qubits with an explicit marked set."""
    if n < 1:
        raise ValueError(f"qubit count must be positive, got {n}")
    N = 2**n
    marked = [int(m) for m in marked]
    idx = sorted(set(marked))
    if len(idx) != len(marked):
        raise DuplicateMarked("marked indices must be distinct")
    for m in idx:
        if m < 0 or m >= N:
            raise IndexOutOfRange(f"marked index {m} outside [0, {N})")
    _check_counts(N, len(idx))
    return SearchParams(N=N, r=len(idx), n=n, marked=tuple(idx))


def analytic_params(N: int, r: int) -> SearchParams:
    """Search instance known only through ``N`` and ``r`` (no marked set)."""
    N, r = int(N), int(r)
    if N < 2 or N > MAX_ANALYTIC_N:
        raise ValueError(f"N must lie in [2, 2**63], got {N}")
    _check_counts(N, r)
    n = N.bit_length() - 1 if N & (N - 1) == 0 else None
    return SearchParams(N=N, r=r, n=n)


def initial_state(params: SearchParams) -> TwoDimState:
    return TwoDimState(0, params.A0, params.B0)


def iterate(state: TwoDimState, params: SearchParams) -> TwoDimState:
    N, r = params.N, params.r
    c = (N - 2 * r) / N
    s = 2.0 * math.sqrt(r * (N - r)) / N
    return TwoDimState(state.k + 1, c * state.A + s * state.B, c * state.B - s * state.A)


def oracle_2d(state: TwoDimState) -> TwoDimState:
    """Sign flip of the target component; ``k`` is unchanged."""
    return TwoDimState(state.k, -state.A, state.B)


def reflection_2d(state: TwoDimState, params: SearchParams) -> TwoDimState:
    """Reflection about (A0, B0) in the {|t>, |t_perp>} plane; advances ``k``."""
    a0, b0 = math.sqrt(params.r / params.N), math.sqrt((params.N - params.r) / params.N)
    proj = a0 * state.A + b0 * state.B
    return TwoDimState(state.k + 1, 2 * proj * a0 - state.A, 2 * proj * b0 - state.B)


def amplitude_closed_form(k: int, params: SearchParams) -> TwoDimState:
    phase = (2 * k + 1) * params.theta
    return TwoDimState(k, math.sin(phase), math.cos(phase))


def success_probability(k: float, params: SearchParams) -> float:
    return math.sin((2 * k + 1) * params.theta) ** 2


def optimal_iterations(params: SearchParams) -> int:
    """Integer k maximising sin^2((2k+1)theta).

    This is round((pi/(2 theta) - 1)/2).  The textbook value
    round((pi/4) sqrt(N/r)) agrees only for N >> r; see
    :func:`asymptotic_iterations`.
    """
    return max(0, round((math.pi / (2 * params.theta) - 1) / 2))


def asymptotic_iterations(params: SearchParams) -> int:
    return round(math.pi / 4 * math.sqrt(params.N / params.r))


def first_quadrant_limit(params: SearchParams) -> int:
    """Largest k with (2k+1)theta <= pi/2, i.e. A_k, B_k both non-negative."""
    kmax = math.floor((math.pi / (2 * params.theta) - 1) / 2)
    # guard the floor against rounding at exact boundaries such as theta = pi/6
    while (2 * (kmax + 1) + 1) * params.theta <= math.pi / 2 + 1e-12:
        kmax += 1
    while kmax > 0 and (2 * kmax + 1) * params.theta > math.pi / 2 + 1e-12:
        kmax -= 1
    return kmax


def in_first_quadrant(k: int, params: SearchParams) -> bool:
    return 0 <= k and (2 * k + 1) * params.theta <= math.pi / 2 + 1e-12


def concurrence_peak_iteration(params: SearchParams) -> int:
    """Integer k maximising C(|S_k>) on the first quadrant.

    C is proportional to sin((4k+1)theta) - sin(theta), so the continuous
    maximiser is pi/(8 theta) - 1/4.
    """
    return max(0, round(math.pi / (8 * params.theta) - 0.25))
