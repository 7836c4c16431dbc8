"""Closed-form entanglement of the Grover state across a bipartition.

A bipartition is always "first ``l`` qubits | remaining ``n - l``", where the
first qubits are the most significant bits of a basis index.  Functions that
take ``spec=None`` use the idealised prefactor eta = 1 (the N >> 1 limit), which
is also how the large-N sweeps are evaluated without a concrete register.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    SearchParams,
    amplitude_closed_form,
    first_quadrant_limit,
    in_first_quadrant,
)
from .errors import (
    DomainEscape,
    InconsistentSplit,
    NegativeDiscriminant,
    NotNormalized,
    QuadrantViolation,
    StepTooLarge,
)
from .linalg import SchmidtData, pair_product_sum

RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class PartitionSpec:
    l: int
    n: int

    def __post_init__(self):
        if not 1 <= self.l <= self.n - 1:
            raise ValueError(f"partition needs 1 <= l <= n-1, got l={self.l}, n={self.n}")

    @property
    def left_dim(self) -> int:
        return 2**self.l

    @property
    def right_dim(self) -> int:
        return 2 ** (self.n - self.l)


@dataclass(frozen=True)
class MultiTargetSplit:
    p: int
    q: int
    target_concurrence: float


@dataclass(frozen=True)
class ConcurrenceChain:
    C_exact: float
    C_form2: float
    C_rate_form: float
    C_approx4: float
    C_approx5: float


@dataclass(frozen=True)
class MultiTargetConcurrence:
    C_search: float
    C_byproduct: float
    C_total: float


# -- prefactors -------------------------------------------------------------

def concurrence_from_spectrum(mu, tol: float = 1e-8) -> float:
    """Concurrence 2 sqrt(sum_{j<k} mu_j mu_k) of a pure state's Schmidt spectrum."""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu < -tol) or abs(mu.sum() - 1.0) > tol:
        raise NotNormalized(f"spectrum sums to {mu.sum():.3g}; expected 1")
    return 2.0 * math.sqrt(pair_product_sum(np.clip(mu, 0.0, None)))


def eta(spec: PartitionSpec) -> float:
    N = 2**spec.n
    return math.sqrt((spec.left_dim - 1) * (spec.right_dim - 1) / (N - 1))


def eta_prime(spec: PartitionSpec, p: int, q: int, r: int) -> float:
    N = 2**spec.n
    return math.sqrt((spec.left_dim - p) * (spec.right_dim - q) / (N - r))


def _single_target_eta(params: SearchParams, spec: PartitionSpec | None) -> float:
    if spec is None:
        return 1.0
    if params.n != spec.n:
        raise ValueError(f"partition is for n={spec.n} but the search has n={params.n}")
    if params.r != 1:
        raise ValueError(
            "single-target formula needs r=1; pass spec=None for eta=1 "
            "or use multi_target_concurrence"
        )
    return eta(spec)


def _require_quadrant(k: int, params: SearchParams) -> None:
    if not in_first_quadrant(k, params):
        raise QuadrantViolation(
            f"k={k} is past the first quadrant (last valid k is {first_quadrant_limit(params)})"
        )


# -- Schmidt data of |S_k> --------------------------------------------------

def schmidt_coefficients(
    k: int, params: SearchParams, spec: PartitionSpec | None = None
) -> tuple[float, float]:
    e = _single_target_eta(params, spec)
    s = amplitude_closed_form(k, params)
    x = e * (s.A - s.B * params.tan_theta) * s.B
    radicand = 0.25 - x * x
    if radicand < -RADICAND_TOL:
        raise NegativeDiscriminant(f"Schmidt radicand {radicand:.3g} < 0")
    if spec is None:
        lam_plus = 0.5 + math.sqrt(max(radicand, 0.0))
    else:
        # same eigenvalue from the 2x2 reduced block; stays accurate near x = 1/2
        a, b, _, _ = _reduced_blocks(s.A, s.B, params.N, spec)
        lam_plus = 0.5 + math.hypot(a - 0.5, b)
    # lambda_+ lambda_- = x^2; dividing avoids 1/2 - (1/2 - eps) cancellation
    return lam_plus, x * x / lam_plus


def _reduced_blocks(A: float, B: float, N: int, spec: PartitionSpec):
    """Entries (a, b) of each side's reduced density in its {|X1>, |N>} basis."""
    dl, dr = spec.left_dim, spec.right_dim
    a = A * A + (dr - 1) / (N - 1) * B * B
    a_r = A * A + (dl - 1) / (N - 1) * B * B
    b = math.sqrt((dl - 1) / (N - 1)) * A * B + (dr - 1) * math.sqrt(dl - 1) / (N - 1) * B * B
    b_r = math.sqrt((dr - 1) / (N - 1)) * A * B + (dl - 1) * math.sqrt(dr - 1) / (N - 1) * B * B
    return a, b, a_r, b_r


def _eigvec_2x2(rho11: float, rho12: float, lam: float) -> np.ndarray:
    # rows of (rho - lam) give two candidate null vectors; keep the better-conditioned one
    v1 = np.array([rho12, lam - rho11])
    v2 = np.array([lam - (1.0 - rho11), rho12])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    nv = np.linalg.norm(v)
    return v / nv if nv > 1e-300 else np.array([1.0, 0.0])


def schmidt_vectors(k: int, params: SearchParams, spec: PartitionSpec) -> SchmidtData:
    """Schmidt pairs of the single-target state in the full l / n-l bases.

    Vectors are assembled from the two-dimensional blocks spanned by the
    target's own pattern |X1> and the uniform superposition |N> of the other
    patterns on each side.
    """
    if params.marked is None:
        raise ValueError("Schmidt vectors need an explicit marked index")
    _single_target_eta(params, spec)
    lam_p, lam_m = schmidt_coefficients(k, params, spec)
    s = amplitude_closed_form(k, params)
    A, B = s.A, s.B
    N = params.N
    dl, dr = spec.left_dim, spec.right_dim
    a, b, a_r, b_r = _reduced_blocks(A, B, N, spec)

    # amplitude block in the {X1, N} x {X1, N} coordinates, used only to fix signs
    c = B / math.sqrt(N - 1)
    block = np.array(
        [[A, c * math.sqrt(dr - 1)], [c * math.sqrt(dl - 1), c * math.sqrt((dl - 1) * (dr - 1))]]
    )
    degenerate = lam_p - lam_m <= 1e-12
    lefts, rights = [], []
    for lam in (lam_p, lam_m):
        u = _eigvec_2x2(a, b, lam)
        w = _eigvec_2x2(a_r, b_r, lam)
        lefts.append(u)
        rights.append(w)
    if degenerate:
        lefts = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
        rights = [block.T @ u / math.sqrt(lam) for u, lam in zip(lefts, (lam_p, lam_m))]
    else:
        for j in range(2):
            if lefts[j] @ block @ rights[j] < 0:
                rights[j] = -rights[j]

    t = params.marked[0]
    tl, tr = t >> (params.n - spec.l), t & (dr - 1)
    x1_l, n_l = _pattern_pair(dl, tl)
    x1_r, n_r = _pattern_pair(dr, tr)
    vl = np.array([u[0] * x1_l + u[1] * n_l for u in lefts])
    vr = np.array([w[0] * x1_r + w[1] * n_r for w in rights])
    return SchmidtData(np.array([lam_p, lam_m]), vl, vr, degenerate)


def _pattern_pair(dim: int, idx: int) -> tuple[np.ndarray, np.ndarray]:
    x1 = np.zeros(dim)
    x1[idx] = 1.0
    rest = np.full(dim, 1.0 / math.sqrt(dim - 1))
    rest[idx] = 0.0
    return x1, rest


# -- concurrence of |S_k> and its representations --------------------------

def concurrence_state(k: int, params: SearchParams, spec: PartitionSpec | None = None) -> float:
    e = _single_target_eta(params, spec)
    s = amplitude_closed_form(k, params)
    return 2.0 * e * abs(s.B * (s.A - s.B * params.tan_theta))


def dA2_dk(k: float, params: SearchParams, mode: str = "continuous") -> float:
    """Rate of change of the success probability.

    ``continuous`` differentiates sin^2((2k+1)theta) in k; ``forward`` is the
    one-step difference A_{k+1}^2 - A_k^2.
    """
    th = params.theta
    if mode == "continuous":
        return 2.0 * th * math.sin((4 * k + 2) * th)
    if mode == "forward":
        return math.sin((2 * k + 3) * th) ** 2 - math.sin((2 * k + 1) * th) ** 2
    raise ValueError(f"unknown derivative mode {mode!r}")


def rate_form_concurrence(k: float, params: SearchParams, mode: str = "continuous") -> float:
    """(1/2A0) dA_k^2/dk, the large-N approximation of the concurrence."""
    return dA2_dk(k, params, mode) / (2.0 * params.A0)


def concurrence_chain(
    k: int, params: SearchParams, spec: PartitionSpec | None = None, mode: str = "continuous"
) -> ConcurrenceChain:
    _require_quadrant(k, params)
    e = _single_target_eta(params, spec)
    th = params.theta
    sec = 1.0 / math.cos(th)
    deriv = dA2_dk(k, params, mode)
    ratio = math.sin(2 * k * th) / math.sin((2 * k + 1) * th)
    c2 = 2.0 * e * sec * math.sin(2 * k * th) * math.cos((2 * k + 1) * th)
    return ConcurrenceChain(
        C_exact=concurrence_state(k, params, spec),
        C_form2=c2,
        C_rate_form=e * sec / (2 * th) * ratio * deriv,
        C_approx4=e * sec / (2 * th) * deriv,
        C_approx5=deriv / (2.0 * params.A0),
    )


def concurrence_post_oracle(
    k: int, params: SearchParams, spec: PartitionSpec | None = None
) -> float:
    """Concurrence of R_O |S_k>, the state right after the k+1-th oracle call."""
    _require_quadrant(k, params)
    e = _single_target_eta(params, spec)
    s = amplitude_closed_form(k, params)
    return 2.0 * e * (s.A + s.B * params.tan_theta) * s.B


def oracle_entanglement_gain(
    k: int, params: SearchParams, spec: PartitionSpec | None = None
) -> float:
    _require_quadrant(k, params)
    e = _single_target_eta(params, spec)
    B = amplitude_closed_form(k, params).B
    return 4.0 * e * B * B * params.tan_theta


def reflection_entanglement_change(
    k: int, params: SearchParams, spec: PartitionSpec | None = None
) -> float:
    """C(|S_{k+1}>) - C(R_O|S_k>); never positive on the first quadrant."""
    _require_quadrant(k + 1, params)
    return concurrence_state(k + 1, params, spec) - concurrence_post_oracle(k, params, spec)


# -- several marked states --------------------------------------------------

def _incidence(marked: Iterable[int], n: int, l: int) -> np.ndarray:
    dr = 2 ** (n - l)
    rows = sorted({m >> (n - l) for m in marked})
    cols = sorted({m & (dr - 1) for m in marked})
    ri = {v: i for i, v in enumerate(rows)}
    ci = {v: j for j, v in enumerate(cols)}
    inc = np.zeros((len(rows), len(cols)))
    for m in marked:
        inc[ri[m >> (n - l)], ci[m & (dr - 1)]] = 1.0
    return inc


def _matrix_concurrence(m: np.ndarray) -> float:
    sv = np.linalg.svd(m, compute_uv=False)
    return 2.0 * math.sqrt(pair_product_sum(sv * sv))


def split_from_marked(marked: Iterable[int], spec: PartitionSpec) -> MultiTargetSplit:
    """Pattern counts p, q and the target's own concurrence across ``spec``."""
    marked = list(marked)
    inc = _incidence(marked, spec.n, spec.l)
    p, q = inc.shape
    return MultiTargetSplit(p, q, _matrix_concurrence(inc / math.sqrt(len(marked))))


def multi_target_concurrence(
    k: int,
    params: SearchParams,
    split: MultiTargetSplit,
    spec: PartitionSpec,
    byproduct: str = "corrected",
) -> MultiTargetConcurrence:
    """Search-generated and inherited concurrence for r marked states.

    ``byproduct="corrected"`` weights the target's concurrence by
    A_k^2 - B_k^2 tan^2(theta), which vanishes on the product start state;
    ``"literal"`` uses a single power of tan(theta) for comparison.
    Both are first-quadrant expressions.
    """
    r = params.r
    if split.p * split.q < r or not (1 <= split.p <= r and 1 <= split.q <= r):
        raise InconsistentSplit(f"p={split.p}, q={split.q} cannot host r={r} marked states")
    s = amplitude_closed_form(k, params)
    t = params.tan_theta
    c_search = 2.0 * eta_prime(spec, split.p, split.q, r) * abs(s.A - s.B * t) * abs(s.B)
    if byproduct == "corrected":
        weight = s.A * s.A - s.B * s.B * t * t
    elif byproduct == "literal":
        weight = s.A * s.A - s.B * s.B * t
    else:
        raise ValueError(f"unknown byproduct variant {byproduct!r}")
    c_by = abs(weight) * split.target_concurrence
    return MultiTargetConcurrence(c_search, c_by, math.hypot(c_search, c_by))


def exact_concurrence(k: int, params: SearchParams, spec: PartitionSpec) -> float:
    """Concurrence of |S_k> for any marked set, from a compressed amplitude block.

    |S_k> = a|t> + b|S_0> with a = A_k - B_k tan(theta), b = B_k sec(theta).
    Rows (columns) of the amplitude matrix outside the marked patterns are all
    equal, so they merge into one row (column) of weight sqrt(count) without
    changing the singular values.  The block is at most (p+1) x (q+1).
    """
    if params.marked is None:
        raise ValueError("exact concurrence needs the marked set")
    s = amplitude_closed_form(k, params)
    a = s.A - s.B * params.tan_theta
    b = s.B / math.cos(params.theta)
    inc = _incidence(params.marked, spec.n, spec.l)
    p, q = inc.shape
    extra_l, extra_r = spec.left_dim - p, spec.right_dim - q
    u = b / math.sqrt(params.N)
    block = np.zeros((p + (extra_l > 0), q + (extra_r > 0)))
    block[:p, :q] = a * inc / math.sqrt(params.r) + u
    if extra_r:
        block[:p, q] = u * math.sqrt(extra_r)
    if extra_l:
        block[p, :q] = u * math.sqrt(extra_l)
    if extra_l and extra_r:
        block[p, q] = u * math.sqrt(extra_l * extra_r)
    return _matrix_concurrence(block)


# -- the speedup condition --------------------------------------------------

def speedup_condition_integrate(A0: float, k_max: int, h: float = 1e-3) -> np.ndarray:
    """Integrate dP/dk = 4 phi sqrt(P(1-P)), P(0) = A0^2, by fixed-step RK4.

    ``phi = arcsin(A0)``.  The step is rounded so a whole number of steps spans
    each unit of k.  Returns P at k = 0..k_max.
    """
    if not 0.0 < A0 < 1.0:
        raise ValueError(f"A0 must lie in (0, 1), got {A0}")
    if h > 0.1:
        raise StepTooLarge(f"step {h} exceeds 0.1")
    if h <= 0:
        raise ValueError("step must be positive")

    rate = 4.0 * math.asin(A0)
    steps = max(1, round(1.0 / h))
    dk = 1.0 / steps
    sqrt = math.sqrt

    def f(P: float) -> float:
        return rate * sqrt(max(P * (1.0 - P), 0.0))

    # RK4 may step past the equilibrium P=1 by O((rate*dk)^2) where sqrt(1-P)
    # is not Lipschitz; only larger excursions count as escaping the domain.
    slack = max(1e-9, (rate * dk) ** 2)
    out = np.empty(k_max + 1)
    P = A0 * A0
    out[0] = P
    for k in range(1, k_max + 1):
        for _ in range(steps):
            k1 = f(P)
            k2 = f(P + 0.5 * dk * k1)
            k3 = f(P + 0.5 * dk * k2)
            k4 = f(P + dk * k3)
            P += dk / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if P > 1.0 or P < 0.0:
                if P > 1.0 + slack or P < -slack:
                    raise DomainEscape(f"P={P!r} left [0, 1] at k~{k}")
                P = min(max(P, 0.0), 1.0)
        out[k] = P
    return out
