"""Reference computations that share no code with the package.

Grover steps are built as explicit dense unitaries, partial traces as index
loops, and the small n = 4 case is done in exact rational arithmetic.
"""
from __future__ import annotations

import itertools

import numpy as np
import sympy as sp


def grover_unitary(n, marked):
    N = 2**n
    oracle = np.eye(N)
    for m in marked:
        oracle[m, m] = -1.0
    s = np.full((N, 1), 1.0 / np.sqrt(N))
    diffusion = 2.0 * (s @ s.T) - np.eye(N)
    return diffusion @ oracle


def grover_states(n, marked, k_max):
    N = 2**n
    G = grover_unitary(n, marked)
    psi = np.full(N, 1.0 / np.sqrt(N))
    out = [psi]
    for _ in range(k_max):
        psi = G @ psi
        out.append(psi)
    return out


def partial_trace_loops(psi, n, keep):
    """rho_keep[a, b] = sum over traced bits of psi[a, c] psi*[b, c]; qubit 0 is the MSB."""
    keep = list(keep)
    rest = [q for q in range(n) if q not in keep]
    dk = 2 ** len(keep)
    rho = np.zeros((dk, dk), dtype=complex)

    def index(bits_keep, bits_rest):
        bits = [0] * n
        for q, b in zip(keep, bits_keep):
            bits[q] = b
        for q, b in zip(rest, bits_rest):
            bits[q] = b
        return int("".join(map(str, bits)), 2)

    keep_bits = list(itertools.product((0, 1), repeat=len(keep)))
    for c in itertools.product((0, 1), repeat=len(rest)):
        col = np.array([psi[index(a, c)] for a in keep_bits])
        rho += np.outer(col, col.conj())
    return rho


def concurrence_eig(rho):
    mu = np.linalg.eigvalsh(rho)
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - np.sum(mu * mu)))))


def exact_state(n, marked, k, post_oracle=False):
    """Rational/surd amplitudes after k iterations (and optionally one more oracle)."""
    N = 2**n
    psi = sp.Matrix([1 / sp.sqrt(N)] * N)

    def oracle(v):
        v = v.copy()
        for m in marked:
            v[m] = -v[m]
        return v

    for _ in range(k):
        v = oracle(psi)
        mean = sum(v) / N
        psi = sp.Matrix([sp.nsimplify(2 * mean - a) for a in v])
    return oracle(psi) if post_oracle else psi


def exact_spectrum(psi, n, l):
    M = psi.reshape(2**l, 2 ** (n - l))
    rho = M * M.T
    eig = sorted(rho.eigenvals(multiple=True), key=lambda e: float(e))
    purity = sp.simplify((rho * rho).trace())
    return [sp.simplify(e) for e in eig], sp.sqrt(sp.simplify(2 * (1 - purity)))
