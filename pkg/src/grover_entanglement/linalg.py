"""Small dense Hermitian eigensolver and Schmidt-spectrum helpers."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceFailure

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 50


@dataclass(frozen=True)
class SchmidtData:
    """Squared Schmidt coefficients (descending) with optional Schmidt vectors.

    ``vectors_left[j]`` and ``vectors_right[j]`` pair with ``coefficients[j]``.
    ``degenerate`` marks a spectrum whose basis is not unique.
    """

    coefficients: np.ndarray
    vectors_left: np.ndarray | None = None
    vectors_right: np.ndarray | None = None
    degenerate: bool = False

    def rank(self, tol: float = 1e-10) -> int:
        return int(np.count_nonzero(self.coefficients > tol))

    def reconstruct(self) -> np.ndarray:
        """Amplitudes sum_j sqrt(mu_j) |left_j>|right_j> as a flat vector."""
        if self.vectors_left is None or self.vectors_right is None:
            raise ValueError("Schmidt vectors were not computed")
        out = 0
        for mu, u, v in zip(self.coefficients, self.vectors_left, self.vectors_right):
            out = out + np.sqrt(mu) * np.kron(u, v)
        return np.asarray(out)


def pair_product_sum(mu) -> float:
    """sum_{j<k} mu_j mu_k evaluated without the 1 - sum(mu^2) cancellation.

    Terms are accumulated smallest-first, so near-product spectra keep their
    tiny entries to full relative precision.
    """
    w = np.sort(np.asarray(mu, dtype=float))
    tails = np.cumsum(w)[:-1]  # tails[j] = sum of the j+1 smallest
    return float(np.sum(w[1:] * tails))


@lru_cache(maxsize=None)
def _round_robin(m: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Circle-method schedule: m-1 rounds of disjoint pairs covering all pairs."""
    players = list(range(m)) + ([-1] if m % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[i], players[size - 1 - i]) for i in range(size // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0]
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep visits every (p, q) pair once; pairs are grouped into disjoint
    rounds so a round is applied as one vectorised two-sided update.  Returns
    ``(w, V)`` with ascending eigenvalues and eigenvectors in the columns of V.
    """
    a = np.array(a, dtype=complex)
    m = a.shape[0]
    if a.shape != (m, m):
        raise ValueError(f"square matrix required, got shape {a.shape}")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(m, dtype=complex)
    if m == 1:
        return a.real.diagonal().copy(), v
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps + 1):
        if _off_norm(a) < tol * scale:
            w = a.diagonal().real.copy()
            order = np.argsort(w, kind="stable")
            return w[order], v[:, order]
        for p, q in _round_robin(m):
            apq = a[p, q]
            g = np.abs(apq)
            active = g > 1e-300
            phase = np.where(active, apq / np.where(active, g, 1.0), 1.0)
            app, aqq = a[p, p].real, a[q, q].real
            with np.errstate(over="ignore"):
                tau = (aqq - app) / (2.0 * np.where(active, g, 1.0))
                t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = [[c, s], [-s*conj(e), c*conj(e)]] on each (p, q) block; A <- U^H A U
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            a[q, :] = s[:, None] * rp + (c * phase)[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * (s * phase.conj())
            a[:, q] = cp * s + cq * (c * phase.conj())
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vp * c - vq * (s * phase.conj())
            v[:, q] = vp * s + vq * (c * phase.conj())
    raise ConvergenceFailure(
        f"Jacobi did not reach off-diagonal norm {tol:g} within {max_sweeps} sweeps"
    )
