"""Compressive-sensing diagnostics for a sensing matrix.

Exact restricted isometry constants by subset enumeration, the
``K <= c M / ln(N / M)`` sample-count bound, and mutual coherence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_RIP_BUDGET = 2_000_000


class RipBudgetError(ValueError):
    """Exact enumeration would exceed the subset budget."""


@dataclass(frozen=True)
class RipReport:
    k: int
    delta_k: float
    witness_subset: tuple[int, ...]
    n_subsets: int = 0


def restricted_isometry_constant(matrix, k: int, budget: int = DEFAULT_RIP_BUDGET, chunk: int = 20000) -> RipReport:
    """Exact ``delta_K`` of ``matrix`` (columns used as given).

    ``delta_K = max_T max(lambda_max(G_T) - 1, 1 - lambda_min(G_T))`` with
    ``G_T = Phi_T^H Phi_T``. By eigenvalue interlacing, growing ``T`` never
    shrinks that spread, so only subsets of size exactly ``k`` are visited.

    Raises
    ------
    RipBudgetError
        If ``C(n, k)`` exceeds ``budget``. No approximation is attempted.
    """
    Phi = np.asarray(matrix)
    if Phi.ndim != 2:
        raise ValueError("matrix must be 2-D")
    n = Phi.shape[1]
    k = int(k)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    total = math.comb(n, k)
    if total > budget:
        raise RipBudgetError(f"instance too large for exact RIP: C({n}, {k}) = {total} > {budget}")

    gram = Phi.conj().T @ Phi
    best, witness = -np.inf, ()
    subsets = itertools.combinations(range(n), k)
    while True:
        block = np.array(list(itertools.islice(subsets, chunk)), dtype=int)
        if block.size == 0:
            break
        sub = gram[block[:, :, None], block[:, None, :]]
        eig = np.linalg.eigvalsh(sub)
        spread = np.maximum(eig[:, -1] - 1.0, 1.0 - eig[:, 0])
        i = int(np.argmax(spread))
        if spread[i] > best:
            best, witness = float(spread[i]), tuple(int(j) for j in block[i])
    return RipReport(k, max(best, 0.0), witness, total)


@dataclass(frozen=True)
class SparsityBound:
    holds: bool
    bound: float
    margin: float


def sparsity_bound_holds(k: int, m: int, n: int, c: float = 1.0) -> SparsityBound:
    """Check ``k <= c m / ln(n / m)``; ``margin`` is ``bound - k``."""
    if not (n > m >= 1):
        raise ValueError("bound undefined: need n > m >= 1")
    if not c > 0:
        raise ValueError("c must be positive")
    bound = c * m / math.log(n / m)
    return SparsityBound(k <= bound, bound, bound - k)


def mutual_coherence(matrix) -> float:
    """Largest ``|<a_i, a_j>| / (||a_i|| ||a_j||)`` over distinct columns."""
    M = np.asarray(matrix)
    if M.ndim != 2 or M.shape[1] < 2:
        raise ValueError("need at least 2 columns")
    norms = np.linalg.norm(M, axis=0)
    if np.any(norms == 0):
        raise ValueError("zero column")
    U = M / norms
    G = np.abs(U.conj().T @ U)
    np.fill_diagonal(G, 0.0)
    return float(min(G.max(), 1.0))
