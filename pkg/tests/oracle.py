"""Slow reference implementations written directly from the definitions.

Nothing here imports package internals beyond the basis matrices, so the
tests can compare two independent code paths.
"""

from functools import reduce
from itertools import product

import numpy as np


def kron_list(mats):
    return reduce(np.kron, mats)


def site_op(op, site, n):
    d = op.shape[0]
    return kron_list([op if s == site else np.eye(d) for s in range(n)])


def partial_trace_loops(rho, d, n, keep):
    """Reduced matrix by explicit summation over the traced indices."""
    keep = list(keep)
    rest = [s for s in range(n) if s not in keep]
    dk = d ** len(keep)
    out = np.zeros((dk, dk), dtype=complex)

    def index(kvals, rvals):
        digits = [0] * n
        for s, v in zip(keep, kvals):
            digits[s] = v
        for s, v in zip(rest, rvals):
            digits[s] = v
        return int(np.ravel_multi_index(digits, [d] * n))

    kidx = list(product(range(d), repeat=len(keep)))
    for r in product(range(d), repeat=len(rest)):
        for a, ka in enumerate(kidx):
            for b, kb in enumerate(kidx):
                out[a, b] += rho[index(ka, r), index(kb, r)]
    return out


def partial_transpose_loops(rho, d, n, subset):
    dim = d**n
    out = np.zeros_like(rho)
    for i in range(dim):
        di = list(np.unravel_index(i, [d] * n))
        for j in range(dim):
            dj = list(np.unravel_index(j, [d] * n))
            a, b = di[:], dj[:]
            for s in subset:
                a[s], b[s] = dj[s], di[s]
            out[np.ravel_multi_index(a, [d] * n), np.ravel_multi_index(b, [d] * n)] = rho[i, j]
    return out


def naive_matrices(rho, d, n, gens):
    """C, gamma, Q, U straight from their definitions with explicit site operators."""
    k = len(gens)
    big = [sum(site_op(g, s, n) for s in range(n)) for g in gens]
    ev = np.array([np.trace(rho @ G).real for G in big])
    C = np.array([[0.5 * np.trace(rho @ (a @ b + b @ a)).real for b in big] for a in big])
    gamma = C - np.outer(ev, ev)
    q0 = sum(np.trace(g @ g).real for g in gens) / (d * k)
    Q = np.zeros((k, k))
    for s in range(n):
        for a in range(k):
            for b in range(k):
                anti = gens[a] @ gens[b] + gens[b] @ gens[a]
                Q[a, b] += 0.5 * np.trace(rho @ site_op(anti, s, n)).real
    Q = Q / n - q0 * np.eye(k)
    U = gamma + C / (n - 1) - n * n / (n - 1) * (Q + q0 * np.eye(k))
    return C, gamma, Q, U


def naive_xi(rho, d, n, gens):
    """Largest-violation inequality: Tr(gamma) minus the positive spectrum of U."""
    _, gamma, _, U = naive_matrices(rho, d, n, gens)
    ev = np.linalg.eigvalsh(U)
    return np.trace(gamma) - ev[ev > 1e-10].sum() - 2 * n * (d - 1)


def random_state(dim, rng):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
