"""N-qudit density matrices: embedding, reductions, symmetry predicates.

Storage is dense ``d**N x d**N``. Site 0 is the leftmost tensor factor.
The practical ceiling is ``d**N <= 2187`` (seven qutrits).
"""

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exceptions import (
    DimensionMismatch,
    EmptyKeepSet,
    IndexOutOfRange,
    InvalidSubset,
    InvariantViolation,
    ParseError,
    SiteOutOfRange,
    TooFewSites,
)
from .linalg import eigvals_hermitian, hermiticity_defect

STATE_ATOL = 1e-10
POSITIVITY_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class NQuditState:
    """Hermitian, unit-trace matrix on ``(C^d)^{\\otimes N}``.

    Positivity is not required: pseudo-states with negative eigenvalues are
    legitimate inputs to the criteria. Setting ``physical=True`` asserts
    ``rho >= -1e-9``, which is verified unless ``check_positivity`` is off
    (used for matrices positive by construction, e.g. Gibbs states).
    """

    d: int
    n_sites: int
    rho: np.ndarray
    physical: bool = False
    check_positivity: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        dim = self.d**self.n_sites
        if rho.shape != (dim, dim):
            raise DimensionMismatch(f"rho has shape {rho.shape}, expected ({dim}, {dim}) for d={self.d}, N={self.n_sites}")
        defect = hermiticity_defect(rho)
        if defect > STATE_ATOL:
            raise InvariantViolation("hermiticity", f"relative defect {defect:.2e}")
        tr = np.trace(rho)
        if abs(tr - 1.0) > STATE_ATOL:
            raise InvariantViolation("trace", f"Tr(rho) = {tr.real:.12g}")
        rho = 0.5 * (rho + rho.conj().T)
        object.__setattr__(self, "rho", rho)
        if self.physical and self.check_positivity:
            lo = eigvals_hermitian(rho)[0]
            if lo < -POSITIVITY_ATOL:
                raise InvariantViolation("positivity", f"min eigenvalue {lo:.3e}")

    @property
    def dim(self):
        return self.d**self.n_sites

    def expect(self, op):
        """Real part of ``Tr(rho op)``; ``op`` is assumed Hermitian."""
        return float(np.einsum("ij,ji->", self.rho, op).real)

    def min_eigenvalue(self):
        return float(eigvals_hermitian(self.rho)[0])

    def tensor(self):
        return self.rho.reshape([self.d] * (2 * self.n_sites))

    def to_dict(self):
        return {
            "d": self.d,
            "n": self.n_sites,
            "rho": [[[float(z.real), float(z.imag)] for z in row] for row in self.rho],
        }


def state_to_json(state):
    return json.dumps(state.to_dict(), sort_keys=True)


def state_from_json(text, physical=False):
    """Parse the ``{"d", "n", "rho": [[[re, im], ...], ...]}`` state format."""
    try:
        data = json.loads(text)
        d = int(data["d"])
        n = int(data["n"])
        arr = np.array(data["rho"], dtype=float)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state document: {exc}") from exc
    dim = d**n
    if d < 2 or n < 1 or arr.shape != (dim, dim, 2):
        raise ParseError(f"rho array has shape {arr.shape}, expected ({dim}, {dim}, 2)")
    return NQuditState(d, n, arr[..., 0] + 1j * arr[..., 1], physical=physical)


def read_state(path, physical=False):
    with open(path, encoding="utf-8") as fh:
        return state_from_json(fh.read(), physical=physical)


def write_state(state, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_to_json(state))


def product_state(factors, physical=False):
    """Tensor product of single-site matrices (each unit trace)."""
    factors = [np.asarray(f, dtype=complex) for f in factors]
    d = factors[0].shape[0]
    rho = factors[0]
    for f in factors[1:]:
        rho = np.kron(rho, f)
    return NQuditState(d, len(factors), rho, physical=physical)


def embed_at_site(op, site, n_sites):
    op = np.asarray(op, dtype=complex)
    if not 0 <= site < n_sites:
        raise SiteOutOfRange(f"site {site} outside [0, {n_sites})")
    d = op.shape[0]
    left = np.eye(d**site, dtype=complex)
    right = np.eye(d ** (n_sites - site - 1), dtype=complex)
    return np.kron(np.kron(left, op), right)


def collective(op, n_sites):
    """``sum_n op^(n)`` for one single-site operator."""
    op = np.asarray(op, dtype=complex)
    d = op.shape[0]
    # Diagonal single-site ops give a diagonal collective operator; avoid
    # the dense sum in that common case.
    if np.count_nonzero(op - np.diag(np.diag(op))) == 0:
        diag = np.zeros(d**n_sites, dtype=complex)
        local = np.diag(op)
        for s in range(n_sites):
            diag += np.kron(np.kron(np.ones(d**s), local), np.ones(d ** (n_sites - s - 1)))
        return np.diag(diag)
    return sum(embed_at_site(op, s, n_sites) for s in range(n_sites))


def collective_operator(basis, k, n_sites):
    """``G_k = sum_n g_k^(n)``."""
    if not 0 <= k < len(basis):
        raise IndexOutOfRange(f"generator index {k} outside [0, {len(basis)})")
    return collective(basis[k], n_sites)


def _sites(sites, n_sites):
    sites = sorted({int(s) for s in sites})
    for s in sites:
        if not 0 <= s < n_sites:
            raise SiteOutOfRange(f"site {s} outside [0, {n_sites})")
    return sites


def reduced_matrix(rho, d, n_sites, keep):
    """Partial trace of a raw matrix, keeping ``keep`` in the given order."""
    keep = list(keep)
    rest = [s for s in range(n_sites) if s not in keep]
    t = rho.reshape([d] * (2 * n_sites))
    perm = keep + rest + [n_sites + s for s in keep] + [n_sites + s for s in rest]
    dk, dr = d ** len(keep), d ** len(rest)
    t = t.transpose(perm).reshape(dk, dr, dk, dr)
    return np.einsum("aibi->ab", t)


def partial_trace(state, keep):
    """Reduced state on the sites in ``keep`` (kept in ascending order)."""
    if len(list(keep)) == 0:
        raise EmptyKeepSet("keep set must be non-empty")
    keep = _sites(keep, state.n_sites)
    if len(keep) == state.n_sites:
        return state
    red = reduced_matrix(state.rho, state.d, state.n_sites, keep)
    return NQuditState(state.d, len(keep), red, physical=state.physical, check_positivity=False)


def partial_transpose(state, subset):
    """Transpose the tensor factors in ``subset``; returns a matrix."""
    subset = _sites(subset, state.n_sites)
    if not subset or len(subset) >= state.n_sites:
        raise InvalidSubset(f"subset {subset} must be a proper non-empty subset of {state.n_sites} sites")
    return partial_transpose_matrix(state.rho, state.d, state.n_sites, subset)


def partial_transpose_matrix(rho, d, n_sites, subset):
    perm = list(range(2 * n_sites))
    for s in subset:
        perm[s], perm[n_sites + s] = n_sites + s, s
    dim = d**n_sites
    return rho.reshape([d] * (2 * n_sites)).transpose(perm).reshape(dim, dim)


def bipartitions(n_sites):
    """The ``2**(N-1) - 1`` cuts, each represented by the side holding site 0."""
    others = range(1, n_sites)
    for size in range(0, n_sites - 1):
        for rest in combinations(others, size):
            yield (0,) + rest


def avg_two_body(state):
    """``(1/(N(N-1))) sum_{i != j} rho_ij`` by direct pair summation.

    ``rho_ji`` is obtained from ``rho_ij`` by conjugating with the swap, so
    only ``N(N-1)/2`` partial traces are taken.
    """
    n, d = state.n_sites, state.d
    if n < 2:
        raise TooFewSites("the average two-body state needs N >= 2")
    total = np.zeros((d * d, d * d), dtype=complex)
    for i, j in combinations(range(n), 2):
        rij = reduced_matrix(state.rho, d, n, [i, j])
        total += rij + _swap_pair(rij, d)
    total /= n * (n - 1)
    return NQuditState(d, 2, total, physical=state.physical, check_positivity=False)


def _swap_pair(m, d):
    return m.reshape(d, d, d, d).transpose(1, 0, 3, 2).reshape(d * d, d * d)


def pair_marginal(state, i, j):
    """Ordered two-site marginal with site ``i`` as the first factor."""
    if i == j:
        raise InvalidSubset("pair marginal needs two distinct sites")
    _sites([i, j], state.n_sites)
    return reduced_matrix(state.rho, state.d, state.n_sites, [i, j])


def _swap_rows(rho, d, n, i):
    t = rho.reshape([d] * n + [rho.shape[1]])
    return np.swapaxes(t, i, i + 1).reshape(rho.shape)


def _swap_cols(rho, d, n, i):
    return _swap_rows(rho.T, d, n, i).T


def is_bosonic(state, atol=STATE_ATOL):
    """True iff ``V rho = rho`` for every adjacent transposition ``V``."""
    d, n, rho = state.d, state.n_sites, state.rho
    return all(np.abs(_swap_rows(rho, d, n, i) - rho).max() <= atol for i in range(n - 1))


def is_permutation_invariant(state, atol=STATE_ATOL):
    """True iff ``V rho V^H = rho`` for every adjacent transposition."""
    d, n, rho = state.d, state.n_sites, state.rho
    for i in range(n - 1):
        moved = _swap_cols(_swap_rows(rho, d, n, i), d, n, i)
        if np.abs(moved - rho).max() > atol:
            return False
    return True


def adjacent_swap(d, n_sites, i):
    """Permutation matrix exchanging sites ``i`` and ``i+1``."""
    dim = d**n_sites
    return _swap_rows(np.eye(dim, dtype=complex), d, n_sites, i)


def symmetric_projector(d, n_sites):
    """Projector onto the bosonic (fully symmetric) subspace."""
    from itertools import permutations

    dim = d**n_sites
    eye = np.eye(dim, dtype=complex).reshape([d] * n_sites + [dim])
    total = np.zeros((dim, dim), dtype=complex)
    perms = list(permutations(range(n_sites)))
    for p in perms:
        total += eye.transpose(list(p) + [n_sites]).reshape(dim, dim)
    return total / len(perms)
