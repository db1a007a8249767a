"""Collective correlation matrices C, gamma, Q, U and their two-body forms."""

import warnings
from dataclasses import dataclass

import numpy as np

from .basis import flip_operator, lambda_max
from .exceptions import DimensionMismatch, TooFewSites
from .states import NQuditState, avg_two_body, collective, reduced_matrix

SYMMETRY_ATOL = 1e-10


def _as_local_ops(basis):
    """Stack of single-site operators from a GeneratorBasis or SpinOperators."""
    if hasattr(basis, "generators"):
        return basis.generators
    return basis.components


def _q0_of(ops):
    """Constant making Q traceless: Tr(sum_k g_k^2) / (d K)."""
    k, d, _ = ops.shape
    return float(np.einsum("kab,kba->", ops, ops).real) / (d * k)


def _real_symmetric(m, name):
    m = 0.5 * (m + m.T)
    imag = np.abs(m.imag).max() if m.size else 0.0
    scale = max(1.0, np.abs(m.real).max())
    if imag > 1e-10 * scale:
        raise ValueError(f"{name} has imaginary residue {imag:.2e}")
    return np.ascontiguousarray(m.real)


@dataclass(frozen=True, eq=False)
class CollectiveBundle:
    """First and second collective moments of one state in one basis."""

    n_sites: int
    d: int
    gexp: np.ndarray
    C: np.ndarray
    gamma: np.ndarray
    Q: np.ndarray
    U: np.ndarray
    q0: float
    lambda_max: float

    @property
    def size(self):
        return self.gexp.shape[0]

    def rotated(self, o):
        """The same bundle expressed in the rotated basis ``G' = O G``."""
        o = np.asarray(o, dtype=float)

        def rot(x):
            return o @ x @ o.T

        return CollectiveBundle(
            self.n_sites, self.d, o @ self.gexp, rot(self.C), rot(self.gamma), rot(self.Q), rot(self.U),
            self.q0, self.lambda_max,
        )


@dataclass(frozen=True, eq=False)
class TwoBodyBundle:
    """Correlations of a (swap-invariant) two-qudit state."""

    d: int
    gexp: np.ndarray
    Cav2: np.ndarray
    gammaAv2: np.ndarray
    Fexp: float


def moment_bundle(state, ops, lam_max=None):
    """Build C, gamma, Q, U for arbitrary single-site Hermitian operators.

    ``lam_max`` only annotates the bundle; it defaults to the su(d) value.
    """
    n, d = state.n_sites, state.d
    ops = np.asarray(ops, dtype=complex)
    if ops.shape[1:] != (d, d):
        raise DimensionMismatch(f"operators are {ops.shape[1:]}, state has d={d}")
    if n < 2:
        raise TooFewSites("correlation bundle needs N >= 2")
    K = ops.shape[0]
    rho = state.rho
    big = [collective(g, n) for g in ops]
    rg = [rho @ G for G in big]
    gexp = np.array([np.trace(a).real for a in rg])
    # M_kl = Tr(rho G_k G_l) = sum_ij (rho G_k)_ij (G_l)_ji
    M = np.empty((K, K), dtype=complex)
    for k in range(K):
        for l in range(K):
            M[k, l] = np.einsum("ij,ji->", rg[k], big[l])
    C = _real_symmetric(M, "C")
    gamma = C - np.outer(gexp, gexp)

    q0 = _q0_of(ops)
    anti = np.einsum("kab,lbc->klac", ops, ops)
    anti = 0.5 * (anti + anti.transpose(1, 0, 2, 3))
    single = np.zeros((K, K), dtype=complex)
    for site in range(n):
        r1 = reduced_matrix(rho, d, n, [site])
        single += np.einsum("klab,ba->kl", anti, r1)
    Q = _real_symmetric(single, "Q") / n - q0 * np.eye(K)
    U = gamma + C / (n - 1) - (n * n / (n - 1)) * (Q + q0 * np.eye(K))
    U = 0.5 * (U + U.T)
    return CollectiveBundle(n, d, gexp, C, gamma, Q, U, q0, lambda_max(d) if lam_max is None else lam_max)


def collective_bundle(state, basis):
    """Collective correlation bundle for an su(d) (or extended u(d)) basis."""
    if basis.d != state.d:
        raise DimensionMismatch(f"basis d={basis.d} does not match state d={state.d}")
    return moment_bundle(state, basis.generators)


def spin_bundle(state, spin):
    """Bundle for the three spin-j components, with Q0 = j(j+1)/3."""
    if spin.d != state.d:
        raise DimensionMismatch(f"spin d={spin.d} does not match state d={state.d}")
    return moment_bundle(state, spin.components, lam_max=spin.j**2)


def chi_matrix(bundle):
    """``(N-1) gamma + C - N^2 Q``, obtained as ``(N-1) U + N^2 Q0 1``."""
    n = bundle.n_sites
    return (n - 1) * bundle.U + n * n * bundle.q0 * np.eye(bundle.size)


def _two_site_matrix(rho2):
    if isinstance(rho2, NQuditState):
        if rho2.n_sites != 2:
            raise DimensionMismatch(f"expected a two-site state, got N={rho2.n_sites}")
        return rho2.rho, rho2.d
    m = np.asarray(rho2, dtype=complex)
    d = int(round(np.sqrt(m.shape[0])))
    if d * d != m.shape[0]:
        raise DimensionMismatch(f"{m.shape} is not a two-qudit matrix")
    return m, d


def two_body_bundle(rho2, basis):
    """C_av2, gamma_av2, local means and <F> of a two-qudit state.

    A warning is issued (not an error) when the input is not invariant
    under the pair swap, since the average two-body state always is.
    """
    m, d = _two_site_matrix(rho2)
    ops = _as_local_ops(basis)
    if ops.shape[1] != d:
        raise DimensionMismatch(f"basis d={ops.shape[1]} does not match state d={d}")
    t = m.reshape(d, d, d, d)
    swapped = t.transpose(1, 0, 3, 2).reshape(d * d, d * d)
    if np.abs(swapped - m).max() > 1e-9:
        warnings.warn("two-body state is not swap invariant", RuntimeWarning, stacklevel=2)
    r1 = np.einsum("acbc->ab", t)
    gexp = np.einsum("kab,ba->k", ops, r1).real
    Cav2 = np.einsum("kab,lcd,bdac->kl", ops, ops, t)
    Cav2 = _real_symmetric(Cav2, "Cav2")
    gammaAv2 = Cav2 - np.outer(gexp, gexp)
    Fexp = float(np.einsum("ij,ji->", m, flip_operator(d)).real)
    return TwoBodyBundle(d, gexp, Cav2, gammaAv2, Fexp)


def check_identities(state, basis):
    """Residuals of the collective/two-body identities for one state.

    Keys: ``U_vs_gammaAv2`` (U = N^2 gamma_av2), ``N2`` (collective vs
    flip-operator form of the bosonic-symmetry coordinate), ``C_pairs``
    (off-site part of C vs N(N-1) C_av2), ``traceQ``, ``trace_Cav2_F``.
    """
    n, d = state.n_sites, state.d
    bundle = collective_bundle(state, basis)
    tb = two_body_bundle(avg_two_body(state), basis)
    lam = lambda_max(d)
    lhs_n2 = ((n + d) * lam - np.trace(bundle.C) / n) / (n * (n - 1))
    rhs_n2 = (2.0 / n) * (1.0 - tb.Fexp)
    pairs = bundle.C - n * bundle.Q - n * bundle.q0 * np.eye(bundle.size)
    return {
        "U_vs_gammaAv2": float(np.abs(bundle.U - n * n * tb.gammaAv2).max()),
        "N2": float(abs(lhs_n2 - rhs_n2)),
        "N2_rhs": float(rhs_n2),
        "C_pairs": float(np.abs(pairs - n * (n - 1) * tb.Cav2).max()),
        "traceQ": float(abs(np.trace(bundle.Q))),
        "trace_Cav2_F": float(abs(np.trace(tb.Cav2) - 2.0 * (tb.Fexp - 1.0 / d))),
    }
