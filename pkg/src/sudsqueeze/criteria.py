"""Entanglement criteria built on the correlation bundles.

Every criterion returns a :class:`CriterionReport` whose ``value`` is a
signed margin: negative beyond ``-tol`` means entanglement was detected.
"""

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .basis import extend_ud, gellmann_basis, lambda_max, swap_operator
from .correlations import collective_bundle, spin_bundle, two_body_bundle
from .exceptions import TooFewSites
from .linalg import trace_norm
from .states import NQuditState, bipartitions, partial_transpose_matrix

DETECTION_TOL = 1e-9
FORM_ATOL = 1e-8


@dataclass
class CriterionReport:
    name: str
    value: float
    detected: bool
    eigenvalues: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def boundary(self):
        return bool(self.details.get("boundary", False))

    def to_dict(self):
        return {
            "name": self.name,
            "value": float(self.value),
            "detected": bool(self.detected),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "details": _jsonable(self.details),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _report(name, value, tol, eigenvalues=(), **details):
    details["boundary"] = bool(abs(value) <= tol)
    details["tol"] = tol
    return CriterionReport(name, float(value), bool(value < -tol), list(map(float, eigenvalues)), details)


def eig_cutoff(m):
    """Eigenvalues inside ``[-c, c]``, ``c = 1e-10 max(1, ||m||_2)``, count as zero."""
    return 1e-10 * max(1.0, float(np.linalg.norm(m, 2)))


def _signed_sums(m):
    ev = np.linalg.eigvalsh(m)
    cut = eig_cutoff(m)
    return ev, ev[ev > cut].sum(), ev[ev < -cut].sum()


def xi_sud_collective(bundle, tol=DETECTION_TOL):
    """su(d)-squeezing parameter from the collective bundle.

    ``details`` carries the alternate (negative-eigenvalue) form and the
    residual between the two.
    """
    n, d = bundle.n_sites, bundle.d
    if n < 2:
        raise TooFewSites("xi needs N >= 2")
    ev, pos, neg = _signed_sums(bundle.U)
    main = np.trace(bundle.gamma) - pos - 2.0 * n * (d - 1)
    lam = lambda_max(d)
    alt = neg + n * (n + d) * lam / (n - 1) - np.trace(bundle.C) / (n - 1)
    main, alt = float(main), float(alt)
    return _report("xi_sud", main, tol, ev, alternate=alt, form_residual=abs(main - alt))


def xi_sud_two_body(rho_av2, n_sites, basis=None, tol=DETECTION_TOL):
    """xi from the average two-body state: N^2 (sum_neg lambda(gamma_av2) + (2/N)(1 - <F>))."""
    if n_sites < 2:
        raise TooFewSites("xi needs N >= 2")
    if basis is None:
        d = rho_av2.d if isinstance(rho_av2, NQuditState) else int(round(np.sqrt(np.shape(rho_av2)[0])))
        basis = gellmann_basis(d)
    tb = two_body_bundle(rho_av2, basis)
    n = n_sites
    ev, _, neg = _signed_sums(n * n * tb.gammaAv2)
    value = neg + n * n * (2.0 / n) * (1.0 - tb.Fexp)
    return _report("xi_sud_av2", value, tol, ev, Fexp=tb.Fexp)


def sud_inequality(bundle, subset):
    """``Tr(gamma) - sum_{k in I} U_kk - 2N(d-1)``; non-negative for pseudo-separable states."""
    n, d = bundle.n_sites, bundle.d
    idx = list(subset)
    return float(np.trace(bundle.gamma) - np.diag(bundle.U)[idx].sum() - 2.0 * n * (d - 1))


def sud_inequality_alt(bundle, complement):
    """Same inequality written with C: ``sum_{k in I'} U_kk + (N(N+d)Lmax - Tr C)/(N-1)``."""
    n, d = bundle.n_sites, bundle.d
    idx = list(complement)
    return float(np.diag(bundle.U)[idx].sum() + (n * (n + d) * lambda_max(d) - np.trace(bundle.C)) / (n - 1))


def sud_inequality_set(bundle, subset):
    """Margin of one inequality, cross-checked against its C-form.

    Returns ``(margin, alternate)``; both must agree within 1e-8 for
    physical or pseudo-state input.
    """
    subset = sorted(set(subset))
    complement = [k for k in range(bundle.size) if k not in subset]
    return sud_inequality(bundle, subset), sud_inequality_alt(bundle, complement)


def diagonal_frame(bundle):
    """Rotate a bundle so that U is diagonal (eigenvalues descending).

    Eigenvector signs are fixed so the first entry above 1e-12 in magnitude
    is positive; this makes the frame deterministic.
    """
    ev, vecs = np.linalg.eigh(bundle.U)
    order = np.argsort(-ev, kind="stable")
    vecs = vecs[:, order]
    for c in range(vecs.shape[1]):
        col = vecs[:, c]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            vecs[:, c] = -col
    o = vecs.T
    return bundle.rotated(o), o


def min_inequality_margin(bundle, exhaustive=None):
    """Minimal margin over all subsets after diagonalizing U.

    Subsets are enumerated explicitly when there are at most 8 generators
    (d <= 3); otherwise the optimal subset (positive diagonal entries) is used.
    """
    rot, _ = diagonal_frame(bundle)
    k = rot.size
    if exhaustive is None:
        exhaustive = k <= 8
    if not exhaustive:
        diag = np.diag(rot.U)
        return sud_inequality(rot, np.flatnonzero(diag > 0))
    best = np.inf
    for r in range(k + 1):
        for sub in combinations(range(k), r):
            best = min(best, sud_inequality(rot, sub))
    return float(best)


def spin_squeezing_set(state, spin, tol=DETECTION_TOL):
    """The four rotationally invariant spin-squeezing inequalities.

    Margins (each must be >= 0 for separable states)::

        a: Nj(Nj+1) - Tr C
        b: Tr gamma - Nj
        c: (N-1) lambda_min(U) - Tr C + Nj(Nj+1)
        d: Tr gamma - Nj - lambda_max(U)
    """
    n = state.n_sites
    if n < 2:
        raise TooFewSites("spin-squeezing inequalities need N >= 2")
    b = spin_bundle(state, spin)
    j = spin.j
    trc, trg = np.trace(b.C), np.trace(b.gamma)
    ev = np.linalg.eigvalsh(b.U)
    top = n * j * (n * j + 1)
    margins = {
        "a": float(top - trc),
        "b": float(trg - n * j),
        "c": float((n - 1) * ev[0] - trc + top),
        "d": float(trg - n * j - ev[-1]),
    }
    value = min(margins.values())
    return _report("spin_squeezing", value, tol, ev, margins=margins)


def xi_spin(rho_av2, n_sites, spin, tol=DETECTION_TOL):
    """Spin-squeezing parameter N^2 (sum_neg lambda(gamma_av2^J) - (Tr C_av2^J - j^2)/N)."""
    tb = two_body_bundle(rho_av2, spin)
    n = n_sites
    u = n * n * tb.gammaAv2
    ev, _, neg = _signed_sums(u)
    value = neg - n * (np.trace(tb.Cav2) - spin.j**2)
    return _report("xi_spin", value, tol, ev)


def ppt_all_bipartitions(state, tol=DETECTION_TOL, stop_at_first=False):
    """Minimal partial-transpose eigenvalue over all bipartitions.

    With ``stop_at_first`` the scan ends at the first cut whose partial
    transpose has an eigenvalue below ``-tol``; the verdict is unchanged but
    ``value`` is then only an upper bound on the true minimum.
    """
    n = state.n_sites
    if n < 2:
        raise TooFewSites("PPT needs N >= 2")
    worst, worst_cut = np.inf, None
    scanned = 0
    for cut in bipartitions(n):
        pt = partial_transpose_matrix(state.rho, state.d, n, cut)
        lo = float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])
        scanned += 1
        if lo < worst:
            worst, worst_cut = lo, cut
        if stop_at_first and worst < -tol:
            break
    return _report("ppt", worst, tol, (), worst_cut=list(worst_cut), scanned=scanned)


def realign(rho2, d):
    """Index reshuffle ``R_(ij),(kl) = rho_(ik),(jl)``."""
    return np.asarray(rho2).reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def realign_via_flip(rho2, d):
    """``R(rho) = (rho F)^{T_b} F``."""
    f = swap_operator(d)
    return partial_transpose_matrix(rho2 @ f, d, 2, [1]) @ f


def ccnr(rho2, tol=DETECTION_TOL):
    """Realignment criterion: ``1 - ||R(rho)||_1``."""
    if isinstance(rho2, NQuditState):
        m, d = rho2.rho, rho2.d
        if rho2.n_sites != 2:
            raise TooFewSites("CCNR is a bipartite criterion")
    else:
        m = np.asarray(rho2, dtype=complex)
        d = int(round(np.sqrt(m.shape[0])))
    r1 = realign(m, d)
    r2 = realign_via_flip(m, d)
    norm = trace_norm(r1)
    return _report(
        "ccnr", 1.0 - norm, tol, (), trace_norm=norm, realignment_residual=float(np.abs(r1 - r2).max())
    )


def werner_threshold(n_sites, d):
    return (n_sites - d) / (d * (n_sites - 1))


def werner_criterion(fexp, n_sites, d, tol=DETECTION_TOL):
    """Werner-state specialization: detected iff <F> < (N-d)/(d(N-1))."""
    thr = werner_threshold(n_sites, d)
    return _report("werner", fexp - thr, tol, (), threshold=thr, Fexp=float(fexp))


def ud_extension_check(state, basis):
    """Compare U built with the u(d)-extended basis against the su(d) one.

    Returns the largest entry of the identity row/column of the extended U,
    and the spectrum mismatch once the extra zero eigenvalue is removed.
    """
    from .correlations import moment_bundle

    ext = extend_ud(basis)
    big = moment_bundle(state, ext.generators)
    small = collective_bundle(state, basis)
    row = float(max(np.abs(big.U[0]).max(), np.abs(big.U[:, 0]).max()))
    ev_big = np.sort(np.linalg.eigvalsh(big.U))
    ev_small = np.sort(np.linalg.eigvalsh(small.U))
    # drop the eigenvalue closest to zero from the extended spectrum
    drop = int(np.argmin(np.abs(ev_big)))
    ev_big = np.delete(ev_big, drop)
    return {"zero_row": row, "spectrum": float(np.abs(ev_big - ev_small).max()), "gamma00": float(abs(big.gamma[0, 0]))}
