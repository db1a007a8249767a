"""Limit-temperature scans, table reproduction, state evaluation and the self-test."""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import criteria as crit
from .basis import anticomm_basis_d3, gellmann_basis, spin_matrices
from .correlations import check_identities, collective_bundle
from .exceptions import OutOfRange, SqueezingError
from .models import (
    GibbsFamily,
    build_hamiltonian,
    hamiltonian_spin,
    hamiltonian_sud_singlet,
    random_density,
    random_separable,
    rho_ps3,
    sud_singlet,
)
from .polytope import bundle_residual, eigenframe_point
from .states import adjacent_swap, avg_two_body, read_state

CRITERIA = ("sud", "spin", "ppt")


@dataclass
class ScanConfig:
    model: dict
    criterion: str = "sud"
    t_min: float = 1e-3
    t_max: float = 20.0
    grid: int = 200
    tol: float = 1e-3
    detect_tol: float = crit.DETECTION_TOL
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise OutOfRange(f"criterion must be one of {CRITERIA}, got {self.criterion!r}")
        if not 0 < self.t_min < self.t_max:
            raise OutOfRange(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.tol <= 0 or self.grid < 2:
            raise OutOfRange("bisection tolerance must be positive and the grid needs >= 2 points")


def _is_permutation_symmetric(h, d, n):
    for i in range(n - 1):
        v = adjacent_swap(d, n, i)
        if np.abs(v @ h @ v.T - h).max() > 1e-10 * max(1.0, np.abs(h).max()):
            return False
    return True


def _symmetric_cuts(n):
    """One representative cut per size; enough for permutation-invariant states."""
    return [tuple(range(s)) for s in range(1, n // 2 + 1)]


class Detector:
    """Detection verdict of one criterion on the thermal states of a family."""

    def __init__(self, family, criterion, tol=crit.DETECTION_TOL, symmetric=None):
        self.family = family
        self.criterion = criterion
        self.tol = tol
        self.spin = spin_matrices(family.d)
        self.basis = gellmann_basis(family.d)
        if symmetric is None:
            h = (family.eig.vectors * family.eig.values) @ family.eig.vectors.conj().T
            symmetric = _is_permutation_symmetric(h, family.d, family.n_sites)
        self.symmetric = symmetric

    def two_body(self, t):
        if self.symmetric:
            # every pair marginal is the same for a permutation-invariant state
            return self.family.reduced(t, [0, 1])
        return avg_two_body(self.family.state(t))

    def value(self, t):
        n = self.family.n_sites
        if self.criterion == "sud":
            return crit.xi_sud_two_body(self.two_body(t), n, self.basis, self.tol).value
        if self.criterion == "spin":
            return crit.xi_spin(self.two_body(t), n, self.spin, self.tol).value
        st = self.family.state(t)
        if self.symmetric:
            return _ppt_cuts(st, _symmetric_cuts(n), self.tol)
        return crit.ppt_all_bipartitions(st, self.tol, stop_at_first=True).value

    def __call__(self, t):
        return self.value(t) < -self.tol


def _ppt_cuts(state, cuts, tol):
    from .states import partial_transpose_matrix

    worst = np.inf
    for cut in cuts:
        pt = partial_transpose_matrix(state.rho, state.d, state.n_sites, cut)
        worst = min(worst, float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0]))
        if worst < -tol:
            break
    return worst


def temperature_grid(config):
    return np.geomspace(config.t_min, config.t_max, config.grid)


def scan_detector(detect, config):
    """Grid plus bisection on a detection predicate ``T -> bool``."""
    grid = temperature_grid(config)
    hits = [bool(detect(t)) for t in grid]
    if not hits[0]:
        if any(hits):
            warnings.warn(f"undetected at T_min but detected at {_pattern(grid, hits)}", RuntimeWarning, stacklevel=2)
        return 0.0
    edges = [i for i in range(len(grid) - 1) if hits[i] and not hits[i + 1]]
    if len(edges) > 1 or any(not hits[i] and hits[i + 1] for i in range(len(grid) - 1)):
        warnings.warn(f"non-monotone detection on the grid: {_pattern(grid, hits)}", RuntimeWarning, stacklevel=2)
    if not edges:
        warnings.warn(f"still detected at T_max = {config.t_max}", RuntimeWarning, stacklevel=2)
        return float(config.t_max)
    i = edges[-1]
    lo, hi = grid[i], grid[i + 1]
    while hi - lo > config.tol:
        mid = 0.5 * (lo + hi)
        if detect(mid):
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def _pattern(grid, hits):
    runs, start = [], 0
    for i in range(1, len(hits) + 1):
        if i == len(hits) or hits[i] != hits[start]:
            runs.append(f"{'D' if hits[start] else 'U'}[{grid[start]:.4g},{grid[i - 1]:.4g}]")
            start = i
    return " ".join(runs)


def limit_temperature(config, family=None):
    """Temperature above which ``config.criterion`` stops detecting the thermal state."""
    if family is None:
        h, d, _ = build_hamiltonian(dict(config.model, seed=config.model.get("seed", config.seed)))
        family = GibbsFamily(h, d)
    return scan_detector(Detector(family, config.criterion, config.detect_tol), config)


TABLE1_N = (2, 3, 4, 5, 6)
TABLE2_GAMMA = (0.0, 0.5, 1.0)
TABLE3_GAMMA = (0.0, 0.25, 0.5, 0.75)


def table_rows(table_id, n_values=None):
    """Rows ``(label, [values])`` of one of the three limit-temperature tables."""
    if table_id == 1:
        ns = TABLE1_N if n_values is None else tuple(n_values)
        rows = {"T_sud": [], "T_spin": [], "T_ppt": []}
        for n in ns:
            fam = GibbsFamily(hamiltonian_sud_singlet(n, 3), 3)
            for crit_name, label in (("sud", "T_sud"), ("spin", "T_spin"), ("ppt", "T_ppt")):
                cfg = ScanConfig({"model": "sud-singlet", "N": n, "d": 3}, crit_name)
                rows[label].append(limit_temperature(cfg, fam))
        return ("N", list(ns)), list(rows.items())
    if table_id in (2, 3):
        gammas = TABLE2_GAMMA if table_id == 2 else TABLE3_GAMMA
        sign = 1 if table_id == 2 else -1
        model = "spin" if sign == 1 else "spin-ferro"
        rows = {"T_spin": [], "T_sud": []}
        for g in gammas:
            fam = GibbsFamily(hamiltonian_spin(6, g, sign), 3)
            for crit_name, label in (("spin", "T_spin"), ("sud", "T_sud")):
                cfg = ScanConfig({"model": model, "N": 6, "d": 3, "gamma": g}, crit_name)
                rows[label].append(limit_temperature(cfg, fam))
        return ("gamma", list(gammas)), list(rows.items())
    raise OutOfRange(f"table id must be 1, 2 or 3, got {table_id}")


def _fmt(v):
    return f"{v:.6g}"


def rows_to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([header[0]] + [_fmt(v) for v in header[1]])
    for label, vals in rows:
        w.writerow([label] + [_fmt(v) for v in vals])
    return buf.getvalue()


def table(table_id, n_values=None):
    header, rows = table_rows(table_id, n_values)
    return rows_to_csv(header, rows)


FIG3_STATES = (
    ("sud-singlet T=1", "sud-singlet", None, 1.0),
    ("spin gamma=1 T=0.5", "spin", 1.0, 0.5),
    ("spin-ferro gamma=0 T=0.5", "spin-ferro", 0.0, 0.5),
)


def fig3_values(n_sites=4):
    """Diagonal of U in the spin-1 anticommutator basis for the three thermal states."""
    basis = anticomm_basis_d3()
    out = {}
    for label, model, gamma, t in FIG3_STATES:
        spec = {"model": model, "N": n_sites, "d": 3}
        if gamma is not None:
            spec["gamma"] = gamma
        h, d, _ = build_hamiltonian(spec)
        st = GibbsFamily(h, d).state(t)
        out[label] = np.diag(collective_bundle(st, basis).U).copy()
    return out


def fig3_data(n_sites=4):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", "k", "U_kk"])
    for label, diag in fig3_values(n_sites).items():
        for k, v in enumerate(diag, start=1):
            w.writerow([label, k, _fmt(v)])
    return buf.getvalue()


def evaluate_state(state, tol=crit.DETECTION_TOL):
    """Every criterion on one state, as a JSON-ready dictionary."""
    d, n = state.d, state.n_sites
    basis, spin = gellmann_basis(d), spin_matrices(d)
    bundle = collective_bundle(state, basis)
    rho2 = state if n == 2 else avg_two_body(state)
    xi = crit.xi_sud_collective(bundle, tol)
    return {
        "d": d,
        "N": n,
        "xi_sud": xi.to_dict(),
        "xi_sud_two_body": crit.xi_sud_two_body(rho2, n, basis, tol).to_dict(),
        "xi_spin": crit.xi_spin(rho2, n, spin, tol).to_dict(),
        "spin_squeezing": crit.spin_squeezing_set(state, spin, tol).to_dict(),
        "ppt": crit.ppt_all_bipartitions(state, tol).to_dict(),
        "ccnr": dict(crit.ccnr(rho2, tol).to_dict(), applied_to="state" if n == 2 else "avg_two_body"),
        "polytope": {
            "frame": "U eigenframe, eigenvalues descending",
            "coords": eigenframe_point(bundle).to_list(),
            "constraint_residual": bundle_residual(bundle),
        },
    }


def evaluate(path, tol=crit.DETECTION_TOL):
    return json.dumps(evaluate_state(read_state(path), tol), sort_keys=True, indent=2)


FAULTS = ("basis-normalization",)


def selftest(seed=0, inject_fault=None):
    """Run the cross-module invariant checks; returns ``[(name, ok, message)]``."""
    if inject_fault is not None and inject_fault not in FAULTS:
        raise OutOfRange(f"unknown fault {inject_fault!r}; expected one of {FAULTS}")
    rng = np.random.default_rng(seed)
    results = []

    def check(name, fn):
        try:
            msg = fn()
            results.append((name, True, msg or "ok"))
        except (AssertionError, SqueezingError) as exc:
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    def bases():
        for d in (2, 3, 4):
            b = gellmann_basis(d)
            if inject_fault == "basis-normalization" and d == 3:
                g = b.generators.copy()
                g[0] = 1.01 * g[0]
                b = type(b)(d, g, b.kind)
            b.validate()
            spin_matrices(d).validate()
        anticomm_basis_d3().validate()

    def identities():
        st = random_density(3, 3, rng)
        res = check_identities(st, gellmann_basis(3))
        worst = max(v for k, v in res.items() if k != "N2_rhs")
        assert worst < 1e-9, f"identity residuals {res}"
        return f"max residual {worst:.1e}"

    def forms():
        st = random_density(3, 3, rng)
        b = gellmann_basis(3)
        r = crit.xi_sud_collective(collective_bundle(st, b))
        two = crit.xi_sud_two_body(avg_two_body(st), 3, b)
        assert r.details["form_residual"] < 1e-8, r.details
        assert abs(r.value - two.value) < 1e-8, (r.value, two.value)
        return f"xi = {r.value:.6g}"

    def singlet():
        # Tr(gamma) = 0 and U is negative definite, so xi = -2N(d-1)
        v = crit.xi_sud_collective(collective_bundle(sud_singlet(3, 3), gellmann_basis(3))).value
        assert abs(v + 12.0) < 1e-8, v
        return f"xi = {v:.10g}"

    def soundness():
        b, s = gellmann_basis(3), spin_matrices(3)
        for _ in range(20):
            st = random_separable(3, 3, rng)
            assert crit.xi_sud_collective(collective_bundle(st, b)).value >= -1e-9
            assert not crit.spin_squeezing_set(st, s).detected

    def ps3():
        st = rho_ps3()
        xi = crit.xi_sud_collective(collective_bundle(st, gellmann_basis(3))).value
        assert abs(xi) < 1e-9, xi
        assert crit.ppt_all_bipartitions(st).value < -1e-6
        assert abs(crit.ccnr(st).details["trace_norm"] - 1.0) < 1e-8

    for name, fn in (
        ("basis invariants", bases),
        ("collective/two-body identities", identities),
        ("xi form agreement", forms),
        ("singlet value", singlet),
        ("separable soundness", soundness),
        ("boundary state", ps3),
    ):
        check(name, fn)
    return results


__all__ = [
    "ScanConfig",
    "limit_temperature",
    "table",
    "fig3_data",
    "evaluate",
    "selftest",
]
