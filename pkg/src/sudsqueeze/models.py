"""Hamiltonians, thermal states and the named state families."""

from dataclasses import dataclass
from itertools import combinations
from math import comb, floor

import numpy as np

from .basis import gellmann_basis, lambda_max, spin_matrices, swap_operator
from .exceptions import (
    DimensionMismatch,
    InfeasibleGexp,
    LengthMismatch,
    ModelBuildError,
    OutOfRange,
    SingletNonexistent,
    TooFewSites,
    UnsupportedInput,
)
from .linalg import eig_hermitian, hermitian_part, random_unitary
from .states import NQuditState, collective, product_state, symmetric_projector

GROUND_RTOL = 1e-9


def _collective_squares(ops, n_sites, weights=None):
    dim = ops.shape[1] ** n_sites
    h = np.zeros((dim, dim), dtype=complex)
    for i, g in enumerate(ops):
        big = collective(g, n_sites)
        w = 1.0 if weights is None else float(weights[i])
        h += w * (big @ big)
    return h


def hamiltonian_sud_singlet(n_sites, d, basis=None):
    """``(1/N) sum_k G_k^2``; its ground states are su(d) singlets when N >= d."""
    if n_sites < 2:
        raise TooFewSites("the singlet Hamiltonian needs N >= 2")
    basis = gellmann_basis(d) if basis is None else basis
    return hermitian_part(_collective_squares(basis.generators, n_sites) / n_sites)


def hamiltonian_random_collective(n_sites, d, basis, c):
    """``(1/N) sum_k c_k G_k^2`` for real coefficients ``c``."""
    basis = gellmann_basis(d) if basis is None else basis
    c = np.asarray(c, dtype=float)
    if c.shape != (len(basis),):
        raise LengthMismatch(f"need {len(basis)} coefficients, got {c.shape}")
    return hermitian_part(_collective_squares(basis.generators, n_sites, c) / n_sites)


def hamiltonian_spin(n_sites, gamma, sign=1, spin=None, d=3):
    """``sign (1/N)(Jx^2 + Jy^2 + gamma Jz^2)``.

    ``sign=+1`` is the antiferromagnetic model, ``sign=-1`` the ferromagnetic one.
    """
    if sign not in (1, -1):
        raise OutOfRange(f"sign must be +1 or -1, got {sign}")
    spin = spin_matrices(d) if spin is None else spin
    h = _collective_squares(spin.components, n_sites, [1.0, 1.0, gamma])
    return hermitian_part(sign * h / n_sites)


class GibbsFamily:
    """Thermal states of one Hamiltonian, sharing a single eigendecomposition."""

    def __init__(self, h, d):
        self.eig = eig_hermitian(h)
        dim = self.eig.values.shape[0]
        n = round(np.log(dim) / np.log(d))
        if d**n != dim:
            raise DimensionMismatch(f"dimension {dim} is not a power of d={d}")
        self.d, self.n_sites = d, n

    @property
    def ground_energy(self):
        return float(self.eig.values[0])

    def ground_degeneracy(self):
        e = self.eig.values
        return int(np.count_nonzero(e - e[0] <= GROUND_RTOL * max(1.0, abs(e[0]))))

    def weights(self, t):
        e = self.eig.values
        if t < 0:
            raise OutOfRange(f"temperature must be >= 0, got {t}")
        if t == 0:
            w = (e - e[0] <= GROUND_RTOL * max(1.0, abs(e[0]))).astype(float)
        else:
            w = np.exp(-(e - e[0]) / t)
        return w / w.sum()

    def state(self, t):
        v = self.eig.vectors
        rho = (v * self.weights(t)) @ v.conj().T
        return NQuditState(self.d, self.n_sites, rho, physical=True, check_positivity=False)

    def reduced(self, t, keep):
        """Marginal of the thermal state on ``keep``, without forming the full matrix."""
        d, n = self.d, self.n_sites
        keep = list(keep)
        rest = [s for s in range(n) if s not in keep]
        w = self.weights(t)
        live = w > 0
        v = self.eig.vectors[:, live].reshape([d] * n + [int(live.sum())])
        v = v.transpose(keep + rest + [n]).reshape(d ** len(keep), d ** len(rest), -1)
        rho = np.einsum("aki,bki,i->ab", v, v.conj(), w[live])
        return NQuditState(d, len(keep), rho, physical=True, check_positivity=False)


def thermal_state(h, t, d):
    """``exp(-H/T)/Z``; at ``T = 0`` the equal mixture over the ground space."""
    return GibbsFamily(h, d).state(t)


def sud_singlet(n_sites, d):
    """Equal mixture of all su(d) singlets (ground space of the singlet Hamiltonian)."""
    if n_sites < d or n_sites % d:
        raise SingletNonexistent(f"an su({d}) singlet needs N to be a positive multiple of d, got N={n_sites}")
    fam = GibbsFamily(hamiltonian_sud_singlet(n_sites, d), d)
    if abs(fam.ground_energy) > 1e-8:
        raise SingletNonexistent(f"ground energy {fam.ground_energy:.3e} is not zero")
    return fam.state(0.0)


def noisy_singlet(n_sites, d, p_noise):
    """``(1-p) rho_singlet + p 1/d^N``."""
    if not 0.0 <= p_noise <= 1.0:
        raise OutOfRange(f"p_noise must be in [0, 1], got {p_noise}")
    s = sud_singlet(n_sites, d)
    dim = s.dim
    rho = (1.0 - p_noise) * s.rho + p_noise * np.eye(dim) / dim
    return NQuditState(d, n_sites, rho, physical=True, check_positivity=False)


def noisy_singlet_two_body(n_sites, d, p_noise=0.0, basis=None):
    """Closed-form average two-body state of the noisy singlet.

    ``1/d^2 - (1-p)/(2d(N-1)) sum_k g_k x g_k``; valid for any N >= d without
    building the N-site state.
    """
    if not 0.0 <= p_noise <= 1.0:
        raise OutOfRange(f"p_noise must be in [0, 1], got {p_noise}")
    if n_sites < d:
        raise SingletNonexistent(f"an su({d}) singlet needs N >= d, got N={n_sites}")
    g = (gellmann_basis(d) if basis is None else basis).generators
    gg = np.einsum("kab,kcd->acbd", g, g).reshape(d * d, d * d)
    rho = np.eye(d * d) / d**2 - (1.0 - p_noise) / (2.0 * d * (n_sites - 1)) * gg
    return NQuditState(d, 2, rho)


def noisy_singlet_flip(n_sites, d, p_noise):
    """``<F>`` of the noisy-singlet two-body state, ``[N - d^2 + p(d^2-1)]/[d(N-1)]``."""
    return (n_sites - d * d + p_noise * (d * d - 1)) / (d * (n_sites - 1))


def marginal_separability_noise(n_sites, d):
    """Noise level above which the noisy-singlet two-body state is separable.

    Equals ``(d^2 - N)/(d^2 - 1)`` for ``N < d^2`` and 0 otherwise.
    """
    return max(0.0, (d * d - n_sites) / (d * d - 1))


def white_noise_tolerance(d):
    return d / (d + 1.0)


def werner_two_qudit(fexp, d):
    """``[(d - <F>) 1 + (d<F> - 1) F] / (d^3 - d)``."""
    if not -1.0 <= fexp <= 1.0:
        raise OutOfRange(f"<F> must be in [-1, 1], got {fexp}")
    f = swap_operator(d)
    rho = ((d - fexp) * np.eye(d * d) + (d * fexp - 1.0) * f) / (d**3 - d)
    return NQuditState(d, 2, rho, physical=True)


def rho_ps3():
    """Two-qutrit PPT-violating state at the boundary of the su(3) criterion.

    Sum over the eight Gell-Mann directions of ``(1/3 + g/sqrt3) x (1/3 - g/sqrt3)``
    and its mirror, divided by 16 so that the trace is one.
    """
    g = gellmann_basis(3).generators
    eye = np.eye(3)
    rho = np.zeros((9, 9), dtype=complex)
    for gk in g:
        plus, minus = eye / 3 + gk / np.sqrt(3), eye / 3 - gk / np.sqrt(3)
        rho += np.kron(plus, minus) + np.kron(minus, plus)
    return NQuditState(3, 2, rho / 16.0, physical=True)


@dataclass(frozen=True)
class VertexFactors:
    """Single-particle ingredients of the polytope vertex states."""

    k: int
    rho_plus: np.ndarray
    rho_minus: np.ndarray
    p: float
    n_plus_exact: float
    n_plus: int
    kappa: float
    Lambda: float
    c_k: float
    physical: bool

    @property
    def epsilon(self):
        return self.n_plus_exact - self.n_plus


def vertex_factors(k, basis, gexp, n_sites):
    """``rho_pm = 1/d pm (c_k/2) g_k + (1/2) sum_{r != k} (<G_r>/N) g_r``.

    ``p`` is the larger root of ``4p(1-p) = kappa`` so that the mixture is
    polarized along ``+g_k``; ``N_+`` is ``floor(N p)``.
    """
    d = basis.d
    gexp = np.asarray(gexp, dtype=float)
    if gexp.shape != (len(basis),):
        raise LengthMismatch(f"need {len(basis)} expectation values, got {gexp.shape}")
    if not 0 <= k < len(basis):
        raise OutOfRange(f"direction {k} outside [0, {len(basis)})")
    lam_max = lambda_max(d)
    m = gexp / n_sites
    lam = lam_max - float(m @ m)
    if lam < -1e-12:
        raise InfeasibleGexp(f"|<G>|^2/N^2 = {m @ m:.6g} exceeds Lambda_max = {lam_max:.6g}")
    lam = max(lam, 0.0)
    kappa = lam / lam_max
    c_k = np.sqrt(lam + m[k] ** 2)
    side = np.eye(d) / d + 0.5 * np.einsum("r,rab->ab", np.delete(m, k), np.delete(basis.generators, k, axis=0))
    plus = side + 0.5 * c_k * basis.generators[k]
    minus = side - 0.5 * c_k * basis.generators[k]
    p = 0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - kappa)))
    exact = n_sites * p
    n_plus = int(floor(exact + 1e-12))
    lo = min(np.linalg.eigvalsh(plus)[0], np.linalg.eigvalsh(minus)[0])
    return VertexFactors(k, plus, minus, float(p), float(exact), n_plus, float(kappa), float(lam), float(c_k), bool(lo >= -1e-9))


def vertex_state_A(k, basis, gexp, n_sites):
    """``p rho_+^N + (1-p) rho_-^N``; flagged non-physical when rho_pm is not positive."""
    f = vertex_factors(k, basis, gexp, n_sites)
    plus = product_state([f.rho_plus] * n_sites).rho
    minus = product_state([f.rho_minus] * n_sites).rho
    rho = f.p * plus + (1.0 - f.p) * minus
    return NQuditState(basis.d, n_sites, rho, physical=f.physical, check_positivity=False)


def vertex_state_B(k, basis, gexp, n_sites):
    """``rho_+^{N_+} x rho_-^{N - N_+}`` with ``N_+ = floor(N p)``."""
    f = vertex_factors(k, basis, gexp, n_sites)
    factors = [f.rho_plus] * f.n_plus + [f.rho_minus] * (n_sites - f.n_plus)
    st = product_state(factors)
    return NQuditState(basis.d, n_sites, st.rho, physical=f.physical, check_positivity=False)


def dicke_state(n_sites, m):
    """Symmetric N-qubit state with ``m`` sites in ``|1>``."""
    if not 0 <= m <= n_sites:
        raise OutOfRange(f"excitation number {m} outside [0, {n_sites}]")
    psi = np.zeros(2**n_sites, dtype=complex)
    for ones in combinations(range(n_sites), m):
        idx = sum(1 << (n_sites - 1 - s) for s in ones)
        psi[idx] = 1.0
    psi /= np.sqrt(comb(n_sites, m))
    return NQuditState(2, n_sites, np.outer(psi, psi.conj()), physical=True, check_positivity=False)


def _pair_isometry():
    # qubit pairs |00>,|01>,|10>,|11>  ->  qutrit |+1>,|0>,|-1>
    w = np.zeros((3, 4))
    w[0, 3] = 1.0
    w[1, 1] = w[1, 2] = 1.0 / np.sqrt(2.0)
    w[2, 0] = 1.0
    return w


def spin1_map(state):
    """Map 2N qubits, paired as (0,1), (2,3), ..., onto N spin-1 sites."""
    if state.d != 2 or state.n_sites % 2:
        raise UnsupportedInput("spin1_map needs an even number of qubits")
    n = state.n_sites // 2
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    proj = np.outer(singlet, singlet)
    for i in range(n):
        weight = state.expect(_pair_embed(proj, i, n))
        if weight > 1e-9:
            raise UnsupportedInput(f"pair {i} has antisymmetric weight {weight:.2e}")
    w = _pair_isometry()
    big = w
    for _ in range(n - 1):
        big = np.kron(big, w)
    rho = big @ state.rho @ big.T
    return NQuditState(3, n, rho, physical=state.physical, check_positivity=False)


def _pair_embed(op, i, n_pairs):
    return np.kron(np.kron(np.eye(4**i), op), np.eye(4 ** (n_pairs - i - 1)))


def random_pure(d, rng):
    return random_unitary(d, rng)[:, 0]


def random_product(d, n_sites, rng):
    vecs = [random_pure(d, rng) for _ in range(n_sites)]
    return [np.outer(v, v.conj()) for v in vecs]


def random_separable(d, n_sites, rng, max_terms=5):
    """Mixture of up to ``max_terms`` Haar-random pure product states, Dirichlet weights."""
    terms = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(terms))
    dim = d**n_sites
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        rho += w * product_state(random_product(d, n_sites, rng)).rho
    return NQuditState(d, n_sites, rho, physical=True, check_positivity=False)


def random_density(d, n_sites, rng, rank=None):
    """Hilbert-Schmidt random state (Ginibre ``A A^H``, optional rank)."""
    dim = d**n_sites
    rank = dim if rank is None else rank
    a = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = a @ a.conj().T
    return NQuditState(d, n_sites, rho / np.trace(rho).real, physical=True, check_positivity=False)


def random_bosonic(d, n_sites, rng, rank=None):
    """Random state projected onto the symmetric subspace and renormalized."""
    p = symmetric_projector(d, n_sites)
    rho = p @ random_density(d, n_sites, rng, rank).rho @ p
    return NQuditState(d, n_sites, rho / np.trace(rho).real, physical=True, check_positivity=False)


def random_permutation_invariant(d, n_sites, rng, rank=None):
    """Random state averaged over all site permutations."""
    from itertools import permutations

    rho = random_density(d, n_sites, rng, rank).rho
    dim = d**n_sites
    t = rho.reshape([d] * (2 * n_sites))
    perms = list(permutations(range(n_sites)))
    total = np.zeros_like(t)
    for perm in perms:
        total += t.transpose(list(perm) + [n_sites + s for s in perm])
    return NQuditState(d, n_sites, total.reshape(dim, dim) / len(perms), physical=True, check_positivity=False)


MODEL_NAMES = ("sud-singlet", "random-collective", "spin", "spin-ferro")


def build_hamiltonian(spec):
    """Build ``(H, d, N)`` from a model spec dictionary.

    Keys: ``model`` (one of :data:`MODEL_NAMES`), ``N``, ``d`` (default 3),
    ``gamma`` (spin models), ``c`` or ``seed`` (random-collective; coefficients
    default to uniform on [-1, 1]).
    """
    try:
        model = spec["model"]
        n = int(spec["N"])
        d = int(spec.get("d", 3))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelBuildError(f"bad model spec: {exc}") from exc
    if model not in MODEL_NAMES:
        raise ModelBuildError(f"unknown model {model!r}; expected one of {', '.join(MODEL_NAMES)}")
    if n < 2 or d < 2:
        raise ModelBuildError(f"need N >= 2 and d >= 2, got N={n}, d={d}")
    if d**n > 3**7:
        raise ModelBuildError(f"d^N = {d**n} exceeds the dense-matrix ceiling {3**7}")
    if model == "sud-singlet":
        h = hamiltonian_sud_singlet(n, d)
    elif model == "random-collective":
        if spec.get("c") is not None:
            c = spec["c"]
        else:
            c = np.random.default_rng(spec.get("seed", 0)).uniform(-1.0, 1.0, d * d - 1)
        h = hamiltonian_random_collective(n, d, None, c)
    else:
        gamma = float(spec.get("gamma", 1.0))
        h = hamiltonian_spin(n, gamma, 1 if model == "spin" else -1, d=d)
    return h, d, n
