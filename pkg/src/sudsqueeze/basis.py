"""Single-particle operator bases: Gell-Mann, spin-j, and friends.

All generator sets use the normalization ``Tr(g_k g_l) = 2 delta_kl``. For
``d = 2`` the Gell-Mann construction returns the Pauli matrices.
"""

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AlreadyExtended,
    IndexOutOfRange,
    InvalidDimension,
    InvariantViolation,
    NotOrthogonal,
    ParseError,
)

SU = "su"
EXTENDED = "u"


def lambda_max(d):
    """Squared maximal length of the single-particle Bloch vector, 2(d-1)/d."""
    return 2.0 * (d - 1) / d


def q0(d):
    return 2.0 / d


@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Ordered Hermitian generators stacked as a ``(K, d, d)`` array.

    ``kind`` is ``"su"`` for the d^2-1 traceless generators or ``"u"`` when
    the normalized identity has been prepended at index 0.
    """

    d: int
    generators: np.ndarray
    kind: str = SU

    def __len__(self):
        return self.generators.shape[0]

    def __getitem__(self, k):
        if not -len(self) <= k < len(self):
            raise IndexOutOfRange(f"generator index {k} outside [0, {len(self)})")
        return self.generators[k]

    def __iter__(self):
        return iter(self.generators)

    def gram(self):
        """Real matrix ``Tr(g_k g_l)``."""
        g = self.generators
        return np.einsum("kab,lba->kl", g, g).real

    def validate(self, atol=1e-12):
        """Raise :class:`InvariantViolation` naming the first broken invariant."""
        d, g = self.d, self.generators
        expected = d * d - 1 if self.kind == SU else d * d
        if g.shape != (expected, d, d):
            raise InvariantViolation("generator count", f"shape {g.shape}, expected ({expected}, {d}, {d})")
        herm = np.abs(g - g.conj().transpose(0, 2, 1)).max()
        if herm > atol:
            raise InvariantViolation("hermiticity", f"max deviation {herm:.2e}")
        gram_err = np.abs(self.gram() - 2.0 * np.eye(expected)).max()
        if gram_err > atol:
            raise InvariantViolation("normalization Tr(g_k g_l) = 2 delta_kl", f"max deviation {gram_err:.2e}")
        if self.kind == SU:
            tr = np.abs(np.einsum("kaa->k", g)).max()
            if tr > atol:
                raise InvariantViolation("tracelessness", f"max |Tr g_k| = {tr:.2e}")
            casimir = np.einsum("kab,kbc->ac", g, g)
            target = (d + 1) * lambda_max(d) * np.eye(d)
            err = np.abs(casimir - target).max()
            if err > atol:
                raise InvariantViolation("sum of squares (d+1) Lambda_max", f"max deviation {err:.2e}")
        else:
            err = np.abs(g[0] - np.sqrt(2.0 / d) * np.eye(d)).max()
            if err > atol:
                raise InvariantViolation("g_0 = sqrt(2/d) identity", f"max deviation {err:.2e}")
        return self

    def to_dict(self):
        return {
            "d": self.d,
            "kind": self.kind,
            "generators": [[[[float(z.real), float(z.imag)] for z in row] for row in g] for g in self.generators],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        try:
            d = int(data["d"])
            kind = data["kind"]
            arr = np.array(data["generators"], dtype=float)
            gens = arr[..., 0] + 1j * arr[..., 1]
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed basis document: {exc}") from exc
        if kind not in (SU, EXTENDED):
            raise ParseError(f"unknown basis kind {kind!r}")
        return cls(d, gens, kind).validate(atol=1e-10)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return cls.from_dict(data)


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Spin-j matrices for ``j = (d-1)/2`` in the ``|j, m>`` basis, m descending."""

    d: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray

    @property
    def j(self):
        return (self.d - 1) / 2.0

    @property
    def components(self):
        return np.stack([self.jx, self.jy, self.jz])

    def validate(self, atol=1e-12):
        jx, jy, jz = self.jx, self.jy, self.jz
        for a, b, c, name in ((jx, jy, jz, "[jx,jy]=i jz"), (jy, jz, jx, "[jy,jz]=i jx"), (jz, jx, jy, "[jz,jx]=i jy")):
            err = np.abs(a @ b - b @ a - 1j * c).max()
            if err > atol:
                raise InvariantViolation(name, f"max deviation {err:.2e}")
        j = self.j
        err = np.abs(jx @ jx + jy @ jy + jz @ jz - j * (j + 1) * np.eye(self.d)).max()
        if err > atol:
            raise InvariantViolation("casimir j(j+1)", f"max deviation {err:.2e}")
        return self


def _check_dim(d):
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimension(f"local dimension must be an integer >= 2, got {d!r}")


def gellmann_basis(d):
    """Generalized Gell-Mann matrices with ``Tr(g_k g_l) = 2 delta_kl``.

    Order: symmetric off-diagonal pairs, antisymmetric off-diagonal pairs
    (both lexicographic in ``(j, k)`` with ``j < k``), then the ``d-1``
    diagonal generators.
    """
    _check_dim(d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    gens = []
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        gens.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        gens.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(complex))
    return GeneratorBasis(d, np.array(gens), SU)


def spin_matrices(d):
    _check_dim(d)
    j = (d - 1) / 2.0
    m = j - np.arange(d)
    jp = np.zeros((d, d))
    for i in range(1, d):
        jp[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jx = (jp + jp.T) / 2.0
    jy = (jp - jp.T) / 2.0j
    return SpinOperators(d, jx.astype(complex), jy.astype(complex), np.diag(m).astype(complex))


def anticomm_basis_d3():
    """The spin-1 basis {jx, jy, jz, {jx,jy}, {jy,jz}, {jx,jz}, jx^2-jy^2, sqrt3 jz^2 - 2/sqrt3}."""
    s = spin_matrices(3)
    jx, jy, jz = s.jx, s.jy, s.jz

    def anti(a, b):
        return a @ b + b @ a

    gens = [
        jx,
        jy,
        jz,
        anti(jx, jy),
        anti(jy, jz),
        anti(jx, jz),
        jx @ jx - jy @ jy,
        np.sqrt(3.0) * jz @ jz - (2.0 / np.sqrt(3.0)) * np.eye(3),
    ]
    return GeneratorBasis(3, np.array(gens, dtype=complex), SU)


def swap_operator(d):
    """Two-qudit swap built from the permutation definition."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            f[b * d + a, a * d + b] = 1.0
    return f


def flip_operator(d):
    """F = (1/d) 1 x 1 + (1/2) sum_k g_k x g_k, from the Gell-Mann generators."""
    g = gellmann_basis(d).generators
    return np.eye(d * d, dtype=complex) / d + 0.5 * np.einsum("kab,kcd->acbd", g, g).reshape(d * d, d * d)


def apply_orthogonal(basis, o, atol=1e-10):
    """Rotate generators: ``g'_k = sum_l O_kl g_l``."""
    o = np.asarray(o, dtype=float)
    n = len(basis)
    if o.shape != (n, n):
        raise NotOrthogonal(f"expected a {n}x{n} matrix, got {o.shape}")
    err = np.abs(o @ o.T - np.eye(n)).max()
    if err > atol:
        raise NotOrthogonal(f"O O^T deviates from identity by {err:.2e}")
    return GeneratorBasis(basis.d, np.einsum("kl,lab->kab", o, basis.generators), basis.kind)


def extend_ud(basis):
    """Prepend ``g_0 = sqrt(2/d) 1`` to an su(d) basis."""
    if basis.kind != SU:
        raise AlreadyExtended("basis already contains the identity generator")
    g0 = np.sqrt(2.0 / basis.d) * np.eye(basis.d, dtype=complex)
    return GeneratorBasis(basis.d, np.concatenate([g0[None], basis.generators]), EXTENDED)
