"""Geometry of the su(d)-squeezing inequalities at fixed collective polarization.

A state maps to ``x = (x_1, ..., x_{d^2-1}, x_{d^2})`` with ``x_k = U_kk/N^2``
and ``x_{d^2} = [(N+d) Lambda_max - Tr(C)/N] / (N(N-1))``. The inequalities
cut out a polytope whose vertices ``A_k``, ``B_k`` are known in closed form.
Coordinates presume the basis diagonalizes U; use :func:`eigenframe_point`
for arbitrary bundles.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .basis import gellmann_basis, lambda_max
from .correlations import collective_bundle
from .criteria import diagonal_frame
from .exceptions import InfeasibleGexp, LengthMismatch
from .models import vertex_factors, vertex_state_A, vertex_state_B


@dataclass(frozen=True, eq=False)
class PolytopePoint:
    d: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.d * self.d,):
            raise LengthMismatch(f"a point needs {self.d * self.d} coordinates, got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("polytope coordinates must be finite")
        object.__setattr__(self, "coords", c)

    @property
    def x(self):
        """The ``d^2 - 1`` generator coordinates."""
        return self.coords[:-1]

    @property
    def last(self):
        """The bosonic-symmetry coordinate ``x_{d^2}``."""
        return float(self.coords[-1])

    def to_list(self):
        return [float(v) for v in self.coords]


@dataclass(frozen=True, eq=False)
class PolytopeSpec:
    d: int
    n_sites: int
    gexp: np.ndarray
    Lambda: float
    kappa: float
    A: list
    B: list

    def residuals(self):
        """Constraint residuals ``|N x_{d^2} + sum x_k - Lambda|`` of every vertex."""
        return [normconst_residual(p, self.n_sites, self.Lambda) for p in self.A + self.B]

    def to_dict(self):
        return {
            "d": self.d,
            "N": self.n_sites,
            "Lambda": self.Lambda,
            "kappa": self.kappa,
            "vertices": {"A": [p.to_list() for p in self.A], "B": [p.to_list() for p in self.B]},
            "constraint_residuals": self.residuals(),
        }


def polarization_budget(gexp, n_sites, d):
    """``Lambda = Lambda_max - |<G>|^2/N^2``."""
    m = np.asarray(gexp, dtype=float) / n_sites
    return lambda_max(d) - float(m @ m)


def coordinates(bundle):
    """Polytope point of a bundle in the bundle's own frame."""
    n, d = bundle.n_sites, bundle.d
    xk = np.diag(bundle.U) / n**2
    last = ((n + d) * lambda_max(d) - np.trace(bundle.C) / n) / (n * (n - 1))
    return PolytopePoint(d, np.append(xk, last))


def eigenframe_point(bundle):
    """Coordinates after rotating to the frame where U is diagonal."""
    rot, _ = diagonal_frame(bundle)
    return coordinates(rot)


def normconst_residual(point, n_sites, budget):
    return float(abs(n_sites * point.last + point.x.sum() - budget))


def bundle_residual(bundle):
    """Constraint residual of a bundle's own point."""
    return normconst_residual(coordinates(bundle), bundle.n_sites, polarization_budget(bundle.gexp, bundle.n_sites, bundle.d))


def vertices(gexp, n_sites, d):
    """Closed-form vertices ``A_k`` and ``B_k`` for a fixed collective polarization."""
    gexp = np.asarray(gexp, dtype=float)
    if gexp.shape != (d * d - 1,):
        raise LengthMismatch(f"need {d * d - 1} expectation values, got {gexp.shape}")
    lam = polarization_budget(gexp, n_sites, d)
    if lam < -1e-12:
        raise InfeasibleGexp(f"|<G>|^2/N^2 exceeds Lambda_max by {-lam:.3e}")
    lam = max(lam, 0.0)
    kappa = lam / lambda_max(d)
    m2 = (gexp / n_sites) ** 2
    a_pts, b_pts = [], []
    for k in range(d * d - 1):
        base = kappa * m2.copy()
        base[k] = kappa * (lam + m2[k])
        a_pts.append(PolytopePoint(d, np.append(base, 0.0)))
        b_pts.append(PolytopePoint(d, -np.append(base, -lam) / (n_sites - 1)))
    return PolytopeSpec(d, n_sites, gexp, float(lam), float(kappa), a_pts, b_pts)


def facet_margin(point, subset, n_sites):
    """``N^2 (x_{d^2} + sum_{k in I'} x_k)``; non-negative inside the polytope."""
    idx = list(subset)
    return float(n_sites**2 * (point.last + point.x[idx].sum()))


def signed_distance(point, subset):
    """Signed distance ``x_{d^2} + sum_{i in I} x_i`` to the facet labelled by ``I``."""
    idx = list(subset)
    return float(point.last + point.x[idx].sum())


def xi_from_point(point, n_sites):
    """``N^2`` times the smallest facet distance; the point must be in the U-diagonal frame."""
    x = point.x
    return float(n_sites**2 * (point.last + x[x < 0].sum()))


def min_facet_margin(point, n_sites):
    """Explicit minimum over all ``2^(d^2-1)`` facets (only sensible for d <= 3)."""
    k = point.x.shape[0]
    return min(facet_margin(point, sub, n_sites) for r in range(k + 1) for sub in combinations(range(k), r))


def l1_distance(p, q):
    return float(np.abs(p.coords - q.coords).sum())


def vertex_correspondence_check(gexp, n_sites, d, k, basis=None):
    """Compare the coordinates of the vertex states with the closed-form vertices.

    ``A_match`` and ``B_match`` are max-abs coordinate differences. When
    ``N p`` is not an integer, ``B_displacement`` is the L1 distance between
    the realized point and ``B_k`` and ``edge`` the L1 length ``|B_k - B_l|``
    it should be compared against.
    """
    basis = gellmann_basis(d) if basis is None else basis
    spec = vertices(gexp, n_sites, d)
    f = vertex_factors(k, basis, gexp, n_sites)
    pa = coordinates(collective_bundle(vertex_state_A(k, basis, gexp, n_sites), basis))
    pb = coordinates(collective_bundle(vertex_state_B(k, basis, gexp, n_sites), basis))
    other = (k + 1) % (d * d - 1)
    edge = l1_distance(spec.B[k], spec.B[other])
    disp = l1_distance(pb, spec.B[k])
    return {
        "k": k,
        "p": f.p,
        "n_plus": f.n_plus,
        "epsilon": f.epsilon,
        "integer_n_plus": bool(abs(f.epsilon) <= 1e-9),
        "physical": f.physical,
        "A_match": float(np.abs(pa.coords - spec.A[k].coords).max()),
        "B_match": float(np.abs(pb.coords - spec.B[k].coords).max()),
        "B_displacement": disp,
        "edge": edge,
        "ratio": disp / edge if edge > 0 else float("inf") if disp > 0 else 0.0,
    }
