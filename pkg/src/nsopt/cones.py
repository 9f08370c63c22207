"""Polyhedral cone algebra: representations, polarity, membership,
projection, and linear maximization over the cone-sphere intersection.

Cones are closed and convex with vertex at the origin, kept at desk scale
(ambient dimension <= 4, <= 16 generators) so that conversions between the
generator and halfspace representations can be exact subset enumerations.
The polarity convention is the positive one: the polar of C is
{y : <y, x> >= 0 for all x in C} (the dual cone).
"""

from __future__ import annotations

import itertools
import math
from typing import Optional

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import nnls

from .errors import ConfigurationError, PreconditionError

Array = np.ndarray

MAX_DIM = 4
MAX_GENERATORS = 16
FEAS_TOL = 1e-9


def _dedupe_rays(rays: list[Array], tol: float = 1e-9) -> list[Array]:
    out: list[Array] = []
    for r in rays:
        n = float(np.linalg.norm(r))
        if n <= tol:
            continue
        r = r / n
        if not any(float(np.linalg.norm(r - s)) <= tol for s in out):
            out.append(r)
    return out


def _extreme_rays(halfspaces: Array, dim: int) -> list[Array]:
    """Generators of {x : A x >= 0} by enumeration (lineality + edges)."""
    A = np.asarray(halfspaces, dtype=float).reshape(-1, dim)
    if A.shape[0] == 0:
        rays = []
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = 1.0
            rays += [e, -e]
        return rays

    rays: list[Array] = []
    kern = null_space(A, rcond=1e-10)
    for j in range(kern.shape[1]):
        rays += [kern[:, j], -kern[:, j]]

    # Pointed part lives in the row space of A.
    u, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)))
    if rank == 0:
        return _dedupe_rays(rays)
    W = vt[:rank].T  # dim x m, orthonormal columns spanning the row space
    Abar = A @ W
    m = rank
    scale = max(1.0, float(np.max(np.abs(Abar))))

    def feasible(w: Array) -> bool:
        return bool(np.all(Abar @ w >= -FEAS_TOL * scale))

    if m == 1:
        for sgn in (1.0, -1.0):
            w = np.array([sgn])
            if feasible(w):
                rays.append(W @ w)
    else:
        nrows = Abar.shape[0]
        for subset in itertools.combinations(range(nrows), m - 1):
            sub = Abar[list(subset)]
            kern_sub = null_space(sub, rcond=1e-10) if subset else np.eye(m)
            if kern_sub.shape[1] != 1:
                continue
            v = kern_sub[:, 0]
            for sgn in (1.0, -1.0):
                w = sgn * v
                if feasible(w):
                    rays.append(W @ w)
    return _dedupe_rays(rays)


class PolyhedralCone:
    """Closed convex cone given by generators, halfspaces, or both.

    Missing representations are derived lazily by the polarity machinery
    and cached, as are the orthonormal bases of the generator-subset faces
    used by projection.
    """

    def __init__(self, dim: int, generators=None, halfspaces=None):
        if generators is None and halfspaces is None:
            raise ConfigurationError("need generators or halfspaces")
        if dim < 1:
            raise ConfigurationError("dimension must be positive")
        self.dim = int(dim)
        self._generators: Optional[Array] = None
        self._halfspaces: Optional[Array] = None
        if generators is not None:
            g = np.asarray(generators, dtype=float).reshape(-1, self.dim)
            norms = np.linalg.norm(g, axis=1)
            g = g[norms > 1e-14]
            g = g / np.linalg.norm(g, axis=1, keepdims=True) if len(g) else g
            self._generators = g
        if halfspaces is not None:
            h = np.asarray(halfspaces, dtype=float).reshape(-1, self.dim)
            norms = np.linalg.norm(h, axis=1)
            h = h[norms > 1e-14]
            h = h / np.linalg.norm(h, axis=1, keepdims=True) if len(h) else h
            self._halfspaces = h
        self._face_bases: Optional[list[Array]] = None
        self._irredundant: Optional[Array] = None

    # -- representations -------------------------------------------------

    @staticmethod
    def orthant(dim: int) -> "PolyhedralCone":
        return PolyhedralCone(dim, generators=np.eye(dim), halfspaces=np.eye(dim))

    @staticmethod
    def zero(dim: int) -> "PolyhedralCone":
        h = np.vstack([np.eye(dim), -np.eye(dim)])
        return PolyhedralCone(dim, generators=np.zeros((0, dim)), halfspaces=h)

    @staticmethod
    def from_literal(spec: dict, dim: Optional[int] = None) -> "PolyhedralCone":
        """JSON literal: {"generators": [[...]]} or {"halfspaces": [[...]]}."""
        gens = spec.get("generators")
        hs = spec.get("halfspaces")
        if gens is None and hs is None:
            raise ConfigurationError("cone literal needs generators or halfspaces")
        rows = gens if gens is not None else hs
        d = dim if dim is not None else len(rows[0])
        return PolyhedralCone(d, generators=gens, halfspaces=hs)

    def _check_budget(self):
        if self.dim > MAX_DIM:
            raise ConfigurationError(f"cone dimension {self.dim} exceeds {MAX_DIM}")
        if self._generators is not None and len(self._generators) > MAX_GENERATORS:
            raise ConfigurationError(
                f"{len(self._generators)} generators exceed {MAX_GENERATORS}"
            )
        if self._halfspaces is not None and len(self._halfspaces) > MAX_GENERATORS:
            raise ConfigurationError(
                f"{len(self._halfspaces)} halfspaces exceed {MAX_GENERATORS}"
            )

    @property
    def generators(self) -> Array:
        if self._generators is None:
            self._check_budget()
            rays = _extreme_rays(self._halfspaces, self.dim)
            self._generators = (
                np.array(rays) if rays else np.zeros((0, self.dim))
            )
        return self._generators

    @property
    def halfspaces(self) -> Array:
        if self._halfspaces is None:
            self._check_budget()
            # halfspaces of C = generators of the polar cone
            rays = _extreme_rays(self.generators, self.dim)
            self._halfspaces = np.array(rays) if rays else np.zeros((0, self.dim))
        return self._halfspaces

    def is_orthant(self) -> bool:
        g = self.generators
        if g.shape[0] != self.dim:
            return False
        return bool(np.allclose(np.sort(np.argmax(g, axis=1)), np.arange(self.dim))
                    and np.allclose(g[np.argsort(np.argmax(g, axis=1))], np.eye(self.dim),
                                    atol=1e-12))

    # -- predicates -------------------------------------------------------

    def contains(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        H = self.halfspaces
        if H.shape[0] == 0:
            return True
        return bool(np.all(H @ x >= -tol * max(1.0, float(np.linalg.norm(x)))))

    def irredundant_halfspaces(self) -> Array:
        """Drop halfspaces implied by the others (conic combination test)."""
        if self._irredundant is not None:
            return self._irredundant
        H = self.halfspaces
        keep = []
        for i in range(H.shape[0]):
            others = np.delete(H, i, axis=0)
            if others.shape[0] == 0:
                keep.append(i)
                continue
            coeffs, resid = nnls(others.T, H[i])
            if resid > 1e-9:
                keep.append(i)
        self._irredundant = H[keep] if keep else np.zeros((0, self.dim))
        return self._irredundant

    def interior_contains(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        if np.linalg.matrix_rank(self.generators, tol=1e-10) < self.dim:
            return False
        H = self.irredundant_halfspaces()
        if H.shape[0] == 0:
            return True
        return bool(np.all(H @ x > tol))

    def check_representations(
        self, rng: np.random.Generator, n_samples: int = 100, tol: float = 1e-9
    ) -> bool:
        """Cross-check that both representations describe the same set:
        every generator satisfies every halfspace, and sampled
        halfspace-feasible points are nonnegative generator combinations."""
        G, H = self.generators, self.halfspaces
        for g in G:
            if H.shape[0] and np.min(H @ g) < -tol:
                return False
        if G.shape[0] == 0:
            return True
        count = 0
        attempts = 0
        while count < n_samples and attempts < 50 * n_samples:
            attempts += 1
            z = rng.standard_normal(self.dim)
            if H.shape[0] and np.min(H @ z) < 0.0:
                # fall back to a feasible point built from the generators
                coeffs = rng.uniform(size=G.shape[0])
                z = coeffs @ G
            _, resid = nnls(G.T, z)
            if resid > tol * max(1.0, float(np.linalg.norm(z))):
                return False
            count += 1
        return True

    # -- faces -----------------------------------------------------------

    def _faces(self) -> list[Array]:
        """Orthonormal bases of the spans of all generator subsets."""
        if self._face_bases is None:
            self._check_budget()
            g = self.generators
            bases: list[Array] = []
            seen: set[bytes] = set()
            for size in range(1, g.shape[0] + 1):
                for subset in itertools.combinations(range(g.shape[0]), size):
                    sub = g[list(subset)]
                    q, r = np.linalg.qr(sub.T)
                    rank = int(np.sum(np.abs(np.diag(r)) > 1e-12))
                    basis = q[:, :rank]
                    key = np.round(basis @ basis.T, 9).tobytes()
                    if key not in seen:
                        seen.add(key)
                        bases.append(basis)
            self._face_bases = bases
        return self._face_bases


def polar(C: PolyhedralCone) -> PolyhedralCone:
    """Positive polar (dual) cone: halfspaces are C's generators."""
    C._check_budget()
    gens = C.generators
    if gens.shape[0] == 0:
        # polar of the zero cone is the whole space
        rays = _extreme_rays(np.zeros((0, C.dim)), C.dim)
        return PolyhedralCone(C.dim, generators=rays,
                              halfspaces=np.zeros((0, C.dim)))
    rays = _extreme_rays(gens, C.dim)
    return PolyhedralCone(C.dim, generators=rays, halfspaces=gens)


def double_polar_check(C: PolyhedralCone, tol: float = 1e-9) -> bool:
    """Set equality of C and the polar of its polar, by mutual containment."""
    D = polar(polar(C))
    for g in C.generators:
        if not D.contains(g, tol):
            return False
    for g in D.generators:
        if not C.contains(g, tol):
            return False
    return True


def contains(C: PolyhedralCone, x, tol: float = 1e-12) -> bool:
    return C.contains(x, tol)


def interior_contains(C: PolyhedralCone, x, tol: float = 1e-12) -> bool:
    return C.interior_contains(x, tol)


def separate(C: PolyhedralCone, x) -> Optional[Array]:
    """A functional in the polar cone strictly negative on x, when x is
    outside C; None when x is inside."""
    x = np.asarray(x, dtype=float)
    if C.contains(x):
        return None
    H = C.halfspaces
    values = H @ x
    lam = H[int(np.argmin(values))]
    return lam


def project(C: PolyhedralCone, a) -> Array:
    """Euclidean projection onto the cone via face enumeration.

    Each candidate is the orthogonal projection of ``a`` onto a generator
    subset's span; candidates inside the cone compete by distance.  Exact
    for polyhedral cones at this scale."""
    a = np.asarray(a, dtype=float)
    if C.is_orthant():
        return np.clip(a, 0.0, None)
    if C.generators.shape[0] == 0:
        return np.zeros(C.dim)
    best = np.zeros(C.dim)
    best_d = float(np.linalg.norm(a))
    for basis in C._faces():
        p = basis @ (basis.T @ a)
        if not C.contains(p, tol=FEAS_TOL):
            continue
        d = float(np.linalg.norm(a - p))
        if d < best_d - 1e-15:
            best_d = d
            best = p
    return best


def sphere_max(C: PolyhedralCone, a) -> tuple[float, Array]:
    """Maximum of <a, y> over the unit vectors of the cone, with argmax.

    When the projection of ``a`` onto the cone is nonzero its normalization
    is the maximizer and the value is the projection norm; otherwise the
    maximum is attained on a face and candidates are the in-face span
    projections plus the normalized generators."""
    a = np.asarray(a, dtype=float)
    gens = C.generators
    if gens.shape[0] == 0:
        raise PreconditionError("sphere_max needs a nonzero cone")
    p = project(C, a)
    np_ = float(np.linalg.norm(p))
    if np_ > 1e-12:
        arg = p / np_
        return float(a @ arg), arg

    candidates = [g for g in gens]
    if not C.is_orthant():
        for basis in C._faces():
            q = basis @ (basis.T @ a)
            nq = float(np.linalg.norm(q))
            if nq > 1e-12 and C.contains(q, tol=FEAS_TOL):
                candidates.append(q / nq)
    best_val = -math.inf
    best_arg = candidates[0]
    for c in candidates:
        v = float(a @ c)
        if v > best_val:
            best_val = v
            best_arg = c
    return best_val, best_arg


def product_cone(A: PolyhedralCone, B: PolyhedralCone) -> PolyhedralCone:
    """Cartesian product, assembled from both block representations."""
    dim = A.dim + B.dim
    gens = []
    for g in A.generators:
        gens.append(np.concatenate([g, np.zeros(B.dim)]))
    for g in B.generators:
        gens.append(np.concatenate([np.zeros(A.dim), g]))
    hs = []
    for h in A.halfspaces:
        hs.append(np.concatenate([h, np.zeros(B.dim)]))
    for h in B.halfspaces:
        hs.append(np.concatenate([np.zeros(A.dim), h]))
    return PolyhedralCone(dim, generators=np.array(gens) if gens else np.zeros((0, dim)),
                          halfspaces=np.array(hs) if hs else np.zeros((0, dim)))


def random_cone(rng: np.random.Generator, dim: int, n_generators: int) -> PolyhedralCone:
    g = rng.standard_normal((n_generators, dim))
    return PolyhedralCone(dim, generators=g)
