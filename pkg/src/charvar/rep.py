"""Representations of punctured-sphere and genus-2 surface groups in SU(2).

A representation of the k-punctured sphere group with traceless boundary
holonomy is stored as its tuple of meridian images: k pure unit quaternions
whose ordered product is 1.  A genus-2 surface representation is stored by
the images of the four standard generators r1, s1, r2, s2, subject to
[r1,s1][r2,s2] = 1.

The fingerprint of a representation collects the real parts (half-traces)
of all words of length at most three in the generators, in a fixed order.
These are conjugation invariants and separate conjugacy classes at the
scales this package works at; the numerical conjugator search in
:mod:`charvar.variety` backstops that claim in the test suite.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import (
    ConstraintViolated,
    NotBinaryDihedral,
    NotTraceless,
    ProductNotIdentity,
    RelationViolated,
)
from .quat import I, K, ONE, gprod, qconj, qinv, qmul

TOL_REL = 1e-10
FP_TOL = 1e-9

GENERATOR_NAMES = ("r1", "s1", "r2", "s2")


@dataclass(frozen=True)
class PuncturedSphereRep:
    """Meridian images of a k-punctured sphere representation, shape (k, 4)."""

    meridians: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.meridians, dtype=float)
        if m.ndim != 2 or m.shape[1] != 4 or m.shape[0] < 3:
            raise ValueError(f"meridians must have shape (k, 4) with k >= 3, got {m.shape}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "meridians", m)

    @property
    def k(self) -> int:
        return self.meridians.shape[0]

    def meridian(self, index: int) -> np.ndarray:
        return self.meridians[index]


@dataclass(frozen=True)
class SurfaceRep:
    """Images of the genus-2 generators, each a unit quaternion."""

    r1: np.ndarray
    s1: np.ndarray
    r2: np.ndarray
    s2: np.ndarray

    def __post_init__(self):
        for name in GENERATOR_NAMES:
            g = np.asarray(getattr(self, name), dtype=float)
            if g.shape != (4,):
                raise ValueError(f"generator {name} must have shape (4,), got {g.shape}")
            g = g.copy()
            g.flags.writeable = False
            object.__setattr__(self, name, g)

    def generators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.r1, self.s1, self.r2, self.s2)


def make_rep(meridians, tol: float = TOL_REL) -> PuncturedSphereRep:
    """Validating constructor.  Renormalizes unit norms, then checks that every
    meridian is traceless and that the ordered product is the identity.
    Violations raise; nothing is repaired."""
    m = np.array(meridians, dtype=float)
    if m.ndim != 2 or m.shape[1] != 4:
        raise ValueError(f"expected (k, 4) meridian array, got {m.shape}")
    for idx in range(m.shape[0]):
        n = np.sqrt(np.dot(m[idx], m[idx]))
        if abs(n - 1.0) > 1e-6:
            raise ValueError(f"meridian {idx} is not a unit quaternion: |q| = {n:.6f}")
        m[idx] /= n
    for idx in range(m.shape[0]):
        if abs(m[idx, 0]) > tol:
            raise NotTraceless(idx, float(m[idx, 0]))
    residual = float(np.linalg.norm(gprod(list(m)) - ONE))
    if residual > tol:
        raise ProductNotIdentity(residual)
    return PuncturedSphereRep(m)


def complete_rep(partial, tol: float = TOL_REL) -> PuncturedSphereRep:
    """Append the forced last meridian (q1...q_{k-1})^-1 to a partial tuple.

    Requires |re(q1...q_{k-1})| <= tol, which is exactly the condition for the
    appended inverse to be traceless.
    """
    part = np.array(partial, dtype=float)
    p = gprod(list(part))
    if abs(p[0]) > tol:
        raise ConstraintViolated(f"partial product has re = {p[0]:.3e}, not on the variety")
    return make_rep(np.vstack([part, qinv(p)]), tol=tol)


def make_surface_rep(r1, s1, r2, s2, tol: float = TOL_REL) -> SurfaceRep:
    """Validating constructor; checks the relation [r1,s1][r2,s2] = 1."""
    gens = []
    for name, g in zip(GENERATOR_NAMES, (r1, s1, r2, s2)):
        g = np.asarray(g, dtype=float)
        n = np.sqrt(np.dot(g, g))
        if abs(n - 1.0) > 1e-6:
            raise ValueError(f"generator {name} is not a unit quaternion: |q| = {n:.6f}")
        gens.append(g / n)
    r1, s1, r2, s2 = gens
    rel = gprod(quat.commutator(r1, s1), quat.commutator(r2, s2))
    residual = float(np.linalg.norm(rel - ONE))
    if residual > tol:
        raise RelationViolated(residual)
    return SurfaceRep(r1, s1, r2, s2)


def conjugate_rep(g: np.ndarray, rep: PuncturedSphereRep) -> PuncturedSphereRep:
    """Apply a global conjugation g . g^-1 to every meridian."""
    return make_rep([quat.conjugate(g, m) for m in rep.meridians])


def alpha_star(rep: PuncturedSphereRep) -> PuncturedSphereRep:
    """Negate every meridian.  Defined for even k only: an odd number of sign
    flips would break the product relation."""
    if rep.k % 2 != 0:
        raise ValueError(f"sign involution needs even k, got k = {rep.k}")
    return make_rep(-rep.meridians)


# ---------------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class Fingerprint:
    """Half-traces of all words of length <= 3, with their labels."""

    labels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (len(self.labels),):
            raise ValueError("labels and values disagree in length")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def distance(self, other: "Fingerprint") -> float:
        if self.labels != other.labels:
            raise ValueError("fingerprints over different word lists are not comparable")
        return float(np.max(np.abs(self.values - other.values)))

    def close(self, other: "Fingerprint", tol: float = FP_TOL) -> bool:
        return self.distance(other) <= tol


def word_indices(k: int) -> list[tuple[int, ...]]:
    """Index words: singles, then pairs i<j, then triples i<j<l, lexicographic."""
    singles = [(i,) for i in range(k)]
    pairs = list(itertools.combinations(range(k), 2))
    triples = list(itertools.combinations(range(k), 3))
    return singles + pairs + triples


def word_labels(names: tuple[str, ...]) -> tuple[str, ...]:
    return tuple("*".join(names[i] for i in w) for w in word_indices(len(names)))


def _fingerprint_values(elements: np.ndarray) -> np.ndarray:
    k = elements.shape[0]
    vals = [elements[i, 0] for i in range(k)]
    pair_prod = {}
    for i, j in itertools.combinations(range(k), 2):
        p = qmul(elements[i], elements[j])
        pair_prod[(i, j)] = p
        vals.append(p[0])
    for i, j, l in itertools.combinations(range(k), 3):
        p = pair_prod[(i, j)]
        q = elements[l]
        # only the real part of p * q is needed
        vals.append(p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3])
    return np.array(vals)


def fingerprint(rep: "PuncturedSphereRep | SurfaceRep") -> Fingerprint:
    """Conjugation-invariant coordinates of a representation."""
    if isinstance(rep, SurfaceRep):
        elements = np.stack(rep.generators())
        names = GENERATOR_NAMES
    else:
        elements = rep.meridians
        names = tuple(f"x{i + 1}" for i in range(rep.k))
    return Fingerprint(word_labels(names), _fingerprint_values(elements))


def fingerprint_batch(meridians: np.ndarray) -> np.ndarray:
    """Fingerprint values for a stack of representations, shape (N, k, 4) ->
    (N, L).  Same word order as :func:`fingerprint`."""
    mers = np.asarray(meridians, dtype=float)
    n_reps, k, _ = mers.shape
    cols = [mers[:, i, 0] for i in range(k)]
    pair_prod = {}
    for i, j in itertools.combinations(range(k), 2):
        p = qmul(mers[:, i, :], mers[:, j, :])
        pair_prod[(i, j)] = p
        cols.append(p[:, 0])
    for i, j, l in itertools.combinations(range(k), 3):
        p = pair_prod[(i, j)]
        q = mers[:, l, :]
        cols.append(np.einsum("nc,nc->n", p, q * np.array([1.0, -1.0, -1.0, -1.0])))
    return np.stack(cols, axis=1)


def fingerprint_csv(fp: Fingerprint) -> str:
    """CSV export: one `label,value` row per word."""
    lines = ["word,value"]
    lines += [f"{label},{value!r}" for label, value in zip(fp.labels, fp.values)]
    return "\n".join(lines) + "\n"


def fingerprint_digest(fp: Fingerprint, decimals: int = 9) -> str:
    """Short hex identifier of a fingerprint rounded to ``decimals`` places.

    Conjugate representations share a digest; the rounding absorbs
    floating-point noise well below the scale at which distinct classes
    separate.  Adding 0.0 normalizes negative zeros before hashing.
    """
    vals = np.round(np.asarray(fp.values, dtype=float), decimals) + 0.0
    return hashlib.sha256(vals.tobytes()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# the binary dihedral torus


@dataclass(frozen=True)
class TorusCoords:
    """Angles (theta_2, ..., theta_{2n-1}) parametrizing the binary dihedral
    locus for 2n punctures, stored mod 2 pi."""

    n: int
    thetas: np.ndarray

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got n = {self.n}")
        t = np.mod(np.asarray(self.thetas, dtype=float), 2.0 * np.pi)
        if t.shape != (2 * self.n - 2,):
            raise ValueError(f"expected {2 * self.n - 2} angles, got shape {t.shape}")
        t.flags.writeable = False
        object.__setattr__(self, "thetas", t)


def bd_from_torus(coords: TorusCoords) -> PuncturedSphereRep:
    """Binary dihedral representation with the given torus coordinates.

    x_1 = i, x_l = e^{theta_l k} i for 2 <= l <= 2n-1, and the last meridian
    is e^{(n pi - theta_2 + theta_3 - ... + theta_{2n-1}) k} i, which makes
    the product relation hold on the nose.
    """
    n = coords.n
    mers = [I]
    for t in coords.thetas:
        mers.append(qmul(quat.exp_pure(t, K), I))
    signs = np.array([(-1.0) ** (idx + 1) for idx in range(2 * n - 2)])
    t_last = n * np.pi + float(np.dot(signs, coords.thetas))
    mers.append(qmul(quat.exp_pure(t_last, K), I))
    return make_rep(mers)


def torus_from_bd(rep: PuncturedSphereRep, tol: float = 1e-8) -> TorusCoords:
    """Recover torus coordinates from a binary dihedral representation.

    Fits the plane spanned by the meridian directions, rotates it to the
    i-j plane with x_1 going to i, and reads the angles off.  The output is
    canonicalized to the lexicographically smaller of (theta, -theta) mod
    2 pi, reflecting the residual conjugation freedom.
    """
    if rep.k % 2 != 0 or rep.k < 4:
        raise NotBinaryDihedral(f"binary dihedral locus needs even k >= 4, got k = {rep.k}")
    V = np.asarray(rep.meridians[:, 1:], dtype=float)
    svals = np.linalg.svd(V, compute_uv=False)
    if svals[2] > tol * svals[0]:
        raise NotBinaryDihedral("meridian directions span rank 3, not a planar family")

    e1 = V[0] / np.linalg.norm(V[0])
    resid = V - np.outer(V @ e1, e1)
    _, s, vt = np.linalg.svd(resid, full_matrices=False)
    if s[0] > tol * svals[0]:
        e2 = vt[0]
    else:
        # abelian: the plane is underdetermined, any completion works
        e2 = np.cross(e1, [1.0, 0.0, 0.0])
        if np.dot(e2, e2) < 1e-12:
            e2 = np.cross(e1, [0.0, 1.0, 0.0])
    e2 = e2 - (e2 @ e1) * e1
    e2 /= np.linalg.norm(e2)
    R = np.vstack([e1, e2, np.cross(e1, e2)])
    W = V @ R.T
    thetas = np.arctan2(W[:, 1], W[:, 0])
    n = rep.k // 2
    cand = np.mod(thetas[1 : rep.k - 1], 2.0 * np.pi)
    mirrored = np.mod(-cand, 2.0 * np.pi)
    chosen = cand if tuple(cand) <= tuple(mirrored) else mirrored
    return TorusCoords(n, chosen)


# ---------------------------------------------------------------------------
# serialization


def rep_to_json(rep: PuncturedSphereRep) -> dict:
    return {
        "kind": "punctured_sphere",
        "k": rep.k,
        "meridians": [[float(c) for c in m] for m in rep.meridians],
    }


def surface_to_json(rep: SurfaceRep) -> dict:
    return {
        "kind": "surface",
        "generators": {
            name: [float(c) for c in g]
            for name, g in zip(GENERATOR_NAMES, rep.generators())
        },
    }


def from_json(data: dict) -> "PuncturedSphereRep | SurfaceRep":
    kind = data.get("kind")
    if kind == "punctured_sphere":
        return make_rep(np.array(data["meridians"], dtype=float))
    if kind == "surface":
        gens = data["generators"]
        return make_surface_rep(*(np.array(gens[name], dtype=float) for name in GENERATOR_NAMES))
    raise ValueError(f"unknown representation kind: {kind!r}")
