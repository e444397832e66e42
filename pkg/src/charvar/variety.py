"""Sampling and local structure of the traceless character variety.

The variety for k punctures is f^{-1}(0) / conjugation, where
f(q_1, ..., q_{k-1}) = re(q_1 ... q_{k-1}) on the product of k-1 traceless
unit spheres; the last meridian is the inverse of the product.  This module
samples f^{-1}(0) exactly, classifies points into the abelian, binary
dihedral, and generic loci by the rank of the meridian directions, and
produces explicit submersion certificates away from the abelian points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quat
from .errors import AbelianInput, ConstraintViolated
from .quat import I, J, K, axis_angle, gprod, im, qmul
from .rep import PuncturedSphereRep, TOL_REL, complete_rep, make_rep

RANK_TOL_FACTOR = 1e-8

ABELIAN = "abelian"
BINARY_DIHEDRAL = "binary_dihedral"
GENERIC = "generic"


@dataclass(frozen=True)
class LocusLabel:
    label: str
    rank: int


@dataclass(frozen=True)
class SubmersionCertificate:
    """Witness that f is a submersion at a non-abelian point.

    ``pair_index`` is the 0-based position l with q_l not proportional to
    q_{l+1}; ``moved`` is the coordinate carried along the great circle
    toward ``axis``; the derivative of f along that circle is -sin(alpha)
    where the relevant cyclic product is e^{alpha axis}.
    """

    pair_index: int
    moved: int
    axis: np.ndarray
    derivative: float
    jacobian_rank: int


def eval_f(partial) -> float:
    """re of the ordered product of the first k-1 meridians."""
    return float(gprod(list(np.asarray(partial, dtype=float)))[0])


def eval_g(partial) -> float:
    """re(i q_2 ... q_{2n-1}): the cut-down constraint with x_1 = i fixed."""
    return float(gprod([I, *np.asarray(partial, dtype=float)])[0])


def sample_point(k: int, rng: np.random.Generator) -> PuncturedSphereRep:
    """Draw a point of f^{-1}(0) exactly.

    q_1 ... q_{k-2} are uniform on the traceless sphere.  Writing w for their
    product, the two conditions on q_{k-1} (traceless, and w q_{k-1} traceless)
    cut out the great circle orthogonal to im(w), which is sampled uniformly;
    when w = +-1 the constraint is vacuous and the whole sphere is used.
    """
    if k < 3:
        raise ValueError(f"need k >= 3, got k = {k}")
    qs = [quat.random_pure(rng) for _ in range(k - 2)]
    w = gprod(qs)
    wv = w[1:]
    nw = float(np.sqrt(np.dot(wv, wv)))
    if nw <= 1e-12:
        qs.append(quat.random_pure(rng))
    else:
        axis = wv / nw
        h = np.zeros(3)
        h[int(np.argmin(np.abs(axis)))] = 1.0
        u = np.cross(axis, h)
        u /= np.linalg.norm(u)
        v = np.cross(axis, u)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        qs.append(np.array([0.0, *(np.cos(phi) * u + np.sin(phi) * v)]))
    return complete_rep(qs)


def classify_locus(rep: PuncturedSphereRep, tol_factor: float = RANK_TOL_FACTOR) -> LocusLabel:
    """Locus of a point by the rank of the 3 x k matrix of meridian directions:
    rank <= 1 abelian, rank 2 binary dihedral, rank 3 generic."""
    V = rep.meridians[:, 1:]
    svals = np.linalg.svd(V, compute_uv=False)
    rank = int(np.sum(svals > tol_factor * svals[0]))
    if rank <= 1:
        return LocusLabel(ABELIAN, rank)
    if rank == 2:
        return LocusLabel(BINARY_DIHEDRAL, rank)
    return LocusLabel(GENERIC, rank)


def _df_gradient(part: np.ndarray) -> np.ndarray:
    """Analytic gradient of f over the tangent directions of each sphere factor.

    The tangent space at q is spanned by q V for pure V orthogonal to q; the
    derivative along it is re(prefix * qV * suffix).
    """
    m = part.shape[0]
    pre = [quat.ONE]
    for q in part:
        pre.append(qmul(pre[-1], q))
    suf = [quat.ONE]
    for q in part[::-1]:
        suf.append(qmul(q, suf[-1]))
    suf = suf[::-1]
    grads = []
    for a in range(m):
        axis = part[a, 1:]
        h = np.zeros(3)
        h[int(np.argmin(np.abs(axis)))] = 1.0
        v1 = np.cross(axis, h)
        v1 /= np.linalg.norm(v1)
        v2 = np.cross(axis, v1)
        for v in (v1, v2):
            V = np.array([0.0, *v])
            grads.append(qmul(qmul(pre[a], qmul(part[a], V)), suf[a + 1])[0])
    return np.array(grads)


def submersion_certificate(partial) -> SubmersionCertificate:
    """Explicit first-order certificate that f submerses at a non-abelian point.

    Picks adjacent non-proportional coordinates q_l, q_{l+1}, forms the cyclic
    complement x, and deforms whichever of q_{l+1}, q_l pairs with the factor
    (x q_l or q_{l+1} x) farther from +-1.  The deformation is the great circle
    from the moved coordinate toward the axis, which stays on the sphere because
    the two are orthogonal on the constraint set.
    """
    part = np.asarray(partial, dtype=float)
    m = part.shape[0]
    if m < 2:
        raise ValueError("need at least two meridians to certify")
    seps = np.empty(m - 1)
    for p in range(m - 1):
        seps[p] = min(
            np.linalg.norm(part[p] - part[p + 1]), np.linalg.norm(part[p] + part[p + 1])
        )
    p = int(np.argmax(seps))
    if seps[p] <= 1e-9:
        raise AbelianInput("all meridians proportional: f is not a submersion here")
    x = gprod([*part[p + 2 :], *part[:p]])
    u1 = qmul(x, part[p])
    u2 = qmul(part[p + 1], x)
    s1 = float(np.linalg.norm(u1[1:]))
    s2 = float(np.linalg.norm(u2[1:]))
    if max(s1, s2) <= 1e-12:
        raise ConstraintViolated("both cyclic factors are central, certificate degenerates")
    if s1 >= s2:
        moved, u = p + 1, u1
    else:
        moved, u = p, u2
    aa = axis_angle(u)
    grad = _df_gradient(part)
    jac_rank = int(np.max(np.abs(grad)) > RANK_TOL_FACTOR)
    return SubmersionCertificate(
        pair_index=p,
        moved=moved,
        axis=aa.axis,
        derivative=-float(np.sin(aa.angle)),
        jacobian_rank=jac_rank,
    )


def deform(partial, cert: SubmersionCertificate, t: float) -> np.ndarray:
    """The certificate's deformation path at parameter t."""
    part = np.array(partial, dtype=float)
    part[cert.moved] = np.cos(t) * part[cert.moved] + np.sin(t) * cert.axis
    return part


def conjugation_rank(partial, tol_factor: float = RANK_TOL_FACTOR) -> int:
    """Rank of the infinitesimal conjugation action on a tuple: rows are the
    brackets [u, q_a] over u in {i, j, k}.  3 exactly when the action is
    locally free (non-abelian tuple)."""
    part = np.asarray(partial, dtype=float)
    rows = []
    for u in (I, J, K):
        rows.append(np.concatenate([(qmul(u, q) - qmul(q, u))[1:] for q in part]))
    M = np.vstack(rows)
    svals = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(svals > tol_factor * svals[0]))


def local_dimension(rep: PuncturedSphereRep) -> int:
    """dim at a non-abelian class: ambient 2(k-1), minus the rank of df (1),
    minus the rank of the conjugation action (3).  Both ranks are measured,
    not assumed."""
    if classify_locus(rep).label == ABELIAN:
        raise AbelianInput("local dimension is undefined at abelian points")
    part = rep.meridians[:-1]
    grad = _df_gradient(part)
    rank_df = int(np.max(np.abs(grad)) > RANK_TOL_FACTOR)
    rank_conj = conjugation_rank(part)
    return 2 * part.shape[0] - rank_df - rank_conj


def sign_transport(partial, signs) -> np.ndarray:
    """Flip meridian signs on a tuple in g^{-1}(0); the image stays in g^{-1}(0)
    since the constraint changes only by the product of the signs."""
    part = np.asarray(partial, dtype=float)
    sg = np.asarray(signs, dtype=float)
    if sg.shape != (part.shape[0],) or not np.all(np.abs(sg) == 1.0):
        raise ValueError("signs must be +-1, one per meridian")
    if abs(eval_g(part)) > TOL_REL:
        raise ConstraintViolated("input tuple is not in g^{-1}(0)")
    return part * sg[:, None]


def enumerate_abelian(k: int) -> list[PuncturedSphereRep]:
    """All abelian classes for even k: sign vectors on (i, ..., i) with the
    first sign normalized to +1 and the last meridian forced by the product."""
    if k % 2 != 0:
        raise ValueError(f"abelian points exist only for even k, got k = {k}")
    reps = []
    for bits in range(2 ** (k - 2)):
        part = [I]
        for pos in range(k - 2):
            sign = 1.0 if (bits >> pos) & 1 == 0 else -1.0
            part.append(sign * I)
        reps.append(complete_rep(part))
    return reps


# ---------------------------------------------------------------------------
# conjugator search


def _conjugation_objective(Va: np.ndarray, Vb: np.ndarray):
    def residual_vec(v: np.ndarray) -> np.ndarray:
        angle = np.sqrt(np.dot(v, v))
        if angle < 1e-300:
            g = quat.ONE
        else:
            g = np.array([np.cos(angle), *(np.sin(angle) * v / angle)])
        return (Va @ quat.rotation_matrix(g).T - Vb).ravel()

    return residual_vec


def _gauss_newton(residual_vec, v0: np.ndarray, iters: int = 25) -> np.ndarray:
    """Damped least-squares descent with forward-difference Jacobians."""
    v = v0.astype(float)
    r = residual_vec(v)
    obj = float(r @ r)
    lam = 1e-3
    h = 1e-7
    for _ in range(iters):
        if obj < 1e-22:
            break
        Jcols = []
        for a in range(3):
            dv = v.copy()
            dv[a] += h
            Jcols.append((residual_vec(dv) - r) / h)
        Jt = np.vstack(Jcols)
        g = Jt @ r
        H = Jt @ Jt.T
        stepped = False
        for _ in range(8):
            try:
                delta = np.linalg.solve(H + lam * np.eye(3), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            r_new = residual_vec(v + delta)
            obj_new = float(r_new @ r_new)
            if obj_new < obj:
                v = v + delta
                r, obj = r_new, obj_new
                lam = max(lam / 3.0, 1e-12)
                stepped = True
                break
            lam *= 10.0
        if not stepped:
            break
    return v


def conjugator_search(
    a: PuncturedSphereRep,
    b: PuncturedSphereRep,
    threshold: float = 1e-7,
    starts: int = 8,
) -> np.ndarray | None:
    """Search for g with g a_i g^-1 = b_i for all meridians.

    Multi-start local least-squares over the 3-parameter group (axis-angle
    chart, numerical derivatives).  Returns the conjugator if the best
    residual is at most ``threshold``, else None.
    """
    if a.k != b.k:
        raise ValueError("representations have different numbers of punctures")
    Va, Vb = a.meridians[:, 1:], b.meridians[:, 1:]
    residual_vec = _conjugation_objective(Va, Vb)
    rng = np.random.default_rng(1234)
    inits = [np.zeros(3)] + [rng.uniform(-np.pi / 2, np.pi / 2, size=3) for _ in range(starts - 1)]
    best_g, best_res = None, np.inf
    for v0 in inits:
        v = _gauss_newton(residual_vec, v0)
        angle = np.sqrt(np.dot(v, v))
        g = quat.ONE if angle < 1e-300 else np.array([np.cos(angle), *(np.sin(angle) * v / angle)])
        res = max(
            float(np.linalg.norm(quat.conjugate(g, qa) - qb))
            for qa, qb in zip(a.meridians, b.meridians)
        )
        if res < best_res:
            best_g, best_res = g, res
        if best_res <= threshold:
            return best_g
    return None
