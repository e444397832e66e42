"""Unit quaternion arithmetic.

Quaternions are numpy arrays of shape (4,) in the order [w, x, y, z], so
``q = w + x i + y j + z k``.  Unit quaternions model SU(2); the real part
``re`` is half the trace of the corresponding SU(2) matrix, and the pure
unit quaternions (re = 0) form the 2-sphere of traceless elements.

All group-element constructors renormalize; chained group products go
through :func:`gprod`, which renormalizes once the accumulated norm drift
exceeds ``RENORM_DRIFT``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL_UNIT = 1e-12
TOL_PURE = 1e-12
RENORM_DRIFT = 1e-14

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])
for _q in (ONE, I, J, K):
    _q.flags.writeable = False


def quat(w: float, x: float, y: float, z: float) -> np.ndarray:
    return np.array([w, x, y, z], dtype=float)


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product.  Works on single quaternions and on broadcastable
    stacks with the components on the last axis.  |ab| = |a||b|; no
    renormalization happens here (see gprod for group products)."""
    if a.ndim == 1 and b.ndim == 1:
        aw, ax, ay, az = a
        bw, bx, by, bz = b
        out = np.empty(4)
        out[0] = aw * bw - ax * bx - ay * by - az * bz
        out[1] = aw * bx + ax * bw + ay * bz - az * by
        out[2] = aw * by - ax * bz + ay * bw + az * bx
        out[3] = aw * bz + ax * by - ay * bx + az * bw
        return out
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def re(q: np.ndarray) -> float:
    """Real part; equals half the SU(2) trace."""
    return q[..., 0] if q.ndim > 1 else q[0]


def im(q: np.ndarray) -> np.ndarray:
    """Imaginary part as a 3-vector."""
    return q[..., 1:] if q.ndim > 1 else q[1:]


def qconj(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=float)
    out[..., 1:] = -out[..., 1:]
    return out


def qinv(q: np.ndarray) -> np.ndarray:
    """Inverse of a unit quaternion (= conjugate)."""
    return qconj(q)


def norm(q: np.ndarray) -> float:
    return float(np.sqrt(np.dot(q, q))) if q.ndim == 1 else np.linalg.norm(q, axis=-1)


def normalize(q: np.ndarray) -> np.ndarray:
    n = norm(q)
    if np.any(np.asarray(n) == 0.0):
        raise ValueError("cannot normalize a zero quaternion")
    return q / n if q.ndim == 1 else q / n[..., None]


def gprod(*qs: np.ndarray) -> np.ndarray:
    """Product of unit quaternions, renormalized if drift exceeds RENORM_DRIFT."""
    if len(qs) == 1 and isinstance(qs[0], (list, tuple)):
        qs = tuple(qs[0])
    p = ONE
    for q in qs:
        p = qmul(p, q)
    drift = abs(np.dot(p, p) - 1.0)
    if drift > RENORM_DRIFT:
        p = p / np.sqrt(np.dot(p, p))
    return p


def conjugate(g: np.ndarray, q: np.ndarray) -> np.ndarray:
    """g q g^-1 for unit g."""
    return qmul(qmul(g, q), qconj(g))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Group commutator a b a^-1 b^-1 of unit quaternions."""
    return gprod(a, b, qconj(a), qconj(b))


_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _product_diff(a: float, b: float, c: float, d: float) -> float:
    """a*b - c*d with the rounding error of each product compensated.

    Splits each factor into high and low halves so the products are exact
    as two-term sums, then lets fsum produce the correctly rounded result.
    Safe for magnitudes far from overflow, which unit quaternions are.
    """
    ah = _SPLITTER * a - (_SPLITTER * a - a)
    al = a - ah
    bh = _SPLITTER * b - (_SPLITTER * b - b)
    bl = b - bh
    ch = _SPLITTER * c - (_SPLITTER * c - c)
    cl = c - ch
    dh = _SPLITTER * d - (_SPLITTER * d - d)
    dl = d - dh
    p, q = a * b, c * d
    ep = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    eq = ((ch * dh - q) + ch * dl + cl * dh) + cl * dl
    return math.fsum((p, ep, -q, -eq))


def commutator_defect(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """uv - vu, computed as 2 im(u) x im(v) with compensated products.

    The real parts cancel identically, so the defect is the pure quaternion
    whose vector part is twice the cross product of the imaginary parts.
    Compensation matters when u and v nearly commute: the naive difference
    of products loses all significant digits exactly where downstream code
    normalizes the defect into a direction.
    """
    out = np.zeros(4)
    out[1] = 2.0 * _product_diff(u[2], v[3], u[3], v[2])
    out[2] = 2.0 * _product_diff(u[3], v[1], u[1], v[3])
    out[3] = 2.0 * _product_diff(u[1], v[2], u[2], v[1])
    return out


def is_unit(q: np.ndarray, tol: float = TOL_UNIT) -> bool:
    return abs(norm(q) - 1.0) <= tol


def is_pure_unit(q: np.ndarray, tol: float = TOL_PURE) -> bool:
    return abs(norm(q) - 1.0) <= tol and abs(q[0]) <= tol


def exp_pure(angle: float, axis: np.ndarray) -> np.ndarray:
    """e^{angle * axis} = cos(angle) + sin(angle) * axis for a pure unit axis."""
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (4,):
        raise ValueError(f"axis must be a quaternion of shape (4,), got {axis.shape}")
    if not is_pure_unit(axis, tol=1e-9):
        raise ValueError("axis must be a pure unit quaternion")
    out = np.sin(angle) * axis
    out[0] = np.cos(angle)
    return out


@dataclass(frozen=True)
class AxisAngle:
    """Polar form q = cos(angle) + sin(angle) * axis, angle in [0, pi]."""

    angle: float
    axis: np.ndarray


def axis_angle(q: np.ndarray) -> AxisAngle:
    """Polar decomposition of a unit quaternion.

    For q within TOL_UNIT of +-1 the axis is conventionally I (the angle
    still carries all the information there).
    """
    v = q[1:]
    s = float(np.sqrt(np.dot(v, v)))
    angle = float(np.arctan2(s, q[0]))
    if s <= TOL_UNIT:
        return AxisAngle(angle, I)
    axis = np.zeros(4)
    axis[1:] = v / s
    return AxisAngle(angle, axis)


def exp_chart(zs: np.ndarray) -> np.ndarray:
    """Map complex coordinates to pure unit quaternions, one per entry.

    z = x + y i goes to i * e^{x j + y k}.  Each image is traceless exactly:
    i e^{v} has real part -<i, sin(r) v/r> = 0 for v in the span of j, k.
    Returns an array of shape (m, 4).
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    out = np.empty((zs.size, 4))
    for idx, z in enumerate(zs):
        x, y = z.real, z.imag
        r = np.hypot(x, y)
        if r == 0.0:
            ev = ONE
        else:
            s = np.sin(r) / r
            ev = np.array([np.cos(r), 0.0, s * x, s * y])
        out[idx] = qmul(I, ev)
    return out


def random_pure(rng: np.random.Generator) -> np.ndarray:
    """Uniform point of the traceless unit sphere."""
    while True:
        v = rng.standard_normal(3)
        n = np.sqrt(np.dot(v, v))
        if n > 1e-12:
            break
    out = np.empty(4)
    out[0] = 0.0
    out[1:] = v / n
    return out


def random_unit(rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform unit quaternion."""
    while True:
        v = rng.standard_normal(4)
        n = np.sqrt(np.dot(v, v))
        if n > 1e-12:
            return v / n


def rotation_matrix(g: np.ndarray) -> np.ndarray:
    """The SO(3) matrix by which conjugation by unit g rotates imaginary parts."""
    w, x, y, z = g
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def from_rotation_matrix(R: np.ndarray) -> np.ndarray:
    """Unit quaternion g with rotation_matrix(g) = R, for R in SO(3).

    Shepperd's method: pick the largest of the four squared components to
    divide by, which keeps the reconstruction stable.
    """
    R = np.asarray(R, dtype=float)
    t = np.trace(R)
    cands = [t, R[0, 0], R[1, 1], R[2, 2]]
    case = int(np.argmax(cands))
    if case == 0:
        s = np.sqrt(t + 1.0) * 2.0
        g = np.array(
            [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
        )
    elif case == 1:
        s = np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        g = np.array(
            [(R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
        )
    elif case == 2:
        s = np.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        g = np.array(
            [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s]
        )
    else:
        s = np.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        g = np.array(
            [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s]
        )
    return g / np.sqrt(np.dot(g, g))


def rotor_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Unit g with g u g^-1 = v for pure unit quaternions u, v.

    Rotates about the axis u x v by the angle between them; for u = -v the
    axis is ambiguous and any orthogonal axis works.
    """
    a, b = u[1:], v[1:]
    c = np.cross(a, b)
    d = float(np.dot(a, b))
    s = np.sqrt(np.dot(c, c))
    if s <= 1e-14:
        if d > 0:
            return ONE.copy()
        # antipodal: rotate by pi about anything orthogonal to u
        w = np.cross(a, [1.0, 0.0, 0.0])
        if np.dot(w, w) < 1e-12:
            w = np.cross(a, [0.0, 1.0, 0.0])
        w = w / np.sqrt(np.dot(w, w))
        return np.array([0.0, *w])
    axis = np.zeros(4)
    axis[1:] = c / s
    half = 0.5 * np.arctan2(s, d)
    return exp_pure(half, axis)
