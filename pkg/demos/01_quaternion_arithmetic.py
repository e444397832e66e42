"""Unit quaternions as SU(2): products, rotations, and the traceless sphere.

Every representation in this package is a tuple of unit quaternions, so
this demo walks the arithmetic everything else is built from: the
multiplication table, the real part as half-trace, conjugation acting as
a rotation of the imaginary 3-space, and one-parameter subgroups
e^{t P} = cos t + sin t P around a pure axis P.
"""

import numpy as np

from charvar.quat import (
    I,
    J,
    K,
    ONE,
    axis_angle,
    commutator_defect,
    conjugate,
    exp_pure,
    gprod,
    qmul,
    random_pure,
    random_unit,
    re,
    rotation_matrix,
    rotor_between,
)

rng = np.random.default_rng(1)

print("== the multiplication table ==")
print("i * j      =", qmul(I, J), " (= k)")
print("j * i      =", qmul(J, I), " (= -k)")
print("i * j * k  =", gprod(I, J, K), " (= -1)")

print()
print("== real part = half-trace; pure units are the traceless sphere ==")
q = random_unit(rng)
p = random_pure(rng)
print("random unit   q =", np.round(q, 4), "  re(q) =", round(re(q), 4))
print("random pure   p =", np.round(p, 4), "  re(p) =", re(p))
print("p^2 =", np.round(qmul(p, p), 12), " (every pure unit squares to -1)")

print()
print("== conjugation is rotation ==")
g = random_unit(rng)
R = rotation_matrix(g)
print("g p g^-1 via quaternions:", np.round(conjugate(g, p)[1:], 6))
print("R @ im(p)  via the 3x3  :", np.round(R @ p[1:], 6))
print("rotor i -> j:", np.round(rotor_between(I, J), 6), "(a quarter turn about k)")

print()
print("== one-parameter subgroups ==")
axis = random_pure(rng)
for t in (0.0, np.pi / 4, np.pi / 2, np.pi):
    e = exp_pure(t, axis)
    print(f"  e^(t P), t = {t:5.3f}: re = {re(e):+.4f}")
back = axis_angle(exp_pure(1.234, axis))
print("angle recovered from the exponential:", round(back.angle, 12))

print()
print("== commutator defects, the engine of the case ladder ==")
u, v = random_unit(rng), random_unit(rng)
w = commutator_defect(u, v)
print("uv - vu =", np.round(w, 6), " (always pure)")
same_axis = commutator_defect(exp_pure(0.3, axis), exp_pure(1.1, axis))
print("on a common axis the defect vanishes:", np.round(same_axis, 18))
eps = 3.7e-9
a = qmul(exp_pure(0.5, K), I)
b = qmul(exp_pure(0.5 + 2 * eps, K), I)
tiny = commutator_defect(a, b)
print("near-commuting pair: defect norm", f"{np.linalg.norm(tiny):.3e}")
print("  yet its direction is exact:", tiny / np.linalg.norm(tiny))
