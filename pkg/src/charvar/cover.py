"""The 2-fold branched cover from the 6-punctured sphere variety to the
genus-2 surface variety.

Pushforward evaluates the surface generators as words in the meridians,
r1 = x1 x2, s1 = x3^-1 x2^-1, r2 = x4 x5, s2 = x6^-1 x5^-1, under the
central character that is +1 on r_i, s_i and -1 on every meridian; with
that convention the explicit section below inverts it exactly.  The
section reconstructs the meridians from a solution x of a six-condition
tracelessness system (the case-ladder solver), and the two choices of
sign for x give the two sheets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolated, RelationViolated
from .quat import (
    I,
    J,
    axis_angle,
    commutator_defect,
    conjugate,
    gprod,
    qinv,
    qmul,
    rotor_between,
)
from .rep import (
    Fingerprint,
    PuncturedSphereRep,
    SurfaceRep,
    TOL_REL,
    fingerprint,
    make_rep,
    make_surface_rep,
)
from .variety import sample_point

COMM_TOL = 1e-8
LEMMA_TOL = 1e-10


@dataclass(frozen=True)
class CentralCharacter:
    """Character of the 6-meridian group with values in {+1, -1}.

    The convention used by ``pushforward``: +1 on the surface generators
    and -1 on every meridian (each meridian squares to -1, which is
    central).  The presentation relation contains each meridian once and
    the surface generators in cancelling pairs, so these values are
    consistent.
    """

    r1: int = 1
    s1: int = 1
    r2: int = 1
    s2: int = 1
    meridians: tuple[int, ...] = (-1, -1, -1, -1, -1, -1)

    def __post_init__(self) -> None:
        vals = (self.r1, self.s1, self.r2, self.s2, *self.meridians)
        if any(v not in (-1, 1) for v in vals):
            raise ValueError("character values must be +-1")
        if any(v != -1 for v in self.meridians):
            raise ValueError("meridian values must all be -1")


CHI = CentralCharacter()


@dataclass(frozen=True)
class FiberReport:
    """Both preimages of a surface class, deduplicated up to conjugacy."""

    classes: tuple[Fingerprint, ...]
    on_branch: bool
    witnesses: tuple[PuncturedSphereRep, PuncturedSphereRep]
    separation: float


@dataclass(frozen=True)
class Lemma52Solution:
    x: np.ndarray
    branch: int
    residuals: np.ndarray
    commutator_norms: np.ndarray = field(repr=False)


def pushforward(rep: PuncturedSphereRep, tol: float = TOL_REL) -> SurfaceRep:
    """Image of a 6-punctured sphere class under the branched cover."""
    if rep.k != 6:
        raise ValueError(f"the cover is defined for k = 6, got k = {rep.k}")
    q = rep.meridians
    return make_surface_rep(
        qmul(q[0], q[1]),
        qmul(qinv(q[2]), qinv(q[1])),
        qmul(q[3], q[4]),
        qmul(qinv(q[5]), qinv(q[4])),
        tol=tol,
    )


def _lemma52_residuals(x, a, b, c, d) -> np.ndarray:
    w = gprod(a, b, c, d)
    return np.abs(
        [
            x[0],
            qmul(x, a)[0],
            qmul(x, b)[0],
            qmul(x, c)[0],
            qmul(x, d)[0],
            qmul(x, qinv(w))[0],
        ]
    )


def lemma52_detailed(a, b, c, d, comm_tol: float = COMM_TOL, tol: float = TOL_REL) -> Lemma52Solution:
    """Case-ladder solver for the six tracelessness conditions.

    Given units with abcd = dcba, produces a pure unit x with re(x),
    re(xa), re(xb), re(xc), re(xd), re(x(abcd)^-1) all zero.  The ladder
    tries the ordered pairs (a,b), (b,c), (c,d), (d,a), (a,c), (b,d): the
    first with commutator defect |uv - vu| > comm_tol yields
    x = (uv - vu)/|uv - vu|.  If all commute, the inputs share an axis Q
    and x is a fixed pure unit orthogonal to Q.
    """
    a, b, c, d = (np.asarray(v, dtype=float) for v in (a, b, c, d))
    defect = float(np.linalg.norm(gprod(a, b, c, d) - gprod(d, c, b, a)))
    if defect > tol:
        raise ConstraintViolated(f"abcd and dcba differ by {defect:.3e} > {tol:.1e}")
    pairs = ((a, b), (b, c), (c, d), (d, a), (a, c), (b, d))
    norms = np.empty(6)
    for idx, (u, v) in enumerate(pairs):
        w = commutator_defect(u, v)
        norms[idx] = np.linalg.norm(w)
        if norms[idx] > comm_tol:
            x = w / norms[idx]
            return Lemma52Solution(x, idx + 1, _lemma52_residuals(x, a, b, c, d), norms)
    # All pairs commute: the inputs lie in a common one-parameter subgroup
    # {e^{theta Q}}.  Recover Q from the first input whose angle is bounded
    # away from 0 and pi, then take the image of j under any rotation
    # carrying i to Q; if Q is within 1e-6 of +-i, take j itself.
    axis = None
    for g in (a, b, c, d):
        aa = axis_angle(g)
        if min(aa.angle, np.pi - aa.angle) >= 1e-6:
            axis = aa.axis
            break
    if axis is None or min(np.linalg.norm(axis - I), np.linalg.norm(axis + I)) <= 1e-6:
        x = J.copy()
    else:
        x = conjugate(rotor_between(I, axis), J)
    return Lemma52Solution(x, 7, _lemma52_residuals(x, a, b, c, d), norms)


def lemma52_solve(a, b, c, d, comm_tol: float = COMM_TOL, tol: float = TOL_REL) -> np.ndarray:
    return lemma52_detailed(a, b, c, d, comm_tol=comm_tol, tol=tol).x


def section_inputs(surface: SurfaceRep):
    """The five words (a, b, c, d, e) fed to the case-ladder solver by the
    section; they satisfy e^-1 = abcd = dcba whenever the surface relation
    holds."""
    r1, s1, r2, s2 = surface.generators()
    a = r1
    b = qmul(qinv(s1), qinv(r1))
    c = qmul(s2, s1)
    d = gprod(qinv(s1), r2, qinv(s2))
    e = qmul(qinv(r2), s1)
    return a, b, c, d, e


def extend(surface: SurfaceRep, sign: int = 1, tol: float = TOL_REL) -> PuncturedSphereRep:
    """The explicit section of the cover on the sheet chosen by ``sign``.

    Solves for the first meridian x1 = sign * x via the case ladder, then
    reads the rest off the generator words: x2 = x1^-1 r1 and so on.  Each
    word contains one factor of x1, so the two sheets differ by negating
    every meridian, and the pushforward of the result telescopes back to
    the input exactly.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    a, b, c, d, e = section_inputs(surface)
    einv = qinv(e)
    res = max(
        float(np.linalg.norm(einv - gprod(a, b, c, d))),
        float(np.linalg.norm(einv - gprod(d, c, b, a))),
    )
    if res > tol:
        raise RelationViolated(res)
    r1, s1, r2, s2 = surface.generators()
    x1 = float(sign) * lemma52_solve(a, b, c, d, tol=tol)
    meridians = [
        x1,
        qmul(qinv(x1), r1),
        gprod(qinv(r1), x1, qinv(s1)),
        gprod(s1, qinv(x1), s2),
        gprod(qinv(s2), x1, qinv(s1), r2),
        gprod(qinv(r2), s1, qinv(x1)),
    ]
    return make_rep(meridians, tol=tol)


def fiber(surface: SurfaceRep, fp_tol: float = 1e-6) -> FiberReport:
    """Both sheets over a surface class, merged when they are conjugate.

    The sheets coincide exactly over classes with abelian image, where the
    single preimage is binary dihedral; elsewhere the two fingerprints are
    macroscopically separated.
    """
    plus = extend(surface, 1)
    minus = extend(surface, -1)
    fp_plus = fingerprint(plus)
    fp_minus = fingerprint(minus)
    sep = fp_plus.distance(fp_minus)
    on_branch = sep <= fp_tol
    classes = (fp_plus,) if on_branch else (fp_plus, fp_minus)
    return FiberReport(classes=classes, on_branch=on_branch, witnesses=(plus, minus), separation=sep)


def surface_sample(rng: np.random.Generator) -> SurfaceRep:
    """Sample the surface variety through the cover, which is onto."""
    return pushforward(sample_point(6, rng))


def fiber_to_json(report: FiberReport) -> dict:
    return {
        "on_branch": bool(report.on_branch),
        "class_count": len(report.classes),
        "separation": float(report.separation),
        "fingerprints": [
            {"labels": list(fp.labels), "values": [float(v) for v in fp.values]}
            for fp in report.classes
        ],
        "witnesses": [
            [[float(c) for c in q] for q in w.meridians] for w in report.witnesses
        ],
    }
