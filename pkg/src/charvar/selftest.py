"""Named verification checks over the whole library.

Each check certifies one structural statement (census counts, the cover
round trip, Hessian combinatorics, ...) at a configurable sample count.
The CLI selftest runs all of them at reduced counts; the acceptance test
suite runs the same functions at full counts.  All randomness is drawn
from generators keyed by (seed, check id, sample index), so output is
reproducible byte for byte.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from . import cover, morse, quat, rep, variety
from .quat import I, J, K, ONE, exp_pure, gprod, qconj, qmul
from .rep import TorusCoords, alpha_star, bd_from_torus, fingerprint, make_rep, torus_from_bd
from .variety import ABELIAN, BINARY_DIHEDRAL, GENERIC

REDUCED_COUNTS: dict[str, int] = {
    "algebra": 200,
    "census_n_max": 4,
    "k3": 30,
    "k4": 150,
    "submersion": 90,
    "roundtrip": 120,
    "fiber_generic": 60,
    "fiber_bd": 40,
    "lemma_generic": 600,
    "lemma_per_branch": 40,
    "hessian_exact_n_max": 12,
    "hessian_numeric_n_max": 5,
    "symm_per_n": 40,
    "symm_n_max": 5,
    "bd_roundtrip_per_n": 40,
    "bd_push": 60,
    "link": 300,
    "link_refine": 40,
}

FULL_COUNTS: dict[str, int] = {
    "algebra": 2000,
    "census_n_max": 6,
    "k3": 100,
    "k4": 1000,
    "submersion": 1000,
    "roundtrip": 1000,
    "fiber_generic": 500,
    "fiber_bd": 200,
    "lemma_generic": 9400,
    "lemma_per_branch": 100,
    "hessian_exact_n_max": 12,
    "hessian_numeric_n_max": 8,
    "symm_per_n": 200,
    "symm_n_max": 6,
    "bd_roundtrip_per_n": 250,
    "bd_push": 500,
    "link": 10000,
    "link_refine": 200,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng((seed, *path))


def check_quaternion_algebra(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Group algebra on random units: associativity, norms, conjugation,
    the rotation homomorphism, and the axis-angle round trip."""
    worst = 0.0
    for i in range(counts["algebra"]):
        rng = _rng(seed, 1, i)
        a, b, c = (quat.random_unit(rng) for _ in range(3))
        worst = max(worst, float(np.linalg.norm(qmul(qmul(a, b), c) - qmul(a, qmul(b, c)))))
        worst = max(worst, abs(float(np.linalg.norm(qmul(a, b))) - 1.0))
        worst = max(worst, float(np.linalg.norm(qconj(qmul(a, b)) - qmul(qconj(b), qconj(a)))))
        Rab = quat.rotation_matrix(qmul(a, b))
        worst = max(
            worst,
            float(np.max(np.abs(Rab - quat.rotation_matrix(a) @ quat.rotation_matrix(b)))),
        )
        aa = quat.axis_angle(a)
        worst = max(worst, float(np.linalg.norm(exp_pure(aa.angle, aa.axis) - a)))
    ok = worst <= 1e-12
    return CheckResult(
        "quaternion-algebra", ok, f"max algebraic deviation {worst:.3e} over {counts['algebra']} triples"
    )


def check_abelian_census(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """For each even k = 2n the abelian classes number exactly 2^(k-2),
    all classify as abelian, and are pairwise distinct; the sign-flip
    action on (i, ..., i) reproduces the same class set."""
    details = []
    for n in range(2, counts["census_n_max"] + 1):
        k = 2 * n
        reps = variety.enumerate_abelian(k)
        if len(reps) != 2 ** (k - 2):
            return CheckResult(
                "abelian-census", False, f"k={k}: {len(reps)} classes, expected {2 ** (k - 2)}"
            )
        labels = {variety.classify_locus(r).label for r in reps}
        if labels != {ABELIAN}:
            return CheckResult("abelian-census", False, f"k={k}: non-abelian labels {labels}")
        values = rep.fingerprint_batch(np.stack([r.meridians for r in reps]))
        distinct = np.unique(np.round(values, 6), axis=0).shape[0]
        if distinct != len(reps):
            return CheckResult(
                "abelian-census", False, f"k={k}: only {distinct} distinct fingerprints"
            )
        details.append(f"k={k}:{len(reps)}")
    for n in (2, 3):
        k = 2 * n
        base = np.tile(I, (k - 2, 1))
        seen = set()
        for bits in range(2 ** (k - 2)):
            signs = [1.0 if (bits >> p) & 1 == 0 else -1.0 for p in range(k - 2)]
            flipped = variety.sign_transport(base, signs)
            r = rep.complete_rep([I, *flipped])
            seen.add(rep.fingerprint_digest(fingerprint(r)))
        if len(seen) != 2 ** (k - 2):
            return CheckResult(
                "abelian-census", False, f"k={k}: sign action reached {len(seen)} classes"
            )
    return CheckResult("abelian-census", True, "counts " + " ".join(details) + ", all distinct")


def check_small_k_rigidity(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """k = 3 has a single class (the fingerprint of (i, j, -k)); k = 4
    sees only the abelian and binary dihedral loci."""
    ref = fingerprint(make_rep([I, J, -K]))
    worst = 0.0
    for i in range(counts["k3"]):
        fp = fingerprint(variety.sample_point(3, _rng(seed, 2, i)))
        worst = max(worst, fp.distance(ref))
    if worst > 1e-9:
        return CheckResult("small-k-rigidity", False, f"k=3 fingerprint spread {worst:.3e}")
    tally: Counter[str] = Counter()
    for i in range(counts["k4"]):
        tally[variety.classify_locus(variety.sample_point(4, _rng(seed, 3, i))).label] += 1
    bad = set(tally) - {ABELIAN, BINARY_DIHEDRAL}
    ok = not bad
    detail = (
        f"k=3 spread {worst:.3e}; k=4 loci "
        + " ".join(f"{name}:{tally[name]}" for name in sorted(tally))
    )
    if bad:
        detail = f"k=4 produced loci {sorted(bad)}; " + detail
    return CheckResult("small-k-rigidity", ok, detail)


def check_submersion(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Non-abelian points carry a certificate with nonzero derivative that
    matches a finite difference, a rank-1 constraint Jacobian, a rank-3
    conjugation action, and local dimension 2k-6."""
    ks = (4, 6, 8)
    h = 1e-5
    min_deriv = np.inf
    worst_fd = 0.0
    for i in range(counts["submersion"]):
        k = ks[i % len(ks)]
        retry = 0
        sample = variety.sample_point(k, _rng(seed, 4, i, retry))
        while variety.classify_locus(sample).label == ABELIAN:
            retry += 1
            sample = variety.sample_point(k, _rng(seed, 4, i, retry))
        partial = sample.meridians[:-1]
        cert = variety.submersion_certificate(partial)
        min_deriv = min(min_deriv, abs(cert.derivative))
        fd = (
            variety.eval_f(variety.deform(partial, cert, h))
            - variety.eval_f(variety.deform(partial, cert, -h))
        ) / (2.0 * h)
        worst_fd = max(worst_fd, abs(fd - cert.derivative))
        if cert.jacobian_rank != 1:
            return CheckResult("submersion-certificates", False, f"sample {i}: df rank {cert.jacobian_rank}")
        if variety.conjugation_rank(partial) != 3:
            return CheckResult("submersion-certificates", False, f"sample {i}: conjugation rank != 3")
        dim = variety.local_dimension(sample)
        if dim != 2 * k - 6:
            return CheckResult(
                "submersion-certificates", False, f"sample {i}: local dimension {dim} != {2 * k - 6}"
            )
    ok = min_deriv > 1e-8 and worst_fd <= 1e-6
    return CheckResult(
        "submersion-certificates",
        ok,
        f"min |derivative| {min_deriv:.3e}, max fd mismatch {worst_fd:.3e} over {counts['submersion']} samples",
    )


def check_cover_roundtrip(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """pushforward(extend(s, sign)) returns s generator-wise, both signs."""
    worst = 0.0
    for i in range(counts["roundtrip"]):
        surface = cover.surface_sample(_rng(seed, 5, i))
        for sign in (1, -1):
            back = cover.pushforward(cover.extend(surface, sign))
            residual = max(
                float(np.linalg.norm(g1 - g2))
                for g1, g2 in zip(surface.generators(), back.generators())
            )
            worst = max(worst, residual)
    ok = worst <= 1e-9
    return CheckResult(
        "cover-roundtrip", ok, f"max generator residual {worst:.3e} over {counts['roundtrip']}x2 lifts"
    )


def check_fiber_two_fold(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Fibers over generic classes hold exactly the two classes rho and
    alpha*(rho); fibers over abelian-image classes hold one binary
    dihedral class."""
    worst_match = 0.0
    for i in range(counts["fiber_generic"]):
        rho = variety.sample_point(6, _rng(seed, 6, i))
        report = cover.fiber(cover.pushforward(rho))
        if report.on_branch or len(report.classes) != 2:
            return CheckResult("fiber-two-fold", False, f"generic sample {i}: {len(report.classes)} class(es)")
        want = (fingerprint(rho), fingerprint(alpha_star(rho)))
        got = report.classes
        direct = max(got[0].distance(want[0]), got[1].distance(want[1]))
        crossed = max(got[0].distance(want[1]), got[1].distance(want[0]))
        match = min(direct, crossed)
        worst_match = max(worst_match, match)
        if match > 1e-6:
            return CheckResult("fiber-two-fold", False, f"generic sample {i}: fiber mismatch {match:.3e}")
    for i in range(counts["fiber_bd"]):
        rng = _rng(seed, 7, i)
        coords = TorusCoords(n=3, thetas=rng.uniform(0.0, 2.0 * np.pi, size=4))
        report = cover.fiber(cover.pushforward(bd_from_torus(coords)))
        if not report.on_branch or len(report.classes) != 1:
            return CheckResult("fiber-two-fold", False, f"dihedral sample {i}: not a single class")
        if variety.classify_locus(report.witnesses[0]).label == GENERIC:
            return CheckResult("fiber-two-fold", False, f"dihedral sample {i}: generic witness")
    return CheckResult(
        "fiber-two-fold",
        True,
        f"{counts['fiber_generic']} generic fibers match {{rho, alpha*rho}} (worst {worst_match:.3e}); "
        f"{counts['fiber_bd']} dihedral fibers collapse to one class",
    )


def _coset_point(theta: float) -> np.ndarray:
    return qmul(exp_pure(theta, K), I)


def _lemma_branch_inputs(branch: int, rng: np.random.Generator):
    """Deterministic input families that land on each rung of the case
    ladder.  Branches 5 and 6 need commutator defects straddling the
    commutation cutoff, realized by binary dihedral quadruples with angle
    gaps eps and 2*eps around it; both satisfy abcd = dcba exactly.  The
    dihedral quadruples stay in the i,j coordinate plane: the structural
    zeros keep the tiny defect pointing exactly along k, which a random
    conjugation would smear by roundoff/defect ~ 1e-8."""
    eps = 3.7e-9
    if branch == 2:
        b, c = quat.random_unit(rng), quat.random_unit(rng)
        return ONE, b, c, b
    if branch == 3:
        u = quat.random_pure(rng)
        alpha, beta = rng.uniform(0.2, 1.2, size=2)
        gamma = np.pi - alpha - beta
        return exp_pure(alpha, u), exp_pure(beta, u), exp_pure(gamma, u), quat.random_unit(rng)
    if branch == 4:
        u = quat.random_pure(rng)
        c = exp_pure(rng.uniform(0.2, 1.2), u)
        return quat.random_unit(rng), ONE, c, quat.qinv(c)
    if branch in (5, 6):
        theta = rng.uniform(0.0, 2.0 * np.pi)
        if branch == 5:
            gaps = (0.0, -eps, -2.0 * eps, -eps)
        else:
            gaps = (0.0, eps, 0.0, -eps)
        return tuple(_coset_point(theta + d) for d in gaps)
    if branch == 7:
        u = quat.random_pure(rng)
        return tuple(exp_pure(t, u) for t in rng.uniform(0.0, 2.0 * np.pi, size=4))
    raise ValueError(f"no constructed family for branch {branch}")


def check_lemma52_branches(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Residuals of the case-ladder solver stay below 1e-10 on valid
    inputs, with every branch of the ladder exercised."""
    tally: Counter[int] = Counter()
    worst = 0.0
    for i in range(counts["lemma_generic"]):
        surface = cover.surface_sample(_rng(seed, 8, i))
        a, b, c, d, _ = cover.section_inputs(surface)
        sol = cover.lemma52_detailed(a, b, c, d)
        tally[sol.branch] += 1
        worst = max(worst, float(sol.residuals.max()))
    for branch in (2, 3, 4, 5, 6, 7):
        for i in range(counts["lemma_per_branch"]):
            quad = _lemma_branch_inputs(branch, _rng(seed, 9, branch, i))
            sol = cover.lemma52_detailed(*quad)
            if sol.branch != branch:
                return CheckResult(
                    "lemma52-branches",
                    False,
                    f"constructed input for branch {branch} landed on branch {sol.branch}",
                )
            tally[sol.branch] += 1
            worst = max(worst, float(sol.residuals.max()))
    min_needed = counts["lemma_per_branch"]
    missing = [b for b in range(1, 8) if tally[b] < min_needed]
    ok = worst <= 1e-10 and not missing
    coverage = " ".join(f"{b}:{tally[b]}" for b in range(1, 8))
    detail = f"max residual {worst:.3e}; branch coverage {coverage}"
    if missing:
        detail += f"; branches below {min_needed}: {missing}"
    return CheckResult("lemma52-branches", ok, detail)


def check_hessian_exact(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """det(A) odd, Pf(A)^2 = det(A), and B^2 = I over F2, in exact
    integer arithmetic."""
    dets = []
    for n in range(2, counts["hessian_exact_n_max"] + 1):
        report = morse.certify_hessian_combinatorics(n)
        if not report.exact_ok():
            return CheckResult(
                "hessian-exact",
                False,
                f"n={n}: det {report.det_A}, Pf {report.pfaffian}, "
                f"B^2=I {report.b_squared_identity_mod2}",
            )
        dets.append(report.det_A)
    if dets[0] != 1 or dets[1] != 1:
        return CheckResult("hessian-exact", False, f"anchor determinants {dets[:2]} != [1, 1]")
    return CheckResult(
        "hessian-exact",
        True,
        f"n=2..{counts['hessian_exact_n_max']}: det odd, Pf^2 = det, B^2 = I; dets {dets}",
    )


def check_hessian_numeric(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Finite-difference Hessians match the exact block pairing and have
    signature zero."""
    worst = 0.0
    for n in range(2, counts["hessian_numeric_n_max"] + 1):
        report = morse.certify_hessian_numeric(n, step=1e-4)
        if not report.numeric_ok():
            return CheckResult(
                "hessian-numeric",
                False,
                f"n={n}: fd error {report.fd_max_error:.3e}, "
                f"eig counts ({report.eig_positive}, {report.eig_negative})",
            )
        worst = max(worst, float(report.fd_max_error))
    return CheckResult(
        "hessian-numeric",
        True,
        f"n=2..{counts['hessian_numeric_n_max']}: max fd error {worst:.3e} <= 1e-06, signature 0",
    )


def check_chart_symmetries(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """The chart function changes sign under coordinate conjugation, is
    constant on circle orbits, and agrees with its quadratic term to
    third order."""
    worst_tau = 0.0
    worst_orbit = 0.0
    worst_cubic = 0.0
    for n in range(2, counts["symm_n_max"] + 1):
        m = 2 * n - 2
        for i in range(counts["symm_per_n"]):
            rng = _rng(seed, 10, n, i)
            zs = 0.5 * (rng.normal(size=m) + 1j * rng.normal(size=m))
            val = morse.eval_chart_g(n, zs)
            worst_tau = max(worst_tau, abs(morse.eval_chart_g(n, morse.tau(zs)) + val))
            theta = rng.uniform(0.0, 2.0 * np.pi)
            worst_orbit = max(worst_orbit, abs(morse.eval_chart_g(n, morse.s1_orbit(zs, theta)) - val))
            if i < 20:
                u = zs / np.linalg.norm(zs)
                qu = morse.quadratic_form(n, u)
                for t in (1e-1, 1e-2, 1e-3):
                    gap = abs(morse.eval_chart_g(n, t * u) - t * t * qu)
                    worst_cubic = max(worst_cubic, gap / t**3)
    ok = worst_tau <= 1e-12 and worst_orbit <= 1e-12 and worst_cubic <= 10.0
    return CheckResult(
        "chart-symmetries",
        ok,
        f"conjugation defect {worst_tau:.3e}, orbit defect {worst_orbit:.3e}, "
        f"cubic remainder coefficient {worst_cubic:.2f} <= 10",
    )


def _circle_gap(a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(np.mod(a, 2.0 * np.pi) - np.mod(b, 2.0 * np.pi))
    return float(np.max(np.minimum(d, 2.0 * np.pi - d)))


def check_bd_torus(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Torus coordinates survive the round trip through a binary dihedral
    representation up to the mirror identification, and such
    representations push forward to commuting surface generators."""
    worst_rt = 0.0
    for n in range(2, 6):
        for i in range(counts["bd_roundtrip_per_n"]):
            rng = _rng(seed, 11, n, i)
            thetas = rng.uniform(0.0, 2.0 * np.pi, size=2 * n - 2)
            bd = bd_from_torus(TorusCoords(n=n, thetas=thetas))
            if variety.classify_locus(bd).label == GENERIC:
                return CheckResult("bd-torus", False, f"n={n} sample {i}: generic image")
            rec = torus_from_bd(bd).thetas
            gap = min(_circle_gap(rec, thetas), _circle_gap(rec, -thetas))
            worst_rt = max(worst_rt, gap)
    worst_comm = 0.0
    for i in range(counts["bd_push"]):
        rng = _rng(seed, 12, i)
        coords = TorusCoords(n=3, thetas=rng.uniform(0.0, 2.0 * np.pi, size=4))
        surface = cover.pushforward(bd_from_torus(coords))
        gens = surface.generators()
        for p in range(4):
            for q in range(p + 1, 4):
                comm = float(np.linalg.norm(qmul(gens[p], gens[q]) - qmul(gens[q], gens[p])))
                worst_comm = max(worst_comm, comm)
    ok = worst_rt <= 1e-9 and worst_comm <= 1e-9
    return CheckResult(
        "bd-torus",
        ok,
        f"round-trip gap {worst_rt:.3e} (n=2..5); pushforward commutator defect {worst_comm:.3e}",
    )


def check_link_sampler(counts: Mapping[str, int], seed: int = 0) -> CheckResult:
    """Link samples sit on the unit sphere and the Hessian quadric with
    the gauge fixed; refined samples (n = 3) land on the exact cutout."""
    worst_unit = 0.0
    worst_quad = 0.0
    real_tagged = 0
    total = 0
    for n, count in ((2, counts["link"] // 4), (3, counts["link"]), (4, counts["link"] // 4)):
        points = morse.sample_link(n, max(count, 1), _rng(seed, 13, n))
        for pt in points:
            total += 1
            worst_unit = max(worst_unit, abs(float(np.linalg.norm(pt.zs)) - 1.0))
            worst_quad = max(worst_quad, abs(morse.quadratic_form(n, pt.zs)))
            amax = int(np.argmax(np.abs(pt.zs)))
            if pt.zs[amax].imag != 0.0 or pt.zs[amax].real < 0.0:
                return CheckResult("link-sampler", False, f"n={n}: gauge not fixed")
            real_tagged += int(pt.is_real)
    worst_refined = 0.0
    refined = morse.sample_link(3, counts["link_refine"], _rng(seed, 14), refine=True)
    for pt in refined:
        worst_refined = max(worst_refined, abs(morse.eval_chart_g(3, pt.zs)))
        worst_unit = max(worst_unit, abs(float(np.linalg.norm(pt.zs)) - 1.0))
    ok = (
        worst_unit <= 1e-12
        and worst_quad <= 1e-12
        and worst_refined <= 1e-10
        and real_tagged <= max(1, total // 1000)
    )
    return CheckResult(
        "link-sampler",
        ok,
        f"sphere defect {worst_unit:.3e}, quadric defect {worst_quad:.3e}, "
        f"refined cutout residual {worst_refined:.3e}, {real_tagged}/{total} real-tagged",
    )


CHECKS: tuple[tuple[str, Callable[[Mapping[str, int], int], CheckResult]], ...] = (
    ("quaternion-algebra", check_quaternion_algebra),
    ("abelian-census", check_abelian_census),
    ("small-k-rigidity", check_small_k_rigidity),
    ("submersion-certificates", check_submersion),
    ("cover-roundtrip", check_cover_roundtrip),
    ("fiber-two-fold", check_fiber_two_fold),
    ("lemma52-branches", check_lemma52_branches),
    ("hessian-exact", check_hessian_exact),
    ("hessian-numeric", check_hessian_numeric),
    ("chart-symmetries", check_chart_symmetries),
    ("bd-torus", check_bd_torus),
    ("link-sampler", check_link_sampler),
)


def run_selftest(counts: Mapping[str, int] | None = None, seed: int = 0) -> tuple[bool, list[str]]:
    """Run every check; returns overall success and one verdict line per
    check.  Lines are deterministic for a fixed seed and counts."""
    counts = dict(REDUCED_COUNTS if counts is None else counts)
    lines = []
    all_ok = True
    for name, fn in CHECKS:
        try:
            result = fn(counts, seed)
        except Exception as exc:  # a crashed check is a failed check
            result = CheckResult(name, False, f"raised {type(exc).__name__}: {exc}")
        all_ok = all_ok and result.ok
        lines.append(f"{'PASS' if result.ok else 'FAIL'} {result.name}: {result.detail}")
    return all_ok, lines
