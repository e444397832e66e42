"""Local analysis at the abelian singular points of the even-k varieties.

Around the abelian point (i, ..., i) with k = 2n the variety is cut out,
in an equivariant complex chart z on the remaining 2n-2 meridians, by a
single real function g(z) = re(i * prod_l i e^{x_l j + y_l k}) with
z_l = x_l + i y_l.  Its Hessian at 0 is the block pairing of an exact
integer antisymmetric matrix A; certifying det(A) odd (and signature
zero) certifies the cone-on-(S^{2n-3} x S^{2n-3})/S^1 local model.  The
integer work here is exact (arbitrary precision); the finite-difference
and sampling routines provide the numeric cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .quat import I, exp_chart, gprod
from .rep import PuncturedSphereRep, TOL_REL, complete_rep

FD_TOL = 1e-6


@dataclass(frozen=True)
class HessianReport:
    """Exact and numeric certification data for one value of n.

    The numeric fields are None until ``certify_hessian_numeric`` fills
    them.  ``fd_max_error`` compares the finite-difference Hessian, with
    derivative coordinates ordered (y_1..y_m, x_1..x_m), against
    (-1)^(n-1) [[0, A], [A^T, 0]]; in the opposite (x, y) ordering the
    same data matches the block matrix with sign (-1)^n.
    """

    n: int
    A: np.ndarray
    det_A: int
    pfaffian: int
    b_squared_identity_mod2: bool
    eig_positive: int | None = None
    eig_negative: int | None = None
    fd_max_error: float | None = None
    step: float | None = None
    link: str | None = None
    quotient_link: str | None = None
    bd_sublink: str | None = None

    def exact_ok(self) -> bool:
        return (
            self.det_A % 2 != 0
            and self.b_squared_identity_mod2
            and self.pfaffian**2 == self.det_A
        )

    def numeric_ok(self, fd_tol: float = FD_TOL) -> bool:
        if self.fd_max_error is None or self.eig_positive is None:
            return False
        m = 2 * self.n - 2
        return self.fd_max_error <= fd_tol and self.eig_positive == m and self.eig_negative == m


@dataclass(frozen=True)
class LinkPoint:
    zs: np.ndarray
    is_real: bool


def eval_chart_g(n: int, zs) -> float:
    """g(z) = re(i * prod_l (i e^{x_l j + y_l k})), the chart cutout function."""
    z = np.asarray(zs, dtype=complex)
    if n < 2 or z.shape != (2 * n - 2,):
        raise ValueError(f"expected 2n-2 = {2 * n - 2} coordinates for n = {n}")
    return float(gprod([I, *exp_chart(z)])[0])


def s1_orbit(zs, theta: float) -> np.ndarray:
    """The weight-2 circle action z -> e^{2 i theta} z; g is constant along it."""
    return np.asarray(zs, dtype=complex) * np.exp(2j * theta)


def tau(zs) -> np.ndarray:
    """Coordinate-wise conjugation; g is anti-symmetric under it and the
    fixed set is the binary dihedral slice."""
    return np.conj(np.asarray(zs, dtype=complex))


def matrix_A(n: int) -> np.ndarray:
    """The exact pairing matrix: zero diagonal, (-1)^(i+j) above it, and
    (-1)^(i+j+1) below (1-based indices); antisymmetric by construction."""
    if n < 2:
        raise ValueError(f"need n >= 2, got n = {n}")
    m = 2 * n - 2
    A = np.zeros((m, m), dtype=np.int64)
    for p in range(m):
        for q in range(m):
            if p < q:
                A[p, q] = (-1) ** (p + q)
            elif p > q:
                A[p, q] = -((-1) ** (p + q))
    return A


def bareiss_determinant(matrix) -> int:
    """Exact integer determinant by fraction-free elimination."""
    M = [[int(x) for x in row] for row in np.asarray(matrix)]
    size = len(M)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for i in range(size - 1):
        if M[i][i] == 0:
            pivot = next((r for r in range(i + 1, size) if M[r][i] != 0), None)
            if pivot is None:
                return 0
            M[i], M[pivot] = M[pivot], M[i]
            sign = -sign
        for j in range(i + 1, size):
            for l in range(i + 1, size):
                M[j][l] = (M[j][l] * M[i][i] - M[j][i] * M[i][l]) // prev
            M[j][i] = 0
        prev = M[i][i]
    return sign * M[size - 1][size - 1]


def pfaffian_exact(matrix) -> int:
    """Exact Pfaffian of an antisymmetric integer matrix by fraction-free
    skew elimination (exact rationals internally, integer result)."""
    M = [[Fraction(int(x)) for x in row] for row in np.asarray(matrix)]
    size = len(M)
    for r in range(size):
        for c in range(r, size):
            if M[r][c] != -M[c][r]:
                raise ValueError(f"matrix is not antisymmetric at ({r}, {c})")
    if size % 2 != 0:
        return 0
    sign = 1
    result = Fraction(1)
    for i in range(0, size, 2):
        pivot = next((j for j in range(i + 1, size) if M[i][j] != 0), None)
        if pivot is None:
            return 0
        if pivot != i + 1:
            M[pivot], M[i + 1] = M[i + 1], M[pivot]
            for row in M:
                row[pivot], row[i + 1] = row[i + 1], row[pivot]
            sign = -sign
        a = M[i][i + 1]
        result *= a
        for r in range(i + 2, size):
            for c in range(i + 2, size):
                M[r][c] -= (M[i][r] * M[i + 1][c] - M[i + 1][r] * M[i][c]) / a
    result *= sign
    if result.denominator != 1:
        raise ArithmeticError("pfaffian of an integer matrix must be an integer")
    return int(result)


def certify_hessian_combinatorics(n: int) -> HessianReport:
    """Exact part: det(A), the Pfaffian cross-check, and B^2 = I over F2
    (B = A mod 2).  No floating point is involved."""
    A = matrix_A(n)
    det = bareiss_determinant(A)
    pf = pfaffian_exact(A)
    m = A.shape[0]
    B = np.abs(A) % 2
    b_ok = bool(np.array_equal((B @ B) % 2, np.eye(m, dtype=np.int64)))
    return HessianReport(n=n, A=A, det_A=det, pfaffian=pf, b_squared_identity_mod2=b_ok)


def _zs_from_coords(u: np.ndarray, ordering: str) -> np.ndarray:
    m = u.shape[0] // 2
    if ordering == "yx":
        return u[m:] + 1j * u[:m]
    if ordering == "xy":
        return u[:m] + 1j * u[m:]
    raise ValueError(f"unknown ordering {ordering!r}")


def fd_hessian(n: int, step: float = 1e-4, ordering: str = "yx") -> np.ndarray:
    """Central finite-difference Hessian of the chart function at 0.

    ``ordering`` fixes how the 2(2n-2) derivative coordinates are laid
    out: "yx" puts the imaginary parts first, "xy" the real parts.
    """
    m = 2 * n - 2
    dim = 2 * m

    def f(u: np.ndarray) -> float:
        return eval_chart_g(n, _zs_from_coords(u, ordering))

    H = np.empty((dim, dim))
    f0 = f(np.zeros(dim))
    for p in range(dim):
        ep = np.zeros(dim)
        ep[p] = step
        H[p, p] = (f(ep) - 2.0 * f0 + f(-ep)) / step**2
        for q in range(p + 1, dim):
            eq = np.zeros(dim)
            eq[q] = step
            val = (f(ep + eq) - f(ep - eq) - f(-ep + eq) + f(-ep - eq)) / (4.0 * step**2)
            H[p, q] = H[q, p] = val
    return H


def hessian_block(n: int) -> np.ndarray:
    """(-1)^(n-1) [[0, A], [A^T, 0]]: the exact Hessian in the (y, x)
    derivative ordering used by ``fd_hessian``'s default."""
    A = matrix_A(n).astype(float)
    m = A.shape[0]
    Z = np.zeros((m, m))
    return float((-1) ** (n - 1)) * np.block([[Z, A], [A.T, Z]])


def certify_hessian_numeric(n: int, step: float = 1e-4) -> HessianReport:
    """Numeric part: finite-difference agreement with the exact block
    Hessian and the (2n-2, 2n-2) eigenvalue split (signature zero)."""
    if not 1e-6 <= step <= 1e-2:
        raise ValueError(f"step {step:g} outside [1e-6, 1e-2]")
    report = certify_hessian_combinatorics(n)
    H = fd_hessian(n, step=step, ordering="yx")
    err = float(np.max(np.abs(H - hessian_block(n))))
    eig = np.linalg.eigvalsh((H + H.T) / 2.0)
    cut = 1e-6 * float(np.max(np.abs(eig)))
    d = 2 * n - 3
    return replace(
        report,
        eig_positive=int(np.sum(eig > cut)),
        eig_negative=int(np.sum(eig < -cut)),
        fd_max_error=err,
        step=step,
        link=f"S^{d} x S^{d}",
        quotient_link=f"(S^{d} x S^{d})/S^1",
        bd_sublink=f"RP^{d}",
    )


def quadratic_form(n: int, zs) -> float:
    """The exact second-order term of the chart function: (-1)^n x^T A y
    with x = re(z), y = im(z)."""
    z = np.asarray(zs, dtype=complex)
    A = matrix_A(n).astype(float)
    return float((-1) ** n) * float(z.real @ (A @ z.imag))


def gauge_fix(zs) -> np.ndarray:
    """Rotate by a common phase so the first coordinate of maximal modulus
    is real and nonnegative (a slice of the circle action)."""
    z = np.array(zs, dtype=complex)
    amax = int(np.argmax(np.abs(z)))
    r = abs(z[amax])
    if r == 0.0:
        return z
    z *= np.conj(z[amax] / r)
    z[amax] = r
    return z


def _unit_vector(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        v = rng.normal(size=m)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm


def refine_chart_zero(n: int, zs, tol: float = 1e-12, max_iter: int = 60) -> np.ndarray:
    """Newton-project a point of the unit sphere onto the exact cutout
    g^{-1}(0), staying on the sphere; numerical gradients."""
    v = np.array(zs, dtype=complex)
    m = v.shape[0]
    h = 1e-6
    for _ in range(max_iter):
        val = eval_chart_g(n, v)
        if abs(val) <= tol:
            break
        grad = np.empty(m, dtype=complex)
        for idx in range(m):
            dre = np.zeros(m, dtype=complex)
            dre[idx] = h
            gre = (eval_chart_g(n, v + dre) - eval_chart_g(n, v - dre)) / (2 * h)
            gim = (eval_chart_g(n, v + 1j * dre) - eval_chart_g(n, v - 1j * dre)) / (2 * h)
            grad[idx] = gre + 1j * gim
        nsq = float(np.sum(np.abs(grad) ** 2))
        if nsq == 0.0:
            raise ArithmeticError("vanishing gradient during refinement")
        v = v - val * grad / nsq
        v = v / np.linalg.norm(v)
    residual = abs(eval_chart_g(n, v))
    if residual > 1e-10:
        raise ArithmeticError(f"refinement stalled at residual {residual:.3e}")
    return v


def sample_link(n: int, count: int, rng: np.random.Generator, refine: bool = False) -> list[LinkPoint]:
    """Gauge-fixed samples of the null set of the Hessian quadric on the
    unit sphere: the local model of the link of the singular point.

    The bilinear constraint x^T A y = 0 is solved exactly by drawing the
    y factor on the sphere, drawing x in the hyperplane orthogonal to Ay,
    and mixing radially.  With ``refine`` (n = 3 only) each sample is
    Newton-projected onto the exact cutout, residual at most 1e-10.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if refine and n != 3:
        raise ValueError("exact-cutout refinement is implemented for n = 3 only")
    m = 2 * n - 2
    A = matrix_A(n).astype(float)
    points = []
    for _ in range(count):
        y = _unit_vector(rng, m)
        w = A @ y
        w /= np.linalg.norm(w)
        while True:
            x = rng.normal(size=m)
            x -= (x @ w) * w
            nx = np.linalg.norm(x)
            if nx > 1e-6:
                x /= nx
                break
        t = rng.uniform(0.0, np.pi / 2.0)
        zs = np.cos(t) * x + 1j * (np.sin(t) * y)
        if refine:
            zs = refine_chart_zero(n, zs)
        zs = gauge_fix(zs)
        points.append(LinkPoint(zs=zs, is_real=bool(np.all(zs.imag == 0.0))))
    return points


def link_csv(points: list[LinkPoint]) -> str:
    """CSV export: interleaved real/imaginary columns plus the real-slice tag."""
    if not points:
        return ""
    m = points[0].zs.shape[0]
    header = ",".join(f"re_{idx + 1},im_{idx + 1}" for idx in range(m)) + ",is_real"
    lines = [header]
    for pt in points:
        cols = []
        for z in pt.zs:
            cols.append(repr(float(z.real)))
            cols.append(repr(float(z.imag)))
        cols.append("1" if pt.is_real else "0")
        lines.append(",".join(cols))
    return "\n".join(lines) + "\n"


def rep_from_chart(zs, tol: float = TOL_REL) -> PuncturedSphereRep:
    """Lift a chart point on g^{-1}(0) to a full representation: meridians
    (i, i e^{x_1 j + y_1 k}, ..., completion)."""
    z = np.asarray(zs, dtype=complex)
    return complete_rep([I, *exp_chart(z)], tol=tol)


def hessian_report_json(report: HessianReport) -> dict:
    return {
        "n": report.n,
        "A": [[int(x) for x in row] for row in report.A],
        "det_A": str(report.det_A),
        "pfaffian": str(report.pfaffian),
        "b_squared_identity_mod2": report.b_squared_identity_mod2,
        "eig_positive": report.eig_positive,
        "eig_negative": report.eig_negative,
        "fd_max_error": report.fd_max_error,
        "step": report.step,
        "link": report.link,
        "quotient_link": report.quotient_link,
        "bd_sublink": report.bd_sublink,
        "exact_ok": report.exact_ok(),
        "numeric_ok": report.numeric_ok() if report.fd_max_error is not None else None,
    }
