"""Exact Hessian combinatorics, finite-difference agreement, chart
symmetries, and the link sampler at the singular points."""

from fractions import Fraction

import numpy as np
import pytest

from charvar.morse import (
    bareiss_determinant,
    certify_hessian_combinatorics,
    certify_hessian_numeric,
    eval_chart_g,
    fd_hessian,
    gauge_fix,
    hessian_block,
    hessian_report_json,
    link_csv,
    matrix_A,
    pfaffian_exact,
    quadratic_form,
    refine_chart_zero,
    rep_from_chart,
    s1_orbit,
    sample_link,
    tau,
)


def pfaffian_reference(M):
    """Independent oracle: expansion along the first row, Pf(A) =
    sum_j (-1)^j a_{0j} Pf(A with rows/cols 0 and j removed)."""
    M = [[Fraction(v) for v in row] for row in M]
    m = len(M)
    if m == 0:
        return 1
    if m % 2 == 1:
        return 0

    def pf(mat):
        size = len(mat)
        if size == 0:
            return Fraction(1)
        total = Fraction(0)
        for j in range(1, size):
            keep = [r for r in range(size) if r not in (0, j)]
            minor = [[mat[r][c] for c in keep] for r in keep]
            sign = -1 if j % 2 == 0 else 1
            total += sign * mat[0][j] * pf(minor)
        return total

    out = pf(M)
    assert out.denominator == 1
    return int(out)


def determinant_reference(M):
    # float determinant rounded; safe for the small integer matrices here
    return int(round(float(np.linalg.det(np.asarray(M, dtype=float)))))


class TestExactCombinatorics:
    def test_matrix_anchor_n2(self):
        assert np.array_equal(matrix_A(2), np.array([[0, -1], [1, 0]]))

    def test_matrix_anchor_n3(self):
        # alternating checkerboard above the diagonal, antisymmetric below
        want = np.array(
            [
                [0, -1, 1, -1],
                [1, 0, -1, 1],
                [-1, 1, 0, -1],
                [1, -1, 1, 0],
            ]
        )
        assert np.array_equal(matrix_A(3), want)

    def test_pfaffian_against_reference(self):
        rng = np.random.default_rng(307)
        for size in (2, 4, 6):
            for _ in range(10):
                upper = rng.integers(-4, 5, size=(size, size))
                M = np.triu(upper, 1)
                M = M - M.T
                assert pfaffian_exact(M) == pfaffian_reference(M)

    def test_pfaffian_of_chart_matrices(self):
        for n in range(2, 7):
            A = matrix_A(n)
            assert pfaffian_exact(A) == pfaffian_reference(A)

    def test_bareiss_against_reference(self):
        rng = np.random.default_rng(311)
        for size in (2, 3, 4, 5):
            for _ in range(10):
                M = rng.integers(-5, 6, size=(size, size))
                assert bareiss_determinant(M) == determinant_reference(M)

    def test_certificates(self):
        for n in range(2, 13):
            report = certify_hessian_combinatorics(n)
            assert report.exact_ok()
            assert report.det_A % 2 == 1
            assert report.pfaffian**2 == report.det_A
            assert report.b_squared_identity_mod2

    def test_pfaffian_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            pfaffian_exact(np.array([[0, 1], [1, 0]]))

    def test_pfaffian_odd_size_is_zero(self):
        assert pfaffian_exact(np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])) == 0


class TestFiniteDifference:
    def test_default_ordering_matches_block(self):
        for n in (2, 3, 4):
            err = np.max(np.abs(fd_hessian(n) - hessian_block(n)))
            assert err <= 1e-6

    def test_coordinate_ordering_flips_the_sign(self):
        # with x before y the pairing block is (-1)^n [[0,A],[A.T,0]]; the
        # (-1)^{n-1} convention belongs to the y-first ordering
        for n in (2, 3):
            A = matrix_A(n).astype(float)
            m = A.shape[0]
            block = np.zeros((2 * m, 2 * m))
            block[:m, m:] = A
            block[m:, :m] = A.T
            fd_xy = fd_hessian(n, ordering="xy")
            assert np.max(np.abs(fd_xy - (-1.0) ** n * block)) <= 1e-6
            assert np.max(np.abs(fd_xy - (-1.0) ** (n - 1) * block)) >= 1.0

    def test_numeric_certificates(self):
        for n in (2, 3, 4):
            report = certify_hessian_numeric(n)
            assert report.numeric_ok()
            assert report.eig_positive == 2 * n - 2
            assert report.eig_negative == 2 * n - 2

    def test_step_range_enforced(self):
        with pytest.raises(ValueError):
            certify_hessian_numeric(3, step=1e-7)
        with pytest.raises(ValueError):
            certify_hessian_numeric(3, step=0.5)

    def test_report_json(self):
        data = hessian_report_json(certify_hessian_numeric(3))
        assert data["n"] == 3
        assert data["det_A"] == "1"
        assert data["pfaffian"] == "1"
        assert data["exact_ok"] is True


class TestChart:
    def test_zero_is_a_zero(self):
        for n in (2, 3, 4):
            assert eval_chart_g(n, np.zeros(2 * n - 2, dtype=complex)) == 0.0

    def test_real_slice_is_exactly_cut_out(self):
        # real coordinates keep every factor in the i,j plane, where the
        # constraint vanishes identically, floating point included
        rng = np.random.default_rng(331)
        for n in (2, 3, 4):
            for _ in range(25):
                u = rng.normal(size=2 * n - 2)
                assert eval_chart_g(n, u.astype(complex)) == 0.0

    def test_conjugation_antisymmetry(self):
        rng = np.random.default_rng(337)
        for n in (2, 3, 4):
            for _ in range(25):
                zs = 0.5 * (rng.normal(size=2 * n - 2) + 1j * rng.normal(size=2 * n - 2))
                assert abs(eval_chart_g(n, tau(zs)) + eval_chart_g(n, zs)) <= 1e-12

    def test_circle_invariance(self):
        rng = np.random.default_rng(347)
        for n in (2, 3, 4):
            zs = 0.5 * (rng.normal(size=2 * n - 2) + 1j * rng.normal(size=2 * n - 2))
            base = eval_chart_g(n, zs)
            for theta in rng.uniform(0.0, 2.0 * np.pi, 5):
                assert abs(eval_chart_g(n, s1_orbit(zs, theta)) - base) <= 1e-12

    def test_quadratic_form_matches_double_sum(self):
        rng = np.random.default_rng(349)
        for n in (2, 3, 4, 5):
            m = 2 * n - 2
            zs = rng.normal(size=m) + 1j * rng.normal(size=m)
            x, y = zs.real, zs.imag
            total = 0.0
            for l in range(m):
                for p in range(l + 1, m):
                    total += (-1.0) ** (l + p) * (y[l] * x[p] - x[l] * y[p])
            total *= (-1.0) ** (n - 1)
            assert abs(quadratic_form(n, zs) - total) <= 1e-12

    def test_cubic_remainder_coefficient(self):
        # |g(t u) - t^2 q(u)| <= 10 t^3 on unit directions
        rng = np.random.default_rng(353)
        for n in (2, 3, 4):
            m = 2 * n - 2
            for _ in range(10):
                u = rng.normal(size=m) + 1j * rng.normal(size=m)
                u /= np.linalg.norm(u)
                qu = quadratic_form(n, u)
                for t in (1e-1, 1e-2, 1e-3):
                    assert abs(eval_chart_g(n, t * u) - t * t * qu) <= 10.0 * t**3


class TestLinkSampler:
    def test_constraints_and_gauge(self):
        for n in (2, 3, 4):
            points = sample_link(n, 40, np.random.default_rng((359, n)))
            assert len(points) == 40
            for pt in points:
                assert abs(np.linalg.norm(pt.zs) - 1.0) <= 1e-12
                assert abs(quadratic_form(n, pt.zs)) <= 1e-12
                lead = pt.zs[int(np.argmax(np.abs(pt.zs)))]
                assert lead.imag == 0.0 and lead.real > 0.0

    def test_gauge_fix_normalizes_phase(self):
        rng = np.random.default_rng(367)
        zs = rng.normal(size=4) + 1j * rng.normal(size=4)
        fixed = gauge_fix(zs)
        for phase in rng.uniform(0.0, 2.0 * np.pi, 5):
            again = gauge_fix(zs * np.exp(1j * phase))
            assert np.max(np.abs(again - fixed)) <= 1e-12

    def test_refinement_lands_on_cutout(self):
        points = sample_link(3, 25, np.random.default_rng(373), refine=True)
        for pt in points:
            assert abs(eval_chart_g(3, pt.zs)) <= 1e-10
            assert abs(np.linalg.norm(pt.zs) - 1.0) <= 1e-12

    def test_refinement_limited_to_n3(self):
        with pytest.raises(ValueError):
            sample_link(4, 5, np.random.default_rng(0), refine=True)

    def test_real_points_are_tagged(self):
        # force a real sample by gauge-fixing a real vector through the
        # same tagging rule the sampler applies
        points = sample_link(3, 2000, np.random.default_rng(379))
        tagged = sum(pt.is_real for pt in points)
        assert tagged <= 2  # real slice has measure zero in the link

    def test_csv_format(self):
        points = sample_link(3, 5, np.random.default_rng(383))
        text = link_csv(points)
        lines = text.strip().splitlines()
        assert lines[0] == "re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,is_real"
        assert len(lines) == 6
        assert lines[1].split(",")[-1] in ("0", "1")

    def test_rep_from_refined_chart_zero(self):
        pt = sample_link(3, 1, np.random.default_rng(389), refine=True)[0]
        # scale into the chart's neighborhood of the singular point
        zs = 1e-3 * pt.zs
        refined = refine_chart_zero(3, zs)
        r = rep_from_chart(refined)
        assert r.k == 6
        assert np.max(np.abs(r.meridians[:, 0])) <= 1e-10
