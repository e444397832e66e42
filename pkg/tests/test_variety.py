"""Sampling, locus classification, submersion certificates, and the
abelian census."""

import numpy as np
import pytest

from charvar.errors import AbelianInput, ConstraintViolated
from charvar.quat import I, J, K, exp_pure, gprod, qmul
from charvar.rep import alpha_star, bd_from_torus, fingerprint, make_rep, TorusCoords
from charvar.variety import (
    ABELIAN,
    BINARY_DIHEDRAL,
    GENERIC,
    classify_locus,
    conjugation_rank,
    deform,
    enumerate_abelian,
    eval_f,
    eval_g,
    local_dimension,
    sample_point,
    sign_transport,
    submersion_certificate,
)


class TestSampler:
    @pytest.mark.parametrize("k", [3, 4, 5, 6, 8, 12])
    def test_samples_live_on_the_variety(self, k):
        for i in range(20):
            r = sample_point(k, np.random.default_rng((101, k, i)))
            assert r.k == k
            assert np.max(np.abs(r.meridians[:, 0])) <= 1e-12
            norms = np.linalg.norm(r.meridians, axis=1)
            assert np.max(np.abs(norms - 1.0)) <= 1e-12
            assert np.linalg.norm(gprod(*r.meridians) - np.array([1, 0, 0, 0])) <= 1e-10

    def test_constraint_function_vanishes(self):
        for i in range(20):
            r = sample_point(6, np.random.default_rng((103, i)))
            assert abs(eval_f(r.meridians[:-1])) <= 1e-12

    def test_rejects_tiny_k(self):
        with pytest.raises(ValueError):
            sample_point(2, np.random.default_rng(0))


class TestClassification:
    def test_abelian_anchor(self):
        r = make_rep([I, I, -I, -I])
        label = classify_locus(r)
        assert label.label == ABELIAN
        assert label.rank <= 1

    def test_binary_dihedral_anchor(self):
        coords = TorusCoords(n=3, thetas=np.array([0.9, 2.1, 3.3, 4.5]))
        label = classify_locus(bd_from_torus(coords))
        assert label.label == BINARY_DIHEDRAL
        assert label.rank == 2

    def test_generic_anchor(self):
        r = sample_point(6, np.random.default_rng(107))
        label = classify_locus(r)
        assert label.label == GENERIC
        assert label.rank == 3

    def test_commutes_with_sign_involution(self):
        for i in range(25):
            r = sample_point(6, np.random.default_rng((109, i)))
            assert classify_locus(alpha_star(r)).label == classify_locus(r).label
        coords = TorusCoords(n=2, thetas=np.array([1.4, 0.2]))
        bd = bd_from_torus(coords)
        assert classify_locus(alpha_star(bd)).label == classify_locus(bd).label


class TestSubmersion:
    def test_certificate_matches_finite_difference(self):
        h = 1e-5
        for i in range(30):
            r = sample_point(6, np.random.default_rng((113, i)))
            part = r.meridians[:-1]
            cert = submersion_certificate(part)
            fd = (eval_f(deform(part, cert, h)) - eval_f(deform(part, cert, -h))) / (2.0 * h)
            assert abs(cert.derivative) > 1e-8
            assert abs(fd - cert.derivative) <= 1e-6
            assert cert.jacobian_rank == 1

    def test_deform_stays_on_spheres(self):
        r = sample_point(6, np.random.default_rng(127))
        part = r.meridians[:-1]
        cert = submersion_certificate(part)
        moved = deform(part, cert, 0.3)
        assert np.max(np.abs(np.linalg.norm(moved, axis=1) - 1.0)) <= 1e-12
        assert np.max(np.abs(moved[:, 0])) <= 1e-12
        # only the certified row moves
        untouched = [p for p in range(part.shape[0]) if p != cert.moved]
        assert np.array_equal(moved[untouched], part[untouched])

    def test_deform_at_zero_is_identity(self):
        r = sample_point(4, np.random.default_rng(131))
        part = r.meridians[:-1]
        cert = submersion_certificate(part)
        assert np.allclose(deform(part, cert, 0.0), part, atol=1e-15)

    def test_abelian_input_raises(self):
        part = np.stack([I, I, -I])
        with pytest.raises(AbelianInput):
            submersion_certificate(part)

    def test_local_dimension(self):
        # k = 3 is rigid; non-abelian k punctures give 2k - 6
        assert local_dimension(sample_point(3, np.random.default_rng(137))) == 0
        for k in (4, 6, 8):
            r = sample_point(k, np.random.default_rng((139, k)))
            if classify_locus(r).label != ABELIAN:
                assert local_dimension(r) == 2 * k - 6

    def test_conjugation_rank_generic(self):
        r = sample_point(6, np.random.default_rng(149))
        assert conjugation_rank(r.meridians[:-1]) == 3


class TestCensus:
    def test_counts(self):
        for k in (4, 6, 8):
            reps = enumerate_abelian(k)
            assert len(reps) == 2 ** (k - 2)
            for r in reps:
                assert classify_locus(r).label == ABELIAN

    def test_distinct_classes_k6(self):
        reps = enumerate_abelian(6)
        fps = [fingerprint(r) for r in reps]
        for a in range(len(fps)):
            for b in range(a + 1, len(fps)):
                assert fps[a].distance(fps[b]) > 1e-6

    def test_odd_k_rejected(self):
        with pytest.raises(ValueError):
            enumerate_abelian(5)

    def test_sign_transport_involution(self):
        # domain: the k-2 free meridians after the leading i, inside g^{-1}(0)
        base = np.tile(I, (4, 1))
        signs = [1.0, -1.0, 1.0, -1.0]
        flipped = sign_transport(base, signs)
        assert np.array_equal(sign_transport(flipped, signs), base)
        assert np.array_equal(flipped, base * np.array(signs)[:, None])

    def test_sign_transport_validates_signs(self):
        base = np.tile(I, (4, 1))
        with pytest.raises(ValueError):
            sign_transport(base, [1.0, 0.5, 1.0, 1.0])

    def test_sign_transport_validates_domain(self):
        # jk = i, so re(i * jk) = -1: not in g^{-1}(0)
        bad = np.stack([J, K])
        with pytest.raises(ConstraintViolated):
            sign_transport(bad, [1.0, 1.0])


class TestSecondConstraint:
    def test_eval_g_zero_on_axis_families(self):
        # words of the form e^{t k} i have re(i * word-product) = 0 when the
        # partial product lies back in the i,j plane
        part = np.stack([I, qmul(exp_pure(0.7, K), I)])
        val = eval_g(part)
        assert isinstance(val, float)
