import numpy as np
import pytest

from semalign import linalg
from semalign.errors import DegenerateInput, InvalidMatrix, ShapeError, ZeroVector


def mp_condition_errors(w, wp):
    """Frobenius norms of the four Moore-Penrose condition residuals."""
    return (
        np.linalg.norm(w @ wp @ w - w),
        np.linalg.norm(wp @ w @ wp - wp),
        np.linalg.norm((w @ wp).T - w @ wp),
        np.linalg.norm((wp @ w).T - wp @ w),
    )


class TestSvd:
    def test_identity_singular_values(self):
        f = linalg.svd(np.eye(3))
        assert np.allclose(f.sigma, [1.0, 1.0, 1.0])
        assert f.rank == 3

    def test_exact_zero_singular_value_dropped(self):
        f = linalg.svd(np.diag([3.0, 0.0]), rcond=1e-10)
        assert f.rank == 1
        assert np.allclose(f.sigma, [3.0])

    def test_reconstruction_random(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((5, 8))
        f = linalg.svd(m)
        rel = np.linalg.norm(f.reconstruct() - m) / np.linalg.norm(m)
        assert rel < 1e-8

    def test_orthonormal_factors(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((7, 4))
        f = linalg.svd(m)
        assert np.allclose(f.u.T @ f.u, np.eye(f.rank), atol=1e-8)
        assert np.allclose(f.vt @ f.vt.T, np.eye(f.rank), atol=1e-8)

    def test_sigma_descending_and_above_cutoff(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((6, 6))
        f = linalg.svd(m)
        assert np.all(np.diff(f.sigma) <= 0)
        assert np.all(f.sigma > f.rcond * f.sigma[0])

    def test_non_finite_rejected(self):
        m = np.array([[1.0, np.nan], [0.0, 1.0]])
        with pytest.raises(InvalidMatrix):
            linalg.svd(m)

    def test_empty_rejected(self):
        with pytest.raises(InvalidMatrix):
            linalg.svd(np.zeros((0, 3)))


class TestPseudoinverse:
    def test_identity(self):
        assert np.allclose(linalg.pseudoinverse(np.eye(4)), np.eye(4))

    def test_diagonal(self):
        wp = linalg.pseudoinverse(np.diag([2.0, 4.0]))
        assert np.allclose(wp, np.diag([0.5, 0.25]))

    def test_moore_penrose_conditions_random(self):
        rng = np.random.default_rng(3)
        w = rng.standard_normal((4, 7))
        wp = linalg.pseudoinverse(w)
        assert wp.shape == (7, 4)
        assert max(mp_condition_errors(w, wp)) < 1e-6

    def test_rank_deficient(self):
        rng = np.random.default_rng(4)
        base = rng.standard_normal((5, 2))
        w = base @ rng.standard_normal((2, 6))  # rank 2
        wp = linalg.pseudoinverse(w)
        assert max(mp_condition_errors(w, wp)) < 1e-6

    def test_zero_matrix(self):
        wp = linalg.pseudoinverse(np.zeros((3, 5)))
        assert wp.shape == (5, 3)
        assert np.all(wp == 0.0)


class TestCosine:
    def test_self_is_one(self):
        v = np.array([1.0, 2.0, -3.0])
        assert linalg.cosine(v, v) == pytest.approx(1.0, abs=1e-15)

    def test_negation_is_minus_one(self):
        v = np.array([1.0, 2.0, -3.0])
        assert linalg.cosine(v, -v) == pytest.approx(-1.0, abs=1e-15)

    def test_orthogonal_is_zero(self):
        assert linalg.cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_scale_invariance_exact_for_powers_of_two(self):
        rng = np.random.default_rng(5)
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        base = linalg.cosine(u, v)
        assert linalg.cosine(4.0 * u, 0.5 * v) == base

    def test_scale_invariance_generic(self):
        rng = np.random.default_rng(6)
        u = rng.standard_normal(9)
        v = rng.standard_normal(9)
        assert linalg.cosine(3.7 * u, 0.013 * v) == pytest.approx(
            linalg.cosine(u, v), abs=1e-12
        )

    def test_zero_vector_raises(self):
        with pytest.raises(ZeroVector):
            linalg.cosine([0.0, 0.0], [1.0, 0.0])

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            linalg.cosine([1.0, 0.0], [1.0, 0.0, 0.0])


class TestProject:
    def test_axis_projection(self):
        out = linalg.project([1.0, 1.0], [1.0, 0.0])
        assert np.allclose(out, [1.0, 0.0])

    def test_orthogonal_gives_zero(self):
        out = linalg.project([0.0, 2.0], [1.0, 0.0])
        assert np.allclose(out, [0.0, 0.0])

    def test_matches_scalar_loop_oracle(self):
        rng = np.random.default_rng(7)
        r = rng.standard_normal(8)
        s = rng.standard_normal(8)
        # Scalar-arithmetic oracle for (<r,s>/<s,s>) * s.
        num = sum(float(r[i]) * float(s[i]) for i in range(8))
        den = sum(float(s[i]) * float(s[i]) for i in range(8))
        expected = [num / den * float(s[i]) for i in range(8)]
        assert np.allclose(linalg.project(r, s), expected, atol=1e-12)

    def test_zero_direction_raises(self):
        with pytest.raises(ZeroVector):
            linalg.project([1.0, 1.0], [0.0, 0.0])


class TestLinearCka:
    def test_self_similarity_is_one(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal((20, 5))
        assert linalg.linear_cka(x, x) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_transform_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal((30, 6))
        q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        assert linalg.linear_cka(x, x @ q) == pytest.approx(1.0, abs=1e-6)

    def test_isotropic_scale_invariance(self):
        rng = np.random.default_rng(10)
        x = rng.standard_normal((15, 4))
        assert linalg.linear_cka(x, 3.0 * x) == pytest.approx(1.0, abs=1e-10)

    def test_symmetry(self):
        rng = np.random.default_rng(11)
        x = rng.standard_normal((25, 4))
        y = rng.standard_normal((25, 7))
        assert abs(linalg.linear_cka(x, y) - linalg.linear_cka(y, x)) < 1e-10

    def test_range(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            x = rng.standard_normal((12, 3))
            y = rng.standard_normal((12, 5))
            v = linalg.linear_cka(x, y)
            assert -1e-12 <= v <= 1.0 + 1e-12

    def test_different_feature_dims_allowed(self):
        rng = np.random.default_rng(13)
        v = linalg.linear_cka(rng.standard_normal((10, 3)), rng.standard_normal((10, 9)))
        assert 0.0 <= v <= 1.0 + 1e-12

    def test_too_few_samples(self):
        with pytest.raises(DegenerateInput):
            linalg.linear_cka(np.ones((1, 3)), np.ones((1, 3)))

    def test_zero_variance(self):
        with pytest.raises(DegenerateInput):
            linalg.linear_cka(np.ones((5, 3)), np.random.default_rng(0).standard_normal((5, 3)))

    def test_sample_count_mismatch(self):
        with pytest.raises(ShapeError):
            linalg.linear_cka(np.ones((5, 3)), np.ones((6, 3)))


def test_default_rcond_scales_with_shape():
    assert linalg.default_rcond((64, 256)) == pytest.approx(1e-10 * 256)
