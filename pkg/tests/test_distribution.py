import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisd.distribution import (
    UNIT_FRAME,
    CommonFrame,
    SampleSet,
    StepCdf,
    build_cdf,
    build_common_frame,
    build_pair,
    cdf_from_atoms,
    eval_cdf,
    marginal_x,
    merge_grids,
    quasi_volume,
)
from bisd.errors import FrameMismatchError, InvalidInputError
from bisd.first_order import check_first_order_submodular

from conftest import brute_cdf, random_cdf, random_sampleset

ANTI = [(1.0, 0.0), (0.0, 1.0)]
DIAG = [(0.0, 0.0), (1.0, 1.0)]


class TestSampleSet:
    def test_weights_normalized(self):
        s = SampleSet.from_points([(0, 0), (1, 1)], [1, 3])
        np.testing.assert_allclose(s.weights, [0.25, 0.75])
        assert abs(s.weights.sum() - 1.0) <= 1e-12

    def test_default_weights_and_size(self):
        s = SampleSet.from_points([(0, 0), (0.5, 0.5), (1, 1)])
        np.testing.assert_allclose(s.weights, np.full(3, 1 / 3))
        assert s.size == 3

    @pytest.mark.parametrize(
        "points, weights",
        [
            ([], None),
            ([(0, 0)], [-1.0]),
            ([(0, 0)], [0.0]),
            ([(0, 0), (1, 1)], [1.0]),
            ([(np.nan, 0)], None),
        ],
    )
    def test_rejects_invalid(self, points, weights):
        with pytest.raises(InvalidInputError):
            SampleSet.from_points(points, weights)

    def test_merge_sums_duplicates_and_keeps_size(self):
        s = SampleSet.from_points([(0.5, 0.5), (0.1, 0.2), (0.5, 0.5)]).merged()
        np.testing.assert_array_equal(s.points, [[0.1, 0.2], [0.5, 0.5]])
        np.testing.assert_allclose(s.weights, [1 / 3, 2 / 3])
        assert s.size == 3

    def test_immutable(self):
        s = SampleSet.from_points([(0.5, 0.5)])
        with pytest.raises(ValueError):
            s.points[0, 0] = 1.0


class TestCommonFrame:
    def test_identity_when_inside_unit_square(self):
        a = SampleSet.from_points([(0.1, 0.2), (0.9, 0.3)])
        b = SampleSet.from_points([(0.5, 0.5)])
        assert build_common_frame(a, b) == UNIT_FRAME

    def test_affine_rescale(self):
        a = SampleSet.from_points([(2, 4)])
        b = SampleSet.from_points([(0, 0), (4, 8)])
        fr = build_common_frame(a, b)
        assert fr == CommonFrame(0.0, 4.0, 0.0, 8.0)
        np.testing.assert_allclose(fr.to_unit([(2, 4)]), [[0.5, 0.5]])

    def test_degenerate_axis_widened(self):
        a = SampleSet.from_points([(5, 5)])
        fr = build_common_frame(a, a)
        assert fr.x_lo < 5 < fr.x_hi and fr.y_lo < 5 < fr.y_hi
        u = fr.to_unit([(5, 5)])
        assert np.all((u > 0) & (u < 1))

    def test_degenerate_frame_rejected(self):
        with pytest.raises(InvalidInputError):
            CommonFrame(1.0, 1.0, 0.0, 1.0)

    def test_round_trip(self, rng):
        fr = CommonFrame(-3.0, 7.0, 2.0, 2.5)
        pts = rng.uniform([-3, 2], [7, 2.5], size=(20, 2))
        np.testing.assert_allclose(fr.from_unit(fr.to_unit(pts)), pts)

    def test_point_outside_frame(self):
        with pytest.raises(InvalidInputError):
            build_cdf(SampleSet.from_points([(2.0, 0.5)]), UNIT_FRAME)

    def test_build_pair_shares_frame(self):
        a = SampleSet.from_points([(2, 4)])
        b = SampleSet.from_points([(0, 0), (4, 8)])
        f1, f2 = build_pair(a, b)
        assert f1.frame == f2.frame
        assert eval_cdf(f1, 0.5, 0.5) == 1.0
        assert eval_cdf(f2, 0.5, 0.5) == 0.5

    def test_checkers_reject_mismatched_frames(self):
        a = build_cdf(SampleSet.from_points([(2, 4)]))
        b = cdf_from_atoms([(0.5, 0.5)])
        with pytest.raises(FrameMismatchError):
            check_first_order_submodular(a, b)


class TestBuildCdf:
    def test_single_atom(self):
        f = cdf_from_atoms([(0.3, 0.7)])
        assert eval_cdf(f, 0.3, 0.7) == 1.0
        assert eval_cdf(f, 0.3, 0.69) == 0.0
        assert eval_cdf(f, 0.29, 1.0) == 0.0
        assert eval_cdf(f, 1.0, 1.0) == 1.0

    def test_anti_diagonal(self):
        f = cdf_from_atoms(ANTI, [0.5, 0.5])
        assert eval_cdf(f, 0.5, 0.5) == 0.0
        assert eval_cdf(f, 1.0, 0.5) == 0.5
        assert eval_cdf(f, 1.0, 1.0) == 1.0
        assert eval_cdf(f, 0.2, 0.2) == 0.0

    def test_diagonal(self, rng):
        f = cdf_from_atoms(DIAG, [0.5, 0.5])
        s, t = rng.uniform(0, 1, (2, 50))
        np.testing.assert_array_equal(f.evaluate(s, t), np.full(50, 0.5))
        assert eval_cdf(f, 1.0, 1.0) == 1.0

    def test_out_of_domain(self):
        f = cdf_from_atoms(DIAG)
        with pytest.raises(InvalidInputError):
            eval_cdf(f, 1.5, 0.5)

    def test_matches_brute_force(self, rng):
        for _ in range(50):
            s = random_sampleset(rng, 8, grid=rng.choice([None, 4]))
            f = build_cdf(s, UNIT_FRAME)
            q = rng.uniform(0, 1, (30, 2))
            q[:10] = f.atoms[rng.integers(len(f.atoms), size=10)]
            got = f.evaluate(q[:, 0], q[:, 1])
            want = [brute_cdf(s.points, s.weights, a, b) for a, b in q]
            np.testing.assert_allclose(got, want, atol=1e-12)

    def test_type_invariants(self, rng):
        for _ in range(50):
            f = random_cdf(rng, 8)
            assert f.xs[-1] == 1.0 and f.ys[-1] == 1.0
            assert np.all(np.diff(f.F, axis=0) >= -1e-15)
            assert np.all(np.diff(f.F, axis=1) >= -1e-15)
            assert abs(f.F[-1, -1] - 1.0) <= 1e-12
            assert np.all(f.block_masses() >= -1e-12)
            np.testing.assert_array_equal(f.FX, f.F[:, -1])
            np.testing.assert_array_equal(f.FY, f.F[-1, :])
            assert abs(f.atom_weight.sum() - 1.0) <= 1e-12

    def test_atoms_round_trip_through_quasi_volumes(self, rng):
        for _ in range(50):
            f = random_cdf(rng, 8, grid=5)
            masses = f.block_masses()
            rebuilt = np.zeros_like(masses)
            ai, aj = f.atom_index.T
            rebuilt[ai, aj] = f.atom_weight
            np.testing.assert_allclose(masses, rebuilt, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=6),
        st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)),
    )
    def test_monotone(self, pts, q):
        f = cdf_from_atoms(pts)
        s, t, ds, dt = q
        s2, t2 = min(1.0, s + ds), min(1.0, t + dt)
        assert eval_cdf(f, s, t) <= eval_cdf(f, s2, t2) + 1e-15


class TestQuasiVolume:
    def test_single_atom_block(self):
        f = cdf_from_atoms([(0.3, 0.7)])
        assert quasi_volume(f, -1, 0, -1, 0) == 1.0
        assert quasi_volume(f, 0, 1, 0, 1) == 0.0

    def test_upper_block(self):
        f = cdf_from_atoms([(0.2, 0.2), (0.8, 0.8)], [0.5, 0.5])
        # (0.2, 1] x (0.2, 1] has the same atoms as (0.5, 1] x (0.5, 1]
        assert quasi_volume(f, 0, 2, 0, 2) == 0.5

    def test_blocks_sum_to_one(self, rng):
        for _ in range(30):
            f = random_cdf(rng, 8)
            m, n = f.F.shape
            total = sum(
                quasi_volume(f, i - 1, i, j - 1, j) for i in range(m) for j in range(n)
            )
            assert abs(total - 1.0) <= 1e-10

    def test_inverted_indices(self):
        f = cdf_from_atoms([(0.3, 0.7)])
        with pytest.raises(InvalidInputError):
            quasi_volume(f, 1, 0, -1, 0)


class TestMarginals:
    def test_unit_step(self):
        m = marginal_x(cdf_from_atoms([(0.3, 0.7)]))
        assert m(0.29) == 0.0 and m(0.3) == 1.0 and m(1.0) == 1.0

    def test_two_atoms(self):
        m = marginal_x(cdf_from_atoms([(0.2, 0.8), (0.8, 0.2)], [0.5, 0.5]))
        np.testing.assert_allclose(m.evaluate([0.1, 0.2, 0.5, 0.8, 1.0]), [0, 0.5, 0.5, 1, 1])

    def test_product_form(self):
        xs, wx = [0.1, 0.4, 0.9], [0.2, 0.5, 0.3]
        ys, wy = [0.3, 0.6], [0.7, 0.3]
        pts = [(x, y) for x in xs for y in ys]
        w = [a * b for a in wx for b in wy]
        f = cdf_from_atoms(pts, w)
        z = np.linspace(0, 1, 41)
        np.testing.assert_allclose(f.marginal_x()(z), StepCdf.from_atoms(xs, wx)(z), atol=1e-15)
        np.testing.assert_allclose(f.marginal_y()(z), StepCdf.from_atoms(ys, wy)(z), atol=1e-15)


class TestMergeGrids:
    def test_union_and_maps(self):
        a = cdf_from_atoms([(0.5, 0.5)])
        b = cdf_from_atoms([(0.25, 0.5)])
        g = merge_grids(a, b)
        np.testing.assert_array_equal(g.xs, [0.25, 0.5, 1.0])
        np.testing.assert_array_equal(g.xs[g.a_x], a.xs)
        np.testing.assert_array_equal(g.xs[g.b_x], b.xs)

    def test_identical(self):
        a = cdf_from_atoms([(0.5, 0.3), (0.2, 0.9)])
        g = merge_grids(a, a)
        np.testing.assert_array_equal(g.xs, a.xs)
        np.testing.assert_array_equal(g.a_x, np.arange(len(a.xs)))

    def test_disjoint_interiors(self):
        a = cdf_from_atoms([(0.1, 0.1), (0.3, 0.3)])
        b = cdf_from_atoms([(0.6, 0.6)])
        assert len(merge_grids(a, b).xs) == len(a.xs) + len(b.xs) - 1

    def test_lattice_has_origin(self):
        a = cdf_from_atoms([(0.5, 0.5)])
        xs, ys = merge_grids(a, a).lattice()
        np.testing.assert_array_equal(xs, [0.0, 0.5, 1.0])
