import numpy as np
import pytest
from scipy.integrate import quad

from bisd.distribution import cdf_from_atoms, eval_cdf, merge_grids
from bisd.first_order import check_first_order_submodular, check_first_order_supermodular
from bisd.second_order import (
    check_second_order_submodular,
    check_second_order_supermodular,
    h_marginal_x,
    h_marginal_y,
    h_surface,
    l_surface,
)

from conftest import random_cdf

ANTI = cdf_from_atoms([(1.0, 0.0), (0.0, 1.0)], [0.5, 0.5])


def h_closed_form(cdf, x, y):
    """sum of w * (x - a)+ * (y - b)+ over atoms (a, b)."""
    a, b = cdf.atoms.T
    return float(np.sum(cdf.atom_weight * np.clip(x - a, 0, None) * np.clip(y - b, 0, None)))


def h_quadrature(cdf, x, y):
    inner = lambda s: quad(lambda t: eval_cdf(cdf, s, t), 0, y, points=list(cdf.ys[cdf.ys < y]) or None, limit=200)[0]
    return quad(inner, 0, x, points=list(cdf.xs[cdf.xs < x]) or None, limit=200)[0]


class TestSurfaces:
    def test_point_mass_origin(self):
        f = cdf_from_atoms([(0.0, 0.0)])
        for sheet in (h_surface(f), l_surface(f)):
            np.testing.assert_allclose(sheet.V, np.outer(sheet.xs, sheet.ys))
            for x, y in [(0.3, 0.4), (0.9, 0.1)]:
                assert sheet.evaluate(x, y) == pytest.approx(x * y)

    def test_point_mass_far_corner(self):
        h = h_surface(cdf_from_atoms([(1.0, 1.0)]))
        assert h.evaluate(0.99, 0.99) == 0.0

    def test_center_atom(self):
        assert h_surface(cdf_from_atoms([(0.5, 0.5)])).evaluate(1.0, 1.0) == 0.25

    def test_closed_form_oracle(self, rng):
        for _ in range(30):
            f = random_cdf(rng, 6)
            h = h_surface(f)
            for x, y in rng.uniform(0, 1, (10, 2)):
                assert h.evaluate(x, y) == pytest.approx(h_closed_form(f, x, y), abs=1e-12)

    def test_quadrature_oracle(self, rng):
        for _ in range(3):
            f = random_cdf(rng, 3)
            h = h_surface(f)
            for x, y in rng.uniform(0.2, 1, (3, 2)):
                assert h.evaluate(x, y) == pytest.approx(h_quadrature(f, x, y), abs=1e-8)

    def test_sheet_invariants(self, rng):
        for _ in range(30):
            f = random_cdf(rng, 6)
            for sheet in (h_surface(f), l_surface(f)):
                assert np.all(sheet.V[0, :] == 0) and np.all(sheet.V[:, 0] == 0)
                assert np.all(np.diff(sheet.V, axis=0) >= -1e-15)
                assert np.all(np.diff(sheet.V, axis=1) >= -1e-15)
                assert np.max(np.abs(sheet.cell_residuals())) <= 1e-10

    def test_l_identity(self, rng):
        for f in [ANTI] + [random_cdf(rng, 6) for _ in range(30)]:
            h, l = h_surface(f), l_surface(f)
            hx, hy = h_marginal_x(f), h_marginal_y(f)
            x, y = np.meshgrid(h.xs, h.ys, indexing="ij")
            want = y * hx(x) + x * hy(y) - h.V
            np.testing.assert_allclose(l.V, want, atol=1e-12)

    def test_l_anti_corner(self):
        h = h_surface(ANTI)
        l = l_surface(ANTI)
        hx1 = h_marginal_x(ANTI)(1.0)
        hy1 = h_marginal_y(ANTI)(1.0)
        assert l.evaluate(1.0, 1.0) == pytest.approx(hx1 + hy1 - h.evaluate(1.0, 1.0), abs=1e-15)
        assert (hx1, hy1, h.evaluate(1.0, 1.0)) == (0.5, 0.5, 0.0)

    def test_marginal_integrals(self):
        assert h_marginal_x(cdf_from_atoms([(0.0, 0.4)]))(0.7) == pytest.approx(0.7)
        assert h_marginal_x(cdf_from_atoms([(1.0, 0.4)]))(0.99) == 0.0
        f = cdf_from_atoms([(0.2, 0.8), (0.8, 0.2)], [0.5, 0.5])
        assert h_marginal_x(f)(1.0) == pytest.approx(0.5, abs=1e-15)


class TestSubmodular:
    def test_identity(self, rng):
        f = random_cdf(rng)
        assert check_second_order_submodular(f, f).holds

    def test_extreme_masses(self):
        hi, lo = cdf_from_atoms([(1.0, 1.0)]), cdf_from_atoms([(0.0, 0.0)])
        assert check_second_order_submodular(hi, lo).holds
        v = check_second_order_submodular(lo, hi)
        assert not v.holds
        w = v.witness
        assert 0 < w.x < 1 and (w.y is None or 0 < w.y < 1)

    def test_witness_inside_open_square_for_surface(self):
        # equal marginals, so only the H family can fail
        f1 = cdf_from_atoms([(0.2, 0.2), (0.8, 0.8)], [0.5, 0.5])
        f2 = cdf_from_atoms([(0.2, 0.8), (0.8, 0.2)], [0.5, 0.5])
        v = check_second_order_submodular(f1, f2)
        assert not v.holds and v.witness.family == "H"
        assert 0 < v.witness.x < 1 and 0 < v.witness.y < 1
        assert v.witness.margin > v.tolerance

    def test_corner_check_is_exhaustive(self, rng):
        for _ in range(30):
            f1, f2 = random_cdf(rng), random_cdf(rng)
            g = merge_grids(f1, f2)
            d = h_surface(f1, g) - h_surface(f2, g)
            q = rng.uniform(0, 1, (300, 2))
            assert np.max(d.evaluate(q[:, 0], q[:, 1])) <= d.V.max() + 1e-14


class TestSupermodular:
    def test_identity(self, rng):
        f = random_cdf(rng)
        assert check_second_order_supermodular(f, f).holds

    def test_comonotone_pair(self):
        f1 = cdf_from_atoms([(0.2, 0.2), (0.8, 0.8)], [0.5, 0.5])
        f2 = cdf_from_atoms([(0.2, 0.8), (0.8, 0.2)], [0.5, 0.5])
        assert check_second_order_supermodular(f1, f2).holds
        v = check_second_order_supermodular(f2, f1)
        assert not v.holds and v.witness.family == "L"


class TestFirstImpliesSecond:
    def test_implication(self, rng):
        for _ in range(100):
            f1, f2 = random_cdf(rng, 5, grid=4), random_cdf(rng, 5, grid=4)
            if check_first_order_submodular(f1, f2).holds:
                assert check_second_order_submodular(f1, f2).holds
            if check_first_order_supermodular(f1, f2).holds:
                assert check_second_order_supermodular(f1, f2).holds
