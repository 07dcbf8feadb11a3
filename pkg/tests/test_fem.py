import math

import numpy as np
import pytest
import scipy.linalg as sla

import isospec as iso
from isospec.errors import AssemblyError, ParameterError
from isospec.mesh import Mesh


def _unit_right_triangle_mesh():
    nodes = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    tris = np.array([[0, 1, 2]], dtype=np.int64)
    return Mesh(nodes=nodes, triangles=tris,
                boundary_nodes=np.array([0, 1, 2], dtype=np.int64), h=math.sqrt(2.0))


class TestElementMatrices:
    def test_p1_stiffness_unit_right_triangle(self):
        pair = iso.assemble(_unit_right_triangle_mesh(), iso.NEUMANN, degree=1)
        want = np.array([[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]])
        assert np.allclose(pair.K.toarray(), want, atol=1e-15)

    def test_p1_mass_unit_right_triangle(self):
        pair = iso.assemble(_unit_right_triangle_mesh(), iso.NEUMANN, degree=1)
        want = (1.0 / 24.0) * np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])
        assert np.allclose(pair.M.toarray(), want, atol=1e-16)

    def test_p2_mass_against_quadrature_oracle(self):
        # degree-4 Gauss rule on the reference triangle reproduces the
        # hard-coded quadratic mass matrix
        pair = iso.assemble(_unit_right_triangle_mesh(), iso.NEUMANN, degree=2)
        pts = np.array([
            [0.445948490915965, 0.445948490915965],
            [0.445948490915965, 0.108103018168070],
            [0.108103018168070, 0.445948490915965],
            [0.091576213509771, 0.091576213509771],
            [0.091576213509771, 0.816847572980459],
            [0.816847572980459, 0.091576213509771],
        ])
        wts = np.array([0.223381589678011] * 3 + [0.109951743655322] * 3) * 0.5

        def basis(x, y):
            lam = np.array([1 - x - y, x, y])
            return np.array([
                lam[0] * (2 * lam[0] - 1), lam[1] * (2 * lam[1] - 1),
                lam[2] * (2 * lam[2] - 1),
                4 * lam[0] * lam[1], 4 * lam[1] * lam[2], 4 * lam[2] * lam[0],
            ])

        want = np.zeros((6, 6))
        for (x, y), w in zip(pts, wts):
            phi = basis(x, y)
            want += w * np.outer(phi, phi)
        assert np.allclose(pair.M.toarray(), want, atol=1e-14)

    def test_p2_stiffness_rows_sum_to_zero(self):
        pair = iso.assemble(_unit_right_triangle_mesh(), iso.NEUMANN, degree=2)
        assert np.allclose(pair.K.toarray().sum(axis=1), 0.0, atol=1e-13)


@pytest.fixture(scope="module")
def square_mesh():
    return iso.triangulate(iso.make_rectangle(1.0), 0.3)


class TestAssembly:

    def test_neumann_row_sums(self, square_mesh):
        pair = iso.assemble(square_mesh, iso.NEUMANN)
        scale = float(np.max(np.abs(pair.K.data)))
        assert float(np.max(np.abs(pair.K @ np.ones(pair.n_dof)))) <= 1e-10 * scale

    def test_patch_test(self, square_mesh):
        for degree in (1, 2):
            pair = iso.assemble(square_mesh, iso.NEUMANN, degree=degree)
            ones = np.ones(pair.n_dof)
            assert float(ones @ (pair.M @ ones)) == pytest.approx(1.0, rel=1e-10)

    def test_patch_test_comb(self):
        msh = iso.triangulate(iso.make_comb(3), 0.9)
        pair = iso.assemble(msh, iso.NEUMANN)
        ones = np.ones(pair.n_dof)
        assert float(ones @ (pair.M @ ones)) == pytest.approx(8.0, rel=1e-10)

    def test_symmetry(self, square_mesh):
        for bc in (iso.NEUMANN, iso.DIRICHLET):
            pair = iso.assemble(square_mesh, bc)
            for mat in (pair.K, pair.M):
                diff = (mat - mat.T).tocoo()
                assert len(diff.data) == 0 or float(np.max(np.abs(diff.data))) < 1e-12

    def test_dof_bookkeeping(self, square_mesh):
        neu = iso.assemble(square_mesh, iso.NEUMANN)
        dir_ = iso.assemble(square_mesh, iso.DIRICHLET)
        assert dir_.n_dof + len(square_mesh.boundary_nodes) == neu.n_dof

    def test_mass_positive_definite(self, square_mesh):
        for bc in (iso.NEUMANN, iso.DIRICHLET):
            pair = iso.assemble(square_mesh, bc)
            w = sla.eigvalsh(pair.M.toarray())
            assert w.min() > 0.0

    def test_stiffness_definiteness(self, square_mesh):
        neu = iso.assemble(square_mesh, iso.NEUMANN)
        w = sla.eigvalsh(neu.K.toarray())
        assert w.min() > -1e-12 * w.max()        # positive semidefinite
        assert np.sum(w < 1e-10 * w.max()) == 1  # one-dimensional kernel
        dir_ = iso.assemble(square_mesh, iso.DIRICHLET)
        wd = sla.eigvalsh(dir_.K.toarray())
        assert wd.min() > 0.0                    # positive definite

    def test_deterministic_assembly(self, square_mesh):
        a = iso.assemble(square_mesh, iso.NEUMANN)
        b = iso.assemble(square_mesh, iso.NEUMANN)
        assert np.array_equal(a.K.data, b.K.data)
        assert np.array_equal(a.M.data, b.M.data)

    def test_galerkin_upper_bounds_and_monotone_decrease(self):
        # discrete eigenvalues sit above the separable exact values and
        # decrease under refinement, for both boundary conditions
        exact_dirichlet = 2 * math.pi**2
        exact_neumann = math.pi**2  # first positive
        msh = iso.triangulate(iso.make_rectangle(1.0), 0.3)
        prev_d = prev_n = None
        for _ in range(3):
            d = iso.assemble(msh, iso.DIRICHLET)
            n = iso.assemble(msh, iso.NEUMANN)
            lam = sla.eigh(d.K.toarray(), d.M.toarray(), eigvals_only=True,
                           subset_by_index=(0, 0))[0]
            mu = sla.eigh(n.K.toarray(), n.M.toarray(), eigvals_only=True,
                          subset_by_index=(1, 1))[0]
            assert lam >= exact_dirichlet
            assert mu >= exact_neumann
            if prev_d is not None:
                assert lam <= prev_d * (1 + 1e-12)
                assert mu <= prev_n * (1 + 1e-12)
            prev_d, prev_n = lam, mu
            msh = iso.refine(msh)

    def test_p2_more_accurate_than_p1(self):
        msh = iso.triangulate(iso.make_rectangle(1.0), 0.3)
        results = {}
        for degree in (1, 2):
            d = iso.assemble(msh, iso.DIRICHLET, degree=degree)
            lam = sla.eigh(d.K.toarray(), d.M.toarray(), eigvals_only=True,
                           subset_by_index=(0, 0))[0]
            results[degree] = abs(lam - 2 * math.pi**2)
        assert results[2] < 1e-2 * results[1]

    def test_errors(self, square_mesh):
        empty = Mesh(nodes=np.zeros((0, 2)), triangles=np.zeros((0, 3), dtype=np.int64),
                     boundary_nodes=np.zeros(0, dtype=np.int64), h=0.0)
        with pytest.raises(AssemblyError):
            iso.assemble(empty, iso.NEUMANN)
        with pytest.raises(ParameterError):
            iso.assemble(square_mesh, "robin")
        with pytest.raises(ParameterError):
            iso.assemble(square_mesh, iso.NEUMANN, degree=3)


class TestMatrixMarketExport:
    def test_round_trip(self, square_mesh, tmp_path):
        import scipy.io

        pair = iso.assemble(square_mesh, iso.NEUMANN)
        k_path, m_path = iso.fem.export_matrix_market(pair, str(tmp_path / "sq"))
        K = scipy.io.mmread(k_path).tocsr()
        assert np.allclose(K.toarray(), pair.K.toarray(), atol=1e-15)
