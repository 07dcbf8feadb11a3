"""Stiffness/mass assembly for the Laplace eigenproblem on triangle meshes.

Piecewise-linear elements are the default; quadratic elements sit behind the
``degree`` flag.  All element integrals are evaluated exactly for the
polynomial integrands involved, Dirichlet conditions are imposed by
eliminating boundary rows and columns, and the assembly order is fixed
(ascending triangle index) so matrices are bitwise reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import AssemblyError, ParameterError
from .mesh import Mesh

DIRICHLET = "dirichlet"
NEUMANN = "neumann"

# exact reference mass matrix for quadratic elements, ordering
# [v0, v1, v2, m01, m12, m20], to be scaled by area/180
_P2_MASS_REF = np.array([
    [6, -1, -1, 0, -4, 0],
    [-1, 6, -1, 0, 0, -4],
    [-1, -1, 6, -4, 0, 0],
    [0, 0, -4, 32, 16, 16],
    [-4, 0, 0, 16, 32, 16],
    [0, -4, 0, 16, 16, 32],
], dtype=np.float64)


@dataclass(frozen=True)
class OperatorPair:
    """Symmetric stiffness/mass pair for one boundary condition."""

    K: sp.csr_matrix
    M: sp.csr_matrix
    n_dof: int
    bc: str
    degree: int
    dof_nodes: np.ndarray  # original mesh node/dof index of each retained dof


def _triangle_geometry(mesh: Mesh):
    p = mesh.nodes[mesh.triangles]  # (t, 3, 2)
    # edge i is opposite local vertex i
    e = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    det = e[:, 2, 0] * (-e[:, 1, 1]) - e[:, 2, 1] * (-e[:, 1, 0])
    area = 0.5 * det
    if np.any(area <= 0.0):
        raise AssemblyError("mesh contains non-positive triangles")
    return p, e, area


def _assemble_p1(mesh: Mesh):
    _p, e, area = _triangle_geometry(mesh)
    # K_e[i, j] = (e_i . e_j) / (4 A);  M_e = A/12 (ones + eye)
    locK = np.einsum("tik,tjk->tij", e, e) / (4.0 * area)[:, None, None]
    locM = (area / 12.0)[:, None, None] * (np.ones((3, 3)) + np.eye(3))[None, :, :]
    conn = mesh.triangles
    rows = np.repeat(conn, 3, axis=1).ravel()
    cols = np.tile(conn, (1, 3)).ravel()
    n = mesh.n_nodes
    K = sp.coo_matrix((locK.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((locM.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    return K, M, n


def _p2_connectivity(mesh: Mesh):
    """Vertex dofs keep their node ids; every edge gets one midpoint dof."""
    edge_dof: dict = {}
    next_id = mesh.n_nodes
    conn = np.empty((mesh.n_triangles, 6), dtype=np.int64)
    for i, (a, b, c) in enumerate(mesh.triangles):
        conn[i, 0:3] = (a, b, c)
        for slot, (u, v) in enumerate(((a, b), (b, c), (c, a))):
            key = (u, v) if u < v else (v, u)
            if key not in edge_dof:
                edge_dof[key] = next_id
                next_id += 1
            conn[i, 3 + slot] = edge_dof[key]
    return conn, edge_dof, next_id


def _assemble_p2(mesh: Mesh):
    _p, e, area = _triangle_geometry(mesh)
    conn, edge_dof, n = _p2_connectivity(mesh)
    t = mesh.n_triangles

    # constant gradients of the barycentric coordinates
    g = np.empty_like(e)  # (t, 3, 2): g[i] = perp(e_i) / (2A)
    g[:, :, 0] = -e[:, :, 1]
    g[:, :, 1] = e[:, :, 0]
    g /= (2.0 * area)[:, None, None]

    # midpoint-edge quadrature: barycentric points, exact for quadratics
    qpts = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    locK = np.zeros((t, 6, 6))
    for lam in qpts:
        grads = np.empty((t, 6, 2))
        for i in range(3):
            grads[:, i] = (4.0 * lam[i] - 1.0) * g[:, i]
        for slot, (i, j) in enumerate(((0, 1), (1, 2), (2, 0))):
            grads[:, 3 + slot] = 4.0 * (lam[i] * g[:, j] + lam[j] * g[:, i])
        locK += np.einsum("tik,tjk->tij", grads, grads)
    locK *= (area / 3.0)[:, None, None]

    locM = (area / 180.0)[:, None, None] * _P2_MASS_REF[None, :, :]

    rows = np.repeat(conn, 6, axis=1).ravel()
    cols = np.tile(conn, (1, 6)).ravel()
    K = sp.coo_matrix((locK.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((locM.ravel(), (rows, cols)), shape=(n, n)).tocsr()

    bmask = np.zeros(n, dtype=bool)
    bmask[mesh.boundary_nodes] = True
    counts = mesh.edge_counts()
    for key, count in counts.items():
        if count == 1:
            bmask[edge_dof[key]] = True
    boundary_dofs = np.nonzero(bmask)[0]
    return K, M, n, boundary_dofs


def assemble(mesh: Mesh, bc: str, degree: int = 1) -> OperatorPair:
    """Assemble the operator pair for the requested boundary condition.

    Dirichlet eliminates boundary dofs (strong enforcement); Neumann keeps
    every dof (natural condition).
    """
    if mesh.n_triangles == 0 or mesh.n_nodes == 0:
        raise AssemblyError("cannot assemble on an empty mesh")
    if bc not in (DIRICHLET, NEUMANN):
        raise ParameterError(f"unknown boundary condition {bc!r}")
    if degree not in (1, 2):
        raise ParameterError("element degree must be 1 or 2")

    if degree == 1:
        K, M, n = _assemble_p1(mesh)
        boundary_dofs = mesh.boundary_nodes
    else:
        K, M, n, boundary_dofs = _assemble_p2(mesh)

    if bc == NEUMANN:
        return OperatorPair(K=K, M=M, n_dof=n, bc=bc, degree=degree,
                            dof_nodes=np.arange(n, dtype=np.int64))

    keep = np.setdiff1d(np.arange(n, dtype=np.int64), boundary_dofs)
    if len(keep) == 0:
        raise AssemblyError("Dirichlet elimination removed every dof; mesh too coarse")
    Kd = K[keep][:, keep].tocsr()
    Md = M[keep][:, keep].tocsr()
    return OperatorPair(K=Kd, M=Md, n_dof=len(keep), bc=bc, degree=degree,
                        dof_nodes=keep)


def export_matrix_market(pair: OperatorPair, basename: str) -> tuple:
    """Debug export: write K and M as Matrix Market files, return the paths."""
    import scipy.io

    k_path = f"{basename}_K.mtx"
    m_path = f"{basename}_M.mtx"
    scipy.io.mmwrite(k_path, pair.K.tocoo(), symmetry="symmetric")
    scipy.io.mmwrite(m_path, pair.M.tocoo(), symmetry="symmetric")
    return k_path, m_path
