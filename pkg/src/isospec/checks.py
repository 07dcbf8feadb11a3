"""Self-contained invariant suite behind the ``check`` subcommand.

Each check raises AssertionError on violation; run_all returns the list of
(name, passed, message) triples so callers can print one line per check.
"""

from __future__ import annotations

import math

import numpy as np

from . import analytic, eig, fem, geom, mesh, specfun


def _close(a, b, rel=1e-10):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def check_geometry_closed_forms():
    for m in range(1, 7):
        comb = geom.make_comb(m)
        assert _close(geom.area(comb), 3 * m - 1), f"comb area m={m}"
        assert _close(geom.perimeter(comb), 6 * m), f"comb perimeter m={m}"
        assert _close(geom.isoperimetric_ratio(comb), 36 * m * m / (3 * m - 1)), f"comb I m={m}"
    for m in (3, 4, 6, 12, 96):
        poly = geom.make_regular_polygon(m)
        assert _close(geom.isoperimetric_ratio(poly), 4 * m * math.tan(math.pi / m)), f"m-gon {m}"
    for ell in (1.0, 2.0, 3.5, 10.0):
        rect = geom.make_rectangle(ell)
        assert _close(geom.isoperimetric_ratio(rect), 4 * (1 + ell) ** 2 / ell), f"rect {ell}"
    for s in (0.1, 0.5, 0.9):
        ann = geom.make_square_annulus(s)
        assert _close(geom.area(ann), 1 - s * s), f"annulus area {s}"
        assert _close(geom.perimeter(ann), 4 + 4 * s), f"annulus perimeter {s}"
    for m in (1, 2, 8):
        w = geom.make_waffle(m)
        assert _close(geom.area(w), (2 * m + 1) ** 2 - m * m), f"waffle area {m}"
        assert _close(geom.perimeter(w), 4 * (2 * m + 1) + 4 * m * m), f"waffle perimeter {m}"


def check_scale_invariance():
    base = geom.make_comb(3)
    i0 = geom.isoperimetric_ratio(base)
    for c in (0.1, 7.0):
        assert _close(geom.isoperimetric_ratio(geom.scaled(base, c)), i0), f"scale {c}"


def check_random_polygons():
    for seed in range(5):
        dom = geom.make_random_polygon(12, seed)
        geom.validate_domain(dom)  # raises on any violation
        again = geom.make_random_polygon(12, seed)
        assert np.array_equal(dom.outer, again.outer), "random polygon not deterministic"


def check_mesh_invariants():
    square = geom.make_rectangle(1.0)
    m0 = mesh.triangulate(square, 1.5)
    assert m0.n_triangles == 2 and m0.n_nodes == 4, "coarse square mesh"
    m1 = mesh.refine(m0)
    assert m1.n_triangles == 8 and m1.n_nodes == 9, "refined square mesh"
    a0 = float(np.sum(mesh._signed_areas(m0.nodes, m0.triangles)))
    a1 = float(np.sum(mesh._signed_areas(m1.nodes, m1.triangles)))
    assert _close(a0, a1, rel=1e-12), "refine changed total area"
    assert not mesh.verify_mesh(m1, n_holes=0), "square mesh invariants"

    waffle = geom.make_waffle(1)
    mw = mesh.triangulate(waffle, 1.0)
    problems = mesh.verify_mesh(mw, n_holes=1)
    assert not problems, f"waffle mesh: {problems}"
    aw = float(np.sum(mesh._signed_areas(mw.nodes, mw.triangles)))
    assert _close(aw, geom.area(waffle), rel=1e-12), "waffle mesh area"


def check_fem_invariants():
    square = geom.make_rectangle(1.0)
    msh = mesh.triangulate(square, 0.3)
    for degree in (1, 2):
        neumann = fem.assemble(msh, fem.NEUMANN, degree=degree)
        ones = np.ones(neumann.n_dof)
        assert _close(float(ones @ (neumann.M @ ones)), 1.0), f"patch test degree {degree}"
        rs = np.abs(neumann.K @ ones)
        scale = float(np.max(np.abs(neumann.K.data)))
        assert float(np.max(rs)) <= 1e-10 * scale, f"Neumann row sums degree {degree}"
    neumann = fem.assemble(msh, fem.NEUMANN)
    dirichlet = fem.assemble(msh, fem.DIRICHLET)
    assert dirichlet.n_dof + len(msh.boundary_nodes) == neumann.n_dof, "dof bookkeeping"
    asym = abs(neumann.K - neumann.K.T)
    assert asym.nnz == 0 or float(asym.max()) < 1e-12, "stiffness symmetric"


def check_inertia_against_dense():
    square = geom.make_rectangle(1.0)
    msh = mesh.triangulate(square, 0.2)
    neumann = fem.assemble(msh, fem.NEUMANN)
    for tau in (1.0, 15.0, 45.0, 110.0):
        fast = eig.count_leq_retry(neumann, tau).n_below
        oracle = eig.dense_count_below(neumann, tau)
        assert fast == oracle, f"inertia {fast} != dense {oracle} at tau={tau}"
    scale = float(np.max(np.abs(neumann.K.data)))
    zero_modes = eig.count_leq_retry(neumann, 1e-5 * scale).n_below
    assert zero_modes == 1, f"expected one near-zero Neumann mode, got {zero_modes}"
    counts = [eig.count_leq_retry(neumann, t).n_below for t in (1.0, 15.0, 45.0, 110.0)]
    assert counts == sorted(counts), "count not monotone in tau"


def check_bessel_zero_table():
    # classical values; (2,3) is j'_{3,1} = 4.20119 and (5,1) is 2.50113
    expected = {
        2: (1.84, 3.05, 4.20, 2.40),
        3: (2.08, 3.34, 4.51, 3.14),
        4: (2.30, 3.61, 4.81, 3.83),
        5: (2.50, 3.86, 5.09, 4.49),
        6: (2.69, 4.10, 5.37, 5.14),
        7: (2.86, 4.33, 5.63, 5.76),
    }
    for row in specfun.zero_table():
        n, values = row[0], row[1:]
        for got, want in zip(values, expected[n]):
            assert abs(got - want) <= 0.005, f"table row n={n}: {got} vs {want}"
    for n in range(2, 8):
        nu = n / 2.0
        for ell in range(1, 4):
            lo, hi = specfun.lorch_szego_interval(nu, ell)
            p = specfun.bessel_zero_p(nu, ell, 1).value
            assert lo < p < hi, f"Lorch-Szego violated at n={n}, ell={ell}"


def check_ball_counts():
    assert analytic.ball_N(2).count == 3, "disc count"
    assert analytic.ball_N(3).count == 4, "3-ball count"
    for n in range(4, 9):
        assert analytic.ball_N(n).count > n + 1, f"ball {n} count too small"


def check_rectangle_oracles():
    for ell in ("1", "1.5", "2", "3", "7.25", "20"):
        spec2 = analytic.RectangleSpec.of(1, ell)
        assert analytic.rectangle_N_2d(ell) == analytic.rectangle_N_exact(spec2), f"ell={ell}"
    rng = np.random.default_rng(20240501)
    for n in (2, 3, 4):
        for _ in range(10):
            lengths = np.exp(rng.uniform(np.log(0.2), np.log(20.0), size=n))
            result = analytic.rectangle_sandwich_check(analytic.RectangleSpec.of(*lengths))
            assert result.all_ok, f"sandwich failed for {lengths}"


ALL_CHECKS = [
    ("geometry closed forms", check_geometry_closed_forms),
    ("isoperimetric scale invariance", check_scale_invariance),
    ("random polygon validity + determinism", check_random_polygons),
    ("mesh invariants", check_mesh_invariants),
    ("fem patch + symmetry", check_fem_invariants),
    ("inertia vs dense oracle", check_inertia_against_dense),
    ("ultraspherical zero table", check_bessel_zero_table),
    ("ball counts", check_ball_counts),
    ("rectangle oracles + sandwich", check_rectangle_oracles),
]


def run_all():
    results = []
    for name, fn in ALL_CHECKS:
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:
            results.append((name, False, f"{type(exc).__name__}: {exc}"))
    return results
