"""Count Neumann eigenvalues up to the Dirichlet ground state on a few
domains and compare with the exact rectangle formula N = 3 + floor(sqrt(ell^2+1)).

The counting never extracts eigenvalues: it reads the inertia of a
factorization of K - tau M at tau slightly above lambda_1^h, so clustered
and multiple eigenvalues are counted exactly.
"""

import isospec as iso

print("== rectangles vs the exact lattice formula")
print("ell    N_fem   N_exact   converged   lambda_1")
for ell in (1.0, 1.5, 2.0, 3.0, 5.0):
    rep = iso.compute_N(iso.make_rectangle(ell))
    exact = iso.rectangle_N_2d(str(ell))
    print(f"{ell:4.1f}   {rep.count:4d}    {exact:4d}      {str(rep.converged):5s}   {rep.lambda1:9.4f}")

print("\n== the regular-pentagon count settles at the disc value 3")
for m in (4, 5, 8, 24):
    rep = iso.compute_N(iso.make_regular_polygon(m))
    print(f"regular({m:2d}): N = {rep.count}, I = {rep.iso_ratio:7.4f}, converged={rep.converged}")

print("\n== a domain with holes")
rep = iso.compute_N(iso.make_waffle(2))
print(f"waffle(2): N = {rep.count}, I = {rep.iso_ratio:.3f}, levels:")
for lv in rep.levels:
    print(f"   h {lv.h:7.4f}  dofs {lv.n_dof:6d}  lambda_1^h {lv.lambda1:9.5f}  N_h {lv.count}")
