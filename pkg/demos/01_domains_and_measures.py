"""Generate each parametric domain family and tabulate exact measures.

The isoperimetric ratio I = perimeter^2 / area is scale invariant and has
closed forms for every family; this script builds the polygons, measures
them, and compares against those forms.
"""

import math

import isospec as iso


def row(label, domain, closed_form=None):
    a = iso.area(domain)
    p = iso.perimeter(domain)
    ratio = iso.isoperimetric_ratio(domain)
    check = ""
    if closed_form is not None:
        check = f"  closed form {closed_form:10.4f}  match {abs(ratio - closed_form) < 1e-10 * closed_form}"
    print(f"{label:18s} area {a:9.4f}  perimeter {p:9.4f}  I {ratio:10.4f}{check}")


print("== rectangles [0, ell] x [0, 1]")
for ell in (1, 2, 5, 10):
    row(f"rectangle({ell})", iso.make_rectangle(float(ell)), 4 * (1 + ell) ** 2 / ell)

print("\n== combs: m teeth, area 3m-1, perimeter 6m")
for m in (1, 3, 6):
    row(f"comb({m})", iso.make_comb(m), 36 * m * m / (3 * m - 1))

print("\n== waffles: side 2m+1 with m^2 unit holes")
for m in (1, 2, 4):
    row(f"waffle({m})", iso.make_waffle(m))

print("\n== regular polygons on the unit circle: I = 4 m tan(pi/m) -> 4 pi")
for m in (3, 4, 6, 12, 96):
    row(f"regular({m})", iso.make_regular_polygon(m), 4 * m * math.tan(math.pi / m))
print(f"{'4*pi':18s} {'':45s} I {4 * math.pi:10.4f}")

print("\n== square annuli: unit square minus concentric square of side s")
for s in (0.1, 0.5, 0.9):
    row(f"annulus({s})", iso.make_square_annulus(s), 16 * (1 + s) / (1 - s))

print("\n== seeded random polygons (deterministic per seed)")
for seed in (0, 1, 2):
    row(f"random(20, {seed})", iso.make_random_polygon(20, seed))
