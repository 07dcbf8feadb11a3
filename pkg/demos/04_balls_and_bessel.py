"""Unit-ball spectral counts from certified Bessel zeros.

In dimension n the positive Neumann eigenvalues are squares of the zeros of
d/dx [x^(1-n/2) J_(n/2+l-1)(x)] and the Dirichlet ground state is the square
of the first zero of J_(n/2-1); both are bracketed by certified sign-change
bisection, so the count is exact.  N(B^n) overtakes n+1 at n=4 and grows
faster than any polynomial in n.
"""

import isospec as iso

print("first-zero grid (rows n = 2..7, like the classical tables):")
print("  n    p(1)     p(2)     p(3)     j(n/2-1,1)")
for n, p1, p2, p3, j in iso.zero_table():
    print(f"{n:3d}  {p1:7.4f}  {p2:7.4f}  {p3:7.4f}  {j:9.4f}")

print("\nball counts (N > n+1 from n = 4 onward):")
print("  n   lambda_1    N(B^n)   n+1   n(n+3)/2    I(B^n)")
for n in range(2, 13):
    bc = iso.ball_N(n)
    print(f"{n:3d}  {bc.lambda1:9.4f}  {bc.count:7d}  {n + 1:4d}  {n * (n + 3) // 2:8d}  {iso.ball_isoperimetric(n):12.4f}")

print("\nsmallest dimension from which N(B^n) >= n^ell holds (cap 16):")
for ell in (1, 2):
    result = iso.ball_growth_check(ell, n_max=16)
    print(f"  ell={ell}: n0 = {result.threshold}")

print("\nevery returned zero carries a certifying bracket, for example:")
rec = iso.bessel_zero_p(2.0, 2, 1)
lo, hi = rec.bracket
print(f"  p^(2)_(2,1) = {rec.value:.12f}, bracket width {hi - lo:.2e},")
print(f"  signs at the ends: {iso.ultraspherical_deriv(2.0, 2, lo):+.3e} / "
      f"{iso.ultraspherical_deriv(2.0, 2, hi):+.3e}")
