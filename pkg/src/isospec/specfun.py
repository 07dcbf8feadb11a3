"""Bessel J for real nonnegative order, and certified brackets for its zeros
and for the zeros of d/dx [x^(1-nu) J_(nu+ell-1)(x)].

Evaluation uses the ascending power series up to max(12, 2*nu) and a
continued-fraction scheme (CF1 for J'/J, CF2 for the Hankel phase, joined by
the Wronskian) beyond.  When the alternating series loses too many digits in
double precision, the sum is redone in arbitrary precision, keeping the
absolute error below 1e-12 everywhere in the supported range.

Zeros are located by certified sign-change bisection only; every returned
record carries a bracket whose endpoints evaluate with opposite signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import EvaluationRangeError, ParameterError, SearchError, SolverError

X_MAX = 200.0             # supported argument range
_SERIES_MAX_TERMS = 700
_RESCUE_MAX_TERM = 300.0  # beyond this, series cancellation exceeds ~6e-13
_CF_MAX_ITER = 30000
_BRACKET_REL_TOL = 1e-10


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) for nu >= 0 and 0 <= x <= 200, absolute accuracy 1e-12."""
    if nu < 0.0 or not math.isfinite(nu):
        raise ParameterError("order nu must be a finite nonnegative real")
    if not math.isfinite(x) or x < 0.0 or x > X_MAX:
        raise EvaluationRangeError(f"argument {x!r} outside the supported range [0, {X_MAX:g}]")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x <= max(12.0, 2.0 * nu):
        return _series(nu, x)
    return _cf_oscillatory(nu, x)


def _series(nu: float, x: float) -> float:
    q = 0.25 * x * x
    term = math.exp(nu * math.log(0.5 * x) - math.lgamma(nu + 1.0))
    total = term
    peak = abs(term)
    for k in range(1, _SERIES_MAX_TERMS):
        term *= -q / (k * (nu + k))
        total += term
        a = abs(term)
        if a > peak:
            peak = a
        if a < 1e-20 * max(peak, 1e-300) and k > 0.5 * x:
            break
    if peak > _RESCUE_MAX_TERM:
        return _series_highprec(nu, x, peak)
    return total


def _series_highprec(nu: float, x: float, peak: float) -> float:
    # enough working digits to absorb the cancellation measured by `peak`
    dps = 25 + max(0, int(math.log10(peak)))
    with mpmath.workdps(dps):
        return float(mpmath.besselj(mpmath.mpf(nu), mpmath.mpf(x)))


def _cf_oscillatory(nu: float, x: float) -> float:
    # Valid past the turning point (x > 2*nu and x > 12): CF1 gives J'/J and
    # the sign of J, CF2 gives the phase; the Wronskian fixes the magnitude.
    eps = 1e-16
    fpmin = 1e-290
    xi = 1.0 / x
    xi2 = 2.0 * xi

    isign = 1
    h = nu * xi
    if h < fpmin:
        h = fpmin
    b = xi2 * nu
    d = 0.0
    c = h
    for _ in range(_CF_MAX_ITER):
        b += xi2
        d = b - d
        if abs(d) < fpmin:
            d = fpmin
        c = b - 1.0 / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = c * d
        h = delta * h
        if d < 0.0:
            isign = -isign
        if abs(delta - 1.0) < eps:
            break
    else:
        raise SolverError(f"J'{'/'}J continued fraction stalled at nu={nu}, x={x}")
    fp = h

    a = 0.25 - nu * nu
    p = -0.5 * xi
    q = 1.0
    br = 2.0 * x
    bi = 2.0
    fct = a * xi / (p * p + q * q)
    cr = br + q * fct
    ci = bi + p * fct
    den = br * br + bi * bi
    dr = br / den
    di = -bi / den
    dlr = cr * dr - ci * di
    dli = cr * di + ci * dr
    tmp = p * dlr - q * dli
    q = p * dli + q * dlr
    p = tmp
    for i in range(2, _CF_MAX_ITER):
        a += 2 * (i - 1)
        bi += 2.0
        dr = a * dr + br
        di = a * di + bi
        if abs(dr) + abs(di) < fpmin:
            dr = fpmin
        fct = a / (cr * cr + ci * ci)
        cr = br + cr * fct
        ci = bi - ci * fct
        if abs(cr) + abs(ci) < fpmin:
            cr = fpmin
        den = dr * dr + di * di
        dr = dr / den
        di = -di / den
        dlr = cr * dr - ci * di
        dli = cr * di + ci * dr
        tmp = p * dlr - q * dli
        q = p * dli + q * dlr
        p = tmp
        if abs(dlr - 1.0) + abs(dli) < eps:
            break
    else:
        raise SolverError(f"Hankel-phase continued fraction stalled at nu={nu}, x={x}")

    gam = (p - fp) / q
    w = 2.0 / (math.pi * x)
    jnu = math.sqrt(w / ((p - fp) * gam + q))
    return jnu if isign > 0 else -jnu


def ultraspherical_deriv(nu: float, ell: int, x: float) -> float:
    """Value of d/dx [x^(1-nu) J_(nu+ell-1)(x)].

    Uses the identity (1-nu) x^(-nu) J_mu(x) + x^(1-nu) J'_mu(x) with
    mu = nu + ell - 1 and J'_mu = (mu/x) J_mu - J_(mu+1).
    """
    if x <= 0.0:
        raise EvaluationRangeError("ultraspherical derivative needs x > 0")
    if ell < 0:
        raise ParameterError("angular degree ell must be nonnegative")
    mu = nu + ell - 1.0
    if mu < 0.0:
        raise ParameterError("nu + ell must be at least 1")
    jmu = bessel_j(mu, x)
    jmu1 = bessel_j(mu + 1.0, x)
    jprime = (mu / x) * jmu - jmu1
    return (1.0 - nu) * x ** (-nu) * jmu + x ** (1.0 - nu) * jprime


# ---------------------------------------------------------------------------
# certified zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesselZeroRecord:
    """A located zero with its certifying sign-change bracket."""

    nu: float
    ell: int
    k: int
    value: float
    bracket: tuple

    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def _bisect_certified(f, lo, hi, f_lo=None, f_hi=None):
    """Shrink a sign-change bracket to relative width 1e-10 by bisection."""
    flo = f(lo) if f_lo is None else f_lo
    fhi = f(hi) if f_hi is None else f_hi
    if flo == 0.0:
        lo = lo - max(abs(lo), 1.0) * 1e-12
        flo = f(lo)
    if fhi == 0.0:
        hi = hi + max(abs(hi), 1.0) * 1e-12
        fhi = f(hi)
    if not (flo * fhi < 0.0):
        raise SearchError(f"no sign change over bracket ({lo!r}, {hi!r})")
    while hi - lo > _BRACKET_REL_TOL * 0.5 * (lo + hi):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            # nudge off the exact zero so the bracket keeps its sign change
            mid = math.nextafter(mid, hi)
            fm = f(mid)
            if fm == 0.0:
                break
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return lo, hi


def bessel_zero_j(nu: float, k: int) -> BesselZeroRecord:
    """kth positive zero of J_nu, scanned upward from the bound j_{nu,1} > nu."""
    if nu < 0.0:
        raise ParameterError("order nu must be nonnegative")
    if k < 1:
        raise ParameterError("zero index k must be at least 1")

    def f(x):
        return bessel_j(nu, x)

    step = 1.0  # consecutive zeros of J_nu are more than one unit apart
    a = nu
    fa = f(a)
    if fa == 0.0:  # only at nu = 0 could the scan start on a zero; it does not
        a += 1e-9
        fa = f(a)
    found = 0
    while True:
        b = a + step
        if b > X_MAX:
            raise SearchError(f"zero scan for J_{nu} exhausted the range [0, {X_MAX:g}]")
        fb = f(b)
        if fb == 0.0:
            b += 1e-9 * max(b, 1.0)
            fb = f(b)
        if fa * fb < 0.0:
            found += 1
            if found == k:
                lo, hi = _bisect_certified(f, a, b, fa, fb)
                return BesselZeroRecord(nu=nu, ell=0, k=k,
                                        value=0.5 * (lo + hi), bracket=(lo, hi))
        a, fa = b, fb


def lorch_szego_interval(nu: float, ell: int) -> tuple:
    """Open interval guaranteed to contain p^(ell)_{nu,1} for nu > 0, ell >= 1."""
    lo2 = 2.0 * ell * (nu + ell) * (nu + ell + 1.0) / (nu + 2.0 * ell + 1.0)
    hi2 = 2.0 * ell * (nu + ell)
    return math.sqrt(lo2), math.sqrt(hi2)


def bessel_zero_p(nu: float, ell: int, k: int) -> BesselZeroRecord:
    """kth positive zero of d/dx [x^(1-nu) J_(nu+ell-1)(x)].

    For ell = 0 the zeros coincide with those of J_nu and the search is
    delegated.  The first zero is bracketed by the Lorch-Szego interval;
    later zeros interlace with the zeros of J_(nu+ell-1).
    """
    if k < 1:
        raise ParameterError("zero index k must be at least 1")
    if ell == 0:
        return bessel_zero_j(nu, k)
    if nu <= 0.0:
        raise ParameterError("derivative zeros need nu > 0")

    def g(x):
        return ultraspherical_deriv(nu, ell, x)

    mu = nu + ell - 1.0
    if k == 1:
        lo, hi = lorch_szego_interval(nu, ell)
        glo, ghi = g(lo), g(hi)
        if glo * ghi >= 0.0:
            # should not happen; fall back to a fine scan below the first
            # zero of J_mu, where exactly one derivative zero lives
            jhi = bessel_zero_j(mu, 1).value
            lo, hi = _scan_for_sign_change(g, min(lo, 0.25), jhi, 64)
            glo = ghi = None
        lo, hi = _bisect_certified(g, lo, hi, glo, ghi)
    else:
        lo = bessel_zero_j(mu, k - 1).value
        hi = bessel_zero_j(mu, k).value
        lo, hi = _bisect_certified(g, lo, hi)
    return BesselZeroRecord(nu=nu, ell=ell, k=k, value=0.5 * (lo + hi), bracket=(lo, hi))


def _scan_for_sign_change(f, lo, hi, n):
    xs = [lo + (hi - lo) * i / n for i in range(n + 1)]
    fa = f(xs[0])
    for a, b in zip(xs, xs[1:]):
        fb = f(b)
        if fa * fb < 0.0:
            return a, b
        fa = fb
    raise SearchError(f"no sign change found in ({lo!r}, {hi!r})")


def zero_table(n_values=range(2, 8)):
    """Rows (n, p1, p2, p3, j) comparing the first derivative zeros for
    ell = 1, 2, 3 at order n/2 with the first zero of J_(n/2-1)."""
    rows = []
    for n in n_values:
        nu = n / 2.0
        rows.append((
            n,
            bessel_zero_p(nu, 1, 1).value,
            bessel_zero_p(nu, 2, 1).value,
            bessel_zero_p(nu, 3, 1).value,
            bessel_zero_j(nu - 1.0, 1).value,
        ))
    return rows
