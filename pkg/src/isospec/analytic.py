"""Exact oracles: lattice counts and bounds for n-dimensional rectangles, and
unit-ball spectral counts assembled from certified Bessel zeros.

Rectangle lattice counts compare m_1^2/l_1^2 + ... + m_n^2/l_n^2 against
1/l_1^2 + ... + 1/l_n^2 in exact rational arithmetic, so boundary lattice
points (the <= case) are decided exactly whenever the side lengths are given
as exact decimals, integers, or fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError, ResourceLimitError
from .specfun import bessel_zero_j, bessel_zero_p, lorch_szego_interval

_MAX_DIMENSION = 8
_MAX_ENUMERATION = 10**8
_MAX_BALL_DIMENSION = 64


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)  # exact decimal parsing
    if isinstance(value, float):
        return Fraction(value)  # exact binary value of the double
    raise ParameterError(f"cannot interpret side length {value!r} exactly")


@dataclass(frozen=True)
class RectangleSpec:
    """Side lengths of an n-dimensional rectangle, stored exactly."""

    lengths: tuple  # tuple of Fractions, all > 0

    @staticmethod
    def of(*lengths) -> "RectangleSpec":
        if not lengths:
            raise ParameterError("rectangle needs at least one side length")
        fr = tuple(_to_fraction(v) for v in lengths)
        if any(f <= 0 for f in fr):
            raise ParameterError("all side lengths must be positive")
        return RectangleSpec(lengths=fr)

    @property
    def dimension(self) -> int:
        return len(self.lengths)

    @property
    def rho_squared(self) -> Fraction:
        return sum((Fraction(1) / (f * f) for f in self.lengths), Fraction(0))

    @property
    def rho(self) -> float:
        return math.sqrt(float(self.rho_squared))

    @property
    def axes(self) -> tuple:
        r = self.rho
        return tuple(float(f) * r for f in self.lengths)


def _floor_sqrt_fraction(f: Fraction) -> int:
    """floor(sqrt(p/q)) for a nonnegative rational p/q, exactly."""
    if f < 0:
        raise ParameterError("negative radicand")
    p, q = f.numerator, f.denominator
    return math.isqrt(p * q) // q


def rectangle_N_exact(spec: RectangleSpec) -> int:
    """Exact count of nonnegative integer points m with
    sum m_i^2 / l_i^2 <= sum 1 / l_i^2 (boundary included)."""
    n = spec.dimension
    if n > _MAX_DIMENSION:
        raise ParameterError(f"enumeration supports dimension <= {_MAX_DIMENSION}")
    predicted = 1.0
    for a in spec.axes:
        predicted *= math.floor(a) + 1.0
    if predicted > _MAX_ENUMERATION:
        raise ResourceLimitError(
            f"predicted lattice count {predicted:.3g} exceeds {_MAX_ENUMERATION:g}")

    lengths = spec.lengths
    inv_sq = [Fraction(1) / (f * f) for f in lengths]

    def count_from(i: int, remaining: Fraction) -> int:
        if i == n - 1:
            # largest m with m^2 * inv_sq[i] <= remaining
            return _floor_sqrt_fraction(remaining / inv_sq[i]) + 1
        total = 0
        m = 0
        while True:
            used = m * m * inv_sq[i]
            if used > remaining:
                break
            total += count_from(i + 1, remaining - used)
            m += 1
        return total

    return count_from(0, spec.rho_squared)


def rectangle_N_2d(ell) -> int:
    """Closed form 3 + floor(sqrt(ell^2 + 1)) for the rectangle with sides 1 and ell >= 1."""
    f = _to_fraction(ell)
    if f < 1:
        raise ParameterError("closed form assumes ell >= 1")
    return 3 + _floor_sqrt_fraction(f * f + 1)


def rectangle_I(spec: RectangleSpec) -> float:
    """Isoperimetric ratio |boundary|^n / |volume|^(n-1) of the rectangle."""
    lengths = [float(f) for f in spec.lengths]
    n = len(lengths)
    volume = math.prod(lengths)
    boundary = 2.0 * sum(volume / li for li in lengths)
    return boundary ** n / volume ** (n - 1)


def unit_ball_volume(n: int) -> float:
    """omega_n = pi^(n/2) / Gamma(n/2 + 1), evaluated through log-Gamma."""
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n + 1.0))


@dataclass(frozen=True)
class SandwichResult:
    """Outcome of checking the volume and isoperimetric sandwich bounds."""

    n_lattice: int
    iso_ratio: float
    axes_product: float
    lower_ok: bool
    upper_ok: bool
    ratios: dict

    @property
    def all_ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def rectangle_sandwich_check(spec: RectangleSpec) -> SandwichResult:
    """Verify omega_n/2^n * prod(a) <= N <= omega_n * prod(a) and
    omega_n/(4^n n^(n/2)) * I <= N <= omega_n/2^n * I."""
    n = spec.dimension
    count = rectangle_N_exact(spec)
    iso = rectangle_I(spec)
    prod_axes = math.prod(spec.axes)
    omega = unit_ball_volume(n)

    vol_lo = omega / 2.0 ** n * prod_axes
    vol_hi = omega * prod_axes
    iso_lo = omega / (4.0 ** n * n ** (n / 2.0)) * iso
    iso_hi = omega / 2.0 ** n * iso

    lower_ok = (vol_lo <= count) and (iso_lo <= count)
    upper_ok = (count <= vol_hi) and (count <= iso_hi)
    ratios = {
        "volume_lower": count / vol_lo,
        "volume_upper": count / vol_hi,
        "iso_lower": count / iso_lo,
        "iso_upper": count / iso_hi,
    }
    return SandwichResult(n_lattice=count, iso_ratio=iso, axes_product=prod_axes,
                          lower_ok=lower_ok, upper_ok=upper_ok, ratios=ratios)


# ---------------------------------------------------------------------------
# unit ball
# ---------------------------------------------------------------------------

def _check_ball_dimension(n: int) -> None:
    if not (2 <= n <= _MAX_BALL_DIMENSION):
        raise ParameterError(f"ball dimension must lie in [2, {_MAX_BALL_DIMENSION}]")


def ball_lambda1(n: int) -> float:
    """First Dirichlet eigenvalue of the unit n-ball: square of the first zero of J_(n/2-1)."""
    _check_ball_dimension(n)
    return bessel_zero_j(n / 2.0 - 1.0, 1).value ** 2


def ball_multiplicity(n: int, ell: int) -> int:
    """Dimension of the space of degree-ell spherical harmonics on S^(n-1)."""
    if n < 2:
        raise ParameterError("ball dimension must be at least 2")
    if ell < 0:
        raise ParameterError("degree ell must be nonnegative")
    if ell == 0:
        return 1
    if ell == 1:
        return n
    return math.comb(n + ell - 1, n - 1) - math.comb(n + ell - 3, n - 1)


@dataclass(frozen=True)
class BallSpectrumEntry:
    """One positive Neumann eigenvalue of the unit ball with its multiplicity."""

    n: int
    ell: int
    k: int
    mu: float
    multiplicity: int


@dataclass(frozen=True)
class BallCount:
    n: int
    lambda1: float
    count: int
    entries: tuple


def ball_N(n: int) -> BallCount:
    """Number of Neumann eigenvalues of the unit n-ball that are <= lambda_1.

    Counts 1 for the zero eigenvalue plus the multiplicity of every
    derivative zero p^(ell)_{n/2,k} with square at most lambda_1.  The
    ell-loop stops once the Lorch-Szego lower bound exceeds lambda_1 (the
    bound increases with ell); the k-loop stops at the first zero beyond
    sqrt(lambda_1); ell = 0 contributes nothing because j_{n/2,k} > j_{n/2-1,1}.
    """
    _check_ball_dimension(n)
    nu = n / 2.0
    lam1 = ball_lambda1(n)
    entries = []
    total = 1  # mu_1 = 0
    ell = 1
    while True:
        lo, _hi = lorch_szego_interval(nu, ell)
        if lo * lo > lam1:
            break
        mult = ball_multiplicity(n, ell)
        k = 1
        while True:
            rec = bessel_zero_p(nu, ell, k)
            mu = rec.value ** 2
            if mu > lam1:
                break
            entries.append(BallSpectrumEntry(n=n, ell=ell, k=k, mu=mu, multiplicity=mult))
            total += mult
            k += 1
        ell += 1
    return BallCount(n=n, lambda1=lam1, count=total, entries=tuple(entries))


def ball_isoperimetric(n: int) -> float:
    """Isoperimetric ratio of the unit n-ball: n^n * omega_n."""
    if n < 1 or n > _MAX_BALL_DIMENSION:
        raise ParameterError(f"dimension must lie in [1, {_MAX_BALL_DIMENSION}]")
    return math.exp(n * math.log(n) + 0.5 * n * math.log(math.pi)
                    - math.lgamma(0.5 * n + 1.0))


@dataclass(frozen=True)
class GrowthCheckResult:
    """Smallest dimension from which N(B^n) >= n^ell holds through the cap."""

    ell: int
    threshold: int | None
    n_max: int
    counts: dict

    @property
    def capped(self) -> bool:
        return self.threshold is None


def ball_growth_check(ell: int, n_max: int = _MAX_BALL_DIMENSION) -> GrowthCheckResult:
    """Scan n upward and report the smallest n0 such that N(B^n) >= n^ell for
    every n in [n0, n_max]; threshold None if no such n0 exists below the cap."""
    if ell < 1:
        raise ParameterError("exponent ell must be at least 1")
    if not (2 <= n_max <= _MAX_BALL_DIMENSION):
        raise ParameterError(f"search cap must lie in [2, {_MAX_BALL_DIMENSION}]")
    counts = {n: ball_N(n).count for n in range(2, n_max + 1)}
    threshold = None
    for n in range(n_max, 1, -1):
        if counts[n] >= n ** ell:
            threshold = n
        else:
            break
    return GrowthCheckResult(ell=ell, threshold=threshold, n_max=n_max, counts=counts)
