"""Weighted Bergman analysis on Hartogs-type domains {|lambda|^2 h(z) < 1}.

For the standard weight h = (1+|z1|^2)(1+|z2|^2) everything is exact:
monomial norms are rationals times (2pi)^3, the kernel is a geometric-type
series in

    x = lambda conj(tau) (1 + z1 conj(w1)) (1 + z2 conj(w2)),

and resummation in the binomial basis {C(m+j, j)} turns the series into
the closed rational form

    K = ((2pi)^-3) * (4 lambda conj(tau) / rho^3 + 6 lambda conj(tau) / rho^4),
    rho = x - 1.

Norms for other positive radial weights fall back to tensor Gauss
quadrature on the radialized integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polynomials import HermitianPolynomial, MultiIndex
from .scalars import ExactComplex, conj_scalar, to_complex

TWO_PI_CUBED = (2.0 * math.pi) ** 3


class DivergentIntegralError(ValueError):
    """The requested moment integral diverges."""


class BoundaryContactError(ArithmeticError):
    """Closed-form kernel evaluated where the complexified defining
    function vanishes."""


class NonConvergentError(ValueError):
    """Series kernel evaluated outside its region of geometric convergence."""


class ChartSingularityError(ValueError):
    """Kernel requested on the chart-singular slice (first coordinate zero)."""


# ---------------------------------------------------------------------------
# domain specification
# ---------------------------------------------------------------------------

def standard_omega_weight() -> HermitianPolynomial:
    """h(z) = (1 + |z1|^2)(1 + |z2|^2)."""
    one = HermitianPolynomial.constant(2, Fraction(1))
    f1 = one + HermitianPolynomial.modulus_squared(2, 0)
    f2 = one + HermitianPolynomial.modulus_squared(2, 1)
    return f1 * f2


@dataclass(frozen=True)
class HartogsDomainSpec:
    """The domain {|lambda|^2 h(z) < 1} over C^base_dim."""

    base_dim: int
    weight: HermitianPolynomial
    omega_standard: bool = False

    def __post_init__(self):
        if self.weight.dim != self.base_dim:
            raise ValueError("weight dimension must equal the base dimension")
        if not self.weight.is_real_valued(tol=1e-12):
            raise ValueError("weight must be real-valued")
        rng = np.random.default_rng(0)
        for _ in range(16):
            z = rng.normal(size=self.base_dim) + 1j * rng.normal(size=self.base_dim)
            val = to_complex(self.weight.eval(list(z)))
            if val.real <= 0:
                raise ValueError(f"weight is not positive at sample {z}")

    def weight_value(self, z: Sequence) -> float:
        return to_complex(self.weight.eval(list(z))).real

    def contains(self, z: Sequence, lam: complex) -> bool:
        return abs(lam) ** 2 * self.weight_value(z) < 1.0


def omega_spec() -> HartogsDomainSpec:
    return HartogsDomainSpec(base_dim=2, weight=standard_omega_weight(), omega_standard=True)


OMEGA = omega_spec()


# ---------------------------------------------------------------------------
# exact moments
# ---------------------------------------------------------------------------

def factorial_moment(p: int, q: int) -> Fraction:
    """The radial integral of r^p (1+r)^(-q) over (0, inf):
    (q-p-2)! p! / (q-1)!, requiring q >= p + 2."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    if q < p + 2:
        raise DivergentIntegralError(
            f"integral of r^{p} (1+r)^-{q} diverges (needs q >= p + 2)"
        )
    return Fraction(
        math.factorial(q - p - 2) * math.factorial(p), math.factorial(q - 1)
    )


def monomial_norm(m: int, alpha: Sequence[int], spec: HartogsDomainSpec = OMEGA):
    """Squared norm of lambda^m z^alpha.

    For the standard weight this is exact:
        (2pi)^3/(m+1) * (m-a1-1)! (m-a2-1)! a1! a2! / (m!)^2
    when both a_i <= m-1, and +inf otherwise (the monomial is not
    square-integrable).  Returned as an ExactComplex carrying pi^3, or
    math.inf for the divergent branch.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    alpha = MultiIndex(alpha)
    if len(alpha) != spec.base_dim:
        raise ValueError("alpha length must match the base dimension")
    if not spec.omega_standard:
        raise ValueError("exact norms only exist for the standard weight; use MomentTable")
    if any(a >= m for a in alpha):
        return math.inf
    value = Fraction(8, m + 1)  # (2 pi)^3 = 8 pi^3
    for a in alpha:
        value *= factorial_moment(a, m + 1)
    return ExactComplex(value, 0, 3)


def square_integrable(m: int, alpha: Sequence[int], spec: HartogsDomainSpec = OMEGA) -> bool:
    return monomial_norm(m, alpha, spec) != math.inf


@dataclass(frozen=True)
class NormEntry:
    exact: ExactComplex | float | None  # math.inf marks the divergent branch
    numeric: float


class MomentTable:
    """Cache of squared norms ||lambda^m z^alpha||^2 for one domain.

    Standard-weight entries are exact; general radial weights use tensor
    Gauss-Legendre quadrature on [0, inf) after r = t/(1-t).
    """

    def __init__(self, spec: HartogsDomainSpec = OMEGA, quad_nodes: int = 256):
        self.spec = spec
        self.quad_nodes = quad_nodes
        self._cache: dict[tuple[int, MultiIndex], NormEntry] = {}
        if not spec.omega_standard:
            self._radial_weight = _radialize_weight(spec.weight)

    def norm(self, m: int, alpha: Sequence[int]) -> NormEntry:
        key = (m, MultiIndex(alpha))
        if key in self._cache:
            return self._cache[key]
        if self.spec.omega_standard:
            exact = monomial_norm(m, key[1], self.spec)
            numeric = math.inf if exact == math.inf else to_complex(exact).real
            entry = NormEntry(exact=exact, numeric=numeric)
        else:
            entry = NormEntry(exact=None, numeric=self._quadrature_norm(m, key[1]))
        self._cache[key] = entry
        return entry

    def _quadrature_norm(self, m: int, alpha: MultiIndex) -> float:
        radial, degs = self._radial_weight
        # integrability: per-axis decay of r^a_i h^-(m+1) needs a_i <= deg_i (m+1) - 2
        for a, d in zip(alpha, degs):
            if a > d * (m + 1) - 2:
                return math.inf
        nodes, weights = np.polynomial.legendre.leggauss(self.quad_nodes)
        t = 0.5 * (nodes + 1.0)
        wt = 0.5 * weights
        r = t / (1.0 - t)
        jac = 1.0 / (1.0 - t) ** 2
        k = self.spec.base_dim
        grids = np.meshgrid(*([r] * k), indexing="ij")
        wgrid = np.ones_like(grids[0])
        for axis in range(k):
            shape = [1] * k
            shape[axis] = -1
            wgrid = wgrid * (wt * jac).reshape(shape)
        hvals = radial(grids)
        integrand = wgrid * hvals ** (-(m + 1.0))
        for axis, a in enumerate(alpha):
            integrand = integrand * grids[axis] ** a
        base = float(np.sum(integrand))
        return 2.0 * math.pi / (m + 1) * (2.0 * math.pi) ** k * base


def _radialize_weight(weight: HermitianPolynomial):
    """Express a radial weight as a function of (|z_1|^2, ..., |z_k|^2)."""
    terms = {}
    degs = [0] * weight.dim
    for (a, b), c in weight.terms.items():
        if tuple(a) != tuple(b):
            raise ValueError("weight is not radial (non-diagonal term present)")
        val = to_complex(c)
        if abs(val.imag) > 1e-14:
            raise ValueError("radial weight has a non-real coefficient")
        terms[tuple(a)] = val.real
        for i, e in enumerate(a):
            degs[i] = max(degs[i], e)

    def radial(grids):
        total = np.zeros_like(grids[0])
        for expo, coeff in terms.items():
            term = np.full_like(grids[0], coeff)
            for axis, e in enumerate(expo):
                if e:
                    term = term * grids[axis] ** e
            total = total + term
        return total

    return radial, degs


# ---------------------------------------------------------------------------
# series and closed-form kernels for the standard domain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_bound: float
    terms: int


def _series_factor(z, w) -> complex:
    return (1.0 + to_complex(z) * to_complex(w).conjugate())


def kernel_series(
    z: Sequence,
    lam: complex,
    w: Sequence,
    tau: complex,
    truncation: int = 300,
    spec: HartogsDomainSpec = OMEGA,
) -> SeriesValue:
    """Partial sum of the fiber kernels:

        sum_{m=1}^{M} (m+1) m^2 / (2pi)^3 * (lam conj(tau))^m
                      * prod_i (1 + z_i conj(w_i))^(m-1)

    Requires |lam conj(tau)| prod |1 + z_i conj(w_i)| < 1 and reports a
    geometric bound on the discarded tail.
    """
    if not spec.omega_standard:
        raise ValueError("the series kernel is defined for the standard weight")
    lt = to_complex(lam) * to_complex(tau).conjugate()
    factor = _series_factor(z[0], w[0]) * _series_factor(z[1], w[1])
    x = lt * factor
    q = abs(x)
    if q >= 1.0:
        raise NonConvergentError(f"|x| = {q} >= 1: series does not converge")
    total = 0j
    xpow = 1.0 + 0j  # x^(m-1)
    for m in range(1, truncation + 1):
        total += (m + 1) * m * m * lt * xpow
        xpow *= x
    total /= TWO_PI_CUBED
    m1 = truncation + 1
    first_tail = (m1 + 1) * m1 * m1 * abs(lt) * q ** (truncation)
    ratio = q * (m1 + 2) * (m1 + 1) ** 2 / ((m1 + 1) * m1 * m1)
    tail = first_tail / (1.0 - ratio) / TWO_PI_CUBED if ratio < 1.0 else math.inf
    return SeriesValue(value=total, tail_bound=tail, terms=truncation)


def complexified_rho(z: Sequence, lam, w: Sequence, tau):
    """rho = lam conj(tau) (1 + z1 conj(w1)) (1 + z2 conj(w2)) - 1."""
    f1 = 1 + z[0] * conj_scalar(w[0])
    f2 = 1 + z[1] * conj_scalar(w[1])
    return lam * conj_scalar(tau) * f1 * f2 - 1


def omega_closed_kernel(z: Sequence, lam, w: Sequence, tau):
    """Closed rational form of the kernel of the standard Hartogs domain.

    Exact (rational times pi^-3) for exact inputs.  Raises
    BoundaryContactError where rho vanishes.
    """
    exact = all(
        isinstance(v, (int, Fraction, ExactComplex))
        for v in (*z, lam, *w, tau)
    )
    if exact:
        rho = ExactComplex.coerce(complexified_rho(z, lam, w, tau))
        if rho.is_zero:
            raise BoundaryContactError("rho = 0: boundary contact")
        lt = ExactComplex.coerce(lam * conj_scalar(tau))
        inv8 = ExactComplex(Fraction(1, 8), 0, -3)  # 1/(2 pi)^3
        return inv8 * (4 * lt / rho**3 + 6 * lt / rho**4)
    zc = [to_complex(v) for v in z]
    wc = [to_complex(v) for v in w]
    lamc, tauc = to_complex(lam), to_complex(tau)
    rho = complexified_rho(zc, lamc, wc, tauc)
    if abs(rho) < 1e-13:
        raise BoundaryContactError(f"|rho| = {abs(rho)}: boundary contact")
    lt = lamc * tauc.conjugate()
    return (4.0 * lt / rho**3 + 6.0 * lt / rho**4) / TWO_PI_CUBED


# ---------------------------------------------------------------------------
# binomial-basis resummation
# ---------------------------------------------------------------------------

def _binomial_poly(j: int) -> list[Fraction]:
    """Coefficients (ascending in m) of C(m+j, j) as a polynomial in m."""
    coeffs = [Fraction(1)]
    for i in range(1, j + 1):
        # multiply by (m + i)
        new = [Fraction(0)] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k] += c * i
            new[k + 1] += c
        coeffs = new
    return [c / math.factorial(j) for c in coeffs]


def resum_polynomial_series(poly_coeffs: Sequence) -> tuple[Fraction, ...]:
    """Write a polynomial p(m) in the basis {C(m+j, j)}: returns (a_0..a_d)
    with sum_m p(m) x^m = sum_j a_j (1-x)^(-(j+1)).

    The expansion is solved and then re-verified exactly as a polynomial
    identity; a nonzero remainder is a hard error.
    """
    coeffs = [Fraction(c) for c in poly_coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        return (Fraction(0),)
    d = len(coeffs) - 1

    def p_at(m: int) -> Fraction:
        return sum(c * m**k for k, c in enumerate(coeffs))

    # evaluate at m = 0..d and solve the exact linear system
    rows = [[Fraction(math.comb(m + j, j)) for j in range(d + 1)] for m in range(d + 1)]
    rhs = [p_at(m) for m in range(d + 1)]
    a = _solve_exact(rows, rhs)

    # exact polynomial identity check: p(m) - sum a_j C(m+j, j) == 0
    remainder = list(coeffs) + [Fraction(0)] * (d + 1)
    for j, aj in enumerate(a):
        for k, c in enumerate(_binomial_poly(j)):
            remainder[k] -= aj * c
    if any(c != 0 for c in remainder):
        raise RuntimeError("binomial-basis resummation failed the exact identity check")
    return tuple(a)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rows)
    mat = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if mat[i][col] != 0)
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = Fraction(1) / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for i in range(n):
            if i != col and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[col])]
    return [mat[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# the variety embedding and the bounded projected domain
# ---------------------------------------------------------------------------

def embed_F(lam, z1, z2) -> tuple:
    """(lam, lam z1, lam z2, lam z1 z2); the image satisfies
    w1 w4 = w2 w3 identically."""
    return (lam, lam * z1, lam * z2, lam * z1 * z2)


def u_domain_contains(x: Sequence) -> bool:
    """Membership in {|w1|^4 + |w1|^2(|w2|^2+|w3|^2) + |w2 w3|^2 < |w1|^2}."""
    a1 = abs(to_complex(x[0])) ** 2
    a2 = abs(to_complex(x[1])) ** 2
    a3 = abs(to_complex(x[2])) ** 2
    return a1 * a1 + a1 * (a2 + a3) + a2 * a3 < a1


def u_kernel(x: Sequence, y: Sequence, check_domain: bool = True):
    """Kernel of the bounded projected domain in chart coordinates.

    The chart (lam, z1, z2) -> (lam, lam z1, lam z2) has Jacobian lam^2,
    so the kernel is the closed-form Hartogs kernel composed with the
    inverse chart divided by x1^2 conj(y1)^2.  The first coordinates must
    be nonzero.
    """
    if len(x) != 3 or len(y) != 3:
        raise ValueError("points must lie in C^3")
    x0 = to_complex(x[0])
    y0 = to_complex(y[0])
    if abs(x0) == 0 or abs(y0) == 0:
        raise ChartSingularityError("first coordinate vanishes: chart singular slice")
    if check_domain and (not u_domain_contains(x) or not u_domain_contains(y)):
        raise ValueError("points must lie inside the bounded domain")
    lam_x, zx = x[0], (x[1] / x[0], x[2] / x[0])
    lam_y, zy = y[0], (y[1] / y[0], y[2] / y[0])
    value = omega_closed_kernel(zx, lam_x, zy, lam_y)
    return value / (x[0] ** 2 * conj_scalar(y[0] ** 2))


# ---------------------------------------------------------------------------
# the closed form as explicit rational data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalKernel:
    """A kernel given as a ratio of Hermitian polynomials in
    ((z1, z2, lam), conj((w1, w2, tau)))."""

    numerator: HermitianPolynomial
    denominator: HermitianPolynomial

    def eval(self, x: Sequence, y: Sequence):
        exact = all(
            isinstance(v, (int, Fraction, ExactComplex)) for v in (*x, *y)
        )
        num_poly, den_poly = self.numerator, self.denominator
        if not exact:
            num_poly = num_poly.to_complex_coeffs()
            den_poly = den_poly.to_complex_coeffs()
        num = num_poly.eval(list(x), list(y))
        den = den_poly.eval(list(x), list(y))
        return num / den

    def is_hermitian(self) -> bool:
        return (
            self.numerator.conj_swap() == self.numerator
            and self.denominator.conj_swap() == self.denominator
        )


def omega_rational_kernel() -> RationalKernel:
    """The closed form as numerator/denominator polynomial data, variables
    ordered (z1, z2, lam)."""
    lam = HermitianPolynomial.term(3, (0, 0, 1), (0, 0, 1), Fraction(1))
    one = HermitianPolynomial.constant(3, Fraction(1))
    f1 = one + HermitianPolynomial.term(3, (1, 0, 0), (1, 0, 0), Fraction(1))
    f2 = one + HermitianPolynomial.term(3, (0, 1, 0), (0, 1, 0), Fraction(1))
    rho = lam * f1 * f2 - one
    numerator = lam * (rho.scale(Fraction(4)) + one.scale(Fraction(6)))
    denominator = (rho**4).scale(ExactComplex(8, 0, 3))  # (2 pi)^3 rho^4
    return RationalKernel(numerator=numerator, denominator=denominator)
