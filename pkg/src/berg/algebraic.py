"""Detecting algebraic structure of sampled kernels.

Given diagonal samples (z, K(z, conj(z))) of a kernel surface, we look
for a polynomial relation

    a_q(z, conj(z)) K^q + ... + a_1(z, conj(z)) K + a_0(z, conj(z)) = 0

by extracting the minimal singular direction of the evaluation matrix of
monomials (features^beta * K^j), with per-column scaling to tame the
conditioning.  Coefficients are normalized to a unit vector and the
reported residual is the max absolute value of the relation over the
samples.  For a kernel with an exact relation at the searched degrees the
residual sits at rounding level; "no relation found below tolerance at
the searched degrees" is the only negative statement this module makes.

Feature coordinates are chosen per domain: real coordinates (x_i, y_i)
for disk-like domains, radial invariants (|lambda|^2, |z_1|^2, |z_2|^2)
for the rotation-invariant Hartogs diagonal (any polynomial in the radial
features expands to a genuine polynomial in (z, conj(z)) of twice the
degree).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .ball import ball_kernel
from .hartogs import omega_closed_kernel
from .polynomials import HermitianPolynomial, MultiIndex, monomials_up_to_degree
from .scalars import to_complex


# ---------------------------------------------------------------------------
# Laurent norms and the annulus kernel (the non-algebraic control)
# ---------------------------------------------------------------------------

def laurent_norm(k: int, inner_radius: float) -> float:
    """Squared Lebesgue norm of z^k on the annulus {r0 < |z| < 1}.

    With r0 = 0 (punctured disk) the negative powers are not integrable
    and get norm +inf, so they drop out of any kernel sum; removing the
    puncture does not change the kernel.
    """
    r0 = float(inner_radius)
    if not 0.0 <= r0 < 1.0:
        raise ValueError("inner radius must lie in [0, 1)")
    if r0 == 0.0:
        if k < 0:
            return math.inf
        return math.pi / (k + 1)
    if k == -1:
        return 2.0 * math.pi * math.log(1.0 / r0)
    return math.pi * (1.0 - r0 ** (2 * k + 2)) / (k + 1)


def annulus_kernel(inner_radius: float, z: complex, w: complex, truncation: int = 200) -> complex:
    """Truncated Laurent-series kernel of the annulus {r0 < |z| < 1}:
    sum over |k| <= M of z^k conj(w)^k / ||z^k||^2."""
    r0 = float(inner_radius)
    if not 0.0 < r0 < 1.0:
        raise ValueError("inner radius must lie in (0, 1)")
    for p in (z, w):
        m = abs(complex(p))
        if not r0 < m < 1.0:
            raise ValueError(f"point with |z| = {m} outside the open annulus")
    u = complex(z) * complex(w).conjugate()
    total = 0j
    for k in range(0, truncation + 1):
        total += (k + 1) * u**k / (math.pi * (1.0 - r0 ** (2 * k + 2)))
    if truncation >= 1:
        total += 1.0 / (u * 2.0 * math.pi * math.log(1.0 / r0))
    # k <= -2, rewritten to keep the r0 powers bounded:
    #   (k+1) u^k / (pi (1 - r0^(2k+2))) = -(k+1) (u/r0^2)^k / (r0^2 pi (1 - r0^s)),
    # with s = -(2k+2) > 0 and |u| > r0^2 on the annulus.
    for k in range(-truncation, -1):
        s = -(2 * k + 2)
        total += -(k + 1) * (u / r0**2) ** k / (r0**2 * math.pi * (1.0 - r0**s))
    return total


def punctured_disk_kernel(z: complex, w: complex, truncation: int = 200) -> complex:
    """Kernel of the punctured disk from the Laurent norm table with
    r0 = 0; infinite-norm powers are excluded."""
    u = complex(z) * complex(w).conjugate()
    total = 0j
    for k in range(-truncation, truncation + 1):
        norm = laurent_norm(k, 0.0)
        if math.isinf(norm):
            continue
        total += u**k / norm
    return total


# ---------------------------------------------------------------------------
# kernel surfaces (named diagonal samplers with feature coordinates)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSurface:
    """A named diagonal kernel with sampling and feature structure.

    ``diag`` maps a point to K(z, conj(z)); ``features`` maps a point to
    the real coordinates used for relation fitting; ``feature_polys``
    expresses each feature as a Hermitian polynomial so fitted
    coefficients can be expanded back into (z, conj(z)).
    """

    name: str
    ambient_dim: int
    diag: Callable[[tuple], float]
    features: Callable[[tuple], tuple]
    feature_polys: tuple[HermitianPolynomial, ...]
    sample: Callable[[np.random.Generator, int], list]
    boundary_sample: Callable[[np.random.Generator, int], list] | None = None
    offdiag: Callable[[tuple, tuple], complex] | None = None

    def samples(self, count: int, seed: int = 0) -> list[tuple[tuple, float]]:
        rng = np.random.default_rng(seed)
        pts = self.sample(rng, count)
        return [(self.features(p), float(self.diag(p))) for p in pts]

    def boundary_features(self, count: int, seed: int = 0) -> list[tuple]:
        if self.boundary_sample is None:
            raise ValueError(f"surface {self.name} has no boundary sampler")
        rng = np.random.default_rng(seed)
        return [self.features(p) for p in self.boundary_sample(rng, count)]


def _real_coordinate_polys(n: int) -> tuple[HermitianPolynomial, ...]:
    """x_i = (z_i + conj(z_i))/2 and y_i = (z_i - conj(z_i))/(2i)."""
    out = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        zero = (0,) * n
        x = HermitianPolynomial(n, {(e, zero): complex(0.5), (zero, e): complex(0.5)})
        y = HermitianPolynomial(n, {(e, zero): -0.5j, (zero, e): 0.5j})
        out.extend([x, y])
    return tuple(out)


def _reject_sample_disk(rng: np.random.Generator, count: int, rmin: float, rmax: float) -> list:
    pts = []
    while len(pts) < count:
        x, y = rng.uniform(-1, 1, 2)
        r = math.hypot(x, y)
        if rmin < r < rmax:
            pts.append((complex(x, y),))
    return pts


def disk_surface(radius_max: float = 0.9) -> KernelSurface:
    return KernelSurface(
        name="disk",
        ambient_dim=1,
        diag=lambda p: to_complex(ball_kernel(1, p, p)).real,
        features=lambda p: (p[0].real, p[0].imag),
        feature_polys=_real_coordinate_polys(1),
        sample=lambda rng, n: _reject_sample_disk(rng, n, 0.0, radius_max),
        boundary_sample=lambda rng, n: [
            (complex(math.cos(t), math.sin(t)),)
            for t in rng.uniform(0.0, 2.0 * math.pi, n)
        ],
        offdiag=lambda z, w: to_complex(ball_kernel(1, z, w)),
    )


def ball2_surface(radius_max: float = 0.8) -> KernelSurface:
    def sample(rng, count):
        pts = []
        while len(pts) < count:
            v = rng.uniform(-1, 1, 4)
            if v @ v < radius_max**2:
                pts.append((complex(v[0], v[1]), complex(v[2], v[3])))
        return pts

    def boundary(rng, count):
        pts = []
        for _ in range(count):
            v = rng.normal(size=4)
            v = v / math.sqrt(v @ v)
            pts.append((complex(v[0], v[1]), complex(v[2], v[3])))
        return pts

    return KernelSurface(
        name="ball2",
        ambient_dim=2,
        diag=lambda p: to_complex(ball_kernel(2, p, p)).real,
        features=lambda p: (p[0].real, p[0].imag, p[1].real, p[1].imag),
        feature_polys=_real_coordinate_polys(2),
        sample=sample,
        boundary_sample=boundary,
        offdiag=lambda z, w: to_complex(ball_kernel(2, z, w)),
    )


def omega_diagonal_surface(
    radial_max: float = 2.5, fiber_low: float = 0.05, fiber_high: float = 0.95
) -> KernelSurface:
    """Diagonal kernel of the standard Hartogs domain in radial features
    (|lambda|^2, |z1|^2, |z2|^2); points are (z1, z2, lam) triples."""

    def sample(rng, count):
        pts = []
        for _ in range(count):
            r1, r2 = rng.uniform(0.0, radial_max, 2)
            h = (1.0 + r1) * (1.0 + r2)
            t = rng.uniform(fiber_low, fiber_high) / h
            th = rng.uniform(0.0, 2.0 * math.pi, 3)
            pts.append(
                (
                    math.sqrt(r1) * complex(math.cos(th[0]), math.sin(th[0])),
                    math.sqrt(r2) * complex(math.cos(th[1]), math.sin(th[1])),
                    math.sqrt(t) * complex(math.cos(th[2]), math.sin(th[2])),
                )
            )
        return pts

    def boundary(rng, count):
        pts = []
        for _ in range(count):
            r1, r2 = rng.uniform(0.0, radial_max, 2)
            h = (1.0 + r1) * (1.0 + r2)
            th = rng.uniform(0.0, 2.0 * math.pi, 3)
            pts.append(
                (
                    math.sqrt(r1) * complex(math.cos(th[0]), math.sin(th[0])),
                    math.sqrt(r2) * complex(math.cos(th[1]), math.sin(th[1])),
                    math.sqrt(1.0 / h) * complex(math.cos(th[2]), math.sin(th[2])),
                )
            )
        return pts

    def diag(p):
        z = (p[0], p[1])
        return to_complex(omega_closed_kernel(z, p[2], z, p[2])).real

    return KernelSurface(
        name="omega",
        ambient_dim=3,
        diag=diag,
        features=lambda p: (abs(p[2]) ** 2, abs(p[0]) ** 2, abs(p[1]) ** 2),
        feature_polys=(
            HermitianPolynomial.modulus_squared(3, 2),
            HermitianPolynomial.modulus_squared(3, 0),
            HermitianPolynomial.modulus_squared(3, 1),
        ),
        sample=sample,
        boundary_sample=boundary,
        offdiag=lambda x, y: to_complex(
            omega_closed_kernel((x[0], x[1]), x[2], (y[0], y[1]), y[2])
        ),
    )


def u_surface(radial_max: float = 1.5) -> KernelSurface:
    """Diagonal kernel of the bounded projected domain in radial features
    (|x1|^2, |x2|^2, |x3|^2); points are sampled through the fiber chart."""
    from .hartogs import u_kernel

    def sample(rng, count):
        pts = []
        while len(pts) < count:
            z1, z2 = (
                math.sqrt(r) * np.exp(1j * t)
                for r, t in zip(
                    rng.uniform(0.0, radial_max, 2), rng.uniform(0, 2 * math.pi, 2)
                )
            )
            h = (1 + abs(z1) ** 2) * (1 + abs(z2) ** 2)
            lam = math.sqrt(rng.uniform(0.05, 0.95) / h) * np.exp(
                1j * rng.uniform(0, 2 * math.pi)
            )
            x = (lam, lam * z1, lam * z2)
            pts.append(x)
        return pts

    return KernelSurface(
        name="u",
        ambient_dim=3,
        diag=lambda p: to_complex(u_kernel(p, p, check_domain=False)).real,
        features=lambda p: (abs(p[0]) ** 2, abs(p[1]) ** 2, abs(p[2]) ** 2),
        feature_polys=(
            HermitianPolynomial.modulus_squared(3, 0),
            HermitianPolynomial.modulus_squared(3, 1),
            HermitianPolynomial.modulus_squared(3, 2),
        ),
        sample=sample,
        boundary_sample=None,
        offdiag=lambda x, y: to_complex(u_kernel(x, y, check_domain=False)),
    )


def annulus_surface(
    inner_radius: float = 0.5, margin: float = 0.01, truncation: int = 2000
) -> KernelSurface:
    return KernelSurface(
        name="annulus",
        ambient_dim=1,
        diag=lambda p: annulus_kernel(inner_radius, p[0], p[0], truncation).real,
        features=lambda p: (p[0].real, p[0].imag),
        feature_polys=_real_coordinate_polys(1),
        sample=lambda rng, n: _reject_sample_disk(
            rng, n, inner_radius + margin, 1.0 - margin
        ),
        boundary_sample=None,
        offdiag=lambda z, w: annulus_kernel(inner_radius, z[0], w[0], truncation),
    )


SURFACES: dict[str, Callable[[], KernelSurface]] = {
    "disk": disk_surface,
    "ball2": ball2_surface,
    "omega": omega_diagonal_surface,
    "annulus": annulus_surface,
    "u": u_surface,
}


# ---------------------------------------------------------------------------
# relation fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicRelation:
    """A fitted polynomial relation P(features, K) with unit coefficient
    vector, its max-abs residual over the fitting samples, and the
    Hermitian expansions of the feature coordinates."""

    k_degree: int
    feature_degree: int
    nfeatures: int
    coefficients: dict[tuple[MultiIndex, int], float]
    residual: float
    normalization: str = "unit-l2"
    feature_polys: tuple[HermitianPolynomial, ...] | None = None

    def coefficient_terms(self, j: int) -> dict[MultiIndex, float]:
        return {b: c for (b, jj), c in self.coefficients.items() if jj == j}

    def eval_coefficient(self, j: int, features: Sequence[float]) -> float:
        total = 0.0
        for beta, c in self.coefficient_terms(j).items():
            term = c
            for x, e in zip(features, beta):
                term *= x**e
            total += term
        return total

    def eval(self, features: Sequence[float], k_value: float) -> float:
        return sum(
            self.eval_coefficient(j, features) * k_value**j
            for j in range(self.k_degree + 1)
        )

    def coefficient_hermitian(self, j: int) -> HermitianPolynomial:
        """Expand a_j back into a polynomial in (z, conj(z))."""
        if self.feature_polys is None:
            raise ValueError("relation carries no feature expansion data")
        dim = self.feature_polys[0].dim
        total = HermitianPolynomial(dim)
        for beta, c in self.coefficient_terms(j).items():
            term = HermitianPolynomial.constant(dim, complex(c))
            for poly, e in zip(self.feature_polys, beta):
                cpoly = poly.to_complex_coeffs()
                for _ in range(e):
                    term = term * cpoly
            total = total + term
        return total


def fit_relation(
    samples: Sequence[tuple[Sequence[float], float]],
    feature_degree: int,
    k_degree: int,
    feature_polys: tuple[HermitianPolynomial, ...] | None = None,
) -> AlgebraicRelation:
    """Least-squares nullspace fit of a relation among the monomials
    features^beta * K^j.

    Requires at least twice as many samples as unknown coefficients.
    Columns are scaled to unit norm before the SVD (raw monomial matrices
    are badly conditioned at higher degree); the minimal right singular
    direction, unscaled and renormalized to a unit coefficient vector, is
    returned with its max-abs residual over the samples.
    """
    if k_degree < 1:
        raise ValueError("k_degree must be at least 1")
    if not samples:
        raise ValueError("no samples given")
    feats = np.array([list(s[0]) for s in samples], dtype=float)
    kvals = np.array([s[1] for s in samples], dtype=float)
    if np.allclose(kvals, 0.0):
        raise ValueError("all kernel samples vanish")
    nfeat = feats.shape[1]
    betas = list(monomials_up_to_degree(nfeat, feature_degree))
    keys = [(beta, j) for j in range(k_degree + 1) for beta in betas]
    if len(samples) < 2 * len(keys):
        raise ValueError(
            f"underdetermined fit: {len(samples)} samples for {len(keys)} unknowns "
            f"(need at least {2 * len(keys)})"
        )
    cols = []
    for beta, j in keys:
        col = kvals**j
        for axis, e in enumerate(beta):
            if e:
                col = col * feats[:, axis] ** e
        cols.append(col)
    matrix = np.column_stack(cols)
    scale = np.linalg.norm(matrix, axis=0)
    scale[scale == 0] = 1.0
    _, _, vt = np.linalg.svd(matrix / scale, full_matrices=False)
    coeff = vt[-1] / scale
    coeff = coeff / np.linalg.norm(coeff)
    residual = float(np.max(np.abs(matrix @ coeff)))
    coefficients = {
        key: float(c) for key, c in zip(keys, coeff) if c != 0.0
    }
    return AlgebraicRelation(
        k_degree=k_degree,
        feature_degree=feature_degree,
        nfeatures=nfeat,
        coefficients=coefficients,
        residual=residual,
        feature_polys=feature_polys,
    )


def fit_surface_relation(
    surface: KernelSurface,
    feature_degree: int,
    k_degree: int,
    count: int | None = None,
    seed: int = 0,
) -> AlgebraicRelation:
    """Sample a named surface and fit; sample count defaults to twice the
    number of unknown coefficients."""
    betas = sum(1 for _ in monomials_up_to_degree(len(surface.feature_polys), feature_degree))
    if count is None:
        count = 2 * betas * (k_degree + 1)
    samples = surface.samples(count, seed=seed)
    return fit_relation(
        samples, feature_degree, k_degree, feature_polys=surface.feature_polys
    )


def boundary_leading_coefficient(
    relation: AlgebraicRelation, boundary_features: Sequence[Sequence[float]]
) -> float:
    """Max |a_q| over boundary samples; an honest algebraic kernel relation
    has a leading coefficient vanishing on the boundary."""
    return max(
        abs(relation.eval_coefficient(relation.k_degree, f)) for f in boundary_features
    )


def best_relation_residual(
    surface: KernelSurface,
    max_feature_degree: int,
    max_k_degree: int,
    count: int | None = None,
    seed: int = 0,
) -> float:
    """Smallest fit residual over all (feature_degree, k_degree) pairs up
    to the bounds; non-algebraicity evidence when this stays large."""
    best = math.inf
    for q in range(1, max_k_degree + 1):
        rel = fit_surface_relation(
            surface, max_feature_degree, q, count=count, seed=seed
        )
        best = min(best, rel.residual)
    return best


# ---------------------------------------------------------------------------
# recovering the biholomorphism from the kernel
# ---------------------------------------------------------------------------

def ball_kernel_dbar_at_zero(n: int, z: Sequence[complex], j: int) -> complex:
    """Exact d/d(conj(w_j)) of the ball kernel at w = 0."""
    return math.factorial(n) / math.pi**n * (n + 1) * complex(z[j])


def recover_map_from_kernel(
    kernel: Callable[[Sequence[complex], Sequence[complex]], complex],
    n: int,
    dbar_kernel: Callable[[Sequence[complex], int], complex] | None = None,
    step: float = 1e-5,
):
    """Reconstruct conj(Jf(0))^T f from a kernel with base point at 0.

    Solves, componentwise,

        g_j(z) = 1/(n+1) [ K(z,0)^{-1} d_[conj w_j] K(z,0)
                           - K(0,0)^{-1} d_[conj w_j] K(0,0) ],

    using the supplied exact derivative when available and otherwise
    central differences in conj(w_j) with the given step (K(z, conj(w))
    is holomorphic in conj(w_j), so real steps in w_j suffice).  For the
    ball kernel itself the result is the identity map; rescaling the
    kernel by a positive constant does not change g.
    """
    zero = tuple(0j for _ in range(n))

    def dbar(z: Sequence[complex], j: int) -> complex:
        if dbar_kernel is not None:
            return dbar_kernel(z, j)
        wp = list(zero)
        wm = list(zero)
        wp[j] = complex(step)
        wm[j] = complex(-step)
        return (kernel(z, wp) - kernel(z, wm)) / (2.0 * step)

    k00 = kernel(zero, zero)
    base = [dbar(zero, j) / k00 for j in range(n)]

    def g(z: Sequence[complex]) -> tuple[complex, ...]:
        z = tuple(complex(x) for x in z)
        kz0 = kernel(z, zero)
        if abs(kz0) == 0:
            raise ZeroDivisionError("kernel vanishes at (z, 0)")
        return tuple(
            (dbar(z, j) / kz0 - base[j]) / (n + 1) for j in range(n)
        )

    return g


def linear_map_coefficients(
    g: Callable[[Sequence[complex]], Sequence[complex]],
    n: int,
    seed: int = 0,
    count: int = 40,
    radius: float = 0.3,
) -> np.ndarray:
    """Least-squares linear coefficients A with g(z) ~ A z on a sample set."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-radius, radius, (count, 2 * n))
    zs = pts[:, :n] + 1j * pts[:, n:]
    vals = np.array([list(g(tuple(row))) for row in zs])
    a, *_ = np.linalg.lstsq(zs, vals, rcond=None)
    return a.T
