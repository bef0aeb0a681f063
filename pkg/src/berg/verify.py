"""Monte Carlo integration over the supported domains and the identity
checks that tie the package together: reproducing property, pullback
isometry, deck-sum symmetry, and the covering transformation law.

Conventions.  Ball and disk kernels reproduce with respect to Lebesgue
measure.  Hartogs-domain norms carry the top-form inner product, which on
C^3 is 2^3 times Lebesgue measure; the factor 8 appears once, here.

Sampling.  Disk, balls and the annulus are rejection-sampled from
bounding boxes.  The unbounded Hartogs domain is sampled exactly: the
fiber disk in lambda is sampled uniformly (its area is known per base
point) and each base radius r_i = |z_i|^2 is drawn from the heavy-tailed
density (1+r)^-2 by inverse CDF, giving an unbiased estimator with no
domain truncation and bounded weights for every square-integrable fiber
monomial.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .hartogs import OMEGA, HartogsDomainSpec, monomial_norm, square_integrable
from .quotient import (
    CoveringSpec,
    deck_sum_kernel,
    disk_power_cover,
    dual_deck_sum_kernel,
    minus_identity_cover,
    scalar_rotation_cover,
)
from .scalars import ExactComplex, to_complex

FORM_FACTOR_C3 = 8.0  # top-form inner product on C^3 vs Lebesgue measure
STDERR_REL_CAP = 0.02


@dataclass(frozen=True)
class IntegrationSpec:
    """What to integrate over and how; fixing the seed fixes the output."""

    domain: str
    n_samples: int = 1_000_000
    seed: int = 0
    method: str = "monte-carlo"
    inner_radius: float = 0.5  # annulus only
    hartogs: HartogsDomainSpec | None = None

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.method not in ("monte-carlo",):
            raise ValueError(f"unknown method {self.method}")


@dataclass(frozen=True)
class VerificationReport:
    """One named check with everything needed to recompute the verdict."""

    name: str
    passed: bool
    residual: float | None = None
    tolerance: float | None = None
    estimate: complex | None = None
    stderr: float | None = None
    target: complex | None = None
    inputs: dict = field(default_factory=dict)
    runtime: float = 0.0

    def to_json(self) -> str:
        # runtime is excluded: report bytes must replay identically per seed
        payload = {
            "name": self.name,
            "passed": bool(self.passed),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "estimate": None
            if self.estimate is None
            else [self.estimate.real, self.estimate.imag],
            "stderr": self.stderr,
            "target": None
            if self.target is None
            else [self.target.real, self.target.imag],
            "inputs": self.inputs,
        }
        return json.dumps(payload, sort_keys=True)


# ---------------------------------------------------------------------------
# samplers: (points array of shape (N, k), inverse density weights)
# ---------------------------------------------------------------------------

def _sample_box_domain(rng, count: int, n: int, keep) -> tuple[np.ndarray, np.ndarray]:
    pts = rng.uniform(-1.0, 1.0, (count, 2 * n))
    z = pts[:, :n] + 1j * pts[:, n:]
    inv = np.where(keep(z), float(4**n), 0.0)
    return z, inv


def _sample_omega(rng, count: int, spec: HartogsDomainSpec) -> tuple[np.ndarray, np.ndarray]:
    if spec.base_dim != 2:
        raise ValueError("Hartogs sampler implemented for two base variables")
    u = rng.uniform(0.0, 1.0, (count, 2))
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    r = u / (1.0 - u)
    theta = rng.uniform(0.0, 2.0 * math.pi, (count, 2))
    z = np.sqrt(r) * np.exp(1j * theta)
    if spec.omega_standard:
        h = (1.0 + r[:, 0]) * (1.0 + r[:, 1])
    else:
        from .hartogs import _radialize_weight

        radial, _ = _radialize_weight(spec.weight)
        h = radial([r[:, 0], r[:, 1]])
    s = rng.uniform(0.0, 1.0, count)
    phi = rng.uniform(0.0, 2.0 * math.pi, count)
    lam = np.sqrt(s / h) * np.exp(1j * phi)
    inv = math.pi**3 * (1.0 + r[:, 0]) ** 2 * (1.0 + r[:, 1]) ** 2 / h
    points = np.column_stack([z, lam])
    return points, inv


def _draw(spec: IntegrationSpec, rng, count: int) -> tuple[np.ndarray, np.ndarray]:
    d = spec.domain
    if d == "disk":
        return _sample_box_domain(rng, count, 1, lambda z: np.abs(z[:, 0]) < 1.0)
    if d.startswith("ball"):
        n = int(d.replace("ball-", "").replace("ball", ""))
        return _sample_box_domain(
            rng, count, n, lambda z: np.sum(np.abs(z) ** 2, axis=1) < 1.0
        )
    if d == "annulus":
        r0 = spec.inner_radius
        return _sample_box_domain(
            rng, count, 1, lambda z: (np.abs(z[:, 0]) > r0) & (np.abs(z[:, 0]) < 1.0)
        )
    if d in ("omega", "hartogs"):
        hspec = spec.hartogs if spec.hartogs is not None else OMEGA
        return _sample_omega(rng, count, hspec)
    raise ValueError(f"unknown domain {d}")


def integrate(
    spec: IntegrationSpec, integrand: Callable[[np.ndarray], np.ndarray]
) -> tuple[complex, float]:
    """Unbiased Monte Carlo estimate of the Lebesgue integral of a
    vectorized integrand over the domain, with its standard error."""
    rng = np.random.default_rng(spec.seed)
    points, inv = _draw(spec, rng, spec.n_samples)
    values = np.asarray(integrand(points), dtype=complex)
    weighted = np.where(inv > 0, values, 0.0) * inv
    n = spec.n_samples
    est = complex(np.mean(weighted))
    var = np.var(weighted.real, ddof=1) + np.var(weighted.imag, ddof=1)
    return est, math.sqrt(var / n)


def _stochastic_pass(estimate: complex, stderr: float, target: complex, scale: float) -> bool:
    return abs(estimate - target) <= 3.0 * stderr and stderr <= STDERR_REL_CAP * scale


# ---------------------------------------------------------------------------
# reproducing property
# ---------------------------------------------------------------------------

def check_reproducing(
    domain: str,
    f,
    z0,
    spec: IntegrationSpec | None = None,
) -> VerificationReport:
    """Monte Carlo test that integrating a Bergman-space monomial against
    the kernel returns its value at the base point.

    For the disk, ``f`` is an integer power d (the monomial z^d) and z0 a
    complex point.  For the Hartogs domain, ``f`` is a pair (m, alpha)
    (the monomial lambda^m z^alpha, which must be square-integrable) and
    z0 a triple (z1, z2, lambda0).
    """
    t0 = time.time()
    spec = spec or IntegrationSpec(domain=domain)
    if spec.domain != domain:
        raise ValueError(f"spec domain {spec.domain!r} does not match {domain!r}")
    if domain == "disk":
        d = int(f)
        z0 = complex(z0)

        def integrand(pts):
            zeta = pts[:, 0]
            kernel = 1.0 / (math.pi * (1.0 - z0 * np.conj(zeta)) ** 2)
            return zeta**d * kernel

        target = z0**d
        name = f"reproducing:disk:z^{d}"
    elif domain in ("omega", "hartogs"):
        m, alpha = int(f[0]), tuple(f[1])
        if not square_integrable(m, alpha):
            raise ValueError(
                f"monomial lambda^{m} z^{alpha} is not square-integrable on the domain"
            )
        zy = (complex(z0[0]), complex(z0[1]))
        lam_y = complex(z0[2])

        def integrand(pts):
            x1, x2, lam_x = pts[:, 0], pts[:, 1], pts[:, 2]
            rho = (
                lam_y
                * np.conj(lam_x)
                * (1.0 + zy[0] * np.conj(x1))
                * (1.0 + zy[1] * np.conj(x2))
                - 1.0
            )
            lt = lam_y * np.conj(lam_x)
            kernel = (4.0 * lt / rho**3 + 6.0 * lt / rho**4) / (2.0 * math.pi) ** 3
            fx = lam_x**m * x1 ** alpha[0] * x2 ** alpha[1]
            return FORM_FACTOR_C3 * kernel * fx

        target = lam_y**m * zy[0] ** alpha[0] * zy[1] ** alpha[1]
        name = f"reproducing:omega:lam^{m}z^{alpha}"
    else:
        raise ValueError(f"no reproducing check for domain {domain}")

    estimate, stderr = integrate(spec, integrand)
    scale = abs(target) if abs(target) > 0 else 1.0
    passed = _stochastic_pass(estimate, stderr, target, scale)
    return VerificationReport(
        name=name,
        passed=passed,
        estimate=estimate,
        stderr=stderr,
        target=complex(target),
        inputs={"domain": domain, "seed": spec.seed, "n": spec.n_samples},
        runtime=time.time() - t0,
    )


def check_orthogonality(
    first: tuple[int, tuple[int, int]],
    second: tuple[int, tuple[int, int]],
    spec: IntegrationSpec | None = None,
) -> VerificationReport:
    """Inner product of two fiber monomials with distinct fiber degrees is
    zero; the Monte Carlo estimate must sit within 3 standard errors."""
    t0 = time.time()
    spec = spec or IntegrationSpec(domain="omega")
    (m1, a1), (m2, a2) = first, second
    if m1 == m2:
        raise ValueError("orthogonality check needs distinct fiber degrees")

    def integrand(pts):
        x1, x2, lam = pts[:, 0], pts[:, 1], pts[:, 2]
        f = lam**m1 * x1 ** a1[0] * x2 ** a1[1]
        g = lam**m2 * x1 ** a2[0] * x2 ** a2[1]
        return FORM_FACTOR_C3 * f * np.conj(g)

    estimate, stderr = integrate(spec, integrand)
    n1 = monomial_norm(m1, a1)
    n2 = monomial_norm(m2, a2)
    if math.inf in (n1, n2):
        raise ValueError("orthogonality check needs square-integrable monomials")
    scale = math.sqrt(to_complex(n1).real * to_complex(n2).real)
    passed = _stochastic_pass(estimate, stderr, 0j, scale)
    return VerificationReport(
        name=f"orthogonality:lam^{m1}z^{a1}|lam^{m2}z^{a2}",
        passed=passed,
        estimate=estimate,
        stderr=stderr,
        target=0j,
        inputs={"domain": "omega", "seed": spec.seed, "n": spec.n_samples},
        runtime=time.time() - t0,
    )


# ---------------------------------------------------------------------------
# pullback isometry for the disk self-cover
# ---------------------------------------------------------------------------

def disk_monomial_norm(j: int) -> ExactComplex:
    """||z^j||^2 = pi/(j+1) on the disk (Lebesgue measure), exactly."""
    if j < 0:
        raise ValueError("negative powers are not square-integrable on the disk")
    return ExactComplex(Fraction(1, j + 1), 0, 1)


@dataclass(frozen=True)
class IsometryCheck:
    cover_exponent: int
    monomial_degree: int
    pullback_norm: ExactComplex
    scaled_norm: ExactComplex

    @property
    def equal(self) -> bool:
        return self.pullback_norm == self.scaled_norm


def check_pullback_isometry(k: int, d: int) -> IsometryCheck:
    """Exact identity ||(z^k)^* (w^d dw)||^2 = k ||w^d dw||^2.

    The pullback of w^d dw under z -> z^k is k z^(kd+k-1) dz, so both
    sides are rational multiples of pi and compare exactly.
    """
    if k < 1:
        raise ValueError("cover exponent must be >= 1")
    if d < 0:
        raise ValueError("monomial degree must be >= 0")
    lhs = ExactComplex(k * k) * disk_monomial_norm(k * d + k - 1)
    rhs = ExactComplex(k) * disk_monomial_norm(d)
    return IsometryCheck(
        cover_exponent=k, monomial_degree=d, pullback_norm=lhs, scaled_norm=rhs
    )


# ---------------------------------------------------------------------------
# transformation law
# ---------------------------------------------------------------------------

def _closed_deck_sum_minus_identity(z, w) -> complex:
    """Independent closed form for the {I, -I} deck sum in dimension 2."""
    u = z[0] * np.conj(w[0]) + z[1] * np.conj(w[1])
    return 2.0 / math.pi**2 * ((1.0 - u) ** -3 + (1.0 + u) ** -3)


def _closed_deck_sum_scalar_rotation(z, w) -> complex:
    """Independent closed form for the deck sum of the scalar group
    generated by i*I in dimension 2 (det(i^k I) = (-1)^k)."""
    u = z[0] * np.conj(w[0]) + z[1] * np.conj(w[1])
    total = 0j
    for k in range(4):
        total += (-1) ** k * (1.0 - (1j**k) * u) ** -3
    return 2.0 / math.pi**2 * total


def _random_ball_pairs(rng, count: int, n: int, radius: float) -> list:
    pairs = []
    for _ in range(count):
        z = rng.uniform(-radius, radius, 2 * n)
        w = rng.uniform(-radius, radius, 2 * n)
        pairs.append(
            (
                tuple(complex(z[i], z[n + i]) for i in range(n)),
                tuple(complex(w[i], w[n + i]) for i in range(n)),
            )
        )
    return pairs


def check_transformation_law(
    cover: str | CoveringSpec,
    count: int = 50,
    seed: int = 0,
    tolerance: float = 1e-12,
    radius: float = 0.35,
) -> VerificationReport:
    """Max residual between the deck-transformation sum and an independent
    evaluation of the base kernel pulled back through the covering map.

    Named covers: ``disk-k`` for the one-variable self-cover z -> z^k
    (base kernel given by the disk kernel in base coordinates) and
    ``minus-identity`` / ``scalar-i`` for the two scalar ball quotients
    (independent hand-expanded deck sums, plus well-definedness of the
    push-forward under group translates on either argument).
    """
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst = 0.0

    if isinstance(cover, str) and cover.startswith("disk-"):
        k = int(cover.split("-", 1)[1])
        spec = disk_power_cover(k)
        pairs = _random_ball_pairs(rng, count, 1, radius)
        for z, w in pairs:
            deck = to_complex(deck_sum_kernel(spec.group, 1, z, w))
            zk, wk = z[0] ** k, w[0] ** k
            base = 1.0 / (math.pi * (1.0 - zk * np.conj(wk)) ** 2)
            jac = k * z[0] ** (k - 1)
            jac_w = k * w[0] ** (k - 1)
            rhs = base * jac * np.conj(jac_w)
            worst = max(worst, abs(deck - rhs))
        name = f"transformation:disk-z^{k}"
    else:
        if cover == "minus-identity":
            spec = minus_identity_cover()
            closed = _closed_deck_sum_minus_identity
        elif cover == "scalar-i":
            spec = scalar_rotation_cover()
            closed = _closed_deck_sum_scalar_rotation
        elif isinstance(cover, CoveringSpec):
            spec, closed = cover, None
        else:
            raise ValueError(f"unknown cover {cover}")
        n = spec.group.dim
        pairs = _random_ball_pairs(rng, count, n, radius)
        for z, w in pairs:
            deck = to_complex(deck_sum_kernel(spec.group, n, z, w))
            if closed is not None:
                worst = max(worst, abs(deck - closed(z, w)))
            # pullback invariance of the deck sum on either argument
            for g in spec.group:
                gm = g.to_numpy()
                det = to_complex(g.det())
                gz = tuple(gm @ np.array(z))
                gw = tuple(gm @ np.array(w))
                left = to_complex(deck_sum_kernel(spec.group, n, gz, w)) * det
                right = to_complex(deck_sum_kernel(spec.group, n, z, gw)) * det.conjugate()
                worst = max(worst, abs(left - deck), abs(right - deck))
        name = f"transformation:{cover if isinstance(cover, str) else 'custom'}"

    return VerificationReport(
        name=name,
        passed=worst <= tolerance,
        residual=worst,
        tolerance=tolerance,
        inputs={"count": count, "seed": seed, "radius": radius},
        runtime=time.time() - t0,
    )


def check_deck_symmetry(
    cover: str, count: int = 20, seed: int = 0, tolerance: float = 1e-12
) -> VerificationReport:
    """Row-sum versus column-sum presentation of the deck sum."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    if cover == "minus-identity":
        spec = minus_identity_cover()
    elif cover == "scalar-i":
        spec = scalar_rotation_cover()
    elif cover.startswith("disk-"):
        spec = disk_power_cover(int(cover.split("-", 1)[1]))
    else:
        raise ValueError(f"unknown cover {cover}")
    n = spec.group.dim
    worst = 0.0
    for z, w in _random_ball_pairs(rng, count, n, 0.35):
        a = to_complex(deck_sum_kernel(spec.group, n, z, w))
        b = to_complex(dual_deck_sum_kernel(spec.group, n, z, w))
        worst = max(worst, abs(a - b))
    return VerificationReport(
        name=f"deck-symmetry:{cover}",
        passed=worst <= tolerance,
        residual=worst,
        tolerance=tolerance,
        inputs={"count": count, "seed": seed},
        runtime=time.time() - t0,
    )


# ---------------------------------------------------------------------------
# suites (used by the CLI; acceptance tests call the checks directly)
# ---------------------------------------------------------------------------

def suite_repro(seed: int = 0, n_samples: int = 1_000_000) -> list[VerificationReport]:
    return [
        check_reproducing(
            "disk", 1, 0.3, IntegrationSpec(domain="disk", n_samples=n_samples, seed=seed)
        ),
        check_reproducing(
            "omega",
            (1, (0, 0)),
            (0.0, 0.0, 0.4),
            IntegrationSpec(domain="omega", n_samples=n_samples, seed=seed),
        ),
    ]


def suite_orthogonality(seed: int = 0, n_samples: int = 1_000_000) -> list[VerificationReport]:
    spec = IntegrationSpec(domain="omega", n_samples=n_samples, seed=seed)
    return [
        check_orthogonality((1, (0, 0)), (2, (0, 0)), spec),
        check_orthogonality((1, (0, 0)), (2, (1, 0)), spec),
    ]


def suite_transform(seed: int = 0, count: int = 50) -> list[VerificationReport]:
    out = []
    for k in range(2, 6):
        out.append(check_transformation_law(f"disk-{k}", count=count, seed=seed))
    out.append(check_transformation_law("minus-identity", count=count, seed=seed))
    out.append(check_transformation_law("scalar-i", count=count, seed=seed))
    for cover in ("disk-2", "minus-identity", "scalar-i"):
        out.append(check_deck_symmetry(cover, seed=seed))
    return out


def suite_isometry() -> list[VerificationReport]:
    out = []
    for k, d in [(1, 0), (2, 0), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 2)]:
        chk = check_pullback_isometry(k, d)
        out.append(
            VerificationReport(
                name=f"isometry:z^{k}:w^{d}",
                passed=chk.equal,
                residual=0.0 if chk.equal else math.inf,
                tolerance=0.0,
                inputs={
                    "pullback": repr(chk.pullback_norm),
                    "scaled": repr(chk.scaled_norm),
                },
            )
        )
    return out
