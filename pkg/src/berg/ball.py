"""Unit ball kernels and Levi-form positivity checks.

The kernel here is the reproducing kernel of square-integrable holomorphic
functions with respect to Lebesgue measure on C^n:

    K_n(z, w) = n! / pi^n * (1 - <z, w>)^(-(n+1)),   <z, w> = sum z_i conj(w_i).

Evaluation is exact (Gaussian rational times pi^-n) when inputs are exact,
floating otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polynomials import HermitianPolynomial
from .scalars import ExactComplex, conj_scalar, to_complex

BOUNDARY_TOL = 1e-9
GRADIENT_TOL = 1e-9


class SingularKernelError(ArithmeticError):
    """Kernel evaluated at boundary contact <z, w> = 1."""


@dataclass(frozen=True)
class BallPoint:
    """A point of the closed unit ball; boundary samples carry a flag."""

    coords: tuple[complex, ...]
    boundary: bool = False

    def __post_init__(self):
        norm2 = sum(abs(c) ** 2 for c in self.coords)
        if self.boundary:
            if abs(norm2 - 1.0) > 1e-6:
                raise ValueError(f"boundary point has |z|^2 = {norm2}")
        elif norm2 >= 1.0:
            raise ValueError(f"interior point has |z|^2 = {norm2} >= 1")

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def _coords(p) -> Sequence:
    if isinstance(p, BallPoint):
        return p.coords
    return p


def hermitian_inner(z: Sequence, w: Sequence):
    """<z, w> = sum z_i * conj(w_i), exact when both inputs are exact."""
    total = None
    for a, b in zip(z, w):
        term = a * conj_scalar(b)
        total = term if total is None else total + term
    return 0 if total is None else total


def _all_exact(values) -> bool:
    return all(isinstance(v, (int, Fraction, ExactComplex)) for v in values)


def ball_kernel(n: int, z, w):
    """Bergman kernel of the unit ball in C^n at (z, w).

    Returns an ExactComplex (rational times pi^-n) for exact inputs and a
    Python complex otherwise.  Raises SingularKernelError at boundary
    contact <z, w> = 1.
    """
    z = _coords(z)
    w = _coords(w)
    if len(z) != n or len(w) != n:
        raise ValueError(f"expected points in C^{n}")
    if _all_exact(z) and _all_exact(w):
        u = ExactComplex.coerce(hermitian_inner(z, w))
        one_minus = ExactComplex(1) - u
        if one_minus.is_zero:
            raise SingularKernelError("kernel singular at <z, w> = 1")
        return ExactComplex(math.factorial(n), 0, -n) * (one_minus ** (-(n + 1)))
    uc = hermitian_inner([to_complex(x) for x in z], [to_complex(x) for x in w])
    if abs(1.0 - uc) < 1e-14:
        raise SingularKernelError("kernel singular at <z, w> = 1")
    return math.factorial(n) / math.pi**n * (1.0 - uc) ** (-(n + 1))


def disk_kernel(z, w):
    """One-variable convenience wrapper: K(z, w) = 1/(pi (1 - z conj(w))^2)."""
    return ball_kernel(1, (z,), (w,))


# ---------------------------------------------------------------------------
# Hermitian eigenvalues via cyclic Jacobi (dimensions here are at most 3)
# ---------------------------------------------------------------------------

def jacobi_hermitian_eigenvalues(matrix: Sequence[Sequence[complex]], sweeps: int = 60) -> list[float]:
    """Eigenvalues of a small Hermitian matrix by cyclic Jacobi rotations."""
    n = len(matrix)
    a = [[complex(matrix[i][j]) for j in range(n)] for i in range(n)]
    if n == 0:
        return []
    if n == 1:
        return [a[0][0].real]
    for _ in range(sweeps):
        off = math.sqrt(sum(abs(a[i][j]) ** 2 for i in range(n) for j in range(n) if i != j))
        if off < 1e-14 * (1.0 + max(abs(a[i][i]) for i in range(n))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) < 1e-300:
                    continue
                phase = apq / abs(apq)
                app, aqq = a[p][p].real, a[q][q].real
                tau = (aqq - app) / (2.0 * abs(apq))
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns: v_p' = c v_p - s conj(phase) v_q ; v_q' = s phase v_p + c v_q
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * phase.conjugate() * akq
                    a[k][q] = s * phase * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * phase * aqk
                    a[q][k] = s * phase.conjugate() * apk + c * aqk
    return sorted(a[i][i].real for i in range(n))


# ---------------------------------------------------------------------------
# Levi form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DefiningFunction:
    """A real-valued defining polynomial rho for a real hypersurface."""

    rho: HermitianPolynomial

    def __post_init__(self):
        if not self.rho.is_real_valued(tol=1e-12):
            raise ValueError("defining function must be real-valued")

    @property
    def dim(self) -> int:
        return self.rho.dim


@dataclass(frozen=True)
class LeviReport:
    """Levi form at a boundary point, or a non-smooth flag."""

    point: tuple[complex, ...]
    smooth: bool
    eigenvalues: tuple[float, ...] | None
    gradient_norm: float
    strictly_pseudoconvex: bool = field(init=False)

    def __post_init__(self):
        spc = bool(self.smooth and self.eigenvalues and all(e > 0 for e in self.eigenvalues))
        object.__setattr__(self, "strictly_pseudoconvex", spc)


def levi_form(rho: DefiningFunction | HermitianPolynomial, point: Sequence[complex]) -> LeviReport:
    """Eigenvalues of the complex Hessian of rho restricted to the
    complex tangent space at a boundary point.

    The point must satisfy rho = 0 within tolerance.  A vanishing complex
    gradient flags the point as non-smooth and no eigenvalues are
    returned.  Second derivatives come from the polynomial itself, so the
    only floating step is the final small eigenvalue problem.
    """
    poly = rho.rho if isinstance(rho, DefiningFunction) else rho
    n = poly.dim
    p = tuple(complex(x) for x in _coords(point))
    if len(p) != n:
        raise ValueError(f"point dimension {len(p)} does not match rho dimension {n}")

    value = to_complex(poly.eval(p))
    if abs(value) > BOUNDARY_TOL:
        raise ValueError(f"point is not on the zero set: rho = {value}")

    grad = [to_complex(poly.d_z(i).eval(p)) for i in range(n)]
    gnorm = math.sqrt(sum(abs(g) ** 2 for g in grad))
    if gnorm <= GRADIENT_TOL:
        return LeviReport(point=p, smooth=False, eigenvalues=None, gradient_norm=gnorm)

    hess = [[to_complex(poly.d_z(i).d_zbar(j).eval(p)) for j in range(n)] for i in range(n)]

    basis = _tangent_basis(grad)
    m = len(basis)
    # normalized by the gradient norm so rho and c*rho (c > 0) agree
    restricted = [
        [
            sum(
                basis[a][i].conjugate() * hess[i][j] * basis[b][j]
                for i in range(n)
                for j in range(n)
            )
            / gnorm
            for b in range(m)
        ]
        for a in range(m)
    ]
    eigs = tuple(jacobi_hermitian_eigenvalues(restricted))
    return LeviReport(point=p, smooth=True, eigenvalues=eigs, gradient_norm=gnorm)


def _tangent_basis(grad: Sequence[complex]) -> list[list[complex]]:
    """Orthonormal basis of the orthogonal complement of the gradient."""
    n = len(grad)
    g = [x / math.sqrt(sum(abs(y) ** 2 for y in grad)) for x in grad]
    basis: list[list[complex]] = [g]
    for i in range(n):
        v = [0j] * n
        v[i] = 1.0 + 0j
        for b in basis:
            overlap = sum(b[k].conjugate() * v[k] for k in range(n))
            v = [v[k] - overlap * b[k] for k in range(n)]
        norm = math.sqrt(sum(abs(x) ** 2 for x in v))
        if norm > 1e-10:
            basis.append([x / norm for x in v])
        if len(basis) == n:
            break
    return basis[1:]


# ---------------------------------------------------------------------------
# stock defining functions
# ---------------------------------------------------------------------------

def sphere_defining_function(n: int) -> DefiningFunction:
    """rho = |z|^2 - 1 for the unit sphere in C^n."""
    rho = HermitianPolynomial.constant(n, Fraction(-1))
    for i in range(n):
        rho = rho + HermitianPolynomial.modulus_squared(n, i)
    return DefiningFunction(rho)


def siegel_model_defining_function() -> DefiningFunction:
    """rho = 2 Re(z_2) - |z_1|^2, a sign-flipped unbounded model in C^2."""
    rho = HermitianPolynomial(2, {
        ((0, 1), (0, 0)): Fraction(1),
        ((0, 0), (0, 1)): Fraction(1),
        ((1, 0), (1, 0)): Fraction(-1),
    })
    return DefiningFunction(rho)


def u_domain_defining_function() -> DefiningFunction:
    """rho = |w1|^4 + |w1|^2(|w2|^2 + |w3|^2) + |w2 w3|^2 - |w1|^2 in C^3."""
    rho = HermitianPolynomial(3, {
        ((2, 0, 0), (2, 0, 0)): Fraction(1),
        ((1, 1, 0), (1, 1, 0)): Fraction(1),
        ((1, 0, 1), (1, 0, 1)): Fraction(1),
        ((0, 1, 1), (0, 1, 1)): Fraction(1),
        ((1, 0, 0), (1, 0, 0)): Fraction(-1),
    })
    return DefiningFunction(rho)
