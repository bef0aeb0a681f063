"""Deck-transformation kernel sums and push-forward to quotient kernels.

For a finite unitary group acting on the ball, the kernel downstairs is
computed from the kernel upstairs by summing over deck transformations
with holomorphic Jacobian factors (for a unitary map the Jacobian is its
determinant):

    deck_sum(z, w) = sum_g K_ball(g z, w) det(g)

and, off the branch locus of an invariant covering map F,

    K_base(F(z), F(w)) = deck_sum(z, w) / (J_F(z) conj(J_F(w))).

The base kernel is always reported in pulled-back chart coordinates;
charts are a choice of dim-many components of F with generically
nonvanishing Jacobian.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ball import ball_kernel
from .cyclotomic import CyclotomicField
from .groups import FiniteUnitaryGroup, UnitaryMatrix, generate_group
from .invariants import compute_basic_map
from .polynomials import HoloPolynomial
from .scalars import ExactComplex, conj_scalar, to_complex

BRANCH_TOL = 1e-12


class BranchPointError(ArithmeticError):
    """Evaluation at (or too close to) a branch point of the covering map."""

    def __init__(self, point):
        self.point = tuple(point)
        super().__init__(f"Jacobian vanishes at {self.point} (|J| <= {BRANCH_TOL})")


def _apply_group_element(g: UnitaryMatrix, z: Sequence, exact: bool):
    if exact:
        rows = g.to_exact_complex()
        return [
            sum((rows[i][j] * z[j] for j in range(g.n)), start=ExactComplex(0))
            for i in range(g.n)
        ]
    m = g.to_numpy()
    zc = [complex(to_complex(x)) for x in z]
    return [sum(m[i, j] * zc[j] for j in range(g.n)) for i in range(g.n)]


def _wants_exact(group: FiniteUnitaryGroup, *points) -> bool:
    if not group.exact:
        return False
    try:
        for g in group:
            g.to_exact_complex()
    except ValueError:
        return False
    for p in points:
        for x in p:
            if not isinstance(x, (int, Fraction, ExactComplex)):
                return False
    return True


def deck_sum_kernel(group: FiniteUnitaryGroup, n: int, z: Sequence, w: Sequence):
    """sum over the group of K_ball(g z, w) det(g).

    Exact (Gaussian rational times pi^-n) when the group embeds in the
    Gaussian rationals and the points are exact; floating otherwise.
    """
    if group.dim != n:
        raise ValueError("group dimension does not match n")
    exact = _wants_exact(group, z, w)
    total = None
    for g in group:
        gz = _apply_group_element(g, z, exact)
        det = g.det()
        if exact:
            det = det.to_exact_complex() if hasattr(det, "to_exact_complex") else ExactComplex(Fraction(det))
        else:
            det = to_complex(det)
        term = ball_kernel(n, gz, w) * det
        total = term if total is None else total + term
    return total


def dual_deck_sum_kernel(group: FiniteUnitaryGroup, n: int, z: Sequence, w: Sequence):
    """sum over the group of K_ball(z, g w) conj(det(g)); equal to
    deck_sum_kernel by the two pullback presentations of the same form."""
    if group.dim != n:
        raise ValueError("group dimension does not match n")
    exact = _wants_exact(group, z, w)
    total = None
    for g in group:
        gw = _apply_group_element(g, w, exact)
        det = g.det()
        if exact:
            det = det.to_exact_complex() if hasattr(det, "to_exact_complex") else ExactComplex(Fraction(det))
        else:
            det = to_complex(det)
        term = ball_kernel(n, z, gw) * conj_scalar(det)
        total = term if total is None else total + term
    return total


def check_deck_sum_symmetry(
    group: FiniteUnitaryGroup, n: int, pairs: Sequence[tuple]
) -> float:
    """Max over sample pairs of |row-sum minus column-sum| for the two
    equivalent deck-sum presentations."""
    worst = 0.0
    for z, w in pairs:
        a = to_complex(deck_sum_kernel(group, n, z, w))
        b = to_complex(dual_deck_sum_kernel(group, n, z, w))
        worst = max(worst, abs(a - b))
    return worst


# ---------------------------------------------------------------------------
# covering specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringSpec:
    """A finite covering of a quotient by the ball (or disk).

    ``cover_map`` lists the components of an invariant polynomial map;
    ``chart`` picks dim-many components to act as local coordinates on
    the base (default: the first dim components).
    """

    group: FiniteUnitaryGroup
    cover_map: tuple[HoloPolynomial, ...]
    chart: tuple[int, ...] = field(default=())

    def __post_init__(self):
        n = self.group.dim
        for p in self.cover_map:
            if p.dim != n:
                raise ValueError("cover map components must live in the group dimension")
        chart = self.chart or tuple(range(n))
        if len(chart) != n:
            raise ValueError(f"chart must select exactly {n} components")
        object.__setattr__(self, "chart", chart)
        self._check_invariance()

    @property
    def sheets(self) -> int:
        return self.group.order

    def _check_invariance(self):
        from .cyclotomic import Cyclotomic

        exact_coeffs = all(
            isinstance(c, (int, Fraction, Cyclotomic))
            for p in self.cover_map
            for c in p.terms.values()
        )
        if self.group.exact and exact_coeffs:
            for g in self.group:
                for p in self.cover_map:
                    if not p.compose_linear(g.entries) == p:
                        raise ValueError("cover map is not invariant under the group")
            return
        import numpy as np

        rng = np.random.default_rng(0)
        n = self.group.dim
        pts = rng.uniform(-0.5, 0.5, (8, 2 * n))
        samples = [tuple(complex(r[i], r[n + i]) for i in range(n)) for r in pts]
        floats = [p.to_complex_coeffs() for p in self.cover_map]
        for g in self.group:
            gm = g.to_numpy()
            for z in samples:
                gz = tuple(gm @ np.array(z))
                for p in floats:
                    if abs(p.eval(gz) - p.eval(z)) > 1e-10:
                        raise ValueError("cover map is not invariant under the group")

    def chart_components(self) -> list[HoloPolynomial]:
        return [self.cover_map[i] for i in self.chart]

    def jacobian_polynomial(self) -> HoloPolynomial:
        comps = self.chart_components()
        n = self.group.dim
        partials = [[comps[i].partial(j) for j in range(n)] for i in range(n)]
        return _poly_det(partials)

    def jacobian(self, z: Sequence):
        return _eval_holo(self.jacobian_polynomial(), z)

    def map_point(self, z: Sequence) -> tuple:
        return tuple(_eval_holo(p, z) for p in self.cover_map)


def _eval_holo(p: HoloPolynomial, z: Sequence):
    """Evaluate with whatever arithmetic the inputs support; fall back to
    complex coefficients when the coefficient field cannot act on them."""
    try:
        return p.eval(z)
    except TypeError:
        return p.to_complex_coeffs().eval([to_complex(x) for x in z])


def _poly_det(rows: list[list[HoloPolynomial]]) -> HoloPolynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    dim = rows[0][0].dim
    total = HoloPolynomial(dim)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        total = total + term
    return total


def pushforward_kernel(spec: CoveringSpec, z: Sequence, w: Sequence):
    """Quotient kernel in pulled-back chart coordinates:
    deck_sum(z, w) / (J(z) conj(J(w))).  Well-defined on the base: the
    value is unchanged when z or w is replaced by a group translate."""
    n = spec.group.dim
    jz = spec.jacobian(z)
    jw = spec.jacobian(w)
    if abs(to_complex(jz)) <= BRANCH_TOL:
        raise BranchPointError(tuple(to_complex(x) for x in z))
    if abs(to_complex(jw)) <= BRANCH_TOL:
        raise BranchPointError(tuple(to_complex(x) for x in w))
    deck = deck_sum_kernel(spec.group, n, z, w)
    return deck / (jz * conj_scalar(jw))


# ---------------------------------------------------------------------------
# stock covers
# ---------------------------------------------------------------------------

def disk_power_cover(k: int) -> CoveringSpec:
    """The branched self-cover of the disk z -> z^k with cyclic deck group."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        group = FiniteUnitaryGroup(
            elements=(UnitaryMatrix.identity(1),), dim=1
        )
    else:
        zeta = CyclotomicField(k).root(1)
        group = generate_group([UnitaryMatrix([[zeta]])], max_order=k)
    zk = HoloPolynomial.monomial(1, (k,))
    return CoveringSpec(group=group, cover_map=(zk,), chart=(0,))


def minus_identity_cover() -> CoveringSpec:
    """The ball quotient by {I, -I} via its degree-2 basic map, charted on
    the first two components (z1^2, z1 z2)."""
    minus_one = CyclotomicField(2).root(1)
    group = generate_group([UnitaryMatrix.scalar(2, minus_one)], max_order=2)
    basic = compute_basic_map(group, verify=False)
    return CoveringSpec(group=group, cover_map=basic.generators, chart=(0, 1))


def scalar_rotation_cover() -> CoveringSpec:
    """The ball quotient by the scalar group generated by i*I in dimension 2."""
    i_unit = CyclotomicField(4).root(1)
    group = generate_group([UnitaryMatrix.scalar(2, i_unit)], max_order=4)
    basic = compute_basic_map(group, verify=False)
    return CoveringSpec(group=group, cover_map=basic.generators, chart=(0, 1))
