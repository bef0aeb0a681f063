"""Invariant theory of finite unitary groups: Reynolds averaging, minimal
homogeneous generators of the invariant algebra, and the polynomial
relations cutting out the image variety.

All linear algebra here is exact (rational or cyclotomic): a relation
among generators is only reported after an exact substitution check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .cyclotomic import Cyclotomic
from .groups import FiniteUnitaryGroup, exact_nullspace
from .polynomials import (
    HoloPolynomial,
    MultiIndex,
    monomials_of_degree,
    monomials_up_to_degree,
)


def reynolds(f: HoloPolynomial, group: FiniteUnitaryGroup) -> HoloPolynomial:
    """Group average (1/|G|) sum of f(gz); a projection onto invariants."""
    if f.dim != group.dim:
        raise ValueError("polynomial dimension does not match the group")
    total = HoloPolynomial(f.dim)
    for g in group:
        total = total + f.compose_linear(g.entries)
    return total.scale(Fraction(1, group.order))


def is_invariant(f: HoloPolynomial, group: FiniteUnitaryGroup) -> bool:
    return all(f.compose_linear(g.entries) == f for g in group)


# ---------------------------------------------------------------------------
# exact span arithmetic over monomial bases
# ---------------------------------------------------------------------------

def _inv_coeff(x):
    if isinstance(x, Cyclotomic):
        return x.inverse()
    return Fraction(1) / Fraction(x)


def _zero_coeff(x) -> bool:
    if isinstance(x, Cyclotomic):
        return x.is_zero()
    return x == 0


class _Span:
    """Incremental row reduction over dict-vectors keyed by monomial."""

    def __init__(self):
        self.rows: dict[MultiIndex, dict[MultiIndex, object]] = {}

    @staticmethod
    def _leading(vec: dict) -> MultiIndex:
        return max(vec, key=lambda a: (a.degree, a))

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        while vec:
            lead = self._leading(vec)
            row = self.rows.get(lead)
            if row is None:
                return vec
            factor = vec[lead]
            for k, v in row.items():
                new = vec.get(k, 0) - factor * v
                if _zero_coeff(new):
                    vec.pop(k, None)
                else:
                    vec[k] = new
        return vec

    def add(self, vec: dict) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        rem = self.reduce(vec)
        if not rem:
            return False
        lead = self._leading(rem)
        inv = _inv_coeff(rem[lead])
        self.rows[lead] = {k: v * inv for k, v in rem.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)


def _vec(p: HoloPolynomial) -> dict:
    return dict(p.terms)


# ---------------------------------------------------------------------------
# basic map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasicMap:
    """Minimal homogeneous generators of the invariant polynomial algebra."""

    generators: tuple[HoloPolynomial, ...]
    degrees: tuple[int, ...]
    dim: int
    group_order: int

    def __len__(self):
        return len(self.generators)

    def eval(self, point) -> tuple:
        return tuple(p.eval(point) for p in self.generators)

    def to_json_dict(self) -> dict:
        gens = []
        for p in self.generators:
            from .scalars import to_complex
            gens.append(
                {
                    "terms": [
                        [list(a), to_complex(c).real, to_complex(c).imag]
                        for a, c in sorted(p.terms.items(), key=lambda kv: tuple(kv[0]))
                    ]
                }
            )
        return {"dim": self.dim, "degrees": list(self.degrees), "generators": gens}


def _products_of_degree(
    gens: list[HoloPolynomial], degrees: list[int], total: int, max_degree: int | None = None
):
    """All products of generators (multisets, size >= 1) of exact total degree."""
    usable = [
        (g, d)
        for g, d in zip(gens, degrees)
        if d <= total and (max_degree is None or d <= max_degree)
    ]
    out = []
    for size in range(1, total + 1):
        if usable and size * min(d for _, d in usable) > total:
            break
        for combo in combinations_with_replacement(range(len(usable)), size):
            if sum(usable[i][1] for i in combo) != total:
                continue
            prod = usable[combo[0]][0]
            for i in combo[1:]:
                prod = prod * usable[i][0]
            out.append(prod)
    return out


def _monic(p: HoloPolynomial) -> HoloPolynomial:
    lead = p.leading_monomial()
    return _rationalize(p.scale(_inv_coeff(p.terms[lead])))


def _rationalize(p: HoloPolynomial) -> HoloPolynomial:
    """Collapse cyclotomic coefficients that happen to be rational."""
    out = {}
    for a, c in p.terms.items():
        if isinstance(c, Cyclotomic) and c.is_rational():
            c = c.as_rational()
        out[a] = c
    return HoloPolynomial(p.dim, out)


def compute_basic_map(group: FiniteUnitaryGroup, verify: bool = True) -> BasicMap:
    """Minimal homogeneous generators of the invariant algebra.

    Degrees are processed up to the group order (the Noether bound).
    Within a degree, Reynolds images of monomials are scanned in
    graded-lex order and kept when independent of products of the
    generators already chosen; this makes the output deterministic.
    When ``verify`` is set, spanning is re-checked up to twice the group
    order and minimality by deletion of each generator.
    """
    if not group.exact:
        raise ValueError("basic map computation requires an exact group")
    n = group.dim
    m = group.order
    gens: list[HoloPolynomial] = []
    degrees: list[int] = []
    for d in range(1, m + 1):
        span = _Span()
        lower = [g for g, dg in zip(gens, degrees) if dg < d]
        lower_d = [dg for dg in degrees if dg < d]
        for prod in _products_of_degree(lower, lower_d, d):
            span.add(_vec(prod))
        for alpha in monomials_of_degree(n, d):
            inv = reynolds(HoloPolynomial.monomial(n, alpha), group)
            if inv.is_zero():
                continue
            if span.add(_vec(inv)):
                gens.append(_monic(inv))
                degrees.append(d)
    result = BasicMap(
        generators=tuple(gens), degrees=tuple(degrees), dim=n, group_order=m
    )
    if verify:
        _verify_spanning(result, group)
        _verify_minimality(result)
    return result


def _invariant_span(group: FiniteUnitaryGroup, degree: int) -> _Span:
    span = _Span()
    n = group.dim
    for alpha in monomials_of_degree(n, degree):
        inv = reynolds(HoloPolynomial.monomial(n, alpha), group)
        if not inv.is_zero():
            span.add(_vec(inv))
    return span


def _verify_spanning(basic: BasicMap, group: FiniteUnitaryGroup) -> None:
    gens, degs = list(basic.generators), list(basic.degrees)
    for d in range(1, 2 * group.order + 1):
        algebra = _Span()
        for prod in _products_of_degree(gens, degs, d):
            algebra.add(_vec(prod))
        for alpha in monomials_of_degree(group.dim, d):
            inv = reynolds(HoloPolynomial.monomial(group.dim, alpha), group)
            if not inv.is_zero() and not algebra.contains(_vec(inv)):
                raise RuntimeError(
                    f"generator set fails to span invariants at degree {d}"
                )


def _verify_minimality(basic: BasicMap) -> None:
    gens, degs = list(basic.generators), list(basic.degrees)
    for i, (g, d) in enumerate(zip(gens, degs)):
        others = gens[:i] + gens[i + 1:]
        odegs = degs[:i] + degs[i + 1:]
        span = _Span()
        for prod in _products_of_degree(others, odegs, d):
            span.add(_vec(prod))
        if span.contains(_vec(g)):
            raise RuntimeError(f"generator {i} of degree {d} is redundant")


def invariant_dimension(group: FiniteUnitaryGroup, degree: int) -> int:
    """Rank of the degree-d invariant subspace, by Reynolds images."""
    return _invariant_span(group, degree).rank


def trace_average_dimension(group: FiniteUnitaryGroup, degree: int) -> int:
    """Independent count of degree-d invariants by trace averaging.

    For each element the trace on degree-d polynomials is the complete
    homogeneous sum of its eigenvalue monomials; averaging over the group
    gives the invariant dimension.  Diagonal exact elements are summed in
    the cyclotomic field, general elements through floating eigenvalues.
    """
    import numpy as np

    total_c = 0j
    exact_total = None
    all_exact_diag = True
    for g in group:
        diag = _diagonal_entries(g)
        if diag is None:
            all_exact_diag = False
            break
        s = None
        for alpha in monomials_of_degree(group.dim, degree):
            term = None
            for lam, e in zip(diag, alpha):
                for _ in range(e):
                    term = lam if term is None else term * lam
            if term is None:
                term = Fraction(1)
            s = term if s is None else s + term
        exact_total = s if exact_total is None else exact_total + s
    if all_exact_diag and exact_total is not None:
        avg = exact_total * Fraction(1, group.order)
        if isinstance(avg, Cyclotomic):
            value = avg.as_rational()
        else:
            value = Fraction(avg)
        if value.denominator != 1:
            raise RuntimeError("trace average is not an integer")
        return int(value)
    for g in group:
        lams = np.linalg.eigvals(g.to_numpy())
        for alpha in monomials_of_degree(group.dim, degree):
            term = 1.0 + 0j
            for lam, e in zip(lams, alpha):
                term *= lam**e
            total_c += term
    avg = total_c / group.order
    if abs(avg.imag) > 1e-8 or abs(avg.real - round(avg.real)) > 1e-8:
        raise RuntimeError(f"trace average {avg} is not close to an integer")
    return int(round(avg.real))


def _diagonal_entries(g) -> list | None:
    if not g.exact:
        return None
    for i in range(g.n):
        for j in range(g.n):
            if i != j:
                x = g.entries[i][j]
                zero = x.is_zero() if isinstance(x, Cyclotomic) else x == 0
                if not zero:
                    return None
    return [g.entries[i][i] for i in range(g.n)]


# ---------------------------------------------------------------------------
# syzygies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Syzygy:
    """A polynomial relation q with q(p_1(z), ..., p_N(z)) identically zero."""

    relation: HoloPolynomial  # polynomial in the N image variables

    def substitute(self, generators) -> HoloPolynomial:
        gens = list(generators)
        dim = gens[0].dim
        total = HoloPolynomial(dim)
        for beta, c in self.relation.terms.items():
            prod = HoloPolynomial.constant(dim, c)
            for g, e in zip(gens, beta):
                for _ in range(e):
                    prod = prod * g
            total = total + prod
        return total


def find_syzygies(basic, degree_bound: int = 2) -> list[Syzygy]:
    """Basis of polynomial relations among the generators up to a degree.

    The coefficient matrix of all monomials in the generators (expanded
    in the source variables) is assembled exactly and its nullspace gives
    the relations; every relation is re-verified by exact substitution.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be at least 1")
    gens = list(basic.generators) if isinstance(basic, BasicMap) else list(basic)
    if not gens:
        return []
    nvars = len(gens)
    betas = list(monomials_up_to_degree(nvars, degree_bound))
    expansions = []
    for beta in betas:
        prod = HoloPolynomial.constant(gens[0].dim, Fraction(1))
        for g, e in zip(gens, beta):
            for _ in range(e):
                prod = prod * g
        expansions.append(prod)
    basis_monomials = sorted(
        {a for p in expansions for a in p.terms}, key=lambda a: (a.degree, a)
    )
    rows = [
        [p.terms.get(a, Fraction(0)) for p in expansions] for a in basis_monomials
    ]
    nullvecs = exact_nullspace(rows)
    out = []
    for vec in nullvecs:
        rel = HoloPolynomial(nvars, {b: c for b, c in zip(betas, vec)})
        if rel.is_zero():
            continue
        rel = _canonical_relation(rel)
        syz = Syzygy(relation=rel)
        if not syz.substitute(gens).is_zero():
            raise RuntimeError("nullspace produced a relation failing substitution")
        out.append(syz)
    return out


def _canonical_relation(rel: HoloPolynomial) -> HoloPolynomial:
    rel = _rationalize(_monic(rel))
    coeffs = list(rel.terms.values())
    if all(isinstance(c, (int, Fraction)) for c in coeffs):
        fracs = [Fraction(c) for c in coeffs]
        denom_lcm = 1
        for f in fracs:
            denom_lcm = denom_lcm * f.denominator // _gcd(denom_lcm, f.denominator)
        scaled = [f * denom_lcm for f in fracs]
        num_gcd = 0
        for f in scaled:
            num_gcd = _gcd(num_gcd, abs(f.numerator))
        factor = Fraction(denom_lcm, num_gcd if num_gcd else 1)
        rel = rel.scale(factor)
    return rel


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
