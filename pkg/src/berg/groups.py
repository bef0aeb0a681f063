"""Finite unitary matrix groups: closure, fixed points, reflections.

Matrices carry either exact cyclotomic entries (preferred, all test
groups are monomial with root-of-unity entries) or floating complex
entries.  Closure, determinants, eigenvalue-1 detection and rank are all
exact in exact mode.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, CyclotomicField
from .scalars import ExactComplex, to_complex

UNITARITY_TOL = 1e-12
DEDUP_DECIMALS = 12


class NonUnitaryError(ValueError):
    """A generator failed the unitarity check."""


class ClosureOverflowError(RuntimeError):
    """Group closure exceeded the requested order bound."""


def _is_exact_entry(x) -> bool:
    return isinstance(x, (int, Fraction, Cyclotomic))


def _entry_conj(x):
    if isinstance(x, Cyclotomic):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return complex(x).conjugate()


class UnitaryMatrix:
    """A square unitary matrix with exact or floating entries."""

    __slots__ = ("entries", "n", "exact")

    def __init__(self, entries: Sequence[Sequence], check: bool = True):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        exact = all(_is_exact_entry(x) for r in rows for x in r)
        if not exact:
            rows = tuple(tuple(complex(to_complex(x)) for x in r) for r in rows)
        self.entries = rows
        self.n = n
        self.exact = exact
        if check and not self.is_unitary():
            raise NonUnitaryError(f"matrix is not unitary within {UNITARITY_TOL}")

    # -- constructors -----------------------------------------------------
    @staticmethod
    def identity(n: int, exact: bool = True) -> "UnitaryMatrix":
        one: object = Fraction(1) if exact else 1.0 + 0j
        zero: object = Fraction(0) if exact else 0j
        return UnitaryMatrix(
            [[one if i == j else zero for j in range(n)] for i in range(n)], check=False
        )

    @staticmethod
    def diagonal(values: Sequence) -> "UnitaryMatrix":
        n = len(values)
        exact = all(_is_exact_entry(v) for v in values)
        zero: object = Fraction(0) if exact else 0j
        return UnitaryMatrix(
            [[values[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def scalar(n: int, value) -> "UnitaryMatrix":
        return UnitaryMatrix.diagonal([value] * n)

    # -- structure ---------------------------------------------------------
    def is_unitary(self) -> bool:
        if self.exact:
            for i in range(self.n):
                for j in range(self.n):
                    s = None
                    for k in range(self.n):
                        t = _entry_conj(self.entries[k][i]) * self.entries[k][j]
                        s = t if s is None else s + t
                    want = 1 if i == j else 0
                    if not s == want:
                        return False
            return True
        m = self.to_numpy()
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(self.n))) <= UNITARITY_TOL)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = None
                for k in range(n):
                    t = self.entries[i][k] * other.entries[k][j]
                    s = t if s is None else s + t
                row.append(s)
            out.append(row)
        return UnitaryMatrix(out, check=False)

    def conj_transpose(self) -> "UnitaryMatrix":
        return UnitaryMatrix(
            [[_entry_conj(self.entries[j][i]) for j in range(self.n)] for i in range(self.n)],
            check=False,
        )

    def inverse(self) -> "UnitaryMatrix":
        return self.conj_transpose()

    def apply(self, vector: Sequence) -> list:
        """Matrix-vector product; exact when both sides are exact."""
        out = []
        for i in range(self.n):
            s = None
            for j in range(self.n):
                t = self.entries[i][j] * vector[j]
                s = t if s is None else s + t
            out.append(s if s is not None else 0)
        return out

    def det(self):
        """Determinant by Laplace expansion (n is small here)."""
        return _det(self.entries)

    def is_identity(self) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                want = 1 if i == j else 0
                x = self.entries[i][j]
                if self.exact:
                    if not x == want:
                        return False
                elif abs(x - want) > 1e-10:
                    return False
        return True

    def dedup_key(self):
        if self.exact:
            return tuple(
                (x.field.n, x.coeffs) if isinstance(x, Cyclotomic) else ("q", Fraction(x))
                for row in self.entries
                for x in row
            )
        return tuple(
            (round(x.real, DEDUP_DECIMALS) + 0.0, round(x.imag, DEDUP_DECIMALS) + 0.0)
            for row in self.entries
            for x in row
        )

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[to_complex(x) for x in row] for row in self.entries], dtype=complex
        )

    def to_exact_complex(self) -> list[list[ExactComplex]]:
        """Entries as Gaussian rationals; requires a field inside Q(i)."""
        out = []
        for row in self.entries:
            new = []
            for x in row:
                if isinstance(x, Cyclotomic):
                    new.append(x.to_exact_complex())
                else:
                    new.append(ExactComplex(Fraction(x)))
            out.append(new)
        return out

    def __eq__(self, other):
        if not isinstance(other, UnitaryMatrix):
            return NotImplemented
        return self.dedup_key() == other.dedup_key()

    def __hash__(self):
        return hash(self.dedup_key())

    def __repr__(self):
        return f"UnitaryMatrix({self.entries!r})"


def _det(entries) -> object:
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class FiniteUnitaryGroup:
    """A finite unitary group given by its full element list (identity first)."""

    elements: tuple[UnitaryMatrix, ...]
    dim: int

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def exact(self) -> bool:
        return all(g.exact for g in self.elements)

    def identity(self) -> UnitaryMatrix:
        return self.elements[0]

    def __iter__(self):
        return iter(self.elements)

    def verify_axioms(self) -> bool:
        """Closure under products and inverses, identity present."""
        keys = {g.dedup_key() for g in self.elements}
        if not self.elements[0].is_identity():
            return False
        for a in self.elements:
            if a.inverse().dedup_key() not in keys:
                return False
            for b in self.elements:
                if (a @ b).dedup_key() not in keys:
                    return False
        return True

    def canonical_hash(self) -> str:
        """Stable hash of the element list, usable as a disk cache key."""
        rows = sorted(
            json.dumps(
                [[_fmt_entry(x) for x in row] for row in g.entries], sort_keys=True
            )
            for g in self.elements
        )
        digest = hashlib.sha256("\n".join(rows).encode()).hexdigest()
        return digest[:16]


def _fmt_entry(x) -> list[float]:
    c = to_complex(x)
    return [round(c.real, DEDUP_DECIMALS) + 0.0, round(c.imag, DEDUP_DECIMALS) + 0.0]


def _common_field(gens: list[UnitaryMatrix]) -> CyclotomicField:
    import math as _math

    n = 1
    for g in gens:
        for row in g.entries:
            for x in row:
                if isinstance(x, Cyclotomic):
                    n = _math.lcm(n, x.field.n)
    return CyclotomicField(n)


def _promote_matrix(g: UnitaryMatrix, field: CyclotomicField) -> UnitaryMatrix:
    rows = []
    for row in g.entries:
        new = []
        for x in row:
            if isinstance(x, Cyclotomic):
                new.append(field.zero() + x)  # embeds into the common field
            else:
                new.append(field.from_rational(Fraction(x)))
        rows.append(new)
    return UnitaryMatrix(rows, check=False)


def generate_group(
    generators: Iterable[UnitaryMatrix], max_order: int = 4096
) -> FiniteUnitaryGroup:
    """Closure of the generators under multiplication.

    For unitary generators the finite multiplicative closure is a group
    (each element has finite order, so inverses appear as powers).  Raises
    ClosureOverflowError if the closure grows past ``max_order``.

    Exact generators are first promoted into one common cyclotomic field
    so that element deduplication keys are representation-independent.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("at least one generator required")
    n = gens[0].n
    for g in gens:
        if g.n != n:
            raise ValueError("generators must share a dimension")
        if not g.is_unitary():
            raise NonUnitaryError("non-unitary generator")
    exact = all(g.exact for g in gens)
    if exact:
        field = _common_field(gens)
        gens = [_promote_matrix(g, field) for g in gens]
        identity = _promote_matrix(UnitaryMatrix.identity(n), field)
    else:
        identity = UnitaryMatrix.identity(n, exact=False)
    seen = {identity.dedup_key(): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a @ g
                key = b.dedup_key()
                if key not in seen:
                    if len(seen) >= max_order:
                        raise ClosureOverflowError(
                            f"closure exceeded max_order={max_order}; group may be infinite"
                        )
                    seen[key] = b
                    nxt.append(b)
        frontier = nxt
    elements = [identity] + [m for k, m in seen.items() if k != identity.dedup_key()]
    return FiniteUnitaryGroup(elements=tuple(elements), dim=n)


# ---------------------------------------------------------------------------
# exact linear algebra over a field (entries: Fraction or Cyclotomic)
# ---------------------------------------------------------------------------

def exact_nullspace(rows: list[list]) -> list[list]:
    """Basis of the right nullspace of a matrix over an exact field."""
    if not rows:
        return []
    ncols = len(rows[0])
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(mat)):
            if not _zero(mat[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = _inv(mat[r][c])
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not _zero(mat[i][c]):
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [_like_zero(rows) for _ in range(ncols)]
        vec[fc] = _like_one(rows)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def exact_rank(rows: list[list]) -> int:
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - len(exact_nullspace(rows))


def _zero(x) -> bool:
    if isinstance(x, Cyclotomic):
        return x.is_zero()
    return x == 0


def _inv(x):
    if isinstance(x, Cyclotomic):
        return x.inverse()
    return Fraction(1) / Fraction(x)


def _like_zero(rows):
    for r in rows:
        for x in r:
            if isinstance(x, Cyclotomic):
                return x.field.zero()
    return Fraction(0)


def _like_one(rows):
    for r in rows:
        for x in r:
            if isinstance(x, Cyclotomic):
                return x.field.one()
    return Fraction(1)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointReport:
    free: bool
    witness: tuple[UnitaryMatrix, tuple[complex, ...]] | None

    def __bool__(self):
        return self.free


def _minus_identity(g: UnitaryMatrix) -> list[list]:
    out = []
    for i in range(g.n):
        row = []
        for j in range(g.n):
            x = g.entries[i][j]
            if i == j:
                x = x - 1
            row.append(x)
        out.append(row)
    return out


def _eigenvector_for_one(g: UnitaryMatrix) -> tuple[complex, ...] | None:
    """A unit vector fixed by g, or None if eigenvalue 1 is absent."""
    if g.exact:
        rows = [[_to_field(x, g) for x in row] for row in _minus_identity(g)]
        basis = exact_nullspace(rows)
        if not basis:
            return None
        vec = [to_complex(x) for x in basis[0]]
    else:
        vals, vecs = np.linalg.eig(g.to_numpy())
        idx = np.argmin(np.abs(vals - 1.0))
        if abs(vals[idx] - 1.0) > 1e-9:
            return None
        vec = list(vecs[:, idx])
    norm = sum(abs(x) ** 2 for x in vec) ** 0.5
    return tuple(complex(x) / norm for x in vec)


def _to_field(x, g: UnitaryMatrix):
    if isinstance(x, Cyclotomic):
        return x
    field = None
    for row in g.entries:
        for e in row:
            if isinstance(e, Cyclotomic):
                field = e.field
                break
    if field is None:
        return Fraction(x)
    return field.from_rational(Fraction(x))


def is_fixed_point_free(group: FiniteUnitaryGroup) -> FixedPointReport:
    """True iff no non-identity element has eigenvalue 1.

    Geometrically: the group acts without fixed points on the unit
    sphere, so the quotient has smooth boundary.  On failure the witness
    is the offending element together with a fixed unit vector.
    """
    for g in group:
        if g.is_identity():
            continue
        vec = _eigenvector_for_one(g)
        if vec is not None:
            return FixedPointReport(free=False, witness=(g, vec))
    return FixedPointReport(free=True, witness=None)


def matrix_order(g: UnitaryMatrix, bound: int = 4096) -> int:
    """Multiplicative order of g, checked up to a bound."""
    acc = g
    for k in range(1, bound + 1):
        if acc.is_identity():
            return k
        acc = acc @ g
    raise ClosureOverflowError(f"element order exceeds bound {bound}")


def is_reflection(g: UnitaryMatrix, order_bound: int = 4096) -> bool:
    """True iff g is a non-identity finite-order element fixing a complex
    hyperplane (eigenvalue 1 with multiplicity exactly n-1)."""
    matrix_order(g, bound=order_bound)
    if g.is_identity():
        return False
    if g.exact:
        rows = [[_to_field(x, g) for x in row] for row in _minus_identity(g)]
        fixed_dim = len(exact_nullspace(rows))
    else:
        vals = np.linalg.eigvals(g.to_numpy())
        fixed_dim = int(np.sum(np.abs(vals - 1.0) < 1e-9))
    return fixed_dim == g.n - 1


# ---------------------------------------------------------------------------
# JSON group files
# ---------------------------------------------------------------------------

def matrix_from_json(data) -> UnitaryMatrix:
    """Decode one matrix.

    Entries are either ``[re, im]`` numeric pairs or exact objects
    ``{"zeta": N, "terms": [[power, "p/q"], ...]}`` meaning a rational
    combination of powers of the N-th root of unity.  If any entry is
    exact, the numeric pairs are read as exact decimals too, so the whole
    matrix stays in exact arithmetic.
    """
    any_exact = any(isinstance(e, dict) for row in data for e in row)
    rows = []
    for row in data:
        new = []
        for entry in row:
            if isinstance(entry, dict):
                field = CyclotomicField(int(entry["zeta"]))
                val = field.zero()
                for power, coeff in entry["terms"]:
                    val = val + field.root(int(power)) * Fraction(str(coeff))
                new.append(val)
            elif any_exact:
                re, im = Fraction(str(entry[0])), Fraction(str(entry[1]))
                if im == 0:
                    new.append(re)
                else:
                    gauss = CyclotomicField(4)
                    new.append(gauss.from_rational(re) + gauss.root(1) * im)
            else:
                re, im = entry
                new.append(complex(float(re), float(im)))
        rows.append(new)
    return UnitaryMatrix(rows)


def matrices_from_json(data) -> list[UnitaryMatrix]:
    return [matrix_from_json(m) for m in data]
