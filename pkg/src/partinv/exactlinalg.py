"""Exact linear algebra over rational functions and over the rationals.

Generic rank of an Expression matrix means rank over the field of rational
functions.  It is computed by fraction-free Bareiss elimination on the
numerator matrix after clearing each row's denominator lcm, and cross-checked
by evaluating the matrix at random rational sample points (integers in
[2, 97], resampled when a denominator vanishes): the rank at a sample can
never exceed the generic rank, and generically attains it.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .expr import (
    DenominatorVanishesError,
    Expression,
    _pdivexact,
    _pis_const,
    _plcm,
    _pmul,
    _pconst,
)

__all__ = [
    "ExprMatrix",
    "generic_rank",
    "membership_in_span",
    "linearly_independent",
    "DEFAULT_SEED",
    "rref_fraction",
    "rank_fraction",
    "nullspace_fraction",
    "solve_fraction",
    "nullspace_sparse",
]

DEFAULT_SEED = 42
_SAMPLE_LO, _SAMPLE_HI = 2, 97


class ExprMatrix:
    """Immutable rectangular matrix of Expressions sharing one context."""

    __slots__ = ("rows", "nrows", "ncols", "vars")

    def __init__(self, rows: Sequence[Sequence[Expression]], ncols: int | None = None):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        if self.nrows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ValueError("ragged matrix")
            self.ncols = widths.pop()
        else:
            self.ncols = ncols or 0
        self.vars = None
        for r in self.rows:
            for e in r:
                if self.vars is None:
                    self.vars = e.vars
                elif e.vars != self.vars:
                    raise ValueError("mixed variable contexts in matrix")

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int) -> Expression:
        return self.rows[i][j]

    def __repr__(self):
        return f"ExprMatrix({self.nrows}x{self.ncols})"


def _poly_rows(M: ExprMatrix) -> list:
    """Clear each row's denominator lcm; returns rows of polynomial dicts."""
    nv = len(M.vars) if M.vars else 0
    out = []
    for row in M.rows:
        lcm = _pconst(Fraction(1), nv)
        for e in row:
            if not _pis_const(e.den):
                lcm = _plcm(lcm, e.den)
        prow = []
        for e in row:
            num = e.num
            if not _pis_const(lcm):
                num = _pmul(num, _pdivexact(lcm, e.den))
            elif not _pis_const(e.den):  # pragma: no cover - lcm absorbs it
                raise AssertionError
            prow.append(num)
        out.append(prow)
    return out


def _bareiss_rank(rows: list, ncols: int) -> int:
    """Fraction-free elimination on polynomial rows; every division is exact."""
    rows = [list(r) for r in rows]
    nrows = len(rows)
    rank = 0
    prev = None  # previous pivot polynomial
    for col in range(ncols):
        piv_row = None
        for r in range(rank, nrows):
            if rows[r][col]:
                piv_row = r
                break
        if piv_row is None:
            continue
        rows[rank], rows[piv_row] = rows[piv_row], rows[rank]
        piv = rows[rank][col]
        for i in range(rank + 1, nrows):
            cur = rows[i]
            head = cur[col]
            for j in range(col + 1, ncols):
                val = _psub_local(_pmul(piv, cur[j]), _pmul(head, rows[rank][j]))
                if prev is not None:
                    val = _pdivexact(val, prev)
                cur[j] = val
            cur[col] = {}
        prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def _psub_local(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) - c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def sample_rank(M: ExprMatrix, rng: random.Random, max_tries: int = 50) -> int | None:
    """Rank of M at a random rational point avoiding denominator zeros."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    vars = M.vars or ()
    for _ in range(max_tries):
        point = {v: Fraction(rng.randint(_SAMPLE_LO, _SAMPLE_HI)) for v in vars}
        try:
            numeric = [[e.eval(point) for e in row] for row in M.rows]
        except DenominatorVanishesError:
            continue
        return rank_fraction(numeric)
    return None


def generic_rank(M: ExprMatrix, seed: int = DEFAULT_SEED, samples: int = 3) -> int:
    """Rank over the rational-function field, sample-point cross-checked."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    rank = _bareiss_rank(_poly_rows(M), M.ncols)
    rng = random.Random(seed)
    for _ in range(samples):
        sr = sample_rank(M, rng)
        if sr is not None and sr > rank:
            raise RuntimeError(
                f"rank cross-check failed: sample rank {sr} exceeds generic rank {rank}"
            )
    return rank


# ---------------------------------------------------------------------------
# dense rational helpers
# ---------------------------------------------------------------------------


def rref_fraction(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [row for row in mat if any(row)], pivots


def rank_fraction(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref_fraction(rows)[1])


def nullspace_fraction(rows: Sequence[Sequence[Fraction]], ncols: int) -> list:
    """Basis of the right nullspace, one vector per free column, ascending."""
    if not rows:
        return [[Fraction(1) if i == j else Fraction(0) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref_fraction(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(red, pivots):
            vec[p] = -row[f]
        basis.append(vec)
    return basis


def solve_fraction(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
    """One exact solution of A x = b, or None if inconsistent."""
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    aug = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(A, b)]
    red, pivots = rref_fraction(aug) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return x


def nullspace_sparse(rows: Sequence[dict], ncols: int) -> list:
    """Right nullspace basis for sparse rows (dict col -> Fraction).

    Forward elimination keeps one normalized pivot row per column; back
    substitution then emits one dense basis vector per free column, in
    ascending column order.  Deterministic.
    """
    pivots: dict = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = 1 / row[c]
                pivots[c] = {cc: vv * inv for cc, vv in row.items()}
                break
            f = row[c]
            for cc, vv in prow.items():
                nv = row.get(cc, Fraction(0)) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    pivot_cols_desc = sorted(pivots, reverse=True)
    for f in free:
        x = {f: Fraction(1)}
        for p in pivot_cols_desc:
            if p > f:
                continue
            s = Fraction(0)
            for cc, vv in pivots[p].items():
                if cc != p and cc in x:
                    s += vv * x[cc]
            if s:
                x[p] = -s
        vec = [Fraction(0)] * ncols
        for c, v in x.items():
            vec[c] = v
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# span membership for vector fields
# ---------------------------------------------------------------------------


def _field_linear_system(fields: Sequence, target=None):
    """Rows of the exact linear system sum_j c_j B_j = target (componentwise).

    Returns (A, b) with one row per monomial per component.  Rational
    components are cleared by the per-component denominator lcm first.
    """
    space = fields[0].space
    nv = len(space.all_vars)
    A: list = []
    b: list = []
    for var in space.all_vars:
        col_exprs = [F.comps.get(var) for F in fields]
        tgt = target.comps.get(var) if target is not None else None
        if all(e is None for e in col_exprs) and tgt is None:
            continue
        lcm = _pconst(Fraction(1), nv)
        for e in col_exprs + [tgt]:
            if e is not None and not _pis_const(e.den):
                lcm = _plcm(lcm, e.den)
        cleared = []
        for e in col_exprs:
            if e is None:
                cleared.append({})
            elif _pis_const(lcm):
                cleared.append(e.num)
            else:
                cleared.append(_pmul(e.num, _pdivexact(lcm, e.den)))
        if tgt is None:
            tgt_poly = {}
        elif _pis_const(lcm):
            tgt_poly = tgt.num
        else:
            tgt_poly = _pmul(tgt.num, _pdivexact(lcm, tgt.den))
        monomials = set(tgt_poly)
        for p in cleared:
            monomials.update(p)
        for mono in sorted(monomials):
            A.append([p.get(mono, Fraction(0)) for p in cleared])
            b.append(tgt_poly.get(mono, Fraction(0)))
    return A, b


def membership_in_span(X, basis: Sequence) -> tuple | None:
    """Rational coefficients expressing X in span(basis), or None.

    X and the basis entries are VectorFields on a shared space; the basis is
    assumed linearly independent, so a solution is unique when it exists.
    """
    if not basis:
        return None if not X.is_zero else ()
    A, b = _field_linear_system(list(basis), X)
    sol = solve_fraction(A, b)
    return tuple(sol) if sol is not None else None


def linearly_independent(fields: Sequence) -> bool:
    """True iff no nontrivial rational combination of the fields vanishes."""
    if not fields:
        return True
    A, _ = _field_linear_system(list(fields))
    return len(nullspace_fraction(A, len(fields))) == 0
