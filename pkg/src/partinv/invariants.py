"""Functionally independent invariants of a subalgebra.

An invariant is a function annihilated by every field in the span.  The
polynomial search puts an unknown-coefficient ansatz over all monomials of
total degree 1..max_degree and solves the resulting exact linear system; the
rational search fixes a candidate denominator Q drawn from the field
components and solves the linearized condition X(P)*Q - P*X(Q) = 0 for the
numerator.  Candidates are filtered to a functionally independent set by
greedy Jacobian rank, invariants free of dependent variables first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .classify import characteristics
from .exactlinalg import (
    DEFAULT_SEED,
    ExprMatrix,
    generic_rank,
    nullspace_sparse,
)
from .expr import Expression, ExpressionError, _pint_primitive, _pis_const, _plcm
from .liealg import Subalgebra

__all__ = [
    "Invariant",
    "InvariantBasis",
    "functional_rank",
    "invariant_basis",
    "find_polynomial_invariants",
    "find_rational_invariants",
    "verify_invariant",
]


def functional_rank(exprs, seed: int = DEFAULT_SEED) -> int:
    """Generic rank of the Jacobian of the given expressions.

    Counts how many of the expressions are functionally independent, so two
    invariant sets can be compared by the rank of their union.  All
    expressions must share one variable context.
    """
    items = [e.expr if isinstance(e, Invariant) else e for e in exprs]
    if not items:
        return 0
    allv = items[0].vars
    for e in items:
        if e.vars != allv:
            raise ExpressionError("expressions use different variable contexts")
    rows = [[e.diff(v) for v in allv] for e in items]
    return generic_rank(ExprMatrix(rows, ncols=len(allv)), seed=seed)


@dataclass(frozen=True)
class Invariant:
    expr: Expression
    x_only: bool

    def as_dict(self) -> dict:
        return {"expr": str(self.expr), "x_only": self.x_only}


@dataclass(frozen=True)
class InvariantBasis:
    invariants: tuple
    t: int
    max_degree: int

    @property
    def complete(self) -> bool:
        return len(self.invariants) == self.t

    def as_dict(self) -> dict:
        return {
            "invariants": [i.as_dict() for i in self.invariants],
            "expected": self.t,
            "complete": self.complete,
            "max_degree": self.max_degree,
        }


def verify_invariant(sub: Subalgebra, e: Expression) -> bool:
    """True iff every field of the subalgebra annihilates e."""
    return all(X.apply(e).is_zero for X in sub.fields)


def _monomial_exprs(vars: tuple, max_degree: int) -> list:
    """Nonconstant monomials of total degree <= max_degree, fixed order."""
    nv = len(vars)
    out = []
    for deg in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nv), deg):
            expt = [0] * nv
            for i in combo:
                expt[i] += 1
            out.append(Expression.from_poly({tuple(expt): Fraction(1)}, vars))
    return out


def _invariance_rows(fields, monos, Q: Expression | None):
    """Sparse rows of the linear system sum_j c_j * action(X, mono_j) = 0.

    action is X(mono) for the polynomial search and X(mono)*Q - mono*X(Q)
    for the rational search with fixed denominator Q.  Per field, every
    action result is put over the common denominator so the rows are exact
    polynomial identities.
    """
    rows = []
    for X in fields:
        if Q is None:
            acted = [X.apply(mono) for mono in monos]
        else:
            XQ = X.apply(Q)
            acted = [X.apply(mono) * Q - mono * XQ for mono in monos]
        if any(not e.is_polynomial for e in acted):
            lcm = None
            for e in acted:
                if not _pis_const(e.den):
                    lcm = e.den if lcm is None else _plcm(lcm, e.den)
            lcm_expr = Expression.from_poly(lcm, acted[0].vars)
            acted = [e * lcm_expr for e in acted]
        by_mono: dict = {}
        for j, e in enumerate(acted):
            if not e.is_polynomial:
                raise AssertionError("denominator clearing failed")
            for em, c in e.num.items():
                by_mono.setdefault(em, {})[j] = c
        for em in sorted(by_mono):
            rows.append(by_mono[em])
    return rows


def _vec_to_poly(vec, monos, vars):
    poly: dict = {}
    for c, mono in zip(vec, monos):
        if c:
            (expt, _coeff), = mono.num.items()
            poly[expt] = poly.get(expt, Fraction(0)) + c
    poly = {m: c for m, c in poly.items() if c}
    return Expression.from_poly(_pint_primitive(poly), vars)


def _is_x_only(e: Expression, space) -> bool:
    return not (e.free_variables() & set(space.dependent))


def _greedy_independent(candidates, space, t, seed):
    """Keep candidates whose Jacobian rows grow the generic rank, up to t."""
    allv = space.all_vars
    picked = []
    rows = []
    for inv in candidates:
        if len(picked) == t:
            break
        row = [inv.diff(v) for v in allv]
        test = ExprMatrix(rows + [row], ncols=len(allv))
        if generic_rank(test, seed=seed) == len(rows) + 1:
            picked.append(inv)
            rows.append(row)
    return picked


def _sort_key(space):
    dep = set(space.dependent)

    def key(e: Expression):
        x_only = not (e.free_variables() & dep)
        return (0 if x_only else 1, e.total_degree(), str(e))

    return key


def find_polynomial_invariants(
    sub: Subalgebra, max_degree: int = 2, seed: int = DEFAULT_SEED
) -> list:
    """Functionally independent polynomial invariants up to a total degree."""
    space = sub.model.space
    monos = _monomial_exprs(space.all_vars, max_degree)
    rows = _invariance_rows(sub.fields, monos, None)
    basis = nullspace_sparse(rows, len(monos))
    cands = [_vec_to_poly(v, monos, space.all_vars) for v in basis]
    cands = [e for e in cands if not e.is_constant]
    cands.sort(key=_sort_key(space))
    t = characteristics(sub, seed).invariants
    return _greedy_independent(cands, space, t, seed)


def _denominator_pool(sub: Subalgebra) -> list:
    """Candidate denominators: nonconstant parts of the field components."""
    from .expr import _pgcd

    pool = {}
    raw = []
    for X in sub.fields:
        for e in X.comps.values():
            for p in (e.num, e.den):
                if not _pis_const(p):
                    raw.append(_pint_primitive(p))
    for p in raw:
        key = tuple(sorted(p.items()))
        pool[key] = p
    for a, b in itertools.combinations(list(pool.values()), 2):
        g = _pgcd(a, b)
        if not _pis_const(g):
            g = _pint_primitive(g)
            pool.setdefault(tuple(sorted(g.items())), g)
    vars = sub.model.space.all_vars
    out = [Expression.from_poly(p, vars) for p in pool.values()]
    out.sort(key=lambda e: (e.total_degree(), str(e)))
    return out


def find_rational_invariants(
    sub: Subalgebra,
    max_degree: int = 3,
    seed: int = DEFAULT_SEED,
    extra_denominators=(),
) -> list:
    """Independent invariants, polynomial first, then P/Q for pooled Q."""
    space = sub.model.space
    t = characteristics(sub, seed).invariants
    found = find_polynomial_invariants(sub, max_degree, seed)
    if len(found) == t:
        return found
    monos = _monomial_exprs(space.all_vars, max_degree)
    sort_key = _sort_key(space)
    extras = []
    for q in extra_denominators:
        if not isinstance(q, Expression):
            from .expr import parse_expr

            q = parse_expr(str(q), space.all_vars)
        extras.append(q)
    for Q in list(_denominator_pool(sub)) + extras:
        rows = _invariance_rows(sub.fields, monos, Q)
        basis = nullspace_sparse(rows, len(monos))
        cands = []
        for v in basis:
            P = _vec_to_poly(v, monos, space.all_vars)
            e = P / Q
            if not e.is_constant:
                cands.append(e)
        cands.sort(key=sort_key)
        merged = _greedy_independent(found + cands, space, t, seed)
        found = merged
        if len(found) == t:
            break
    found.sort(key=sort_key)
    return found


def invariant_basis(
    sub: Subalgebra,
    max_degree: int = 2,
    seed: int = DEFAULT_SEED,
    rational: bool = False,
) -> InvariantBasis:
    """Invariant set with completeness bookkeeping, x-only entries first."""
    space = sub.model.space
    t = characteristics(sub, seed).invariants
    if rational:
        exprs = find_rational_invariants(sub, max_degree, seed)
    else:
        exprs = find_polynomial_invariants(sub, max_degree, seed)
    invs = tuple(Invariant(e, _is_x_only(e, space)) for e in exprs)
    return InvariantBasis(invariants=invs, t=t, max_degree=max_degree)
