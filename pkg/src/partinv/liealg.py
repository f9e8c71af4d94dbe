"""Subalgebras of a finite-dimensional symmetry algebra, in coefficient space.

A subalgebra is stored as the reduced row echelon form of its coefficient
matrix over the ambient model basis.  That canonical form makes equality,
containment, deduplication and ordering deterministic, independent of how the
span was originally presented.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .exactlinalg import membership_in_span, nullspace_fraction, rref_fraction
from .vfield import SymmetryModel, VectorField

__all__ = [
    "LieAlgebraError",
    "Subalgebra",
    "reduce_vector",
    "is_subalgebra",
    "subalgebra_closure",
    "is_ideal",
    "ideal_closure",
    "normalizer",
    "enumerate_candidate_ideals",
    "parse_span",
]


class LieAlgebraError(ValueError):
    pass


def reduce_vector(rows: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]):
    """Residual of vec after elimination against RREF rows (pivot-ordered)."""
    out = list(vec)
    for row in rows:
        piv = next(i for i, x in enumerate(row) if x)
        if out[piv]:
            f = out[piv]  # row is normalized, leading 1
            out = [x - f * y for x, y in zip(out, row)]
    return out


class Subalgebra:
    """A subalgebra of a SymmetryModel, canonicalized to RREF coefficients."""

    __slots__ = ("model", "coeffs", "name", "_hash")

    def __init__(self, model: SymmetryModel, vectors, name: str = "", verify: bool = True):
        self.model = model
        rows = [[Fraction(x) for x in v] for v in vectors]
        for r in rows:
            if len(r) != model.dim:
                raise LieAlgebraError(
                    f"coefficient vector has length {len(r)}, model dimension is {model.dim}"
                )
        red, _ = rref_fraction(rows) if rows else ([], [])
        self.coeffs = tuple(tuple(r) for r in red)
        self.name = name
        self._hash = None
        if verify:
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    br = model.bracket_coeffs(self.coeffs[i], self.coeffs[j])
                    if any(reduce_vector(self.coeffs, br)):
                        raise LieAlgebraError(
                            f"not closed under the bracket: [{self._vec_str(self.coeffs[i])}, "
                            f"{self._vec_str(self.coeffs[j])}] leaves the span"
                        )

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def nnz(self) -> int:
        return sum(1 for row in self.coeffs for x in row if x)

    @property
    def fields(self) -> tuple:
        return tuple(self.model.field_from_coeffs(row) for row in self.coeffs)

    def contains_vector(self, vec) -> bool:
        return not any(reduce_vector(self.coeffs, [Fraction(x) for x in vec]))

    def contains(self, other) -> bool:
        """Membership of a Subalgebra, a VectorField, or a coefficient vector."""
        if isinstance(other, Subalgebra):
            if other.model is not self.model:
                raise LieAlgebraError("subalgebras live on different models")
            return all(self.contains_vector(row) for row in other.coeffs)
        if isinstance(other, VectorField):
            vec = membership_in_span(other, self.model.basis)
            return vec is not None and self.contains_vector(vec)
        return self.contains_vector(other)

    def witness_key(self):
        # dimension first, then sparsity, then flattened RREF compared
        # descending (negation turns that into an ordinary ascending sort)
        return (self.dim, self.nnz, tuple(-x for row in self.coeffs for x in row))

    def _vec_str(self, vec) -> str:
        parts = []
        for c, gen in zip(vec, self.model.basis):
            if not c:
                continue
            if c == 1:
                term = gen.name
            elif c == -1:
                term = f"-{gen.name}"
            else:
                term = f"{c}*{gen.name}"
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts) if parts else "0"

    def describe(self) -> str:
        return "span{" + ", ".join(self._vec_str(row) for row in self.coeffs) + "}"

    def __eq__(self, other):
        return (
            isinstance(other, Subalgebra)
            and other.model is self.model
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.model), self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Subalgebra({self.describe()})"


def is_subalgebra(model: SymmetryModel, items) -> bool:
    """Whether the span of the given vectors or fields closes under brackets."""
    vecs = [_coeffs_of(model, it) for it in items]
    try:
        Subalgebra(model, vecs, verify=True)
    except LieAlgebraError:
        return False
    return True


def _coeffs_of(model: SymmetryModel, item):
    if isinstance(item, VectorField):
        sol = membership_in_span(item, model.basis)
        if sol is None:
            raise LieAlgebraError(f"field {item.name or item} is not in the model span")
        return list(sol)
    return [Fraction(x) for x in item]


def subalgebra_closure(model: SymmetryModel, items, name: str = "") -> Subalgebra:
    """Smallest subalgebra containing the given vectors or fields."""
    vecs = [_coeffs_of(model, it) for it in items]
    rows = [list(r) for r in rref_fraction(vecs)[0]] if vecs else []
    while True:
        new = []
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                br = model.bracket_coeffs(rows[i], rows[j])
                res = reduce_vector(rows, br)
                if any(res):
                    new.append(res)
        if not new:
            break
        rows = [list(r) for r in rref_fraction(rows + new)[0]]
    return Subalgebra(model, rows, name=name, verify=False)


def is_ideal(H: Subalgebra, N: Subalgebra) -> bool:
    """True iff H <= N and [N, H] is contained in H."""
    if H.model is not N.model:
        raise LieAlgebraError("subalgebras live on different models")
    if not N.contains(H):
        return False
    for n_row in N.coeffs:
        for h_row in H.coeffs:
            br = H.model.bracket_coeffs(n_row, h_row)
            if any(reduce_vector(H.coeffs, br)):
                return False
    return True


def ideal_closure(N: Subalgebra, seeds) -> Subalgebra:
    """Smallest ideal of N containing the seed vectors.

    Closure under bracketing with the N basis also forces closure of the
    result under its own bracket, so the result is a subalgebra and an ideal.
    """
    rows = []
    for s in seeds:
        vec = _coeffs_of(N.model, s)
        if not N.contains_vector(vec):
            raise LieAlgebraError("ideal seed lies outside the enclosing subalgebra")
        rows.append(vec)
    rows = [list(r) for r in rref_fraction(rows)[0]] if rows else []
    while True:
        new = []
        for n_row in N.coeffs:
            for h_row in rows:
                br = N.model.bracket_coeffs(n_row, h_row)
                res = reduce_vector(rows, br)
                if any(res):
                    new.append(res)
        if not new:
            break
        rows = [list(r) for r in rref_fraction(rows + new)[0]]
    return Subalgebra(N.model, rows, verify=False)


def normalizer(model: SymmetryModel, H: Subalgebra) -> Subalgebra:
    """Largest subalgebra of the model in which H is an ideal.

    x belongs to the normalizer iff [x, h] lies in H for every h in H; each
    basis bracket residual against H contributes one linear condition per
    coefficient slot.
    """
    if H.model is not model:
        raise LieAlgebraError("subalgebra belongs to a different model")
    d = model.dim
    conditions = []
    for h_row in H.coeffs:
        residuals = [
            reduce_vector(H.coeffs, model.bracket_coeffs(model.coeff_unit(i), h_row))
            for i in range(d)
        ]
        for slot in range(d):
            row = [residuals[i][slot] for i in range(d)]
            if any(row):
                conditions.append(row)
    basis = nullspace_fraction(conditions, d)
    return Subalgebra(model, basis, verify=False)


def enumerate_candidate_ideals(N: Subalgebra, coeff_bound: int = 2) -> list:
    """Proper nonzero ideals of N reachable from small generating sets.

    Candidates are ideal closures of (a) every subset of the RREF basis and
    (b) every single element with integer coefficients bounded by coeff_bound
    over that basis.  Deduplicated by canonical form and ordered by
    witness_key, so the result is deterministic.
    """
    model = N.model
    d = N.dim
    seen = {}
    def consider(seed_vecs):
        sub = ideal_closure(N, seed_vecs)
        if 0 < sub.dim < d:
            seen.setdefault(sub.coeffs, sub)

    for mask in range(1, 1 << d):
        consider([N.coeffs[i] for i in range(d) if mask >> i & 1])
    span_rows = N.coeffs
    directions = set()
    for combo in _integer_tuples(d, coeff_bound):
        vec = [Fraction(0)] * model.dim
        for c, row in zip(combo, span_rows):
            if c:
                vec = [x + c * y for x, y in zip(vec, row)]
        if not any(vec):
            continue
        lead = next(x for x in vec if x)
        norm = tuple(x / lead for x in vec)
        if norm in directions:
            continue
        directions.add(norm)
        consider([vec])
    return sorted(seen.values(), key=Subalgebra.witness_key)


def _integer_tuples(length: int, bound: int):
    if length == 0:
        yield ()
        return
    for rest in _integer_tuples(length - 1, bound):
        for c in range(-bound, bound + 1):
            yield (c,) + rest


_SPAN_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*]))")


def parse_span(model: SymmetryModel, text: str, name: str = "") -> Subalgebra:
    """Parse a comma-separated list of generator combinations into a span.

    Each element looks like "X1", "X10+X12" or "2*X1 - 1/3*X4"; names must be
    generators of the model and coefficients must be rational literals.
    """
    vectors = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise LieAlgebraError("empty element in span list")
        vectors.append(_parse_combo(model, part))
    return Subalgebra(model, vectors, name=name)


def _parse_combo(model: SymmetryModel, text: str):
    vec = [Fraction(0)] * model.dim
    pos = 0
    sign = Fraction(1)
    expect_term = True
    pending: Fraction | None = None
    n = len(text)
    while pos < n:
        m = _SPAN_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LieAlgebraError(f"cannot parse {text!r} at position {pos}")
        pos = m.end()
        if m.lastgroup == "op":
            op = m.group("op")
            if op == "*":
                if pending is None:
                    raise LieAlgebraError(f"misplaced '*' in {text!r}")
                continue
            if pending is not None:
                raise LieAlgebraError(f"dangling coefficient in {text!r}")
            if expect_term and op == "-":
                sign = -sign
            elif expect_term and op == "+":
                pass
            else:
                sign = Fraction(1) if op == "+" else Fraction(-1)
                expect_term = True
        elif m.lastgroup == "num":
            if pending is not None:
                raise LieAlgebraError(f"two coefficients in a row in {text!r}")
            pending = Fraction(m.group("num").replace(" ", ""))
        else:
            gen_name = m.group("name")
            idx = model.index_of(gen_name)
            coef = sign * (pending if pending is not None else Fraction(1))
            vec[idx] += coef
            pending = None
            sign = Fraction(1)
            expect_term = False
    if pending is not None:
        raise LieAlgebraError(f"trailing coefficient without generator in {text!r}")
    if expect_term:
        raise LieAlgebraError(f"dangling operator at end of {text!r}")
    return vec
