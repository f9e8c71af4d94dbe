"""Vector fields on independent x dependent variable space and their algebra.

A point-symmetry generator is X = xi^i(x,u) d/dx^i + eta^k(x,u) d/du^k.  The
commutator of two generators acts on coefficient functions componentwise:
[A, B]^w = A(B^w) - B(A^w).  A SymmetryModel bundles the variable split with an
ambient list of generators, checks linear independence at load, and caches the
structure constants [X_i, X_j] = sum_k c_ijk X_k once the basis is known to
close.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .expr import Expression, ExpressionError, parse_expr

__all__ = [
    "VarSpace",
    "VectorField",
    "SymmetryModel",
    "ModelError",
    "apply_field",
    "commutator",
    "coefficient_matrices",
]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class VarSpace:
    """Ordered independent/dependent variable split; context for coefficients."""

    independent: tuple
    dependent: tuple

    def __post_init__(self):
        allv = self.independent + self.dependent
        if len(set(allv)) != len(allv):
            raise ModelError(f"variable names not unique: {allv}")

    @property
    def all_vars(self) -> tuple:
        return self.independent + self.dependent

    @property
    def n(self) -> int:
        return len(self.independent)

    @property
    def m(self) -> int:
        return len(self.dependent)


class VectorField:
    """First-order differential operator with Expression coefficients.

    comps maps variable name -> nonzero Expression; absent entries are zero.
    """

    __slots__ = ("name", "space", "comps")

    def __init__(self, space: VarSpace, comps: Mapping, name: str = ""):
        self.space = space
        self.name = name
        clean = {}
        for var, e in comps.items():
            if var not in space.all_vars:
                raise ModelError(f"component for undeclared variable {var!r}")
            if not isinstance(e, Expression):
                raise ModelError(f"component {var!r} is not an Expression")
            if not e.is_zero:
                clean[var] = e
        self.comps = clean

    @classmethod
    def from_strings(cls, space: VarSpace, name: str, xi: Mapping = (), eta: Mapping = ()) -> "VectorField":
        allv = space.all_vars
        comps = {}
        for src, domain in ((xi, space.independent), (eta, space.dependent)):
            for var, text in dict(src).items():
                if var not in domain:
                    raise ModelError(f"{name}: {var!r} not in expected variable block")
                comps[var] = parse_expr(text, allv)
        return cls(space, comps, name)

    @classmethod
    def zero(cls, space: VarSpace, name: str = "") -> "VectorField":
        return cls(space, {}, name)

    def component(self, var: str) -> Expression:
        e = self.comps.get(var)
        if e is None:
            return Expression.zero(self.space.all_vars)
        return e

    @property
    def xi(self) -> dict:
        return {v: self.comps[v] for v in self.space.independent if v in self.comps}

    @property
    def eta(self) -> dict:
        return {v: self.comps[v] for v in self.space.dependent if v in self.comps}

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def apply(self, e: Expression) -> Expression:
        """Directional derivative: sum of coefficient * d(e)/d(var)."""
        acc = Expression.zero(self.space.all_vars)
        for var, coeff in self.comps.items():
            d = e.diff(var)
            if not d.is_zero:
                acc = acc + coeff * d
        return acc

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.space != other.space:
            raise ModelError("vector fields live on different spaces")
        comps = dict(self.comps)
        for var, e in other.comps.items():
            s = comps.get(var)
            comps[var] = e if s is None else s + e
        return VectorField(self.space, comps)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scale(-1)

    def __neg__(self) -> "VectorField":
        return self.scale(-1)

    def scale(self, c) -> "VectorField":
        if isinstance(c, (int, Fraction)):
            c = Expression.constant(c, self.space.all_vars)
        return VectorField(self.space, {v: c * e for v, e in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.space == other.space and self.comps == other.comps

    def __hash__(self):
        return hash((self.space, frozenset(self.comps.items())))

    def __str__(self):
        if self.is_zero:
            return f"{self.name or '0'}: 0"
        parts = [f"({e})*d/d{v}" for v, e in sorted(self.comps.items(), key=lambda kv: self.space.all_vars.index(kv[0]))]
        label = f"{self.name}: " if self.name else ""
        return label + " + ".join(parts)

    __repr__ = __str__


def apply_field(X: VectorField, e: Expression) -> Expression:
    """Apply the generator to a scalar expression (exact)."""
    return X.apply(e)


def commutator(A: VectorField, B: VectorField) -> VectorField:
    """[A, B] with components A(B^w) - B(A^w)."""
    if A.space != B.space:
        raise ModelError("vector fields live on different spaces")
    comps = {}
    for var in set(A.comps) | set(B.comps):
        e = Expression.zero(A.space.all_vars)
        bw = B.comps.get(var)
        if bw is not None:
            e = e + A.apply(bw)
        aw = A.comps.get(var)
        if aw is not None:
            e = e - B.apply(aw)
        if not e.is_zero:
            comps[var] = e
    return VectorField(A.space, comps)


def coefficient_matrices(fields: Sequence[VectorField], space: VarSpace):
    """Stack coefficient rows: (k x n xi-matrix, k x (n+m) xi-eta-matrix).

    Accepts any spanning list, including zero fields (zero rows are kept).
    """
    from .exactlinalg import ExprMatrix

    allv = space.all_vars
    zero = Expression.zero(allv)
    xi_rows = []
    full_rows = []
    for X in fields:
        if X.space != space:
            raise ModelError("field does not live on the requested space")
        row = [X.comps.get(v, zero) for v in allv]
        xi_rows.append(row[: space.n])
        full_rows.append(row)
    return ExprMatrix(xi_rows, ncols=space.n), ExprMatrix(full_rows, ncols=space.n + space.m)


class SymmetryModel:
    """Variable split plus an ambient generator basis L_r.

    Validation at load: unique variable and generator names, and linear
    independence of the basis over the rationals.  Structure constants are
    computed lazily; they exist iff the basis closes under the commutator.
    """

    def __init__(self, independent: Sequence[str], dependent: Sequence[str], basis: Sequence[VectorField], name: str = ""):
        self.space = VarSpace(tuple(independent), tuple(dependent))
        self.name = name
        self.basis = tuple(basis)
        names = [X.name for X in self.basis]
        if any(not nm for nm in names):
            raise ModelError("every basis generator needs a name")
        if len(set(names)) != len(names):
            raise ModelError(f"generator names not unique: {names}")
        for X in self.basis:
            if X.space != self.space:
                raise ModelError(f"generator {X.name} lives on a different space")
            if X.is_zero:
                raise ModelError(f"generator {X.name} is zero")
        self.names = tuple(names)
        self._name_index = {nm: i for i, nm in enumerate(names)}
        self._structure = None
        from .exactlinalg import linearly_independent

        if not linearly_independent(self.basis):
            raise ModelError("basis is linearly dependent over the rationals")

    # -- bookkeeping -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def m(self) -> int:
        return self.space.m

    def generator(self, name: str) -> VectorField:
        try:
            return self.basis[self._name_index[name]]
        except KeyError:
            raise ModelError(f"unknown generator {name!r}; have {', '.join(self.names)}") from None

    def index_of(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise ModelError(f"unknown generator {name!r}; have {', '.join(self.names)}") from None

    def coeff_unit(self, i: int) -> tuple:
        """Coefficient vector of the i-th basis generator."""
        if not 0 <= i < self.dim:
            raise ModelError(f"generator index {i} out of range for dimension {self.dim}")
        return tuple(Fraction(1) if k == i else Fraction(0) for k in range(self.dim))

    def field_from_coeffs(self, coeffs: Sequence, name: str = "") -> VectorField:
        """Rational linear combination of the ambient basis."""
        out = VectorField.zero(self.space, name)
        for c, X in zip(coeffs, self.basis):
            c = Fraction(c)
            if c:
                out = out + X.scale(c)
        out.name = name
        return out

    # -- structure constants ----------------------------------------------

    def structure_constants(self) -> dict:
        """dict[(i, j) -> coefficient tuple] for i < j; fails if basis does not close."""
        if self._structure is None:
            from .exactlinalg import membership_in_span

            table = {}
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    c = commutator(self.basis[i], self.basis[j])
                    if c.is_zero:
                        table[(i, j)] = tuple(Fraction(0) for _ in range(self.dim))
                        continue
                    coeffs = membership_in_span(c, self.basis)
                    if coeffs is None:
                        raise ModelError(
                            f"ambient basis does not close: [{self.names[i]}, {self.names[j]}] "
                            "is outside the span, structure constants undefined"
                        )
                    table[(i, j)] = coeffs
            self._structure = table
        return self._structure

    def bracket_coeffs(self, a: Sequence, b: Sequence) -> tuple:
        """Coefficient vector of [sum a_i X_i, sum b_j X_j] in the ambient basis."""
        table = self.structure_constants()
        r = self.dim
        out = [Fraction(0)] * r
        for i in range(r):
            ai = Fraction(a[i])
            if not ai:
                continue
            for j in range(r):
                bj = Fraction(b[j])
                if not bj or i == j:
                    continue
                cij = table[(i, j)] if i < j else table[(j, i)]
                sign = 1 if i < j else -1
                f = ai * bj * sign
                for k in range(r):
                    if cij[k]:
                        out[k] += f * cij[k]
        return tuple(out)

    def __repr__(self):
        return (
            f"SymmetryModel({self.name or 'anonymous'}: "
            f"{'/'.join(self.space.independent)} ; {'/'.join(self.space.dependent)} ; "
            f"dim {self.dim})"
        )
