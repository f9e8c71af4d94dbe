"""Classification of invariant and partially invariant solution types.

For a subalgebra with coefficient matrices xi (independent-variable block)
and (xi, eta) (full block), everything below is driven by two generic ranks:

    t     = n + m - rank(xi, eta)     number of independent invariants
    sigma = n - rank(xi)              invariant independent variables
    mu    = t - sigma                 excess of invariants over sigma

A subalgebra admits invariant solutions iff rank(xi) = rank(xi, eta).  A
partially invariant type (rho, delta) has sigma <= rho < min(n, t) and
defect delta = m - t + rho >= 1; it is regular when rho = sigma.  An ideal
H of N supports a two-step reduction of N's solutions iff

    rank_N(xi, eta) - rank_N(xi) = rank_H(xi, eta) - rank_H(xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .exactlinalg import DEFAULT_SEED, ExprMatrix, generic_rank
from .liealg import Subalgebra, enumerate_candidate_ideals, is_ideal
from .vfield import coefficient_matrices

__all__ = [
    "ClassifyError",
    "Characteristics",
    "PisType",
    "ClassificationReport",
    "DecompositionWitness",
    "Hierarchy",
    "RepresentationSkeleton",
    "characteristics",
    "admits_invariant_solution",
    "pis_types",
    "regular_type",
    "classify_subalgebra",
    "two_step_condition",
    "decomposition_witness",
    "build_hierarchy",
    "build_representation",
]


class ClassifyError(ValueError):
    pass


@dataclass(frozen=True)
class Characteristics:
    dim: int
    n: int
    m: int
    rank_xi: int
    rank_xieta: int

    @property
    def invariants(self) -> int:
        return self.n + self.m - self.rank_xieta

    @property
    def sigma(self) -> int:
        return self.n - self.rank_xi

    @property
    def mu(self) -> int:
        return self.invariants - self.sigma

    @property
    def admits_invariant_solution(self) -> bool:
        return self.rank_xi == self.rank_xieta

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rank_xi": self.rank_xi,
            "rank_xieta": self.rank_xieta,
            "invariants": self.invariants,
            "sigma": self.sigma,
            "mu": self.mu,
            "admits_invariant_solution": self.admits_invariant_solution,
        }


@dataclass(frozen=True)
class PisType:
    rho: int
    delta: int
    regular: bool

    def as_dict(self) -> dict:
        return {"rho": self.rho, "delta": self.delta, "regular": self.regular}


@lru_cache(maxsize=4096)
def characteristics(sub: Subalgebra, seed: int = DEFAULT_SEED) -> Characteristics:
    """Rank characteristics of a subalgebra of point symmetries."""
    space = sub.model.space
    xi_m, full_m = coefficient_matrices(sub.fields, space)
    return Characteristics(
        dim=sub.dim,
        n=space.n,
        m=space.m,
        rank_xi=generic_rank(xi_m, seed=seed),
        rank_xieta=generic_rank(full_m, seed=seed),
    )


def admits_invariant_solution(sub: Subalgebra, seed: int = DEFAULT_SEED) -> bool:
    return characteristics(sub, seed).admits_invariant_solution


def pis_types(sub: Subalgebra, seed: int = DEFAULT_SEED) -> tuple:
    """All partially invariant types (rho, delta), smallest rho first."""
    ch = characteristics(sub, seed)
    out = []
    for rho in range(ch.sigma, min(ch.n, ch.invariants)):
        delta = ch.m - ch.invariants + rho
        if delta < 1:
            continue
        out.append(PisType(rho=rho, delta=delta, regular=rho == ch.sigma))
    return tuple(out)


def regular_type(sub: Subalgebra, seed: int = DEFAULT_SEED):
    """The type with rho = sigma, or None when it is not admissible."""
    for t in pis_types(sub, seed):
        if t.regular:
            return t
    return None


_NECESSARY_NOTE = (
    "rank criteria are necessary conditions only; existence of a solution "
    "still requires the reduced system to be compatible"
)


@dataclass(frozen=True)
class ClassificationReport:
    subalgebra: Subalgebra
    chars: Characteristics
    types: tuple
    decomposition: "DecompositionWitness | None" = None
    notes: tuple = ()

    @property
    def admits_invariant(self) -> bool:
        return self.chars.admits_invariant_solution

    @property
    def regular(self):
        for t in self.types:
            if t.regular:
                return t
        return None

    def as_dict(self) -> dict:
        return {
            "span": self.subalgebra.describe(),
            "characteristics": self.chars.as_dict(),
            "admits_invariant": self.admits_invariant,
            "types": [t.as_dict() for t in self.types],
            "regular_type": self.regular.as_dict() if self.regular else None,
            "decomposition": self.decomposition.as_dict() if self.decomposition else None,
            "notes": list(self.notes),
        }


def classify_subalgebra(
    sub: Subalgebra,
    seed: int = DEFAULT_SEED,
    witness_bound: int | None = None,
) -> ClassificationReport:
    """Characteristics, admissible types, and (optionally) a witness search.

    witness_bound, when given, runs decomposition_witness with that
    coefficient bound for subalgebras that fail the invariant-solution rank
    test; it is skipped for those that pass, where no two-step question
    arises.
    """
    chars = characteristics(sub, seed)
    types = pis_types(sub, seed)
    notes = [_NECESSARY_NOTE]
    if not chars.admits_invariant_solution and chars.mu == 0:
        notes.append(
            "mu = 0: no invariant constrains the dependent variables"
        )
    witness = None
    if witness_bound is not None and not chars.admits_invariant_solution:
        witness = decomposition_witness(sub, witness_bound, seed)
    return ClassificationReport(
        subalgebra=sub,
        chars=chars,
        types=types,
        decomposition=witness,
        notes=tuple(notes),
    )


def two_step_condition(N: Subalgebra, H: Subalgebra, seed: int = DEFAULT_SEED) -> bool:
    """Defect match between N and an ideal H of N.

    Requires H to be an ideal of N; the condition itself compares
    rank(xi, eta) - rank(xi) on both sides.
    """
    if not is_ideal(H, N):
        raise ClassifyError(
            f"{H.describe()} is not an ideal of {N.describe()}; "
            "the two-step condition is only defined for ideals"
        )
    cn = characteristics(N, seed)
    ch = characteristics(H, seed)
    return cn.rank_xieta - cn.rank_xi == ch.rank_xieta - ch.rank_xi


@dataclass(frozen=True)
class DecompositionWitness:
    enclosing: Subalgebra
    ideal: Subalgebra | None
    candidates_checked: int
    coeff_bound: int

    @property
    def found(self) -> bool:
        return self.ideal is not None

    @property
    def verdict(self) -> str:
        if self.found:
            return "decomposable"
        return f"indecomposable within coeff_bound {self.coeff_bound}"

    def as_dict(self) -> dict:
        return {
            "enclosing": self.enclosing.describe(),
            "ideal": self.ideal.describe() if self.ideal else None,
            "found": self.found,
            "verdict": self.verdict,
            "candidates_checked": self.candidates_checked,
            "coeff_bound": self.coeff_bound,
        }


def decomposition_witness(
    N: Subalgebra, coeff_bound: int = 2, seed: int = DEFAULT_SEED
) -> DecompositionWitness:
    """First ideal H of N supporting a two-step reduction, if any.

    Only meaningful when N itself does not admit invariant solutions.  The
    witness must itself fail the invariant-solution test (otherwise the
    second step would be an ordinary invariant reduction, not a partially
    invariant one) and satisfy the two-step defect match.  Candidates come
    from enumerate_candidate_ideals, so "no witness" means none within that
    generated family; a larger coeff_bound widens the search.
    """
    if admits_invariant_solution(N, seed):
        raise ClassifyError(
            f"{N.describe()} admits invariant solutions; "
            "a two-step decomposition witness is not defined for it"
        )
    cn = characteristics(N, seed)
    checked = 0
    for H in enumerate_candidate_ideals(N, coeff_bound):
        checked += 1
        ch = characteristics(H, seed)
        if ch.admits_invariant_solution:
            continue
        if cn.rank_xieta - cn.rank_xi == ch.rank_xieta - ch.rank_xi:
            return DecompositionWitness(N, H, checked, coeff_bound)
    return DecompositionWitness(N, None, checked, coeff_bound)


@dataclass(frozen=True)
class Hierarchy:
    nodes: tuple
    reports: tuple
    edges: tuple  # (parent index, child index): parent reduces through child
    indecomposable: tuple  # indices of nodes with no witness at all

    def as_dict(self) -> dict:
        return {
            "nodes": [r.as_dict() for r in self.reports],
            "edges": [list(e) for e in self.edges],
            "indecomposable": list(self.indecomposable),
        }


def build_hierarchy(
    subs, coeff_bound: int = 2, seed: int = DEFAULT_SEED
) -> Hierarchy:
    """Two-step reduction structure over a family of subalgebras.

    An edge N -> H is recorded when both fail the invariant-solution test,
    H is a lower-dimensional ideal of N, and the two-step condition holds.
    A node is flagged indecomposable when it fails the invariant-solution
    test and the witness search over all candidate ideals (not only the
    listed nodes) comes back empty.
    """
    nodes = tuple(subs)
    if len({s.coeffs for s in nodes}) != len(nodes):
        raise ClassifyError("duplicate subalgebras in hierarchy input")
    reports = tuple(classify_subalgebra(s, seed) for s in nodes)
    fails = [not r.chars.admits_invariant_solution for r in reports]
    edges = []
    for i, N in enumerate(nodes):
        if not fails[i]:
            continue
        for j, H in enumerate(nodes):
            if i == j or not fails[j] or H.dim >= N.dim:
                continue
            if not is_ideal(H, N):
                continue
            ci, cj = reports[i].chars, reports[j].chars
            if ci.rank_xieta - ci.rank_xi == cj.rank_xieta - cj.rank_xi:
                edges.append((i, j))
    indecomposable = []
    for i, N in enumerate(nodes):
        if not fails[i]:
            continue
        if N.dim > 1 and decomposition_witness(N, coeff_bound, seed).found:
            continue
        indecomposable.append(i)
    return Hierarchy(nodes, reports, tuple(edges), tuple(indecomposable))


@dataclass(frozen=True)
class RepresentationSkeleton:
    """Shape of a partially invariant solution ansatz of type (rho, delta).

    similarity_variables: rho pairs (symbol, invariant) used as the reduced
    independent variables.  invariant_functions: t - rho pairs (function
    signature, invariant) equating the remaining invariants to unknown
    functions of the similarity variables.  resolved: the dependent
    variables those relations are solved for (Jacobian pivots).  The other
    delta dependent variables stay unconstrained functions of all original
    independent variables (free_functions).  unresolved_choices counts the
    alternative splits of the mu non-x invariants; it is 0 exactly in the
    regular case.
    """

    rho: int
    delta: int
    regular: bool
    similarity_variables: tuple
    invariant_functions: tuple
    resolved: tuple
    free_functions: tuple
    unresolved_choices: int

    def as_dict(self) -> dict:
        return {
            "rho": self.rho,
            "delta": self.delta,
            "regular": self.regular,
            "similarity_variables": [list(p) for p in self.similarity_variables],
            "invariant_functions": [list(p) for p in self.invariant_functions],
            "resolved": list(self.resolved),
            "free_functions": list(self.free_functions),
            "unresolved_choices": self.unresolved_choices,
        }


def build_representation(
    sub: Subalgebra,
    rho: int | None = None,
    max_degree: int = 2,
    seed: int = DEFAULT_SEED,
    basis=None,
) -> RepresentationSkeleton:
    """Canonical solution ansatz for one admissible type of the subalgebra.

    A precomputed InvariantBasis may be passed as basis; each member is
    re-verified against the subalgebra before use.
    """
    from .invariants import invariant_basis, verify_invariant

    ch = characteristics(sub, seed)
    if rho is None:
        reg = regular_type(sub, seed)
        if reg is None:
            raise ClassifyError(
                f"{sub.describe()} has no regular partially invariant type; pass rho explicitly"
            )
        rho = reg.rho
    admissible = {t.rho: t for t in pis_types(sub, seed)}
    if rho not in admissible:
        raise ClassifyError(
            f"rho={rho} is not an admissible type for {sub.describe()}; "
            f"admissible: {sorted(admissible)}"
        )
    typ = admissible[rho]
    if basis is None:
        basis = invariant_basis(sub, max_degree=max_degree, seed=seed)
    else:
        for inv in basis.invariants:
            if not verify_invariant(sub, inv.expr):
                raise ClassifyError(
                    f"supplied basis member {inv.expr} is not an invariant "
                    f"of {sub.describe()}"
                )
    if not basis.complete:
        raise ClassifyError(
            f"found {len(basis.invariants)} of {basis.t} invariants up to degree "
            f"{max_degree}; raise max_degree to build the representation"
        )
    x_only = [inv for inv in basis.invariants if inv.x_only]
    mixed = [inv for inv in basis.invariants if not inv.x_only]
    if len(x_only) < rho:
        raise ClassifyError(
            f"only {len(x_only)} invariants free of dependent variables; "
            f"cannot pick rho={rho} similarity variables canonically"
        )
    lams = x_only[:rho]
    leftover = x_only[rho:] + mixed
    sim = tuple((f"lam{i + 1}", str(inv.expr)) for i, inv in enumerate(lams))
    lam_args = ", ".join(name for name, _ in sim)
    funcs = tuple(
        (f"F{i + 1}({lam_args})", str(inv.expr)) for i, inv in enumerate(leftover)
    )
    # Jacobian of the function invariants with respect to the dependent
    # variables; greedy pivot columns name the variables to solve for.
    space = sub.model.space
    dep = space.dependent
    rows = [[inv.expr.diff(u) for u in dep] for inv in leftover]
    resolved = []
    sel: list = []
    for j, u in enumerate(dep):
        if len(sel) == len(leftover):
            break
        cand = ExprMatrix([[row[k] for k in sel + [j]] for row in rows], ncols=len(sel) + 1)
        if generic_rank(cand, seed=seed) > len(sel):
            sel.append(j)
            resolved.append(u)
    if len(resolved) != len(leftover):
        raise ClassifyError(
            "invariant relations cannot be resolved for the dependent variables"
        )
    free = tuple(u for u in dep if u not in resolved)
    return RepresentationSkeleton(
        rho=rho,
        delta=typ.delta,
        regular=typ.regular,
        similarity_variables=sim,
        invariant_functions=funcs,
        resolved=tuple(resolved),
        free_functions=free,
        unresolved_choices=math.comb(ch.mu, len(leftover)) - 1,
    )
