"""Built-in symmetry models and named subalgebra catalogs.

Three models ship with the package: the nine-generator algebra of the
two-dimensional shallow-water equations, the eleven-generator algebra of
ideal MHD (Galilean group extended by homothety), and the one-generator
extension used by the reduced shallow-water submodel (shallow-water space
prolonged by the dependent variable k).  Catalog entries name the
subalgebra families the classification reproduces; parameterized families
are instantiated at rational parameter values recorded in the entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .liealg import parse_span
from .vfield import ModelError, SymmetryModel, VarSpace, VectorField

__all__ = [
    "MODEL_NAMES",
    "DEFAULT_PARAMS",
    "CatalogEntry",
    "builtin_model",
    "default_params",
    "catalog",
    "catalog_keys",
]

MODEL_NAMES = ("shallow-water", "mhd", "sw-prolonged-k")

# alpha^2 + beta^2 = 1 with alpha*beta != 0; other knobs nonzero
DEFAULT_PARAMS = {
    "a": Fraction(1),
    "alpha": Fraction(3, 5),
    "beta": Fraction(4, 5),
    "sigma": Fraction(1),
    "tau": Fraction(1),
}


def default_params() -> dict:
    return dict(DEFAULT_PARAMS)


_SW_SPACE = (("t", "x", "y"), ("u", "v", "h"))
_SW_GENERATORS = (
    ("X1", {"x": "1"}, {}),
    ("X2", {"y": "1"}, {}),
    ("X4", {"x": "t"}, {"u": "1"}),
    ("X5", {"y": "t"}, {"v": "1"}),
    ("X9", {"x": "-y", "y": "x"}, {"u": "-v", "v": "u"}),
    ("X10", {"t": "1"}, {}),
    ("X11", {"x": "x", "y": "y"}, {"u": "u", "v": "v", "h": "2*h"}),
    (
        "X12",
        {"t": "t^2", "x": "t*x", "y": "t*y"},
        {"u": "x - t*u", "v": "y - t*v", "h": "-2*t*h"},
    ),
    (
        "X13",
        {"t": "2*t", "x": "x", "y": "y"},
        {"u": "-u", "v": "-v", "h": "-2*h"},
    ),
)

_MHD_SPACE = (("t", "x", "y", "z"), ("u", "v", "w", "H", "K", "L", "p", "rho"))
_MHD_GENERATORS = (
    ("X1", {"x": "1"}, {}),
    ("X2", {"y": "1"}, {}),
    ("X3", {"z": "1"}, {}),
    ("X4", {"x": "t"}, {"u": "1"}),
    ("X5", {"y": "t"}, {"v": "1"}),
    ("X6", {"z": "t"}, {"w": "1"}),
    ("X7", {"y": "-z", "z": "y"}, {"v": "-w", "w": "v", "K": "-L", "L": "K"}),
    ("X8", {"x": "z", "z": "-x"}, {"u": "w", "w": "-u", "H": "L", "L": "-H"}),
    ("X9", {"x": "-y", "y": "x"}, {"u": "-v", "v": "u", "H": "-K", "K": "H"}),
    ("X10", {"t": "1"}, {}),
    ("X11", {"t": "t", "x": "x", "y": "y", "z": "z"}, {}),
)

_SWK_SPACE = (("t", "x", "y"), ("u", "v", "h", "k"))
_SWK_GENERATORS = (
    (
        "Z",
        {"t": "t^2 + 1", "y": "t*y"},
        {"v": "y - t*v", "h": "-2*t*h", "k": "1 - 2*t*k"},
    ),
)


def _build(space_def, gen_defs, name: str) -> SymmetryModel:
    space = VarSpace(independent=space_def[0], dependent=space_def[1])
    basis = [
        VectorField.from_strings(space, gname, xi=xi, eta=eta)
        for gname, xi, eta in gen_defs
    ]
    return SymmetryModel(space.independent, space.dependent, basis, name=name)


@lru_cache(maxsize=None)
def builtin_model(name: str) -> SymmetryModel:
    if name == "shallow-water":
        return _build(_SW_SPACE, _SW_GENERATORS, name)
    if name == "mhd":
        return _build(_MHD_SPACE, _MHD_GENERATORS, name)
    if name == "sw-prolonged-k":
        return _build(_SWK_SPACE, _SWK_GENERATORS, name)
    raise ModelError(f"unknown builtin model {name!r}; have {', '.join(MODEL_NAMES)}")


_SW_REDUCTION_OPS = (
    "X2",
    "X11",
    "X10+X11",
    "X5+X10",
    "X10",
    "{a}*X11+X13",
    "X5+X11+X13",
    "{a}*X11+X10+X12",
)

_MHD_REDUCTION_OPS = (
    "X7+{a}*X11",
    "X7+X10",
    "{a}*X6+X11",
    "X5+X10",
    "X10",
    "X2+X6",
    "X6",
    "X2",
)

_MHD_DEFECT1_RANK2 = (
    "X2, X3, X7",
    "X5, X6, X7",
    "X7, X8, X9",
    "X3+X5, X2-X6, X7",
    "X3, X5, X2+X6",
)

_MHD_INDECOMPOSABLE_4D = (
    "X1, X5, X6, {alpha}*X4+X7",
    "{alpha}*X1+X4, X5, X6, {beta}*X1+X7",
    "X1, X2, X3, {alpha}*X4+X7",
    "{alpha}*X1+X4, X3+X5, X2-X6, {beta}*X1+X7",
    "X2, X3, X4, X1+X7",
    "X2, {alpha}*X1+X3, X1+X5, X6",
    "X1, X3+X5, X2-X6, {alpha}*X4+X7",
    "X1, X2, X3+X5, X6",
    "X1, {alpha}*X2+{beta}*X3+X4, {sigma}*X3+X5, {tau}*X2+X6",
)

_SW_OPS_NOTE = (
    "8 reduction operators, two of them parameterized (instantiated at the "
    "recorded rational values); each spans a three-dimensional algebra "
    "together with the pair X1, X4"
)

_4D_NOTE = (
    "parameterized families instantiated at the recorded rational values; "
    "constraints: alpha, beta nonzero where required, alpha^2+beta^2=1, "
    "alpha^2+tau^2 != 0, beta^2+sigma^2 != 0"
)


def _catalog_spans(key: str) -> tuple:
    """(model name, span templates, note) for a catalog key."""
    if key == "sw.H":
        return "shallow-water", ("X1, X4",), ""
    if key == "sw.N":
        return "shallow-water", ("X1, X4, X10+X12",), ""
    if key == "sw.reduction_ops":
        return "shallow-water", _SW_REDUCTION_OPS, _SW_OPS_NOTE
    if key == "sw.hierarchy":
        spans = ("X1, X4",) + tuple(f"X1, X4, {op}" for op in _SW_REDUCTION_OPS)
        return "shallow-water", spans, _SW_OPS_NOTE
    if key == "mhd.H":
        return "mhd", ("X1, X4",), ""
    if key == "mhd.defect1rank2":
        return "mhd", _MHD_DEFECT1_RANK2, ""
    if key == "mhd.defect2rank2":
        return "mhd", ("X2, X3, X5, X6",), ""
    if key == "mhd.defect3rank2":
        return "mhd", ("X2, X3, X5, X6, X7",), ""
    if key == "mhd.reduction_ops":
        return "mhd", _MHD_REDUCTION_OPS, ""
    if key == "mhd.indecomposable4d":
        return "mhd", _MHD_INDECOMPOSABLE_4D, _4D_NOTE
    if key == "mhd.hierarchy":
        spans = (
            ("X1, X4",)
            + _MHD_DEFECT1_RANK2
            + ("X2, X3, X5, X6", "X2, X3, X5, X6, X7")
        )
        return "mhd", spans, ""
    raise ModelError(f"unknown catalog key {key!r}; have {', '.join(catalog_keys())}")


def catalog_keys() -> tuple:
    return (
        "sw.H",
        "sw.N",
        "sw.reduction_ops",
        "sw.hierarchy",
        "mhd.H",
        "mhd.defect1rank2",
        "mhd.defect2rank2",
        "mhd.defect3rank2",
        "mhd.reduction_ops",
        "mhd.indecomposable4d",
        "mhd.hierarchy",
    )


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    model: SymmetryModel
    subalgebras: tuple
    spans: tuple
    params: dict
    note: str

    def as_dict(self) -> dict:
        return {
            "key": self.key,
            "model": self.model.name,
            "spans": list(self.spans),
            "params": {k: str(v) for k, v in self.params.items()},
            "note": self.note,
        }


def catalog(key: str, params: dict | None = None) -> CatalogEntry:
    """Resolve a catalog key to verified Subalgebras at given parameters."""
    model_name, templates, note = _catalog_spans(key)
    values = default_params()
    if params:
        for k, v in params.items():
            if k not in values:
                raise ModelError(
                    f"unknown parameter {k!r}; have {', '.join(sorted(values))}"
                )
            values[k] = Fraction(v)
    fmt = {k: str(v) for k, v in values.items()}
    spans = tuple(tpl.format(**fmt) for tpl in templates)
    used = sorted(set().union(*(_template_names(t) for t in templates)))
    model = builtin_model(model_name)
    subs = tuple(parse_span(model, s) for s in spans)
    return CatalogEntry(
        key=key,
        model=model,
        subalgebras=subs,
        spans=spans,
        params={k: values[k] for k in used},
        note=note,
    )


def _template_names(tpl: str) -> set:
    import string

    return {fn for _, fn, _, _ in string.Formatter().parse(tpl) if fn}
