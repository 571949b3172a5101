"""Named matrix factorizations of the simple curve singularities in x, y.

The shapes are x, y, x^2 + y^(m+1) (A), x^2 y + y^(n-1) (D, n >= 4),
x^3 + y^4 (E6), x^3 + x y^3 (E7) and x^3 + y^5 (E8).  Every entry is checked
with :func:`mf_verify` and :func:`mf_periodicity_check` before it is handed
out; rank-two E-series factorizations come from the JSON files in ``data/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .field import QQ, Field
from .matfac import MatrixFactorization, mf_periodicity_check, mf_verify
from .poly import PolyMatrix, Polynomial, Ring
from .serialize import SerializationError, _Decoder, ring_from_json

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "catalog_get",
    "catalog_list",
    "register",
    "register_document",
    "unregister",
    "shipped_entries",
    "phi",
    "psi",
]


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    f: Polynomial
    factorizations: tuple = field(default=())  # (label, MatrixFactorization) pairs

    def get(self, label: str) -> MatrixFactorization:
        for lab, mf in self.factorizations:
            if lab == label:
                return mf
        raise CatalogError(f"{self.name} has no factorization labelled {label!r}")

    @property
    def labels(self):
        return [lab for lab, _ in self.factorizations]


_RANGES = {
    "A": {"m": ">=1", "j": "1..m (optional)"},
    "D": {"n": ">=4"},
    "E6": {},
    "E7": {},
    "E8": {},
    "linear-x": {},
    "linear-y": {},
}

# parameter values instantiated by catalog validation and the acceptance suite
SHIPPED = (
    [("linear-x", {}), ("linear-y", {})]
    + [("A", {"m": m}) for m in range(1, 7)]
    + [("D", {"n": n}) for n in range(4, 8)]
    + [("E6", {}), ("E7", {}), ("E8", {})]
)

_registered: dict = {}
_validated: set = set()


def _ring(field_: Field) -> Ring:
    return Ring(("x", "y"), field_, "grevlex")


def phi(S: Ring, m: int, j: int) -> PolyMatrix:
    x, y = S.gens()
    return PolyMatrix.from_rows(S, [[x, y**j], [-(y ** (m + 1 - j)), x]])


def psi(S: Ring, m: int, j: int) -> PolyMatrix:
    x, y = S.gens()
    return PolyMatrix.from_rows(S, [[x, -(y**j)], [y ** (m + 1 - j), x]])


def _one(S: Ring, p) -> PolyMatrix:
    return PolyMatrix.from_rows(S, [[p]])


def _trivial(f: Polynomial):
    return ("trivial", MatrixFactorization(f, _one(f.ring, f), _one(f.ring, 1)))


def _products(S: Ring, u: Polynomial, m: int, jrange, tag: str):
    """Factorizations of u * (x^2 + y^(m+1)) built from the factors."""
    g = S("x^2") + S.gens()[1] ** (m + 1)
    f = u * g
    out = [
        (f"{tag}-g", MatrixFactorization(f, _one(S, g), _one(S, u))),
        (f"{tag}-u", MatrixFactorization(f, _one(S, u), _one(S, g))),
    ]
    for j in jrange:
        out.append((f"{tag}-u*phi{j}", MatrixFactorization(f, phi(S, m, j) * u, psi(S, m, j))))
        out.append((f"{tag}-phi{j}", MatrixFactorization(f, phi(S, m, j), psi(S, m, j) * u)))
    return out


def _int_param(params: dict, key: str, lo: int) -> int:
    if key not in params:
        raise CatalogError(f"missing parameter {key}")
    try:
        v = int(params[key])
    except (TypeError, ValueError) as exc:
        raise CatalogError(f"parameter {key} must be an integer") from exc
    if v < lo:
        raise CatalogError(f"parameter {key}={v} out of range ({key} >= {lo})")
    return v


def _data_entry(name: str, S: Ring):
    text = resources.files("mfext").joinpath("data").joinpath(f"{name.lower()}.json").read_text()
    return _from_document(json.loads(text), S)


def _from_document(doc: dict, S: Ring | None = None):
    """(name, f, [(label, mf)]) from a data/registration document."""
    if not isinstance(doc, dict) or "name" not in doc or "f" not in doc:
        raise CatalogError("catalog document needs name, f and factorizations")
    if S is None:
        S = ring_from_json(doc["ring"]) if "ring" in doc else _ring(QQ)
    dec = _Decoder(S)
    f = dec.poly(doc["f"], "$.f")
    facs = []
    for k, item in enumerate(doc.get("factorizations", [])):
        path = f"$.factorizations[{k}]"
        A, B = dec.matrix(item["A"], path + ".A"), dec.matrix(item["B"], path + ".B")
        facs.append((item.get("label", f"mf{k}"), MatrixFactorization(f, A, B)))
    return doc["name"], f, facs


def _build(name: str, params: dict, S: Ring) -> CatalogEntry:
    x, y = S.gens()
    if name == "linear-x":
        return CatalogEntry(name, {}, x, (_trivial(x),))
    if name == "linear-y":
        return CatalogEntry(name, {}, y, (_trivial(y),))
    if name == "A":
        m = _int_param(params, "m", 1)
        f = x**2 + y ** (m + 1)
        js = range(1, m + 1)
        if params.get("j") is not None:
            j = _int_param(params, "j", 1)
            if j > m:
                raise CatalogError(f"parameter j={j} out of range (1 <= j <= m = {m})")
            js = [j]
        facs = [_trivial(f)] + [(f"phi{j}", MatrixFactorization(f, phi(S, m, j), psi(S, m, j))) for j in js]
        return CatalogEntry(name, {"m": m, **({"j": params["j"]} if params.get("j") is not None else {})}, f, tuple(facs))
    if name == "D":
        n = _int_param(params, "n", 4)
        f = x**2 * y + y ** (n - 1)
        facs = [_trivial(f)] + _products(S, y, n - 3, range(1, n - 2), "y")
        return CatalogEntry(name, {"n": n}, f, tuple(facs))
    if name in ("E6", "E8"):
        _, f, data = _data_entry(name, S)
        return CatalogEntry(name, {}, f, tuple([_trivial(f)] + data))
    if name == "E7":
        _, f, data = _data_entry(name, S)
        facs = [_trivial(f)] + _products(S, x, 2, (1, 2), "x") + data
        return CatalogEntry(name, {}, f, tuple(facs))
    if name in _registered:
        _, f, facs = _from_document(_registered[name])
        return CatalogEntry(name, {}, f, tuple(facs))
    raise CatalogError(f"unknown catalog entry {name!r}")


def _validate(entry: CatalogEntry) -> CatalogEntry:
    for label, mf in entry.factorizations:
        if mf.f != entry.f:
            raise CatalogError(f"{entry.name}/{label}: factorization of a different polynomial")
        if not mf_verify(mf):
            raise CatalogError(f"{entry.name}/{label}: AB = BA = fE fails")
        if not mf_periodicity_check(mf):
            raise CatalogError(f"{entry.name}/{label}: periodicity check fails")
    return entry


def catalog_get(name: str, params: dict | None = None, field_: Field = QQ, validate: bool = True) -> CatalogEntry:
    """Entry ``name`` with parameters (``m``/``j`` for A, ``n`` for D) over ``field_``."""
    params = dict(params or {})
    entry = _build(name, params, _ring(field_))
    key = (name, tuple(sorted(entry.params.items())), repr(field_))
    if validate and key not in _validated:
        _validate(entry)
        _validated.add(key)
    return entry


def shipped_entries(field_: Field = QQ) -> list:
    """Every shipped entry at the parameter values in SHIPPED, validated."""
    return [catalog_get(name, params, field_) for name, params in SHIPPED]


def catalog_list() -> list:
    """Sorted names with their parameter ranges, shipped and registered."""
    names = sorted(set(_RANGES) | set(_registered))
    return [{"name": n, "params": dict(_RANGES.get(n, {})), "registered": n in _registered} for n in names]


def register_document(doc: dict) -> CatalogEntry:
    """Add a user entry {name, ring, f, factorizations:[{label, A, B}]} after validating it."""
    try:
        name, f, facs = _from_document(doc)
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"malformed catalog document: {exc!r}") from exc
    except SerializationError as exc:
        raise CatalogError(str(exc)) from exc
    if name in _RANGES:
        raise CatalogError(f"{name!r} is a shipped entry and cannot be replaced")
    entry = _validate(CatalogEntry(name, {}, f, tuple(facs)))
    _registered[name] = doc
    return entry


def register(path) -> CatalogEntry:
    with open(path) as fh:
        return register_document(json.load(fh))


def unregister(name: str) -> None:
    _registered.pop(name, None)
    _validated.difference_update({k for k in _validated if k[0] == name})
