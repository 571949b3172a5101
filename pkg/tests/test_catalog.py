import pytest

from mfext import GF, mf_verify
from mfext.catalog import CatalogError, catalog_get, catalog_list, phi, psi, register_document, shipped_entries, unregister


def test_a_series_entry():
    e = catalog_get("A", {"m": 2, "j": 1})
    S = e.f.ring
    x, y = S.gens()
    assert e.f == x**2 + y**3
    mf = e.get("phi1")
    assert mf.A == phi(S, 2, 1) and mf.B == psi(S, 2, 1)
    assert mf_verify(mf)


def test_linear_entries():
    e = catalog_get("linear-x")
    x = e.f.ring.gen("x")
    mf = e.get("trivial")
    assert (mf.f, mf.A.entries(), mf.B.entries()) == (x, ((x,),), ((e.f.ring.one(),),))


@pytest.mark.parametrize("name,params", [("D", {"n": 3}), ("A", {"m": 0}), ("A", {"m": 2, "j": 3}), ("A", {})])
def test_parameter_ranges(name, params):
    with pytest.raises(CatalogError):
        catalog_get(name, params)


def test_unknown_entry():
    with pytest.raises(CatalogError):
        catalog_get("E9")


def test_listing():
    names = [e["name"] for e in catalog_list()]
    assert names == sorted(names)
    assert {"A", "D", "E6", "E7", "E8", "linear-x", "linear-y"} <= set(names)


def test_every_shipped_entry_validates():
    entries = shipped_entries()
    assert len(entries) == 15
    for e in entries:
        assert e.factorizations
        for _, mf in e.factorizations:
            assert mf.f == e.f and mf_verify(mf)


def test_entries_over_a_prime_field():
    e = catalog_get("E7", field_=GF(101))
    assert e.f.ring.field == GF(101)
    assert all(mf_verify(mf) for _, mf in e.factorizations)


NODE = {
    "name": "node",
    "ring": {"vars": ["x", "y"], "field": "Q", "order": "grevlex"},
    "f": "x*y",
    "factorizations": [{"label": "x", "A": {"rows": 1, "cols": 1, "entries": [["x"]]}, "B": {"rows": 1, "cols": 1, "entries": [["y"]]}}],
}


def test_registration():
    try:
        entry = register_document(NODE)
        assert entry.labels == ["x"]
        listed = {e["name"]: e for e in catalog_list()}
        assert listed["node"]["registered"]
        assert catalog_get("node").get("x").B.entries()[0][0] == entry.f.ring.gen("y")
    finally:
        unregister("node")
    assert "node" not in [e["name"] for e in catalog_list()]


def test_registration_rejects_invalid_and_shipped():
    bad = dict(NODE, name="broken", factorizations=[{"label": "x", "A": {"rows": 1, "cols": 1, "entries": [["x"]]}, "B": {"rows": 1, "cols": 1, "entries": [["x"]]}}])
    with pytest.raises(CatalogError):
        register_document(bad)
    with pytest.raises(CatalogError):
        register_document(dict(NODE, name="A"))
    with pytest.raises(CatalogError):
        register_document({"name": "nothing"})
