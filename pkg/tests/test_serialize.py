import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import S, f1, f2, phi_layers, random_block, trivial_layers
from mfext import GF, Generator, MatrixFactorization, PolyMatrix, PresentedModule, Ring, identity_certificate, lemma3_sequence, reduce_C, theorem0_certify
from mfext.catalog import phi, psi
from mfext.serialize import SerializationError, decode, dumps, encode


def round_trip(value, kind):
    text = dumps(value, kind)
    back = decode(text, kind, value.ring if hasattr(value, "ring") else None)
    assert dumps(back, kind) == text
    return back


def test_poly_and_matrix():
    assert round_trip(f1 * f2 - 7, "poly") == f1 * f2 - 7
    A = phi(S, 2, 1)
    assert round_trip(A, "matrix") == A
    F = Ring(("a", "b", "c"), GF(101), "lex")
    p = F("a^2*c - 3*b + 100")
    assert round_trip(p, "poly") == p


def test_canonical_text_is_deterministic():
    A = phi(S, 2, 1)
    text = dumps(A, "matrix")
    assert text == dumps(PolyMatrix.from_rows(S, [[e for e in row] for row in A.entries()]), "matrix")
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    assert " " not in text


def test_structured_values():
    mf = MatrixFactorization(f1, phi(S, 2, 1), psi(S, 2, 1))
    assert round_trip(mf, "mf") == mf
    M = PresentedModule(phi(S, 2, 1), (f1,))
    assert round_trip(M, "module") == M
    fm = phi_layers(random_block(11))
    assert round_trip(fm, "filtered") == fm
    red = reduce_C(fm)
    back = round_trip(red, "reduction")
    assert back.U == red.U and back.log == red.log
    out = lemma3_sequence(trivial_layers([f1, f2]))
    assert round_trip(out, "lemma3").claim == out.claim


def test_certificate_report_round_trip():
    fm = trivial_layers([f1, f2])
    gens = [(layer.mf(), 0, identity_certificate(Generator(layer.mf().module(), layer.B))) for layer in fm.layers]
    rep = theorem0_certify(fm, gens)
    back = round_trip(rep, "report")
    assert back.certificate == rep.certificate
    c = round_trip(rep.certificate, "certificate")
    assert c == rep.certificate


@pytest.mark.parametrize(
    "doc,kind,where",
    [
        ('{"ring": {"vars": ["x"], "field": "Q", "order": "grevlex"}, "type": "poly", "poly": "x +"}', "poly", "$"),
        ('{"rows": 1, "cols": 2, "entries": [["x"]]}', "matrix", "$.entries"),
        ('{"rows": 1, "cols": 1, "entries": [["x", "@"]]}', "matrix", "$.entries"),
        ("[1, 2", "poly", ""),
    ],
)
def test_errors_carry_a_path(doc, kind, where):
    with pytest.raises(SerializationError) as info:
        decode(doc, kind, S)
    assert where in str(info.value)


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
monos = st.tuples(st.integers(0, 4), st.integers(0, 4))


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(monos, coeffs, max_size=6))
def test_poly_round_trip_property(terms):
    p = sum((S.monomial(e, c) for e, c in terms.items()), S.zero())
    assert decode(dumps(p, "poly"), "poly", S) == p
    assert decode(encode(p, "poly"), "poly") == p
