"""Canonical JSON encoding of every data type in the package.

A top-level document is an object with a ``ring`` key next to the fields of
the encoded value; nested values never repeat the ring.  Polynomials are term
lists ``[{"c": "3/2", "e": [2, 0]}, ...]`` in the ring's order, largest first;
on input a polynomial string such as ``"x^2 - 3*y"`` is accepted as well.
Matrices are ``{"rows", "cols", "entries"}`` with nested row lists (a flat
row-major list is also accepted on input).
"""

from __future__ import annotations

import json

from .ball import BallCertificate, Extension, Generator, Leaf, RadiusReport
from .field import field_from_json
from .matfac import MatrixFactorization, SummandWitness
from .modules import ExactSequenceClaim, ModuleMorphism, PresentedModule
from .poly import PolyMatrix, Polynomial, Ring
from .star import FilteredModule, Layer, Lemma3Output, Op, Reduction

__all__ = ["SerializationError", "dumps", "canonical", "encode", "decode", "ring_from_json", "KINDS"]


class SerializationError(ValueError):
    """Malformed JSON input; ``path`` locates the offending value."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"at {path}: {msg}")
        self.path = path


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dumps(value, kind: str | None = None) -> str:
    return canonical(encode(value, kind))


# -- encoding -----------------------------------------------------------------


def _poly(p: Polynomial):
    to_str = p.ring.field.to_str
    return [{"c": to_str(c), "e": list(e)} for e, c in p.items()]


def _matrix(M: PolyMatrix):
    return {"rows": M.rows, "cols": M.cols, "entries": [[_poly(e) for e in row] for row in M.entries()]}


def _module(M: PresentedModule):
    return {"presentation": _matrix(M.presentation), "ideal": [_poly(g) for g in M.ideal]}


def _morphism(f: ModuleMorphism):
    return {"source": _module(f.source), "target": _module(f.target), "matrix": _matrix(f.matrix)}


def _claim(c: ExactSequenceClaim):
    return {
        "modules": [_module(m) for m in c.modules],
        "maps": [_matrix(f.matrix) for f in c.maps],
        "left_exact": c.left_exact,
        "right_exact": c.right_exact,
    }


def _mf(mf: MatrixFactorization):
    return {"f": _poly(mf.f), "A": _matrix(mf.A), "B": _matrix(mf.B)}


def _layer(layer: Layer):
    out = {"f": _poly(layer.x), "A": _matrix(layer.A)}
    if layer.B is not None:
        out["B" if layer.square else "Bright"] = _matrix(layer.B)
    return out


def _filtered(fm: FilteredModule):
    out = {
        "xs": [_poly(x) for x in fm.xs],
        "layers": [_layer(layer) for layer in fm.layers],
        "blocks": {f"{i},{j}": _matrix(b) for (i, j), b in sorted(fm.blocks.items()) if not b.is_zero()},
        "grouping": [list(g) for g in fm.grouping] if fm.grouping is not None else None,
    }
    if fm.witness is not None:
        out["witness"] = {"f": _morphism(fm.witness[0]), "g": _morphism(fm.witness[1])}
    if fm.claims:
        out["claims"] = [_labelled(item) for item in fm.claims]
    return out


def _labelled(item):
    """A regrouping statement: a named exact sequence or a named isomorphism (f, g)."""
    label, val = item
    if isinstance(val, ExactSequenceClaim):
        return {"label": label, "claim": _claim(val)}
    return {"label": label, "iso": {"f": _morphism(val[0]), "g": _morphism(val[1])}}


def _op(op: Op):
    return {
        "kind": op.kind,
        "step": op.step,
        "src": op.src,
        "dst": op.dst,
        "X": _matrix(op.X) if op.X is not None else None,
        "order": list(op.order),
    }


def _reduction(r: Reduction):
    return {
        "C": _matrix(r.C),
        "U": _matrix(r.U),
        "V": _matrix(r.V),
        "log": [_op(op) for op in r.log],
        "row_sizes": list(r.row_sizes),
        "col_sizes": list(r.col_sizes),
        "target": _matrix(r.target),
        "modulus": _poly(r.modulus),
    }


def _lemma3(out: Lemma3Output):
    return {
        "claim": _claim(out.claim),
        "p": out.p,
        "reduction": _reduction(out.reduction) if out.reduction is not None else None,
        "left_parts": [_module(m) for m in out.left_parts],
        "right_parts": [_module(m) for m in out.right_parts],
    }


def _generator(g: Generator):
    return {"module": _module(g.module), "mate": _matrix(g.mate) if g.mate is not None else None}


def _body(body, parent: Generator):
    if isinstance(body, Leaf):
        return {"kind": "leaf", "blocks": list(body.blocks), "inj": _matrix(body.inj.matrix), "proj": _matrix(body.proj.matrix)}
    return {
        "kind": "extension",
        "claim": _claim(body.claim),
        "inj": _matrix(body.inj.matrix),
        "proj": _matrix(body.proj.matrix),
        "sub": _cert(body.sub, parent),
        "quo": _cert(body.quo, parent),
    }


def _cert(c: BallCertificate, parent: Generator | None = None):
    out = {"mode": c.mode, "level": c.level, "target": _module(c.target), "body": _body(c.body, c.generator)}
    # a child inherits its parent's generator unless it differs
    if parent is None or c.generator != parent:
        out["generator"] = _generator(c.generator)
    return out


def _report(r: RadiusReport):
    return {
        "generator": _module(r.generator),
        "level": r.level,
        "d": r.d,
        "radius_bound": r.radius_bound,
        "size_bound": r.size_bound,
        "statement": r.statement(),
        "certificate": _cert(r.certificate),
    }


def _witness(w: SummandWitness):
    return {"inj": _morphism(w.inj), "proj": _morphism(w.proj)}


_ENCODERS = [
    ("poly", Polynomial, _poly),
    ("matrix", PolyMatrix, _matrix),
    ("module", PresentedModule, _module),
    ("morphism", ModuleMorphism, _morphism),
    ("claim", ExactSequenceClaim, _claim),
    ("mf", MatrixFactorization, _mf),
    ("filtered", FilteredModule, _filtered),
    ("reduction", Reduction, _reduction),
    ("lemma3", Lemma3Output, _lemma3),
    ("generator", Generator, _generator),
    ("certificate", BallCertificate, _cert),
    ("report", RadiusReport, _report),
    ("witness", SummandWitness, _witness),
]

KINDS = [k for k, _, _ in _ENCODERS] + ["polys"]


def _ring_of(value) -> Ring:
    if hasattr(value, "ring"):
        return value.ring
    if isinstance(value, ModuleMorphism):
        return value.source.ring
    if isinstance(value, ExactSequenceClaim):
        return value.modules[0].ring
    if isinstance(value, Reduction):
        return value.C.ring
    if isinstance(value, Lemma3Output):
        return value.claim.modules[0].ring
    if isinstance(value, BallCertificate):
        return value.target.ring
    if isinstance(value, RadiusReport):
        return value.generator.ring
    if isinstance(value, SummandWitness):
        return value.inj.source.ring
    raise TypeError(f"cannot find the ring of {type(value).__name__}")


def encode(value, kind: str | None = None) -> dict:
    """Top-level document: the value's fields plus ``ring`` and ``type``."""
    if isinstance(value, (list, tuple)) and (kind == "polys" or (value and isinstance(value[0], Polynomial))):
        if not value:
            raise ValueError("cannot encode an empty polynomial list without a ring")
        return {"type": "polys", "ring": value[0].ring.to_json(), "polys": [_poly(p) for p in value]}
    for name, cls, fn in _ENCODERS:
        if isinstance(value, cls) and (kind is None or kind == name):
            body = fn(value)
            doc = dict(body) if isinstance(body, dict) else {name: body}
            doc["type"] = name
            doc["ring"] = _ring_of(value).to_json()
            return doc
    raise TypeError(f"no JSON encoding for {type(value).__name__}")


# -- decoding -----------------------------------------------------------------


def ring_from_json(obj, path: str = "$.ring") -> Ring:
    if not isinstance(obj, dict) or "vars" not in obj:
        raise SerializationError(path, "ring needs {vars, field, order}")
    try:
        return Ring(tuple(obj["vars"]), field_from_json(obj.get("field", "Q")), obj.get("order", "grevlex"))
    except (ValueError, TypeError) as exc:
        raise SerializationError(path, str(exc)) from exc


def _polyish(v) -> bool:
    return isinstance(v, (str, int)) or (isinstance(v, list) and all(isinstance(t, dict) for t in v))


class _Decoder:
    def __init__(self, ring: Ring):
        self.ring = ring

    def need(self, obj, key, path):
        if not isinstance(obj, dict):
            raise SerializationError(path, "expected an object")
        if key not in obj:
            raise SerializationError(path, f"missing key {key!r}")
        return obj[key]

    def poly(self, obj, path):
        ring = self.ring
        if isinstance(obj, str):
            try:
                return ring(obj)
            except ValueError as exc:
                raise SerializationError(path, str(exc)) from exc
        if isinstance(obj, (int,)) and not isinstance(obj, bool):
            return ring(obj)
        if not isinstance(obj, list):
            raise SerializationError(path, "polynomial must be a term list or a string")
        terms = {}
        for k, t in enumerate(obj):
            tp = f"{path}[{k}]"
            c, e = self.need(t, "c", tp), self.need(t, "e", tp)
            if not isinstance(e, list) or len(e) != ring.nvars or any(not isinstance(a, int) or a < 0 for a in e):
                raise SerializationError(tp + ".e", f"exponent must list {ring.nvars} nonnegative integers")
            try:
                coeff = ring.field(str(c))
            except (ValueError, ZeroDivisionError) as exc:
                raise SerializationError(tp + ".c", str(exc)) from exc
            key = tuple(e)
            terms[key] = ring.field.norm(terms.get(key, 0) + coeff)
        return Polynomial(ring, {e: c for e, c in terms.items() if c})

    def matrix(self, obj, path):
        rows, cols = self.need(obj, "rows", path), self.need(obj, "cols", path)
        entries = obj.get("entries", [])
        if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
            raise SerializationError(path, "rows and cols must be nonnegative integers")
        if not isinstance(entries, list):
            raise SerializationError(path + ".entries", "entries must be a list")
        if len(entries) == rows and all(isinstance(r, list) and len(r) == cols and all(_polyish(e) for e in r) for r in entries):
            flat = [(f"{path}.entries[{i}][{j}]", e) for i, r in enumerate(entries) for j, e in enumerate(r)]
        elif len(entries) == rows * cols and all(_polyish(e) for e in entries):
            flat = [(f"{path}.entries[{k}]", e) for k, e in enumerate(entries)]
        else:
            raise SerializationError(path + ".entries", f"expected {rows} rows of {cols} entries")
        vals = [self.poly(e, p) for p, e in flat]
        return PolyMatrix(self.ring, rows, cols, [vals[i * cols : (i + 1) * cols] for i in range(rows)])

    def module(self, obj, path):
        P = self.matrix(self.need(obj, "presentation", path), path + ".presentation")
        ideal = [self.poly(g, f"{path}.ideal[{k}]") for k, g in enumerate(obj.get("ideal", []))]
        return PresentedModule(P, tuple(ideal))

    def _checked(self, fn, path):
        try:
            return fn()
        except SerializationError:
            raise
        except ValueError as exc:
            raise SerializationError(path, str(exc)) from exc

    def morphism(self, obj, path):
        src = self.module(self.need(obj, "source", path), path + ".source")
        tgt = self.module(self.need(obj, "target", path), path + ".target")
        M = self.matrix(self.need(obj, "matrix", path), path + ".matrix")
        return self._checked(lambda: ModuleMorphism(src, tgt, M), path)

    def claim(self, obj, path):
        mods = [self.module(m, f"{path}.modules[{k}]") for k, m in enumerate(self.need(obj, "modules", path))]
        raw = self.need(obj, "maps", path)
        if len(raw) != len(mods) - 1:
            raise SerializationError(path + ".maps", "need one map between consecutive modules")
        maps = []
        for k, m in enumerate(raw):
            mp = f"{path}.maps[{k}]"
            M = self.matrix(m["matrix"] if isinstance(m, dict) and "matrix" in m else m, mp)
            maps.append(self._checked(lambda M=M, k=k: ModuleMorphism(mods[k], mods[k + 1], M), mp))
        return self._checked(
            lambda: ExactSequenceClaim(tuple(mods), tuple(maps), bool(obj.get("left_exact", False)), bool(obj.get("right_exact", False))),
            path,
        )

    def mf(self, obj, path):
        f = self.poly(self.need(obj, "f", path), path + ".f")
        A = self.matrix(self.need(obj, "A", path), path + ".A")
        B = self.matrix(self.need(obj, "B", path), path + ".B")
        return self._checked(lambda: MatrixFactorization(f, A, B), path)

    def layer(self, obj, x, path):
        if "f" in obj:
            x = self.poly(obj["f"], path + ".f")
        if x is None:
            raise SerializationError(path, "layer needs f (or xs at the top level)")
        A = self.matrix(self.need(obj, "A", path), path + ".A")
        B = None
        for key in ("B", "Bright"):
            if obj.get(key) is not None:
                B = self.matrix(obj[key], f"{path}.{key}")
        return Layer(x, A, B)

    def filtered(self, obj, path):
        layers_raw = self.need(obj, "layers", path)
        xs = obj.get("xs")
        xs = [self.poly(x, f"{path}.xs[{k}]") for k, x in enumerate(xs)] if xs is not None else [None] * len(layers_raw)
        if len(xs) != len(layers_raw):
            raise SerializationError(path, "xs and layers differ in length")
        layers = [self.layer(layer, xs[k], f"{path}.layers[{k}]") for k, layer in enumerate(layers_raw)]
        xs = [layer.x for layer in layers]
        blocks = {}
        for key, val in (obj.get("blocks") or {}).items():
            try:
                i, j = (int(t) for t in key.split(","))
            except ValueError as exc:
                raise SerializationError(f"{path}.blocks", f"block key {key!r} is not 'i,j'") from exc
            blocks[(i, j)] = self.matrix(val, f"{path}.blocks[{key!r}]")
        grouping = obj.get("grouping")
        grouping = tuple(tuple(g) for g in grouping) if grouping is not None else None
        witness = None
        if obj.get("witness") is not None:
            w = obj["witness"]
            witness = (self.morphism(w["f"], path + ".witness.f"), self.morphism(w["g"], path + ".witness.g"))
        claims = tuple(self.labelled(c, f"{path}.claims[{k}]") for k, c in enumerate(obj.get("claims") or []))
        return self._checked(lambda: FilteredModule(xs, layers, blocks, grouping, witness, claims), path)

    def labelled(self, obj, path):
        label = self.need(obj, "label", path)
        if "claim" in obj:
            return (label, self.claim(obj["claim"], path + ".claim"))
        iso = self.need(obj, "iso", path)
        return (label, (self.morphism(iso["f"], path + ".iso.f"), self.morphism(iso["g"], path + ".iso.g")))

    def op(self, obj, path):
        X = obj.get("X")
        return Op(obj["kind"], obj["step"], obj.get("src", -1), obj.get("dst", -1), self.matrix(X, path + ".X") if X else None, tuple(obj.get("order", ())))

    def reduction(self, obj, path):
        m = lambda k: self.matrix(self.need(obj, k, path), f"{path}.{k}")  # noqa: E731
        return Reduction(
            m("C"),
            m("U"),
            m("V"),
            tuple(self.op(o, f"{path}.log[{k}]") for k, o in enumerate(obj.get("log", []))),
            tuple(obj["row_sizes"]),
            tuple(obj["col_sizes"]),
            m("target"),
            self.poly(self.need(obj, "modulus", path), path + ".modulus"),
        )

    def lemma3(self, obj, path):
        red = obj.get("reduction")
        return Lemma3Output(
            self.claim(self.need(obj, "claim", path), path + ".claim"),
            obj["p"],
            self.reduction(red, path + ".reduction") if red else None,
            tuple(self.module(m, f"{path}.left_parts[{k}]") for k, m in enumerate(obj.get("left_parts", []))),
            tuple(self.module(m, f"{path}.right_parts[{k}]") for k, m in enumerate(obj.get("right_parts", []))),
        )

    def generator(self, obj, path):
        mate = obj.get("mate")
        return Generator(self.module(self.need(obj, "module", path), path + ".module"), self.matrix(mate, path + ".mate") if mate else None)

    def certificate(self, obj, path, gen=None):
        mode = self.need(obj, "mode", path)
        level = self.need(obj, "level", path)
        if not isinstance(level, int) or isinstance(level, bool):
            raise SerializationError(path + ".level", "level must be an integer")
        target = self.module(self.need(obj, "target", path), path + ".target")
        if obj.get("generator") is not None:
            gen = self.generator(obj["generator"], path + ".generator")
        if gen is None:
            raise SerializationError(path, "missing generator")
        body = self.need(obj, "body", path)
        bp = path + ".body"
        kind = self.need(body, "kind", bp)
        inj = self.matrix(self.need(body, "inj", bp), bp + ".inj")
        proj = self.matrix(self.need(body, "proj", bp), bp + ".proj")
        if kind == "leaf":
            blocks = tuple(body.get("blocks", ()))
            for k, b in enumerate(blocks):
                if b != "R" and (not isinstance(b, int) or isinstance(b, bool) or b < 0):
                    raise SerializationError(f"{bp}.blocks[{k}]", f"block must be a nonnegative integer or 'R', got {b!r}")
            whole = self._checked(lambda: gen.blocks_sum(blocks), bp + ".blocks")
            node = Leaf(
                blocks,
                self._checked(lambda: ModuleMorphism(target, whole, inj), bp + ".inj"),
                self._checked(lambda: ModuleMorphism(whole, target, proj), bp + ".proj"),
            )
        elif kind == "extension":
            claim = self.claim(self.need(body, "claim", bp), bp + ".claim")
            if len(claim.modules) != 3:
                raise SerializationError(bp + ".claim", "extension claim needs three modules")
            mid = claim.modules[1]
            node = Extension(
                claim,
                self._checked(lambda: ModuleMorphism(target, mid, inj), bp + ".inj"),
                self._checked(lambda: ModuleMorphism(mid, target, proj), bp + ".proj"),
                self.certificate(self.need(body, "sub", bp), bp + ".sub", gen),
                self.certificate(self.need(body, "quo", bp), bp + ".quo", gen),
            )
        else:
            raise SerializationError(bp + ".kind", f"unknown body kind {kind!r}")
        return BallCertificate(mode, level, target, gen, node)

    def report(self, obj, path):
        return RadiusReport(
            self.module(self.need(obj, "generator", path), path + ".generator"),
            self.need(obj, "level", path),
            self.certificate(self.need(obj, "certificate", path), path + ".certificate"),
            obj.get("d", 0),
        )

    def witness(self, obj, path):
        return SummandWitness(self.morphism(obj["inj"], path + ".inj"), self.morphism(obj["proj"], path + ".proj"))

    def polys(self, obj, path):
        raw = obj["polys"] if isinstance(obj, dict) else obj
        if not isinstance(raw, list):
            raise SerializationError(path, "expected a list of polynomials")
        return [self.poly(p, f"{path}[{k}]") for k, p in enumerate(raw)]


def decode(doc, kind: str, ring: Ring | None = None):
    """Parse a top-level document (or a bare value when ``ring`` is given)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SerializationError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc
    if isinstance(doc, dict) and "ring" in doc:
        ring = ring_from_json(doc["ring"])
    if ring is None:
        raise SerializationError("$", "missing ring")
    dec = _Decoder(ring)
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if kind in ("poly", "matrix") and isinstance(doc, dict) and kind in doc:
        doc = doc[kind]
    fn = getattr(dec, kind)
    try:
        return fn(doc, "$")
    except SerializationError:
        raise
    except (KeyError, TypeError, IndexError) as exc:
        raise SerializationError("$", f"malformed {kind}: {exc!r}") from exc
