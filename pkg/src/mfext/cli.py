"""Command-line interface: JSON in, canonical JSON out.

Every invocation prints one object {"op", "ok", "result"} and exits with 0 when
the claim holds (or the construction succeeded), 1 when it was checked and is
false, and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import catalog
from .ball import (
    Generator,
    cert_verify,
    identity_certificate,
    lemma4_cert_scale,
    lemma5_rewrite,
    report_verify,
    theorem0_certify,
)
from .field import field_from_json
from .groebner import groebner_basis, lift_matrix, module_kernel, normal_form
from .matfac import (
    mf_direct_sum,
    mf_from_presentation,
    mf_periodicity_check,
    mf_scale,
    mf_syzygy,
    mf_verify,
    periodic_claims,
)
from .modules import ExactSequenceClaim, exact_check, iso_check, morphism_check
from .oracle import truncated_exact_check
from .poly import PolyMatrix, Ring
from .serialize import SerializationError, _Decoder, _poly, canonical, encode, ring_from_json
from .star import build_C, compute_filtration, lemma3_sequence, reduce_C, star_reassociate

ORACLE_PRIME = 101


class Malformed(ValueError):
    pass


class Context:
    """Parsed input document plus the ring it lives in (after --field/--order overrides)."""

    def __init__(self, doc, args):
        self.doc = doc
        self.args = args
        if not isinstance(doc, dict):
            raise Malformed("input must be a JSON object")
        if "ring" not in doc:
            raise SerializationError("$", "missing ring")
        ring = ring_from_json(doc["ring"])
        if args.field:
            ring = ring.with_field(field_from_json(args.field))
        if args.order:
            ring = Ring(ring.vars, ring.field, args.order)
        self.ring = ring
        self.dec = _Decoder(ring)

    def get(self, key, kind, path=None):
        path = path or f"$.{key}"
        if key not in self.doc:
            raise SerializationError("$", f"missing key {key!r}")
        return getattr(self.dec, kind)(self.doc[key], path)

    def whole(self, kind):
        return getattr(self.dec, kind)(self.doc, "$")

    def out(self, value, kind=None):
        doc = encode(value, kind)
        doc["ring"] = self.ring.to_json()
        return doc


def _oracle(ctx: Context, claims) -> dict | None:
    D = ctx.args.truncation_oracle
    if D is None:
        return None
    if ctx.ring.field.characteristic not in (0, ORACLE_PRIME):
        raise Malformed(f"the truncation oracle needs inputs over Q or F_{ORACLE_PRIME}")
    ok = all(truncated_exact_check(claim, D, ORACLE_PRIME) for claim in claims)
    return {"degree": D, "p": ORACLE_PRIME, "ok": ok}


# -- handlers: each returns (ok, result) ------------------------------------


def _polys_or_vectors(ctx: Context):
    doc = ctx.doc
    if "polys" in doc:
        return ctx.get("polys", "polys"), 1
    if "vectors" in doc:
        rank = doc.get("rank")
        vecs = []
        for k, v in enumerate(doc["vectors"]):
            if not isinstance(v, list):
                raise SerializationError(f"$.vectors[{k}]", "vector must be a list of polynomials")
            vecs.append(tuple(ctx.dec.poly(p, f"$.vectors[{k}][{i}]") for i, p in enumerate(v)))
        if rank is None:
            if not vecs:
                raise SerializationError("$", "rank needed for an empty vector list")
            rank = len(vecs[0])
        if any(len(v) != rank for v in vecs):
            raise SerializationError("$.vectors", f"all vectors need {rank} components")
        return vecs, rank
    raise SerializationError("$", "expected 'polys' or 'vectors'")


def _vectors_out(gb):
    if gb.rank == 1:
        return {"polys": [_poly(g.comps[0]) for g in gb.generators]}
    return {"rank": gb.rank, "vectors": [[_poly(p) for p in g.comps] for g in gb.generators]}


def op_gb(ctx):
    gens, rank = _polys_or_vectors(ctx)
    gb = groebner_basis(gens, rank, ctx.ring)
    return True, {"ring": ctx.ring.to_json(), "type": "polys" if gb.rank == 1 else "vectors", **_vectors_out(gb)}


def op_nf(ctx):
    doc = ctx.doc
    basis_doc = {k: doc[k] for k in ("polys", "vectors", "rank") if k in doc}
    gens, rank = _polys_or_vectors(Context({"ring": doc["ring"], **basis_doc}, ctx.args))
    gb = groebner_basis(gens, rank, ctx.ring)
    if "f" in doc:
        r = normal_form(ctx.get("f", "poly"), gb)
        return True, {"ring": ctx.ring.to_json(), "type": "poly", "poly": _poly(r.comps[0])}
    v = doc.get("v")
    if not isinstance(v, list) or len(v) != rank:
        raise SerializationError("$.v", f"expected a vector of {rank} polynomials")
    r = normal_form(tuple(ctx.dec.poly(p, f"$.v[{i}]") for i, p in enumerate(v)), gb)
    return True, {"ring": ctx.ring.to_json(), "vector": [_poly(p) for p in r.comps]}


def _modulo(ctx):
    return tuple(ctx.dec.poly(p, f"$.modulo[{k}]") for k, p in enumerate(ctx.doc.get("modulo", [])))


def op_ker(ctx):
    A = ctx.get("matrix", "matrix")
    gens = module_kernel(A, _modulo(ctx))
    K = PolyMatrix.from_columns(ctx.ring, [tuple(g) for g in gens], A.cols)
    return True, ctx.out(K)


def op_lift(ctx):
    A = ctx.get("A", "matrix")
    B = ctx.get("B", "matrix")
    X = lift_matrix(A, B, _modulo(ctx))
    if X is None:
        return False, None
    return True, ctx.out(X)


def _claim_result(ctx, claims, ok):
    out = {"exact": ok}
    orc = _oracle(ctx, claims)
    if orc is not None:
        out["oracle"] = orc
        ok = ok and orc["ok"]
    return ok, out


def op_check_morphism(ctx):
    return morphism_check(ctx.whole("morphism")), None


def op_check_iso(ctx):
    f, g = ctx.get("f", "morphism"), ctx.get("g", "morphism")
    return iso_check(f, g), None


def op_check_exact(ctx):
    claim = ctx.whole("claim")
    detail: list = []
    ok = exact_check(claim, detail)
    ok, out = _claim_result(ctx, [claim], ok)
    out["detail"] = detail
    return ok, out


def op_mf_verify(ctx):
    return mf_verify(ctx.whole("mf")), None


def op_mf_from_presentation(ctx):
    mf = mf_from_presentation(ctx.get("A", "matrix"), ctx.get("f", "poly"))
    return True, ctx.out(mf)


def op_mf_syzygy(ctx):
    mf = ctx.whole("mf")
    if not mf_verify(mf):
        return False, None
    return True, ctx.out(mf_syzygy(mf))


def op_mf_scale(ctx):
    M = mf_scale(ctx.get("A", "matrix"), ctx.get("x", "poly"), ctx.get("y", "poly"))
    return True, ctx.out(M)


def op_mf_periodicity(ctx):
    mf = ctx.whole("mf")
    ok, out = _claim_result(ctx, list(periodic_claims(mf).values()), mf_periodicity_check(mf))
    return ok, {"periodic": out.pop("exact"), **out}


def op_mf_sum(ctx):
    raw = ctx.doc.get("mfs")
    if not isinstance(raw, list) or not raw:
        raise SerializationError("$.mfs", "expected a nonempty list of factorizations")
    mfs = [ctx.dec.mf(m, f"$.mfs[{k}]") for k, m in enumerate(raw)]
    total = mfs[0]
    for mf in mfs[1:]:
        total = mf_direct_sum(total, mf)
    return True, ctx.out(total)


def op_star_assemble(ctx):
    fm = ctx.whole("filtered")
    return True, ctx.out(fm.module())


def op_star_filtrate(ctx):
    M = ctx.get("module", "module")
    xs = [ctx.dec.poly(x, f"$.xs[{k}]") for k, x in enumerate(ctx.doc.get("xs", []))]
    fm = compute_filtration(M, xs)
    return True, ctx.out(fm)


def op_star_build_c(ctx):
    return True, ctx.out(build_C(ctx.whole("filtered")))


def op_star_reduce_c(ctx):
    red = reduce_C(ctx.whole("filtered"))
    return red.holds(), ctx.out(red)


def op_star_lemma3(ctx):
    fm = ctx.whole("filtered")
    out = lemma3_sequence(fm, check=False)
    detail: list = []
    ok = exact_check(out.claim, detail)
    ok, info = _claim_result(ctx, [out.claim], ok)
    res = ctx.out(out)
    res["check"] = {**info, "detail": detail}
    return ok, res


def op_star_reassoc(ctx):
    fm = ctx.whole("filtered")
    k = ctx.doc.get("k")
    if not isinstance(k, int):
        raise SerializationError("$.k", "k must be an integer")
    new = star_reassociate(fm, k, ctx.doc.get("m"))
    seqs = [c for _, c in new.claims if isinstance(c, ExactSequenceClaim)]
    isos = [c for _, c in new.claims if not isinstance(c, ExactSequenceClaim)]
    ok = all(exact_check(c) for c in seqs) and all(iso_check(f, g) for f, g in isos)
    ok, info = _claim_result(ctx, seqs, ok)
    res = ctx.out(new)
    res["check"] = info
    return ok, res


def op_cert_verify(ctx):
    c = ctx.get("certificate", "certificate") if "certificate" in ctx.doc else ctx.whole("certificate")
    detail: list = []
    gen = ctx.get("expect_generator", "module") if "expect_generator" in ctx.doc else None
    tgt = ctx.get("expect_target", "module") if "expect_target" in ctx.doc else None
    ok = cert_verify(c, ctx.doc.get("expect_mode"), detail, generator=gen, target=tgt)
    return ok, {"detail": detail}


def op_cert_lemma5(ctx):
    c = ctx.get("certificate", "certificate")
    mf = ctx.get("mf", "mf")
    out = lemma5_rewrite(c, mf)
    return cert_verify(out), ctx.out(out)


def op_cert_scale(ctx):
    c = ctx.get("certificate", "certificate")
    out = lemma4_cert_scale(c, ctx.get("mate", "matrix"), ctx.get("x", "poly"))
    return cert_verify(out), ctx.out(out)


def op_cert_theorem0(ctx):
    fm = ctx.get("filtered", "filtered")
    inputs = ctx.doc.get("inputs")
    if not isinstance(inputs, list) or len(inputs) != fm.n:
        raise SerializationError("$.inputs", f"expected {fm.n} entries, one per layer")
    gens = []
    for k, item in enumerate(inputs):
        path = f"$.inputs[{k}]"
        if not isinstance(item, dict):
            raise SerializationError(path, "expected an object")
        mf = ctx.dec.mf(item["mf"], path + ".mf") if "mf" in item else fm.layers[k].mf()
        d = item.get("d", 0)
        if "certificate" in item:
            c = ctx.dec.certificate(item["certificate"], path + ".certificate")
        else:
            c = identity_certificate(Generator(mf.module(), mf.B))
        gens.append((mf, d, c))
    report = theorem0_certify(fm, gens)
    return report_verify(report), ctx.out(report)


def _load_registry(path):
    if not path or not os.path.exists(path):
        return []
    with open(path) as fh:
        data = json.load(fh)
    docs = data.get("entries", []) if isinstance(data, dict) else data
    for doc in docs:
        catalog.register_document(doc)
    return docs


def _entry_json(entry, ring):
    return {
        "ring": ring.to_json(),
        "type": "catalog-entry",
        "name": entry.name,
        "params": entry.params,
        "f": _poly(entry.f),
        "factorizations": [{"label": lab, **{k: v for k, v in encode(mf).items() if k in ("f", "A", "B")}} for lab, mf in entry.factorizations],
    }


def op_catalog_list(args):
    return True, {"entries": catalog.catalog_list()}


def _params(pairs):
    out = {}
    for p in pairs or []:
        if "=" not in p:
            raise Malformed(f"parameter {p!r} must look like key=value")
        k, v = p.split("=", 1)
        try:
            out[k] = int(v)
        except ValueError as exc:
            raise Malformed(f"parameter {k} must be an integer") from exc
    return out


def op_catalog_get(args):
    field_ = field_from_json(args.field) if args.field else field_from_json("Q")
    entry = catalog.catalog_get(args.name, _params(args.param), field_)
    return True, _entry_json(entry, entry.f.ring)


def op_catalog_register(args):
    with open(args.file) as fh:
        doc = json.load(fh)
    entry = catalog.register_document(doc)
    if args.registry:
        docs = []
        if os.path.exists(args.registry):
            with open(args.registry) as fh:
                data = json.load(fh)
            docs = data.get("entries", []) if isinstance(data, dict) else data
        docs = [d for d in docs if d.get("name") != entry.name] + [doc]
        with open(args.registry, "w") as fh:
            fh.write(canonical({"entries": docs}) + "\n")
    return True, _entry_json(entry, entry.f.ring)


# -- argument parsing ----------------------------------------------------------

DOC_OPS = {
    ("gb",): op_gb,
    ("nf",): op_nf,
    ("ker",): op_ker,
    ("lift",): op_lift,
    ("mod", "check-morphism"): op_check_morphism,
    ("mod", "check-iso"): op_check_iso,
    ("mod", "check-exact"): op_check_exact,
    ("mf", "verify"): op_mf_verify,
    ("mf", "from-presentation"): op_mf_from_presentation,
    ("mf", "syzygy"): op_mf_syzygy,
    ("mf", "scale"): op_mf_scale,
    ("mf", "periodicity"): op_mf_periodicity,
    ("mf", "sum"): op_mf_sum,
    ("star", "assemble"): op_star_assemble,
    ("star", "filtrate"): op_star_filtrate,
    ("star", "build-c"): op_star_build_c,
    ("star", "reduce-c"): op_star_reduce_c,
    ("star", "lemma3"): op_star_lemma3,
    ("star", "reassoc"): op_star_reassoc,
    ("cert", "verify"): op_cert_verify,
    ("cert", "lemma5"): op_cert_lemma5,
    ("cert", "scale"): op_cert_scale,
    ("cert", "theorem0"): op_cert_theorem0,
}

CATALOG_OPS = {"list": op_catalog_list, "get": op_catalog_get, "register": op_catalog_register}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise Malformed(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", help="coefficient field override: Q or Fp:<p>")
    p.add_argument("--order", choices=["grevlex", "lex"], help="monomial order override")
    p.add_argument("--truncation-oracle", type=int, metavar="D", help="also check claims over F_101 up to degree D")
    p.add_argument("-o", "--output", help="write JSON here instead of standard output")
    p.add_argument("--registry", default=os.environ.get("MFEXT_REGISTRY"), help="JSON file of registered catalog entries")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="mfext", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    groups: dict = {}
    for path in DOC_OPS:
        if len(path) == 1:
            p = sub.add_parser(path[0], parents=[common])
        else:
            if path[0] not in groups:
                g = sub.add_parser(path[0])
                groups[path[0]] = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
            p = groups[path[0]].add_parser(path[1], parents=[common])
        p.add_argument("input", nargs="?", default="-", help="input JSON file ('-' for standard input)")
        p.set_defaults(op=path)
    g = sub.add_parser("catalog")
    cat = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cat.add_parser("list", parents=[common])
    p.set_defaults(op=("catalog", "list"))
    p = cat.add_parser("get", parents=[common])
    p.add_argument("name")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.set_defaults(op=("catalog", "get"))
    p = cat.add_parser("register", parents=[common])
    p.add_argument("file")
    p.set_defaults(op=("catalog", "register"))
    return parser


def _read_input(path: str):
    text = sys.stdin.read() if path == "-" else open(path).read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"line {exc.lineno} column {exc.colno}", exc.msg) from exc


def run(argv=None) -> tuple:
    """Returns (exit status, output object, output path or None)."""
    op_name = dest = None
    try:
        args = build_parser().parse_args(argv)
        op_name, dest = " ".join(args.op), args.output
        _load_registry(args.registry)
        if args.op[0] == "catalog":
            ok, result = CATALOG_OPS[args.op[1]](args)
        else:
            ctx = Context(_read_input(args.input), args)
            ok, result = DOC_OPS[args.op](ctx)
    except (SerializationError, Malformed, catalog.CatalogError, OSError) as exc:
        return 2, {"op": op_name, "ok": False, "result": None, "error": {"message": str(exc), "path": getattr(exc, "path", None)}}, dest
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        # shape and ring mismatches, failed preconditions
        return 2, {"op": op_name, "ok": False, "result": None, "error": {"message": f"{type(exc).__name__}: {exc}", "path": None}}, dest
    return (0 if ok else 1), {"op": op_name, "ok": bool(ok), "result": result}, dest


def main(argv=None) -> int:
    status, out, dest = run(argv)
    text = canonical(out) + "\n"
    if dest:
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
