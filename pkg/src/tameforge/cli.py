"""Command-line front end: ``generate``, ``verify`` and ``inspect``.

Exit status: 0 all checks pass, 1 some check fails (or a certificate does not
reproduce), 2 input or schema error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .automorphism import bracket_degree, image_degrees
from .family import FamilyError, build_family, corollary_automorphism, graded_pieces, kawanoue_pair, nagata_report
from .polyring import (
    PolynomialError,
    TermLimitExceeded,
    highest_homogeneous_part,
    leading_part,
    parse_poly,
    render_poly,
    total_degree,
    weighted_degree,
)
from .certificate import CertificateBuilder
from .serialize import (
    SchemaError,
    document,
    dumps,
    encode,
    polymap_to_json,
    validate,
    witness_to_json,
)

log = logging.getLogger("tameforge")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

# above this m the expansions take noticeably longer than the default grid
SLOW_M = 15


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# document builders (shared by the commands and by verify)


def generate_document(p: int, q: int) -> dict:
    inst = build_family(p, q)
    Hp, witness, cert = corollary_automorphism(p, q, inst)
    pc = graded_pieces(inst)
    polys = {
        "f1": inst.F[0], "f2": inst.F[1], "f3": inst.F[2],
        "g1": inst.g1, "g2": inst.g2,
        "h1": inst.H[0], "h2": inst.H[1], "h3": inst.H[2],
        "P": pc["P"], "P^omega": pc["Pw"],
    }
    par = inst.params
    return document(
        "generate",
        {"p": p, "q": q},
        cert,
        polynomials={k: render_poly(v) for k, v in polys.items()},
        automorphism=polymap_to_json(Hp),
        witness=witness_to_json(witness),
        degrees=list(image_degrees(Hp)),
        constants={"m": par.m, "c": str(par.c), "c_i": [str(x) for x in par.c_list],
                   "lemma_constant": str(par.lemma_constant), "omega": list(inst.omega)},
    )


def nagata_document() -> dict:
    N, Ninv, cert = nagata_report()
    return document("inspect nagata", {}, cert,
                    automorphism=polymap_to_json(N), inverse=polymap_to_json(Ninv),
                    degrees=list(image_degrees(N)))


def kawanoue_document(l: int, m: int) -> dict:
    f, g, cert = kawanoue_pair(l, m)
    s = f**3 + g * g
    return document("inspect kawanoue", {"l": l, "m": m}, cert,
                    polynomials={"f": render_poly(f), "g": render_poly(g), "f^3+g^2": render_poly(s)},
                    degrees={"f": total_degree(f), "g": total_degree(g), "f^3+g^2": total_degree(s)})


def _parse(text: str, laurent: bool, nvars: int = 3):
    try:
        return parse_poly(text, nvars=nvars, laurent=laurent)
    except PolynomialError as exc:
        raise InputError(str(exc)) from exc


def bracket_document(f_text: str, g_text: str, laurent: bool = False) -> dict:
    f, g = _parse(f_text, laurent), _parse(g_text, laurent)
    if f.laurent or g.laurent:
        raise InputError("the bracket degree needs polynomials, not Laurent values")
    d = bracket_degree(f, g)
    cert = CertificateBuilder("bracket")
    cert.equal("deg[f,g] = deg[g,f]", encode(d), encode(bracket_degree(g, f)))
    return document("inspect bracket", {"f": f_text, "g": g_text, "laurent": laurent}, cert.build(),
                    polynomials={"f": render_poly(f), "g": render_poly(g)},
                    bracket_degree=encode(d))


def degrees_document(f_text: str, weights=None, laurent: bool = False, nvars: int = 3) -> dict:
    f = _parse(f_text, laurent, nvars)
    eta = weights if weights is not None else [1] * nvars
    if len(eta) != nvars:
        raise InputError(f"need {nvars} weights, got {len(eta)}")
    info = {"weighted_degree": encode(weighted_degree(f, eta)), "weights": [str(w) for w in eta]}
    if f:
        info["leading_part"] = render_poly(leading_part(f, eta))
    if not f.laurent:
        info["total_degree"] = encode(total_degree(f))
        if f:
            info["highest_homogeneous_part"] = render_poly(highest_homogeneous_part(f))
    cert = CertificateBuilder("degrees")
    if f:
        cert.equal("deg_eta f = deg_eta f^eta", encode(weighted_degree(f, eta)),
                   encode(weighted_degree(leading_part(f, eta), eta)))
    return document("inspect degrees",
                    {"f": f_text, "weights": [str(w) for w in eta], "laurent": laurent, "nvars": nvars},
                    cert.build() if f else CertificateBuilder("degrees").build(),
                    polynomials={"f": render_poly(f)}, degrees=info)


def rebuild(doc: dict) -> dict:
    """Recompute a document from its recorded inputs."""
    cmd, inp = doc["command"], doc["inputs"]
    try:
        if cmd == "generate":
            return generate_document(_int(inp["p"]), _int(inp["q"]))
        if cmd == "inspect nagata":
            return nagata_document()
        if cmd == "inspect kawanoue":
            return kawanoue_document(_int(inp["l"]), _int(inp["m"]))
        if cmd == "inspect bracket":
            return bracket_document(inp["f"], inp["g"], bool(inp.get("laurent", False)))
        if cmd == "inspect degrees":
            return degrees_document(inp["f"], [_rational(w) for w in inp["weights"]],
                                    bool(inp.get("laurent", False)), _int(inp.get("nvars", 3)))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad inputs for {cmd!r}: {exc}") from exc
    raise SchemaError(f"unknown command {cmd!r}")


def _int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


def _rational(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise TypeError(f"expected a rational string, got {v!r}")
    return Fraction(v)


# ---------------------------------------------------------------------------
# output helpers


def _write(text: str, out: str) -> int:
    if out == "-":
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        log.error("cannot write %s: %s", out, exc)
        return EXIT_IO
    return EXIT_OK


def _status(docs) -> int:
    return EXIT_OK if all(d["overall"] for d in docs) else EXIT_FAIL


def _check_params(p, q):
    if p < 1 or q < 1:
        raise InputError(f"p and q must be >= 1 (got p={p}, q={q})")
    if p * q + p + q > SLOW_M:
        log.warning("p=%d q=%d: m=%d is beyond the default grid; expansion may be slow", p, q, p * q + p + q)


def _grid_cell(pq):
    return generate_document(*pq)


def parse_grid(text: str) -> list:
    m = re.fullmatch(r"\s*(\d+)\.\.(\d+)\s*,\s*(\d+)\.\.(\d+)\s*", text)
    if not m:
        raise InputError(f"grid must look like 'pmin..pmax,qmin..qmax', got {text!r}")
    p0, p1, q0, q1 = map(int, m.groups())
    if p0 > p1 or q0 > q1:
        raise InputError("empty grid range")
    return [(p, q) for p in range(p0, p1 + 1) for q in range(q0, q1 + 1)]


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    if args.grid:
        cells = parse_grid(args.grid)
        for p, q in cells:
            _check_params(p, q)
        workers = min(len(cells), os.cpu_count() or 1)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                docs = list(pool.map(_grid_cell, cells))
        else:
            docs = [_grid_cell(c) for c in cells]
        if args.out == "-":
            code = _write(dumps(docs), "-")
        else:
            try:
                os.makedirs(args.out, exist_ok=True)
            except OSError as exc:
                log.error("cannot create %s: %s", args.out, exc)
                return EXIT_IO
            code = EXIT_OK
            for (p, q), doc in zip(cells, docs):
                code = max(code, _write(dumps(doc), os.path.join(args.out, f"tameforge_p{p}_q{q}.json")))
        return code or _status(docs)
    if args.p is None or args.q is None:
        raise InputError("generate needs --p and --q (or --grid)")
    _check_params(args.p, args.q)
    doc = generate_document(args.p, args.q)
    return _write(dumps(doc), args.out) or _status([doc])


def verify_document(doc) -> list:
    """Problems found when recomputing ``doc``; empty means it reproduces and passes."""
    validate(doc)
    fresh = json.loads(dumps(rebuild(doc)))
    problems = []
    if fresh != doc:
        keys = sorted(set(fresh) | set(doc))
        for k in keys:
            if fresh.get(k) != doc.get(k):
                problems.append(f"field {k!r} does not reproduce")
    if not fresh["overall"]:
        problems.extend(f"check failed: {c['name']}" for c in fresh["checks"] if not c["pass"])
    return problems


def cmd_verify(args) -> int:
    try:
        with open(args.path, encoding="utf-8") if args.path != "-" else sys.stdin as fh:
            raw = fh.read()
    except OSError as exc:
        log.error("cannot read %s: %s", args.path, exc)
        return EXIT_IO
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        log.error("malformed JSON: %s", exc)
        return EXIT_INPUT
    docs = data if isinstance(data, list) else [data]
    code = EXIT_OK
    for doc in docs:
        if not isinstance(doc, dict):
            log.error("document must be a JSON object")
            return EXIT_INPUT
        try:
            problems = verify_document(doc)
        except SchemaError as exc:
            log.error("schema violation: %s", exc)
            return EXIT_INPUT
        label = f"{doc['command']} {json.dumps(doc['inputs'], sort_keys=True)}"
        if problems:
            code = EXIT_FAIL
            print(f"FAIL {label}")
            for msg in problems:
                print(f"  {msg}")
        else:
            print(f"OK   {label}")
    return code


def _report(doc: dict) -> str:
    lines = [f"{doc['command']}  {json.dumps(doc['inputs'], sort_keys=True)}"]
    for key in ("degrees", "bracket_degree"):
        if key in doc:
            lines.append(f"  {key}: {json.dumps(doc[key], sort_keys=True)}")
    for name, text in doc.get("polynomials", {}).items():
        lines.append(f"  {name} = {text}")
    for c in doc["checks"]:
        mark = "pass" if c["pass"] else "FAIL"
        lines.append(f"  [{mark}] {c['name']}: expected {json.dumps(c['expected'])}, "
                     f"computed {json.dumps(c['computed'])}")
    lines.append(f"  overall: {'pass' if doc['overall'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def cmd_inspect(args) -> int:
    subject = args.subject
    if subject == "nagata":
        doc = nagata_document()
    elif subject == "kawanoue":
        if args.l is None or args.m is None:
            raise InputError("inspect kawanoue needs --l and --m")
        if args.l < 1 or args.m < 1:
            raise InputError("l and m must be >= 1")
        doc = kawanoue_document(args.l, args.m)
    elif subject == "bracket":
        if args.f is None or args.g is None:
            raise InputError("inspect bracket needs --f and --g")
        doc = bracket_document(args.f, args.g, args.laurent)
    else:
        if args.f is None:
            raise InputError("inspect degrees needs --f")
        weights = None
        if args.weights:
            try:
                weights = [Fraction(w.strip()) for w in args.weights.split(",")]
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"bad weights {args.weights!r}") from exc
        doc = degrees_document(args.f, weights, args.laurent, args.nvars)
    text = dumps(doc) if args.json else _report(doc)
    return _write(text, args.out) or _status([doc])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tameforge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="build and certify the type-I automorphism for (p, q)")
    gen.add_argument("--p", type=int)
    gen.add_argument("--q", type=int)
    gen.add_argument("--grid", help="'pmin..pmax,qmin..qmax'; --out is then a directory (or '-')")
    gen.add_argument("--out", default="-", help="output path, '-' for stdout")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify", help="recompute a certificate and compare")
    ver.add_argument("path", help="certificate file, '-' for stdin")
    ver.set_defaults(func=cmd_verify)

    ins = sub.add_parser("inspect", help="report on a single object")
    ins.add_argument("subject", choices=["nagata", "kawanoue", "bracket", "degrees"])
    ins.add_argument("--l", type=int)
    ins.add_argument("--m", type=int)
    ins.add_argument("--f")
    ins.add_argument("--g")
    ins.add_argument("--weights", help="comma-separated rationals, default all ones")
    ins.add_argument("--nvars", type=int, default=3)
    ins.add_argument("--laurent", action="store_true", help="accept negative exponents")
    ins.add_argument("--json", action="store_true", help="print the JSON document")
    ins.add_argument("--out", default="-")
    ins.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="tameforge: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, FamilyError, PolynomialError, TermLimitExceeded) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
