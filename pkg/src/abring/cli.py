"""Command-line interface and the JSON category file format.

Category file::

    {"name": str, "objects": [str],
     "morphisms": [{"name": str, "src": str, "dst": str}],
     "compose": {"<outer>|<inner>": "<result>"},
     "epis": [str], "monos": [str]}          # optional, together

Identities are implicit and named ``id:<object>``; composites involving
them are implied by the identity laws and may not be listed.

Exit codes: 0 success, 1 validation failure, 2 no factorization system,
3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import factorial, prod
from pathlib import Path
from typing import Sequence

from . import golden
from .burnside import (BurnsideRing, RingElement, burnside_ring, check_eam,
                       eam_matrices, inclusion_kernel)
from .catgen import (MAX_GROUP_ORDER, GroupAxiomError, gen_cyclic, gen_epi,
                     gen_orbit_category, group_from_cayley)
from .combi import epi_hom_closed_form, epi_inverse_last_row, surj_count
from .fincat import (FactorizationSystem, FinCat, InvalidCategory, NoFactorizationSystem,
                     aut_orders, validate_category, verify_factorization_system)
from .ratmat import RatMatrix, format_rational, mat_det, mat_inverse

EXIT_OK, EXIT_INVALID, EXIT_NO_FS, EXIT_IO = 0, 1, 2, 3
MAX_EPI_D = 6
_KEYS = ("name", "objects", "morphisms", "compose", "epis", "monos")


class CatFileError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


# -- category files ---------------------------------------------------------------

def identity_name(obj: str) -> str:
    return f"id:{obj}"


def category_to_catfile(cat: FinCat, fs: FactorizationSystem | None = None) -> dict:
    idents = set()
    for o in cat.objects:
        if cat.identity(o) != identity_name(o):
            raise ValueError(f"identity of {o} must be named {identity_name(o)!r}")
        idents.add(identity_name(o))
    for m in cat.morphisms:
        if "|" in m:
            raise ValueError(f"morphism name {m!r} contains '|'")
    doc = {
        "name": cat.name,
        "objects": list(cat.objects),
        "morphisms": [{"name": m, "src": cat.src(m), "dst": cat.dst(m)}
                      for m in cat.morphisms if m not in idents],
        "compose": {f"{g}|{f}": r for g, f, r in cat.composition_entries()
                    if g not in idents and f not in idents},
    }
    if fs is not None:
        doc["epis"] = sorted(fs.epi_class)
        doc["monos"] = sorted(fs.mono_class)
    return doc


def dump_catfile(cat: FinCat, fs: FactorizationSystem | None = None) -> str:
    return json.dumps(category_to_catfile(cat, fs), indent=1) + "\n"


def _expect(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise CatFileError(path, message)


def _string_list(doc, key: str) -> list[str]:
    val = doc[key]
    _expect(isinstance(val, list), f"$.{key}", "expected a list")
    for i, x in enumerate(val):
        _expect(isinstance(x, str), f"$.{key}[{i}]", "expected a string")
    return val


def parse_catfile(text: str) -> tuple[FinCat, FactorizationSystem | None]:
    """Parse and validate a category file.

    Raises :class:`CatFileError` for malformed input, :class:`InvalidCategory`
    when the axioms fail and :class:`NoFactorizationSystem` when explicit
    ``epis``/``monos`` classes do not form one.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    _expect(isinstance(doc, dict), "$", "expected a JSON object")
    for key in doc:
        _expect(key in _KEYS, f"$.{key}", "unknown key")
    for key in _KEYS[:4]:
        _expect(key in doc, f"$.{key}", "missing required key")
    _expect(isinstance(doc["name"], str), "$.name", "expected a string")
    _expect(("epis" in doc) == ("monos" in doc), "$", "'epis' and 'monos' must be given together")

    objects = _string_list(doc, "objects")
    _expect(len(set(objects)) == len(objects), "$.objects", "duplicate object")
    objset = set(objects)

    morphisms = [(identity_name(o), o, o) for o in objects]
    names = {m[0] for m in morphisms}
    _expect(isinstance(doc["morphisms"], list), "$.morphisms", "expected a list")
    for i, entry in enumerate(doc["morphisms"]):
        path = f"$.morphisms[{i}]"
        _expect(isinstance(entry, dict) and set(entry) == {"name", "src", "dst"},
                path, "expected an object with keys name, src, dst")
        for k in ("name", "src", "dst"):
            _expect(isinstance(entry[k], str), f"{path}.{k}", "expected a string")
        name = entry["name"]
        _expect(not name.startswith("id:"), f"{path}.name", "names starting with 'id:' are reserved")
        _expect("|" not in name, f"{path}.name", "names may not contain '|'")
        _expect(name not in names, f"{path}.name", f"duplicate morphism {name!r}")
        for k in ("src", "dst"):
            _expect(entry[k] in objset, f"{path}.{k}", f"unknown object {entry[k]!r}")
        names.add(name)
        morphisms.append((name, entry["src"], entry["dst"]))
    src = {m[0]: m[1] for m in morphisms}
    dst = {m[0]: m[2] for m in morphisms}

    compose: dict[tuple[str, str], str] = {}
    _expect(isinstance(doc["compose"], dict), "$.compose", "expected an object")
    for key, result in doc["compose"].items():
        path = f"$.compose[{json.dumps(key)}]"
        parts = key.split("|")
        _expect(len(parts) == 2, path, "key must be '<outer>|<inner>'")
        outer, inner = parts
        for m in (outer, inner):
            _expect(m in names, path, f"unknown morphism {m!r}")
            _expect(not m.startswith("id:"), path, "composites with identities are implicit")
        _expect(isinstance(result, str) and result in names, path, f"unknown result {result!r}")
        compose[(outer, inner)] = result
    for name, s, d in morphisms:
        compose[(name, identity_name(s))] = name
        compose[(identity_name(d), name)] = name

    cat = FinCat(doc["name"], objects, morphisms,
                 {o: identity_name(o) for o in objects}, compose)
    report = validate_category(cat)
    if not report.ok:
        raise InvalidCategory(report)
    fs = None
    if "epis" in doc:
        epis, monos = _string_list(doc, "epis"), _string_list(doc, "monos")
        fs = FactorizationSystem(frozenset(epis), frozenset(monos))
        findings = verify_factorization_system(cat, fs)
        if findings:
            raise NoFactorizationSystem(findings)
    return cat, fs


# -- reports ------------------------------------------------------------------------

def _element_json(ring: BurnsideRing, x: RingElement) -> dict[str, str]:
    return {o: format_rational(x.coefficient(o)) for o in ring.basis if x.coefficient(o)}


def _marks_json(vec) -> list[str]:
    return [format_rational(v) for v in vec]


SECTIONS = ("eam", "det", "idempotents", "mult_table")


def build_report(cat: FinCat, fs: FactorizationSystem | None = None,
                 sections: Sequence[str] = SECTIONS) -> dict:
    """Full analysis of ``cat`` as plain JSON data (rationals as strings)."""
    report = validate_category(cat)
    out: dict = {
        "category": cat.name,
        "validation": {"mode": report.mode, "findings": [str(f) for f in report.findings]},
    }
    if not report.ok:
        raise InvalidCategory(report)
    ring = burnside_ring(cat, fs)
    out["objects"] = list(ring.basis)
    out["hom_matrix"] = ring.H.to_strings()
    out["hom_matrix_inverse"] = ring.H_inv.to_strings()
    out["unit"] = _element_json(ring, ring.unit)
    if "eam" in sections:
        e, a, m = eam_matrices(cat, ring.factorization, ring.basis)
        out["eam"] = {"E": e.to_strings(), "A": a.to_strings(), "M": m.to_strings(),
                      "H_equals_EAM": check_eam(cat, ring.factorization)}
    if "det" in sections:
        det = mat_det(ring.H)
        auts = prod(aut_orders(cat))
        out["det"] = {"det_H": format_rational(det), "product_of_aut_orders": str(auts),
                      "equal": det == auts}
    if "idempotents" in sections:
        out["idempotents"] = {o: _element_json(ring, e) for o, e in zip(ring.basis, ring.idempotents())}
    if "mult_table" in sections:
        out["structure_constants"] = [
            {"left": a, "right": b, "product": _element_json(ring, x)}
            for (a, b), x in ring.structure_constants().items()]
    return out


def _format_coeffs(coeffs: dict[str, str]) -> str:
    return RingElement({k: Fraction(v) for k, v in coeffs.items()}).format(list(coeffs))


def _format_matrix(rows: list[list[str]], indent: str = "  ") -> list[str]:
    if not rows or not rows[0]:
        return [indent + "(empty)"]
    width = max(len(x) for r in rows for x in r)
    return [indent + " ".join(x.rjust(width) for x in r) for r in rows]


def render_text(rep: dict) -> str:
    lines = [f"category: {rep['category']}"]
    val = rep["validation"]
    lines.append(f"validation: {'ok' if not val['findings'] else 'FAILED'} ({val['mode']})")
    lines.extend(f"  {f}" for f in val["findings"])
    if "objects" not in rep:
        return "\n".join(lines) + "\n"
    lines.append("objects: " + ", ".join(rep["objects"]))
    lines.append("H:")
    lines.extend(_format_matrix(rep["hom_matrix"]))
    lines.append("H^-1:")
    lines.extend(_format_matrix(rep["hom_matrix_inverse"]))
    lines.append(f"unit: {_format_coeffs(rep['unit'])}")
    if "eam" in rep:
        for key in ("E", "A", "M"):
            lines.append(f"{key}:")
            lines.extend(_format_matrix(rep["eam"][key]))
        lines.append(f"H = EAM: {rep['eam']['H_equals_EAM']}")
    if "det" in rep:
        d = rep["det"]
        lines.append(f"det(H) = {d['det_H']}; product of |Aut(c)| = {d['product_of_aut_orders']}")
    if "idempotents" in rep:
        lines.append("idempotents:")
        lines.extend(f"  e_{o} = {_format_coeffs(c)}" for o, c in rep["idempotents"].items())
    if "structure_constants" in rep:
        lines.append("multiplication:")
        lines.extend(f"  {s['left']} * {s['right']} = {_format_coeffs(s['product'])}"
                     for s in rep["structure_constants"])
    return "\n".join(lines) + "\n"


def restriction_report(cat: FinCat, objects: Sequence[str],
                       fs: FactorizationSystem | None = None) -> dict:
    ring = burnside_ring(cat, fs)
    res = inclusion_kernel(cat, objects, ring=ring)
    rmap = res.ring_map
    return {
        "category": cat.name,
        "subcategory_objects": list(rmap.source_ring.basis),
        "hypothesis": "holds" if res.hypothesis_holds else "fails",
        "offending_morphism": res.offending_morphism,
        "kernel_kind": res.kind,
        "restriction_matrix": {"rows": list(rmap.source_ring.basis),
                               "cols": list(ring.basis),
                               "entries": rmap.matrix.to_strings()},
        "kernel_basis": [_element_json(ring, x) for x in res.basis],
    }


def render_restriction(rep: dict) -> str:
    lines = [f"category: {rep['category']}",
             "subcategory: " + ", ".join(rep["subcategory_objects"]),
             f"hypothesis (no maps from the subcategory to the rest): {rep['hypothesis']}"]
    if rep["offending_morphism"]:
        lines.append(f"  offending morphism: {rep['offending_morphism']}")
    lines.append("restriction matrix (rows: subcategory basis, cols: full basis):")
    lines.extend(_format_matrix(rep["restriction_matrix"]["entries"]))
    lines.append(f"kernel ({rep['kernel_kind']}):")
    lines.extend(f"  {_format_coeffs(c)}" for c in rep["kernel_basis"])
    if not rep["kernel_basis"]:
        lines.append("  0")
    return "\n".join(lines) + "\n"


# -- golden reproduction ---------------------------------------------------------------

def _strings(m: RatMatrix) -> list[list[str]]:
    return m.to_strings()


def _idem_table(ring: BurnsideRing) -> dict:
    return {o: _element_json(ring, e) for o, e in zip(ring.basis, ring.idempotents())}


def golden_checks() -> list[tuple[str, bool, str]]:
    """Run every reference check; returns ``(name, passed, detail)`` triples."""
    results: list[tuple[str, bool, str]] = []

    def check(name, got, want):
        results.append((name, got == want, "" if got == want else f"got {got!r}, want {want!r}"))

    rings = {d: burnside_ring(gen_epi(d)) for d in (2, 3, 4)}
    tables = {2: (golden.EPI2_H, golden.EPI2_H_INV, golden.EPI2_IDEMPOTENTS),
              3: (golden.EPI3_H, golden.EPI3_H_INV, golden.EPI3_IDEMPOTENTS),
              4: (golden.EPI4_H, golden.EPI4_H_INV, golden.EPI4_IDEMPOTENTS)}
    for d, (h, h_inv, idem) in tables.items():
        ring = rings[d]
        check(f"Epi<={d}: object order", list(ring.basis), [f"[{k}]" for k in range(1, d + 1)])
        check(f"Epi<={d}: hom-set matrix", _strings(ring.H), h)
        check(f"Epi<={d}: inverse", _strings(ring.H_inv), h_inv)
        check(f"Epi<={d}: idempotents", _idem_table(ring), {o: idem[o] for o in ring.basis})
    epi4 = rings[4].category
    check("Epi<=4: |C([4],[2])| = 14", epi4.hom_count("[4]", "[2]"), 14)
    check("Epi<=4: |C([4],[3])| = 36", epi4.hom_count("[4]", "[3]"), 36)

    c6 = burnside_ring(gen_orbit_category(gen_cyclic(6)))
    check("Orb(C6): object order", list(c6.basis), ["C6/C6", "C6/C3", "C6/C2", "C6/C1"])
    check("Orb(C6): hom-set matrix", _strings(c6.H), golden.C6_H)
    check("Orb(C6): inverse", _strings(c6.H_inv), golden.C6_H_INV)
    check("Orb(C6): idempotents", _idem_table(c6), {o: golden.C6_IDEMPOTENTS[o] for o in c6.basis})
    check("Orb(C6): unit", _element_json(c6, c6.unit), {golden.C6_UNIT: "1"})
    for a, b, want in golden.C6_PRODUCTS:
        got = _element_json(c6, c6.multiply(c6.basis_element(a), c6.basis_element(b)))
        check(f"Orb(C6): {a} * {b}", got, want)
    orb2 = burnside_ring(gen_orbit_category(gen_cyclic(2)))
    check("Orb(C2) and Epi<=2 share the hom-set matrix", _strings(orb2.H), golden.EPI2_H)

    for d in range(1, MAX_EPI_D + 1):
        ring = rings.get(d) or burnside_ring(gen_epi(d))
        rings[d] = ring
        check(f"Epi<={d}: H = EAM", check_eam(ring.category, ring.factorization), True)
        check(f"Epi<={d}: det(H) = prod |Aut|", mat_det(ring.H), Fraction(prod(factorial(k) for k in range(1, d + 1))))
        check(f"Epi<={d}: hom counts j! S(i,j)", _strings(ring.H), _strings(epi_hom_closed_form(d)))
        check(f"Epi<={d}: last row of H^-1 = s(d,k)/d!", list(ring.H_inv.row(d - 1)), epi_inverse_last_row(d))
        check(f"Epi<={d}: top idempotent = [d]/d!", ring.idempotent(f"[{d}]"),
              ring.element({f"[{d}]": Fraction(1, factorial(d))}))
        if d >= 2:
            res = inclusion_kernel(ring.category, [f"[{k}]" for k in range(1, d)], ring=ring)
            check(f"Epi<={d - 1} in Epi<={d}: kernel = <[{d}]>",
                  (res.hypothesis_holds, res.basis), (True, (ring.basis_element(f"[{d}]"),)))
    check("surj(4,2) = 14, surj(4,3) = 36", (surj_count(4, 2), surj_count(4, 3)), (14, 36))
    return results


# -- argparse -----------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def _split_objects(text: str) -> list[str]:
    """Split on commas that are not nested inside brackets or braces."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [o for o in out if o]


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _emit_json(data) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _cmd_gen(args) -> int:
    if args.family == "epi":
        if not 1 <= args.d <= MAX_EPI_D:
            print(f"error: --d must be between 1 and {MAX_EPI_D}", file=sys.stderr)
            return EXIT_IO
        cat = gen_epi(args.d)
    else:
        if args.cyclic is not None:
            if not 1 <= args.cyclic <= MAX_GROUP_ORDER:
                print(f"error: --cyclic must be between 1 and {MAX_GROUP_ORDER}", file=sys.stderr)
                return EXIT_IO
            group = gen_cyclic(args.cyclic)
        else:
            data = json.loads(_read_input(args.cayley))
            group = group_from_cayley(data, name=args.name)
            if group.order > MAX_GROUP_ORDER:
                print(f"error: group order exceeds {MAX_GROUP_ORDER}", file=sys.stderr)
                return EXIT_IO
        cat = gen_orbit_category(group)
    _write_output(dump_catfile(cat), args.output)
    return EXIT_OK


def _sections(args) -> tuple[str, ...]:
    chosen = tuple(s for s, flag in (("eam", args.eam), ("det", args.det),
                                     ("idempotents", args.idempotents),
                                     ("mult_table", args.mult_table)) if flag)
    return chosen or SECTIONS


def _cmd_analyze(args) -> int:
    cat, fs = parse_catfile(_read_input(args.file))
    rep = build_report(cat, fs, _sections(args))
    if args.json:
        _emit_json(rep)
    else:
        sys.stdout.write(render_text(rep))
    return EXIT_OK


def _cmd_restrict(args) -> int:
    cat, fs = parse_catfile(_read_input(args.file))
    objects = _split_objects(args.objects)
    unknown = [o for o in objects if o not in cat.objects]
    if unknown:
        print(f"error: unknown objects {unknown}", file=sys.stderr)
        return EXIT_IO
    rep = restriction_report(cat, objects, fs)
    if args.json:
        _emit_json(rep)
    else:
        sys.stdout.write(render_restriction(rep))
    return EXIT_OK


def _cmd_stirling(args) -> int:
    if args.d < 1:
        print("error: --d must be >= 1", file=sys.stderr)
        return EXIT_IO
    h = epi_hom_closed_form(args.d)
    row = epi_inverse_last_row(args.d)
    if args.json:
        _emit_json({"d": args.d, "hom_matrix": h.to_strings(),
                    "inverse_last_row": [format_rational(x) for x in row]})
    else:
        lines = [f"Epi<={args.d} hom-set matrix (|surj(i,j)| = j! S(i,j)):"]
        lines.extend(_format_matrix(h.to_strings()))
        lines.append("last row of H^-1 (s(d,k)/d!):")
        lines.append("  " + " ".join(format_rational(x) for x in row))
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = golden_checks()
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        failed += not ok
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abring", description="Rational Burnside rings of finite skeletal categories.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="emit a built-in category as a category file")
    gsub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    ge = gsub.add_parser("epi", help="Epi<=d, surjections between [1]..[d]")
    ge.add_argument("--d", type=int, required=True)
    ge.add_argument("-o", "--output")
    ge.set_defaults(func=_cmd_gen)
    go = gsub.add_parser("orbit", help="orbit category of a finite group")
    src = go.add_mutually_exclusive_group(required=True)
    src.add_argument("--cyclic", type=int, metavar="N")
    src.add_argument("--cayley", metavar="FILE", help='JSON {"elements": [...], "table": [[...]]}')
    go.add_argument("--name", default="G", help="group name used in object labels")
    go.add_argument("-o", "--output")
    go.set_defaults(func=_cmd_gen)

    an = sub.add_parser("analyze", help="Burnside ring report for a category file")
    an.add_argument("file", nargs="?", default="-")
    an.add_argument("--json", action="store_true")
    an.add_argument("--eam", action="store_true", help="E, A, M matrices and H = EAM")
    an.add_argument("--idempotents", action="store_true")
    an.add_argument("--mult-table", action="store_true", dest="mult_table")
    an.add_argument("--det", action="store_true")
    an.set_defaults(func=_cmd_analyze)

    rs = sub.add_parser("restrict", help="restriction to a full subcategory and its kernel")
    rs.add_argument("file", nargs="?", default="-")
    rs.add_argument("--objects", required=True, help="comma-separated object labels")
    rs.add_argument("--json", action="store_true")
    rs.set_defaults(func=_cmd_restrict)

    st = sub.add_parser("stirling", help="closed-form Epi<=d matrix and last inverse row")
    st.add_argument("--d", type=int, required=True)
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=_cmd_stirling)

    vp = sub.add_parser("verify-paper", help="reproduce every reference table")
    vp.set_defaults(func=_cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:      # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_IO
    try:
        return args.func(args)
    except InvalidCategory as exc:
        print("validation failed:", file=sys.stderr)
        for f in exc.report.findings:
            print(f"  {f}", file=sys.stderr)
        return EXIT_INVALID
    except GroupAxiomError as exc:
        print(f"invalid group: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoFactorizationSystem as exc:
        print("no epi-mono factorization system; not certified as a Burnside ring:", file=sys.stderr)
        for f in exc.findings:
            print(f"  {f}", file=sys.stderr)
        return EXIT_NO_FS
    except (CatFileError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


run = main


if __name__ == "__main__":
    sys.exit(main())
