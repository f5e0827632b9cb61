"""Command-line front end.

One process runs one job: parse the poset and optional characteristic map
and profile, run the selected checks, and emit one deterministic JSON or
markdown report.  Exit status 0 means every selected check passed, 1 means
some mathematical check failed, 2 means the input was unusable.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .field import field_from_name
from .poset import PosetError, preset as poset_preset, validate, face_counts
from .complexes import classify
from .sheaves import standard_sheaf, sheaf_cohomology, constancy_check
from .facevec import face_vectors, ft_consistency_check, dehn_sommerville_check
from .torusalg import (TorusSheafKit, validate_charmap, keylemma_check,
                       duality_check, les_duality_check)
from .specseq import (cone_profile, validate_profile, pages, bigraded_betti,
                      theorem_checks, e2_border_sheaf_crosscheck)
from .facering import relation_system, graded_quotient_rank, kernel_generators
from .formats import (FormatError, parse_cover_table, parse_facet_list,
                      parse_charmap, parse_profile)

COMMANDS = ("validate", "vectors", "charmap", "sheaf", "verify", "specseq",
            "facering", "all")


class InputProblem(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(
        prog="torushom",
        description="Exact homology invariants of torus spaces over "
                    "Buchsbaum simplicial posets")
    p.add_argument("command", choices=COMMANDS)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", help="named example poset, e.g. torus_7 or "
                                      "digon_cycle(2)")
    src.add_argument("--poset", help="cover-table file (simplicial-poset v1)")
    src.add_argument("--facets", help="facet-list file (facets v1)")
    p.add_argument("--charmap", help="characteristic map file (charmap v1)")
    p.add_argument("--profile", help="manifold profile JSON file; cone by default")
    p.add_argument("--field", default="Q", help="Q or Fp:<p> (default Q)")
    p.add_argument("--out", choices=("json", "md"), default="json")
    p.add_argument("--checks", help="comma-separated subset of checks to run")
    p.add_argument("--primes", default="2,3,5",
                   help="extra primes for the classification report")
    return p


def load_poset(args):
    if args.preset:
        return poset_preset(args.preset)
    if args.poset:
        return parse_cover_table(_read(args.poset), name=Path(args.poset).stem)
    if args.facets:
        return parse_facet_list(_read(args.facets), name=Path(args.facets).stem)
    raise InputProblem("one of --preset, --poset, --facets is required")


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputProblem(str(e)) from None


def load_charmap(args):
    if not args.charmap:
        raise InputProblem("this command needs --charmap")
    return parse_charmap(_read(args.charmap))


def load_profile(args, S, field):
    if args.profile:
        P = parse_profile(_read(args.profile))
        diag = validate_profile(S, P, field)
        if not diag.ok:
            raise InputProblem("invalid profile: " + "; ".join(diag.messages))
        return P
    return cone_profile(S, field)


def selected(args, name):
    if not args.checks:
        return True
    return name in {c.strip() for c in args.checks.split(",") if c.strip()}


def run(args) -> tuple[dict, int]:
    field = field_from_name(args.field)
    S = load_poset(args)
    report = {"command": args.command, "poset": S.name or "(file)",
              "field": field.name, "results": {}}
    results = report["results"]
    failed = False

    def record(name, payload, ok):
        nonlocal failed
        results[name] = payload
        if ok is False:
            failed = True

    is_all = args.command == "all"
    want_validate = args.command in ("validate", "all")
    want_vectors = args.command in ("vectors", "all")
    want_charmap = args.command == "charmap" or (is_all and args.charmap)
    want_sheaf = args.command in ("sheaf", "all")
    want_verify = args.command in ("verify", "all")
    want_specseq = args.command in ("specseq", "all")
    want_facering = args.command in ("facering", "all")
    if args.command in ("charmap", "verify", "facering") and not args.charmap:
        raise InputProblem(f"{args.command} needs --charmap")
    if is_all and not args.charmap:
        # run whatever is possible without a characteristic map
        want_charmap = want_verify = want_facering = False
        results["skipped"] = "charmap, verify, facering (no --charmap given)"

    if want_validate:
        diag = validate(S)
        payload = {"ok": diag.ok, "pure": diag.pure, "dim": diag.dim,
                   "messages": diag.messages, "f": list(face_counts(S)) if diag.pure else []}
        if diag.ok and diag.pure:
            cls = {field.name: classify(S, field).as_dict()}
            if field.name == "Q":
                from .field import PrimeField
                for p in _parse_primes(args.primes):
                    cls[f"F{p}"] = classify(S, PrimeField(p)).as_dict()
            payload["classification"] = cls
            if cls[field.name]["buchsbaum"]:
                cons = constancy_check(standard_sheaf(S, field, "structure"))
                payload["homology_manifold"] = cons.is_constant
                if not cons.is_constant:
                    payload["constancy_witness"] = cons.witness
        record("validate", payload, diag.ok)

    if want_vectors:
        if not S.is_pure():
            raise InputProblem("face vectors need a pure poset")
        fv = face_vectors(S, field)
        ft = ft_consistency_check(S, field)
        payload = {"vectors": fv.as_dict(), "generating_identity": ft.as_dict()}
        ok = ft.passed
        if classify(S, field).buchsbaum:
            ds = dehn_sommerville_check(S, field)
            payload["symmetry"] = ds.as_dict()
            if ds.details.get("applicable", False):
                ok = ok and ds.passed
        record("vectors", payload, ok)

    cmap = None
    kit = None
    if args.charmap:
        cmap = load_charmap(args)
    if want_charmap:
        rep = validate_charmap(S, cmap, field)
        record("charmap", rep.as_dict(), rep.ok_field)

    def need_kit():
        nonlocal kit
        if cmap is None:
            raise InputProblem("this command needs --charmap")
        if kit is None:
            rep = validate_charmap(S, cmap, field)
            if not rep.ok_field:
                raise InputProblem(f"characteristic map invalid over {field.name} "
                                   f"on faces {rep.field_failures}")
            kit = TorusSheafKit(S, cmap, field)
        return kit

    if want_sheaf:
        tables = {}
        if selected(args, "constant"):
            coh = sheaf_cohomology(standard_sheaf(S, field, "constant", dim=1))
            tables["constant"] = {str(k): v for k, v in sorted(coh.dims.items())}
        if S.is_pure() and selected(args, "structure"):
            st = standard_sheaf(S, field, "structure", include_empty=True)
            tables["structure_stalk_dims"] = list(st.stalk_dims)
            coh = sheaf_cohomology(st, truncated=True)
            tables["structure"] = {str(k): v for k, v in sorted(coh.dims.items())}
        record("sheaf", tables, True)

    if want_verify:
        k = need_kit()
        if selected(args, "keylemma"):
            rep = keylemma_check(S, cmap, field, kit=k)
            record("keylemma", rep.as_dict(), rep.passed)
        if selected(args, "duality"):
            rep = duality_check(S, cmap, field, kit=k)
            record("duality", rep.as_dict(), rep.passed)
        if selected(args, "les_duality"):
            rep = les_duality_check(S, cmap, field, kit=k)
            record("les_duality", rep.as_dict(), rep.passed)

    if want_specseq:
        P = load_profile(args, S, field)
        e1p, e2, einf = pages(S, P, field)
        table = bigraded_betti(S, P, field, computed_pages=(e1p, e2, einf))
        payload = {"profile": P.as_dict(), "pages": [e1p.as_dict(), e2.as_dict(),
                                                     einf.as_dict()],
                   "bigraded": table.as_dict()}
        ok = True
        if selected(args, "theorems"):
            rep = theorem_checks(S, P, field)
            payload["theorems"] = rep.as_dict()
            ok = ok and rep.passed
        if cmap is not None and P.source == "cone" and selected(args, "crosscheck") \
                and cmap.n == S.n:
            rep = e2_border_sheaf_crosscheck(S, cmap, field, kit=kit)
            payload["sheaf_crosscheck"] = rep.as_dict()
            ok = ok and rep.passed
        record("specseq", payload, ok)

    if want_facering:
        if cmap is None:
            raise InputProblem("facering needs --charmap")
        P = load_profile(args, S, field)
        R = relation_system(S, cmap, field, profile=P)
        ranks1 = graded_quotient_rank(R, include_type2=False)
        payload = {"first_kind_quotient": {str(q): v for q, v in sorted(ranks1.items())}}
        ok = True
        if R.type2 is not None:
            ranks2 = graded_quotient_rank(R, include_type2=True)
            payload["full_quotient"] = {str(q): v for q, v in sorted(ranks2.items())}
            kg = kernel_generators(R)
            payload["kernel_generators"] = kg.as_dict()
            ok = kg.independent and kg.representative_stable
            fv = face_vectors(S, field)
            agree = all(ranks2[q] == fv.h_double_prime[q] for q in ranks2)
            payload["matches_corrected_vector"] = agree
            ok = ok and agree
        else:
            payload["second_kind"] = "unavailable: " + R.type2_reason
        record("facering", payload, ok)

    report["ok"] = not failed
    return report, (0 if not failed else 1)


def _parse_primes(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            out.append(int(tok))
    return out


def render_markdown(report: dict) -> str:
    lines = [f"# torushom {report['command']}",
             "",
             f"- poset: {report['poset']}",
             f"- field: {report['field']}",
             f"- ok: {report['ok']}",
             ""]
    for name, payload in report["results"].items():
        lines.append(f"## {name}")
        lines.append("")
        lines.append("```json")
        lines.append(json.dumps(payload, sort_keys=True, indent=2))
        lines.append("```")
        lines.append("")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = run(args)
    except (InputProblem, FormatError, PosetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.out == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(render_markdown(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
