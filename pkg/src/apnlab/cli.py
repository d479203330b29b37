"""Command-line front end.

Subcommands: field, cu, ddt, walsh, anf, spaces, thickness, twist, regions,
tfl, permpoly, verify.  JSON on stdout is the primary output (fixed key
order, so identical invocations are byte-identical); --format csv|md renders
row-oriented results as tables instead.

Exit codes: 0 success / all claims pass, 1 at least one claim failed,
2 usage error (bad arguments, malformed input files, capacity limits).
"""

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import ccz, claims, trivariate, vbf
from .ccz import ClassContext, TwistError, explore_regions
from .geometry import (VectorSpaceBasis, extract_spaces, thickness,
                       thickness_spectrum_of_spaces, walsh_zeroes)
from .gf2m import element_from_minpoly, make_field, minimal_polynomial
from .trivariate import (TrivariateSpec, build_cu, build_gold, build_tfl,
                         check_symmetries, default_tfl_shift,
                         max_diff_uniformity_cu, quadratic_linearity_cu,
                         search_nonbijectivity_witness, subfield_trace_map)
from .vbf import CapacityError


# ----------------------------------------------------------------- rendering

def _compact(value):
    """Flatten nested values to a short cell string for csv/md output."""
    if isinstance(value, dict):
        return " ".join(f"{k}:{_compact(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return " ".join(str(_compact(v)) for v in value)
    if isinstance(value, bool):
        return str(value).lower()
    return value


def _emit(args, record, rows=None, columns=None):
    """Print one result record: JSON by default, or csv/md rows."""
    fmt = getattr(args, "format", "json")
    if fmt == "json":
        sys.stdout.write(json.dumps(record) + "\n")
        return
    if rows is None:
        columns = ("key", "value")
        rows = [{"key": k, "value": v} for k, v in record.items()]
    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_compact(row.get(c, "")) for c in columns])
    else:  # md
        out = sys.stdout
        out.write("| " + " | ".join(str(c) for c in columns) + " |\n")
        out.write("|" + "|".join(" --- " for _ in columns) + "|\n")
        for row in rows:
            cells = (str(_compact(row.get(c, ""))) for c in columns)
            out.write("| " + " | ".join(cells) + " |\n")


def _spectrum_record(spectrum) -> dict:
    """{value: count} with string keys in ascending numeric order."""
    return {str(k): int(v) for k, v in sorted(
        (int(k), v) for k, v in dict(spectrum).items())}


# ------------------------------------------------------------------- loading

def _load_vbf(path) -> vbf.VBF:
    try:
        return vbf.load_table(path)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}: malformed JSON at byte {exc.pos}: {exc.msg}") from exc


def _save_vbf(f: vbf.VBF, path, fmt: str):
    if fmt == "raw":
        vbf.save_raw(f, path)
    else:
        vbf.save_json(f, path)


# ------------------------------------------------------------ field elements

def _add_field_args(p, require_u=False):
    p.add_argument("--m", type=int, required=True,
                   help="extension degree of the GF(2^m) factor")
    p.add_argument("--modulus", default="default",
                   help="field modulus as a hex int, or 'default'")
    group = p.add_mutually_exclusive_group(required=require_u)
    group.add_argument("--u-minpoly", metavar="BITS",
                       help="minimal polynomial of u as a bit string, "
                            "e.g. 1011 for X^3+X+1")
    group.add_argument("--u", metavar="HEX", help="u as a hex element")


def _resolve_field(args):
    modulus = args.modulus
    if modulus != "default":
        modulus = int(modulus, 16)
    return make_field(args.m, modulus)


def _resolve_u(field, args) -> int:
    if args.u_minpoly is not None:
        if not args.u_minpoly or set(args.u_minpoly) - {"0", "1"}:
            raise ValueError(f"--u-minpoly {args.u_minpoly!r} is not a "
                             "bit string")
        return element_from_minpoly(field, int(args.u_minpoly, 2))
    return int(args.u, 16)


# ----------------------------------------------------------- space artifacts

def _table_digest(f: vbf.VBF) -> str:
    h = hashlib.sha256()
    h.update(int(f.n).to_bytes(2, "little"))
    h.update(np.ascontiguousarray(f.table, dtype="<u4").tobytes())
    return h.hexdigest()[:32]


def _dim_n_spaces(f: vbf.VBF, method="auto"):
    """All dim-n spaces in the Walsh zero set, memoized under APNLAB_CACHE
    (keyed by a content hash of the table) when that variable is set."""
    cache = os.environ.get("APNLAB_CACHE")
    path = None
    if cache:
        path = Path(cache) / f"spaces-{_table_digest(f)}.jsonl"
        if path.exists():
            spaces = []
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        rows = tuple(int(t, 16) for t in line.split(","))
                        spaces.append(VectorSpaceBasis(2 * f.n, rows))
            return spaces
    spaces = extract_spaces(walsh_zeroes(f), method=method)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w") as fh:
            for v in spaces:
                fh.write(",".join(f"{r:x}" for r in v.rows) + "\n")
        os.replace(tmp, path)
    return spaces


def _parse_space_rows(args, n: int):
    if args.space is not None:
        rows = [int(t, 16) for t in args.space.split(",") if t]
    else:
        with open(args.space_file) as fh:
            lines = [line for line in fh if line.strip()]
        if not 0 <= args.index < len(lines):
            raise ValueError(f"{args.space_file}: line index {args.index} "
                             f"out of range 0..{len(lines) - 1}")
        rows = [int(t, 16) for t in json.loads(lines[args.index])["rows"]]
    for r in rows:
        if not 0 < r < (1 << 2 * n):
            raise ValueError(f"space row {r:#x} outside F_2^{2 * n}")
    return VectorSpaceBasis.from_vectors(2 * n, rows)


# --------------------------------------------------------------- subcommands

def _cmd_field(args) -> int:
    field = _resolve_field(args)
    record = {
        "m": field.m,
        "modulus": f"{field.modulus:#x}",
        "modulus_bits": f"{field.modulus:b}",
        "order": field.order,
    }
    if args.u_minpoly is not None or args.u is not None:
        u = _resolve_u(field, args)
        record["u"] = f"{u:#x}"
        record["u_minpoly_bits"] = f"{minimal_polynomial(u, field):b}"
        record["is_seventh_power"] = bool(field.is_seventh_power(u))
    _emit(args, record)
    return 0


def _cmd_cu(args) -> int:
    field = _resolve_field(args)
    u = _resolve_u(field, args)
    spec = TrivariateSpec(field, u)

    table = None

    def full_table():
        nonlocal table
        if table is None:
            table = build_cu(field, u)
        return table

    record = {}
    if args.ddt:
        record["D"] = int(max_diff_uniformity_cu(spec))
    if args.walsh:
        record["linearity"] = int(quadratic_linearity_cu(spec))
    if args.image:
        record["image_size"] = int(full_table().image_size)
    if args.degree:
        record["degree"] = int(vbf.algebraic_degree(full_table()))
    if args.symmetries:
        record["symmetries"] = check_symmetries(field, u, seed=args.seed)
        record["seed"] = args.seed
    if args.search_nonbijectivity_witness:
        rep = search_nonbijectivity_witness(spec, args.max_orbits)
        wit = {"witness_found": rep["found"],
               "checked_orbits": rep["checked_orbits"]}
        if rep["found"]:
            wit["direction"] = [f"{c:#x}" for c in rep["direction"]]
            wit["collision"] = [f"{w:#x}" for w in rep["collision"]]
            wit["value"] = f"{rep['value']:#x}"
        record["witness"] = wit
    if args.out:
        _save_vbf(full_table(), args.out, args.out_format)
        record["out"] = args.out
    if not record:
        record = {"m": field.m, "n": spec.n, "u": f"{u:#x}",
                  "modulus": f"{field.modulus:#x}"}
    _emit(args, record)
    return 0


def _cmd_ddt(args) -> int:
    f = _load_vbf(args.infile)
    if args.row is not None:
        if not 0 < args.row < (1 << f.n):
            raise ValueError(f"--row {args.row} outside 1..{(1 << f.n) - 1}")
        row = vbf.ddt_row(f, args.row)
        hist = np.bincount(row)
        spectrum = {str(v): int(c) for v, c in enumerate(hist) if c}
        record = {"n": f.n, "a": args.row, "row_max": int(row.max()),
                  "spectrum": spectrum}
        rows = [{"value": int(v), "count": int(c)}
                for v, c in enumerate(hist) if c]
    else:
        rep = vbf.ddt(f)
        spectrum = {str(v): int(c)
                    for v, c in enumerate(rep.value_histogram) if c}
        record = {"n": f.n, "D": rep.differential_uniformity,
                  "apn": rep.is_apn, "spectrum": spectrum}
        rows = [{"value": int(v), "count": int(c)}
                for v, c in enumerate(rep.value_histogram) if c]
    _emit(args, record, rows, ("value", "count"))
    return 0


def _cmd_walsh(args) -> int:
    f = _load_vbf(args.infile)
    if args.component is not None:
        if not 0 < args.component < (1 << f.n):
            raise ValueError(
                f"--component {args.component} outside 1..{(1 << f.n) - 1}")
        coeffs = vbf.walsh_component(f, args.component)
        record = {"n": f.n, "b": args.component,
                  "max_abs": int(np.abs(coeffs).max()),
                  "zero_count": int(np.count_nonzero(coeffs == 0))}
    else:
        rep = vbf.walsh(f)
        record = {"n": f.n, "linearity": rep.linearity}
        if args.zeroes:
            record["zero_count"] = walsh_zeroes(f).count
    _emit(args, record)
    return 0


def _cmd_anf(args) -> int:
    f = _load_vbf(args.infile)
    spectrum = vbf.degree_spectrum(f)
    record = {
        "n": f.n,
        "algebraic_degree": int(vbf.algebraic_degree(f)),
        "degree_spectrum": _spectrum_record(spectrum),
        "has_affine_component": bool(vbf.has_affine_component(f)),
    }
    rows = [{"degree": k, "count": v} for k, v in sorted(spectrum.items())]
    _emit(args, record, rows, ("degree", "count"))
    return 0


def _cmd_spaces(args) -> int:
    f = _load_vbf(args.infile)
    if args.dim is None or args.dim == f.n:
        spaces = _dim_n_spaces(f, method=args.method)
    else:
        spaces = extract_spaces(walsh_zeroes(f), target_dim=args.dim,
                                method=args.method)
    lines = [json.dumps({"rows": [f"{r:x}" for r in v.rows],
                         "thickness": thickness(v)}) for v in spaces]
    if args.out:
        with open(args.out, "w") as fh:
            for line in lines:
                fh.write(line + "\n")
        record = {
            "n": f.n,
            "dim": f.n if args.dim is None else args.dim,
            "count": len(spaces),
            "thickness_spectrum":
                _spectrum_record(thickness_spectrum_of_spaces(spaces)),
            "out": args.out,
        }
        _emit(args, record)
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
    return 0


def _cmd_thickness(args) -> int:
    f = _load_vbf(args.infile)
    spaces = _dim_n_spaces(f)
    spectrum = thickness_spectrum_of_spaces(spaces)
    record = {"n": f.n, "space_count": len(spaces),
              "spectrum": _spectrum_record(spectrum)}
    rows = [{"thickness": k, "count": v} for k, v in sorted(spectrum.items())]
    _emit(args, record, rows, ("thickness", "count"))
    return 0


def _cmd_twist(args) -> int:
    f = _load_vbf(args.infile)
    v = _parse_space_rows(args, f.n)
    g = ccz.twist(f, v)
    record = {
        "n": f.n,
        "space": [f"{r:x}" for r in v.rows],
        "thickness": thickness(v),
        "permutation": g.is_permutation,
    }
    if args.out:
        _save_vbf(g, args.out, args.out_format)
        record["out"] = args.out
    _emit(args, record)
    return 0


def _parse_region_filter(spec: str):
    key, _, value = spec.partition("=")
    if key != "thickness" or not value:
        raise ValueError(f"--filter {spec!r}: expected thickness=T[,T...]")
    return set(int(t) for t in value.split(","))


def _cmd_regions(args) -> int:
    f = _load_vbf(args.infile)
    thicknesses = (_parse_region_filter(args.filter)
                   if args.filter is not None else None)
    context = ClassContext(f, spaces=_dim_n_spaces(f))
    table = explore_regions(f, thicknesses=thicknesses, sample=args.sample,
                            seed=args.seed, checkpoint=args.checkpoint,
                            context=context)
    payload = table.as_dict()
    rows = [dict(r.as_dict(), region=i + 1)
            for i, r in enumerate(table.regions)]
    columns = ("region", "twist", "degree_spectrum", "thickness_spectrum",
               "permutation", "count")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(json.dumps(payload, indent=2) + "\n")
        record = {"n": table.n, "space_count": table.z,
                  "selected": table.selected,
                  "region_count": len(table.regions),
                  "degenerate_count": len(table.degenerate),
                  "seed": table.seed, "out": args.out}
        _emit(args, record, rows, columns)
    else:
        _emit(args, payload, rows, columns)
    return 0


def _cmd_tfl(args) -> int:
    if args.family == "cu":
        if args.m is None or (args.u_minpoly is None and args.u is None):
            raise ValueError("--family cu needs --m and --u-minpoly or --u")
        field = _resolve_field(args)
        u = _resolve_u(field, args)
        f = build_cu(field, u)
        shift = default_tfl_shift(field)
    else:  # gold
        if args.n is None:
            raise ValueError("--family gold needs --n")
        field = make_field(args.n)
        f = build_gold(field, args.i)
        shift = subfield_trace_map(field, args.i)
    t = build_tfl(f, shift)
    record = {"family": args.family, "n": t.n,
              "permutation": t.is_permutation,
              "degree": int(vbf.algebraic_degree(t))}
    if t.is_permutation:
        tinv = vbf.inverse(t)
        record["inverse_degree"] = int(vbf.algebraic_degree(tinv))
        record["inverse_D"] = int(vbf.differential_uniformity(tinv))
        record["inverse_linearity"] = int(vbf.linearity(tinv))
    if args.out:
        _save_vbf(t, args.out, args.out_format)
        record["out"] = args.out
    _emit(args, record)
    return 0


def _cmd_permpoly(args) -> int:
    record = {"n": args.n, "i": args.i, "j": args.j,
              "permutation": trivariate.permpoly_check(args.n, args.i, args.j)}
    _emit(args, record)
    return 0


def _cmd_verify(args) -> int:
    ids = cost = None
    if args.filter in ("seconds", "minutes", "hours"):
        cost = args.filter
    elif args.filter != "all":
        ids = [s.strip() for s in args.filter.split(",") if s.strip()]
    results = claims.run_claims(ids=ids, cost_class=cost)
    for r in results:
        print(f"{r.status.upper():5s} {r.id} ({r.runtime:.2f}s)")
    tally = {"pass": 0, "fail": 0, "error": 0}
    for r in results:
        tally[r.status] += 1
    print(f"{tally['pass']}/{len(results)} passed, "
          f"{tally['fail']} failed, {tally['error']} errors")
    if args.report:
        payload = {"filter": args.filter, "summary": tally,
                   "results": [r.as_dict() for r in results]}
        with open(args.report, "w") as fh:
            fh.write(json.dumps(payload, indent=2) + "\n")
    if args.junit:
        _write_junit(results, args.junit)
    return 0 if tally["fail"] == 0 and tally["error"] == 0 else 1


def _write_junit(results, path):
    import xml.etree.ElementTree as ET
    suite = ET.Element("testsuite", {
        "name": "apnlab.claims",
        "tests": str(len(results)),
        "failures": str(sum(r.status == "fail" for r in results)),
        "errors": str(sum(r.status == "error" for r in results)),
        "time": f"{sum(r.runtime for r in results):.3f}",
    })
    for r in results:
        case = ET.SubElement(suite, "testcase", {
            "classname": "apnlab.claims",
            "name": r.id,
            "time": f"{r.runtime:.3f}",
        })
        if r.status == "fail":
            fail = ET.SubElement(case, "failure", {
                "message": json.dumps(r.counterexample)})
            fail.text = json.dumps(r.as_dict(), indent=2)
        elif r.status == "error":
            ET.SubElement(case, "error", {"message": str(r.observed)})
    ET.ElementTree(suite).write(path, encoding="unicode",
                                xml_declaration=True)


# -------------------------------------------------------------------- parser

def _add_format(p):
    p.add_argument("--format", choices=("json", "csv", "md"), default="json",
                   help="output rendering (default json)")


def _add_jobs(p):
    p.add_argument("--jobs", type=int, default=None, metavar="N",
                   help="worker cap; outputs are identical for every setting")


def _add_table_out(p):
    p.add_argument("--out", help="write the resulting table to this path")
    p.add_argument("--out-format", choices=("json", "raw"), default="json",
                   help="table file format for --out (default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apnlab",
        description="Construct and analyze vectorial Boolean functions over "
                    "(GF(2^m))^3: differential uniformity, Walsh spectra, "
                    "Walsh-zero geometry, and CCZ-class region exploration.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("field", help="field and element parameters")
    _add_field_args(p)
    _add_format(p)
    p.set_defaults(func=_cmd_field)

    p = sub.add_parser("cu", help="build and analyze the trivariate family")
    _add_field_args(p, require_u=True)
    p.add_argument("--ddt", action="store_true",
                   help="differential uniformity D via derivative kernels")
    p.add_argument("--walsh", action="store_true",
                   help="linearity via the quadratic component kernels")
    p.add_argument("--image", action="store_true", help="image size")
    p.add_argument("--degree", action="store_true", help="algebraic degree")
    p.add_argument("--symmetries", action="store_true",
                   help="check rotation equivariance and cube homogeneity")
    p.add_argument("--search-nonbijectivity-witness", action="store_true",
                   help="look for a collision; reports found / not found")
    p.add_argument("--max-orbits", type=int, default=None,
                   help="cap the witness search at this many orbits")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed for sampled symmetry checks (default 0)")
    _add_table_out(p)
    _add_format(p)
    p.set_defaults(func=_cmd_cu)

    p = sub.add_parser("ddt", help="difference distribution of a table file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--row", type=lambda s: int(s, 0), default=None,
                   help="only the DDT row of this input difference")
    _add_format(p)
    p.set_defaults(func=_cmd_ddt)

    p = sub.add_parser("walsh", help="Walsh spectrum of a table file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--component", type=lambda s: int(s, 0), default=None,
                   help="one component's transform instead of the summary")
    p.add_argument("--zeroes", action="store_true",
                   help="also count Walsh zeroes")
    _add_format(p)
    p.set_defaults(func=_cmd_walsh)

    p = sub.add_parser("anf", help="algebraic degree data of a table file")
    p.add_argument("--in", dest="infile", required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_anf)

    p = sub.add_parser("spaces",
                       help="vector spaces inside the Walsh zero set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--dim", type=int, default=None,
                   help="space dimension (default n)")
    p.add_argument("--method", choices=("auto", "structural", "generic"),
                   default="auto")
    p.add_argument("--out", help="write one space per line (JSON) here")
    _add_jobs(p)
    _add_format(p)
    p.set_defaults(func=_cmd_spaces)

    p = sub.add_parser("thickness", help="thickness spectrum of a table file")
    p.add_argument("--in", dest="infile", required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_thickness)

    p = sub.add_parser("twist",
                       help="CCZ twist along a space of the zero set")
    p.add_argument("--in", dest="infile", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--space",
                       help="comma-separated hex basis rows of the space")
    group.add_argument("--space-file",
                       help="spaces file as written by the spaces subcommand")
    p.add_argument("--index", type=int, default=0,
                   help="line number in --space-file (default 0)")
    _add_table_out(p)
    _add_format(p)
    p.set_defaults(func=_cmd_twist)

    p = sub.add_parser("regions",
                       help="partition zero-set spaces by twist signature")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--filter", default=None, metavar="thickness=T[,T...]",
                   help="restrict to source spaces of these thicknesses")
    p.add_argument("--sample", type=int, default=None,
                   help="sample this many spaces from the selection")
    p.add_argument("--seed", type=int, default=0,
                   help="RNG seed for --sample (default 0)")
    p.add_argument("--checkpoint",
                   help="JSONL resume file keyed by space basis")
    p.add_argument("--out", help="write the full region table here")
    _add_jobs(p)
    _add_format(p)
    p.set_defaults(func=_cmd_regions)

    p = sub.add_parser("tfl",
                       help="shifted-inverse permutation construction")
    p.add_argument("--family", choices=("cu", "gold"), default="cu")
    p.add_argument("--m", type=int, default=None,
                   help="GF(2^m) factor degree for --family cu")
    p.add_argument("--modulus", default="default")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--u-minpoly", metavar="BITS")
    group.add_argument("--u", metavar="HEX")
    p.add_argument("--n", type=int, default=None,
                   help="field degree for --family gold")
    p.add_argument("--i", type=int, default=1,
                   help="power-map exponent parameter (default 1)")
    _add_table_out(p)
    _add_format(p)
    p.set_defaults(func=_cmd_tfl)

    p = sub.add_parser("permpoly",
                       help="permutation-polynomial check for the shift family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_permpoly)

    p = sub.add_parser("verify", help="run the claim registry")
    p.add_argument("--filter", default="all",
                   help="all | seconds | minutes | hours | id[,id...]")
    p.add_argument("--report", help="write a JSON report here")
    p.add_argument("--junit", help="write a JUnit XML report here")
    _add_jobs(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        print(f"error: --jobs {args.jobs} must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (CapacityError, TwistError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
