"""Command-line front end: ``brstlab <group> <command> [options]``.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage or domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import verify as V
from .errors import BrstlabError, UsageError
from .nilcoh import cohomology_with_coefficients, cohomology_trivial, delta_module
from .rootdata import as_exact, build_root_datum
from .semidet import verify_det_lemma
from .hwa import hwa_reduction, cohomology_hwa, lattice_hwa
from .weyl import (
    AffineWeylElement,
    coweight_window,
    dot_affine,
    dot_finite,
    dot_orbit_collision,
    level_predicates,
    weyl_group,
)

EXIT_ERROR = 3
CONFIG_KEYS = {"type", "kappa", "level", "chi", "qmax", "height", "depth", "radius", "chi_cutoff"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def parse_number(text: str):
    try:
        return as_exact(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_coords(text: str) -> tuple:
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise UsageError("empty coordinate list")
    return tuple(parse_number(p) for p in parts)


def load_config(path: str | None) -> dict:
    """key=value lines; blank lines and '#' comments ignored."""
    if not path:
        return {}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _setting(args, name, default=None, convert=str):
    value = getattr(args, name, None)
    if value is None:
        value = args.config_values.get(name)
    if value is None:
        return default
    return convert(value) if isinstance(value, str) else value


def _datum(args):
    return build_root_datum(_setting(args, "type", "A1"))


def _kappa(args, datum):
    """Absolute level from --kappa, or from --level (= kappa - kappa_c); default kappa - kappa_c = -2 h^vee."""
    kappa = _setting(args, "kappa", convert=parse_number)
    level = _setting(args, "level", convert=parse_number)
    if kappa is not None and level is not None:
        raise UsageError("give --kappa or --level, not both")
    if kappa is not None:
        return kappa
    if level is None:
        level = -2 * datum.dual_coxeter
    return as_exact(level + datum.critical_level)


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _tsv(rows, header):
    lines = ["\t".join(header)]
    for r in rows:
        lines.append("\t".join(str(r[h]) for h in header))
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------


def cmd_rootdata_dump(args):
    _emit(_datum(args).dumps())
    return 0


def cmd_weyl_list(args):
    datum = _datum(args)
    zero = (0,) * datum.rank
    rows = [{"w": w.label, "length": w.length, "w_dot_0": list(dot_finite(datum, w, zero))} for w in weyl_group(datum)]
    if args.json:
        _emit(json.dumps({"type": datum.type_label, "elements": rows}, sort_keys=True))
    else:
        for r in rows:
            r["w_dot_0"] = ",".join(map(str, r["w_dot_0"]))
        _emit(_tsv(rows, ["w", "length", "w_dot_0"]))
    return 0


def cmd_weyl_dot(args):
    datum = _datum(args)
    chi = datum.check_weight(_setting(args, "chi", (0,) * datum.rank, parse_coords))
    W = weyl_group(datum)
    finite = W.by_label(args.w)
    if args.translation is None:
        result = {"w": finite.label, "chi": list(chi), "dot": list(dot_finite(datum, finite, chi))}
    else:
        shifted = as_exact(_kappa(args, datum) - datum.critical_level)
        aff = AffineWeylElement(datum.check_weight(parse_coords(args.translation)), finite)
        result = {"w": aff.label, "chi": list(chi), "kappa_minus_critical": str(shifted),
                  "dot": [str(x) for x in dot_affine(datum, aff, chi, shifted)]}
    if args.json:
        _emit(json.dumps(result, sort_keys=True))
    else:
        _emit(_tsv([{k: (",".join(map(str, v)) if isinstance(v, list) else v) for k, v in result.items()}],
                   list(result)))
    return 0


def cmd_weyl_predicates(args):
    datum = _datum(args)
    kappa = _kappa(args, datum)
    chi = datum.check_weight(_setting(args, "chi", datum.rho, parse_coords))
    height = _setting(args, "height", 2, int)
    preds = level_predicates(datum, chi, kappa)
    shifted = as_exact(kappa - datum.critical_level)
    hit = dot_orbit_collision(datum, chi, shifted, height)
    result = {
        "type": datum.type_label, "chi": [str(x) for x in chi], "kappa": str(kappa),
        **preds.to_json(),
        "distinct_dot_orbit": hit is None,
        "window": {"norm": "l1 in simple-coroot coordinates", "height": height,
                   "size": len(coweight_window(datum, height)) * len(weyl_group(datum))},
    }
    if hit is not None:
        result["collision"] = [hit[0].label, hit[1].label]
    if args.json:
        _emit(json.dumps(result, sort_keys=True))
    else:
        flat = {k: v for k, v in result.items() if k not in ("window", "chi", "collision")}
        flat["window_height"] = height
        _emit(_tsv([flat], list(flat)))
    return 0


def cmd_nilcoh_table(args):
    table = cohomology_trivial(_datum(args))
    if args.json:
        _emit(json.dumps(table.to_json(), sort_keys=True))
    else:
        rows = [{"degree": k, "weight_coords": ",".join(map(str, w)), "dim": v} for (k, w), v in sorted(table.entries.items())]
        _emit(_tsv(rows, ["degree", "weight_coords", "dim"]))
    return 0 if table.status == "pass" else V.exit_code(table.status)


def cmd_nilcoh_verma_check(args):
    """Delta modules at w = e (restricted dual Verma) and w = w0 (Verma)."""
    datum = _datum(args)
    chi = datum.check_weight(_setting(args, "chi", tuple(2 * x for x in datum.rho), parse_coords))
    depth = _setting(args, "depth", 12, int)
    W = weyl_group(datum)
    out = []
    for w in (W.identity, W.longest):
        table = cohomology_with_coefficients(delta_module(datum, w, chi, depth), chi)
        out.append({"w": w.label, **table.to_json()})
    status = V.combined_status(V.VerificationReport("verma", datum.type_label, {}, t["status"]) for t in out)
    if args.json:
        _emit(json.dumps({"status": status, "tables": out}, sort_keys=True))
    else:
        rows = [{"w": t["w"], "degree": c["degree"], "weight_coords": ",".join(map(str, c["weight_coords"])),
                 "dim": c["dim"], "status": t["status"]} for t in out for c in t["classes"]]
        _emit(_tsv(rows, ["w", "degree", "weight_coords", "dim", "status"]))
    return V.exit_code(status)


def cmd_semidet_verify(args):
    datum = _datum(args)
    rep = verify_det_lemma(datum, _setting(args, "height", 2, int), stop_on_failure=False)
    _emit(json.dumps(rep.to_json(), sort_keys=True) if args.json else rep.to_tsv())
    return 0 if rep.passed else 1


def cmd_hwa_table(args):
    datum = _datum(args)
    level = _setting(args, "level", None, parse_number)
    if level is None:
        level = as_exact(_kappa(args, datum) - datum.critical_level)
    radius = _setting(args, "radius", 1, int)
    builders = {"tensor": lambda: hwa_reduction(datum, level, check_radius=None),
                "lattice": lambda: lattice_hwa(datum, level),
                "cohomology": lambda: cohomology_hwa(datum, level)}
    _emit(builders[args.algebra]().dumps_table(radius))
    return 0


def _run_verify(name, args):
    datum = _datum(args)
    t = datum.type_label
    kappa = _kappa(args, datum)
    chi = _setting(args, "chi", None, parse_coords)
    qmax = _setting(args, "qmax", None, int)
    height = _setting(args, "height", None, int)
    depth = _setting(args, "depth", 12, int)
    if name == "det-lemma":
        return [V.run_det_lemma(t, height if height is not None else 3)]
    if name == "kostant":
        return [V.run_kostant(t, height if height is not None else 6)]
    if name in ("deltahom", "fincoh2"):
        runner = V.run_deltahom if name == "deltahom" else V.run_fincoh2
        return [runner(t, height if height is not None else 4, depth, [chi] if chi else None)]
    if name == "generalbrst":
        return [V.run_generalbrst(t, kappa, qmax if qmax is not None else 4, height if height is not None else 2)]
    if name == "maintheorem":
        cutoff = _setting(args, "chi_cutoff", 2, int)
        return [V.run_maintheorem(t, kappa, qmax if qmax is not None else 6, height if height is not None else 3, cutoff)]
    if name == "hwa":
        return [V.run_hwa(t, kappa, height if height is not None else 1)]
    if name == "all":
        return V.run_all()
    raise UsageError(f"unknown verification {name!r}")


def cmd_verify(args):
    reports = _run_verify(args.name, args)
    status = V.combined_status(reports)
    for r in reports:
        _emit(f"{r.theorem}\t{r.type_label}\t{r.status}")
    if args.json:
        Path(args.json).write_text(V.dumps_reports(reports) + "\n")
    return V.exit_code(status)


# -- parser -------------------------------------------------------------------


def _common(p, *, json_flag=True):
    p.add_argument("--type", help="root system type (A1, A2, B2, A3, G2)")
    p.add_argument("--config", help="key=value file with default settings")
    if json_flag:
        p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")


def _level_opts(p):
    p.add_argument("--kappa", help="absolute level (rational)")
    p.add_argument("--level", help="shifted level kappa - kappa_c")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="brstlab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    rd = groups.add_parser("rootdata").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = rd.add_parser("dump")
    _common(p, json_flag=False)
    p.set_defaults(func=cmd_rootdata_dump)

    wy = groups.add_parser("weyl").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = wy.add_parser("list")
    _common(p)
    p.set_defaults(func=cmd_weyl_list)
    p = wy.add_parser("dot")
    _common(p)
    _level_opts(p)
    p.add_argument("--w", default="e", help="finite Weyl element label, e.g. s1s2")
    p.add_argument("--translation", help="coroot coordinates of the translation part (affine action)")
    p.add_argument("--chi", help="weight in fundamental coordinates, e.g. 2,1")
    p.set_defaults(func=cmd_weyl_dot)
    p = wy.add_parser("predicates")
    _common(p)
    _level_opts(p)
    p.add_argument("--chi")
    p.add_argument("--height", help="translation window for the dot-orbit distinctness scan")
    p.set_defaults(func=cmd_weyl_predicates)

    nc = groups.add_parser("nilcoh").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = nc.add_parser("table")
    _common(p)
    p.set_defaults(func=cmd_nilcoh_table)
    p = nc.add_parser("verma-check")
    _common(p)
    p.add_argument("--chi")
    p.add_argument("--depth")
    p.set_defaults(func=cmd_nilcoh_verma_check)

    sd = groups.add_parser("semidet").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sd.add_parser("verify")
    _common(p)
    p.add_argument("--height")
    p.set_defaults(func=cmd_semidet_verify)

    hw = groups.add_parser("hwa").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = hw.add_parser("table")
    _common(p, json_flag=False)
    _level_opts(p)
    p.add_argument("--radius", help="lattice window |coords| <= radius")
    p.add_argument("--algebra", choices=["tensor", "lattice", "cohomology"], default="tensor")
    p.set_defaults(func=cmd_hwa_table)

    p = groups.add_parser("verify")
    p.add_argument("name", choices=["det-lemma", "kostant", "deltahom", "fincoh2", "generalbrst",
                                    "maintheorem", "hwa", "all"])
    _common(p, json_flag=False)
    _level_opts(p)
    p.add_argument("--chi")
    p.add_argument("--qmax")
    p.add_argument("--height")
    p.add_argument("--depth")
    p.add_argument("--json", metavar="PATH", help="write the full JSON report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.config_values = load_config(getattr(args, "config", None))
        return args.func(args)
    except (BrstlabError, OSError) as exc:
        sys.stderr.write(f"brstlab: error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
