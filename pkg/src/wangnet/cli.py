"""Command-line front end.

Subcommands: det, trees, cotrees, impedance, tcoil, verify.  Exit codes are
0 on success, 1 for usage errors, 2 for invalid input and 3 when a T-coil
design is infeasible.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import tcoil
from .network import (
    LoopBasisError,
    NetlistError,
    cotrees,
    count_trees,
    load_network,
    mesh_determinant,
    net_impedance,
    network_to_json,
    node_determinant,
    spanning_trees,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3

_SI = {"": 1.0, "p": 1e-12, "n": 1e-9, "u": 1e-6, "µ": 1e-6, "m": 1e-3,
       "k": 1e3, "M": 1e6, "G": 1e9}
_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([pnuµmkMG]?)\s*$")

LOCUS_POINTS = 401
RESPONSE_POINTS = 401


class UsageError(Exception):
    pass


def parse_value(text: str) -> float:
    """Parse ``4e-12``, ``4p``, ``10k``, ``inf`` and similar."""
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    m = _NUMBER.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    return float(m.group(1)) * _SI[m.group(2)]


def parse_sweep(text: str) -> np.ndarray:
    """``START:STOP:POINTS`` in rad/s, log-spaced."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("sweep must be START:STOP:POINTS")
    lo, hi = parse_value(parts[0]), parse_value(parts[1])
    try:
        n = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad point count {parts[2]!r}") from None
    if not (0 < lo <= hi < math.inf) or n < 1:
        raise argparse.ArgumentTypeError("sweep needs 0 < START <= STOP and POINTS >= 1")
    if n == 1:
        return np.array([lo])
    return np.logspace(math.log10(lo), math.log10(hi), n)


def fmt(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wangnet", description="Wang-algebra network determinants and T-coil design.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(sp, fmt_default="text"):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=fmt_default)
        sp.add_argument("--output", metavar="PATH", help="write here instead of stdout")

    sp = sub.add_parser("det", help="node or mesh determinant of a netlist")
    sp.add_argument("--netlist", required=True, metavar="PATH")
    sp.add_argument("--mode", choices=("node", "mesh"), default="node")
    common(sp)

    for name, what in (("trees", "spanning trees"), ("cotrees", "cotrees")):
        sp = sub.add_parser(name, help=f"list or count {what}")
        sp.add_argument("--netlist", required=True, metavar="PATH")
        sp.add_argument("--count", action="store_true", help="print only the number")
        common(sp)

    sp = sub.add_parser("impedance", help="driving-point impedance sweep")
    sp.add_argument("--netlist", required=True, metavar="PATH")
    sp.add_argument("--sweep", required=True, type=parse_sweep, metavar="START:STOP:POINTS")
    common(sp, "csv")

    def load_flags(sp, required):
        sp.add_argument("--R", type=parse_value, required=required, help="termination (ohm)")
        sp.add_argument("--C", type=parse_value, required=required, help="load capacitance (F)")
        sp.add_argument("--Rs", type=parse_value, default=None, help="series load resistance")
        sp.add_argument("--Rp", type=parse_value, default=None, help="parallel load resistance")

    sp = sub.add_parser("tcoil", help="design a bridged T-coil")
    sp.add_argument("--topology", choices=("sym", "asym"), required=True)
    load_flags(sp, True)
    sp.add_argument("--R1", type=parse_value, default=None, help="asymmetric series resistance")
    sp.add_argument("--angle", type=parse_value, default=None, metavar="DEG")
    sp.add_argument("--cb", type=parse_value, default=None, metavar="FARAD")
    sp.add_argument("--locus", metavar="PATH.csv", help="root locus over C_B (+ PNG)")
    sp.add_argument("--response", metavar="PATH.csv", help="magnitude/phase response (+ PNG)")
    sp.add_argument("--netlist-out", metavar="PATH", help="write the designed circuit netlist")
    common(sp, "json")

    sp = sub.add_parser("verify", help="check a design report")
    sp.add_argument("--report", required=True, metavar="PATH", help="JSON from 'tcoil'")
    load_flags(sp, False)
    sp.add_argument("--trials", type=int, default=100)
    common(sp, "json")
    return p


# -- emitters ----------------------------------------------------------------

def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _kv(obj: dict, style: str) -> str:
    flat = []
    for k, v in obj.items():
        if isinstance(v, list):
            for i, item in enumerate(v):
                for kk, vv in item.items():
                    flat.append((f"{k}[{i}].{kk}", vv))
        elif isinstance(v, dict):
            flat.extend((f"{k}.{kk}", vv) for kk, vv in v.items())
        else:
            flat.append((k, v))
    cells = [(k, fmt(v) if isinstance(v, float) else str(v)) for k, v in flat]
    if style == "csv":
        return _csv(("field", "value"), cells)
    width = max(len(k) for k, _ in cells)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in cells)


def _emit(text: str, output) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def cmd_det(args) -> str:
    net = load_network(args.netlist)
    poly = mesh_determinant(net) if args.mode == "mesh" else node_determinant(net)
    terms = ["".join(s.name for s in m) or "1" for m in poly.monomials()]
    if args.format == "json":
        return _json({"mode": args.mode, "polynomial": str(poly), "terms": terms,
                      "count": len(terms)})
    if args.format == "csv":
        return _csv(("term",), [(t,) for t in terms])
    return f"{poly}\n{len(terms)} terms\n"


def cmd_trees(args) -> str:
    net = load_network(args.netlist)
    kind = args.command
    if args.count:
        n = count_trees(net)
        if args.format == "json":
            return _json({kind: n})
        if args.format == "csv":
            return _csv(("count",), [(n,)])
        return f"{n}\n"
    sets = spanning_trees(net) if kind == "trees" else cotrees(net)
    order = {e.id: i for i, e in enumerate(net.edges)}
    rows = sorted((sorted(t, key=order.get) for t in sets),
                  key=lambda t: [order[e] for e in t])
    if args.format == "json":
        return _json({"count": len(rows), kind: rows})
    if args.format == "csv":
        return _csv(("edges",), [(" ".join(t),) for t in rows])
    return "".join(" ".join(t) + "\n" for t in rows)


def cmd_impedance(args) -> str:
    net = load_network(args.netlist)
    if net.input is None:
        raise NetlistError("impedance needs an input node", "input")
    omega = args.sweep
    z = net_impedance(net)(1j * omega, strict=False)
    poles = int(np.isnan(z.real).sum())
    if poles:
        print(f"warning: {poles} sweep point(s) hit a pole; written as nan", file=sys.stderr)
    rows = [(fmt(w), fmt(v.real), fmt(v.imag)) for w, v in zip(omega, z)]
    if args.format == "json":
        return _json([{"omega": float(w), "re": None if math.isnan(v.real) else float(v.real),
                       "im": None if math.isnan(v.imag) else float(v.imag)}
                      for w, v in zip(omega, z)])
    if args.format == "csv":
        return _csv(("omega", "re", "im"), rows)
    return "".join(f"{w:>24} {r:>24} {i:>24}\n" for w, r, i in [("omega", "re", "im")] + rows)


def _load(args) -> tcoil.LoadSpec:
    return tcoil.LoadSpec.with_rp(args.R, args.C, args.Rs or 0.0, args.Rp)


def _sibling_png(path) -> Path:
    return Path(path).with_suffix(".png")


def write_locus(path, rep: tcoil.DesignReport) -> None:
    from .plotting import plot_root_locus

    tc, C = rep.coeffs, rep.load.C
    cbs = C * np.logspace(-3, 3, LOCUS_POINTS)
    pairs = [tcoil.poles(tc, cb) for cb in cbs]
    Path(path).write_text(_csv(("cb", "re1", "im1", "re2", "im2"),
                               [(fmt(cb), fmt(p1.real), fmt(p1.imag), fmt(p2.real), fmt(p2.imag))
                                for cb, (p1, p2) in zip(cbs, pairs)]))
    try:
        circle = tcoil.root_locus(tc)
    except ValueError:
        circle = None
    plot_root_locus(_sibling_png(path), cbs, [p[0] for p in pairs], [p[1] for p in pairs],
                    circle=circle, marker=rep.poles, tau=rep.load.tau)


def write_response(path, rep: tcoil.DesignReport) -> None:
    from .plotting import plot_response

    tau = rep.load.tau
    omega = np.logspace(-2, 2, RESPONSE_POINTS) / tau
    h = tcoil.frequency_response(rep.coeffs, rep.design.C_B, omega) * rep.coeffs.B0
    mag, ph = np.abs(h), np.degrees(np.angle(h))
    Path(path).write_text(_csv(("omega", "mag", "phase_deg"),
                               [(fmt(w), fmt(m), fmt(p)) for w, m, p in zip(omega, mag, ph)]))
    plot_response(_sibling_png(path), omega, mag, bw=rep.bwer / tau, tau=tau)


def cmd_tcoil(args) -> str:
    if (args.angle is None) == (args.cb is None):
        raise UsageError("tcoil: give exactly one of --angle or --cb")
    if args.topology == "sym" and args.R1 is not None:
        raise UsageError("tcoil: --R1 applies only to --topology asym")
    load = _load(args)
    topo = tcoil.SYMMETRIC if args.topology == "sym" else tcoil.ASYMMETRIC
    rep = tcoil.synthesize(load, topo, angle=args.angle, C_B=args.cb, R1=args.R1 or 0.0)
    if args.locus:
        write_locus(args.locus, rep)
    if args.response:
        write_response(args.response, rep)
    if args.netlist_out:
        net, _ = tcoil.tcoil_network(rep.design, load)
        Path(args.netlist_out).write_text(network_to_json(net))
    out = rep.to_dict()
    return _json(out) if args.format == "json" else _kv(out, args.format)


def cmd_verify(args) -> str:
    try:
        data = json.loads(Path(args.report).read_text())
    except json.JSONDecodeError as exc:
        raise NetlistError(f"report is not valid JSON: {exc.msg}",
                           f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ValueError("design report must be a JSON object")
    if args.R is not None or args.C is not None:
        if args.R is None or args.C is None:
            raise UsageError("verify: --R and --C go together")
        data = dict(data, load={"R": args.R, "C": args.C, "Rs": args.Rs or 0.0,
                                "Gp": 0.0 if args.Rp in (None, math.inf) else 1 / args.Rp})
    dsg, load = tcoil.report_from_dict(data)
    if args.trials < 1:
        raise UsageError("verify: --trials must be positive")
    dev = tcoil.verify_constant_r(dsg, load, tcoil.log_sweep())
    app = tcoil.verify_expansion_identity(dsg.topology, load, dsg, trials=args.trials)
    ok = dev < tcoil.REL_TOL and app < tcoil.REL_TOL
    out = {"topology": data["topology"], "constant_r_max_rel_dev": dev,
           "expansion_max_rel": app, "pass": ok}
    if not ok:
        print("verify: design fails the constant-R checks", file=sys.stderr)
    text = _json(out) if args.format == "json" else _kv(out, args.format)
    return text if ok else _Failed(text)


class _Failed(str):
    """Output of a verification that did not pass."""


COMMANDS = {"det": cmd_det, "trees": cmd_trees, "cotrees": cmd_trees,
            "impedance": cmd_impedance, "tcoil": cmd_tcoil, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = COMMANDS[args.command](args)
        _emit(text, args.output)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except tcoil.DesignError as exc:
        print(f"infeasible design: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NetlistError, LoopBasisError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT if isinstance(text, _Failed) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
