"""Command-line interface.

Subcommands cover the individual pipeline stages (facets, lattice, mg,
fgraph, betti, morse) and the end-to-end verdicts (verify, corpus).  Exit
codes: 0 success, 1 invalid input, 2 internal consistency failure, 3
resource limit.  A verdict that disagrees with the structural prediction
is a finding, reported prominently, with exit code 0.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import graphs as gr
from . import homology as hm
from . import hull as hl
from . import morse as mo
from . import polytope as pt
from . import verify as vf
from .errors import (
    InternalConsistencyError,
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
)


def _read_graph(args) -> gr.Graph:
    if args.graph == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.graph) as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInputError(f"cannot read {args.graph}: {exc}") from None
    if args.input == "g6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise InvalidInputError("expected exactly one graph6 line")
        return gr.parse_graph6(lines[0])
    return gr.parse_edgelist(text)


def _fields(arg: str) -> tuple:
    return ("q", "f2") if arg == "both" else (arg,)


def _emit(payload, args) -> None:
    print(json.dumps(payload, indent=2, sort_keys=False))


def _fnode(node) -> str:
    return ":".join(map(str, node))


def cmd_facets(args) -> int:
    g = _read_graph(args)
    if not gr.is_connected(g):
        raise InvalidInputError("facet rules need a connected graph")
    facets = sorted(sorted(map(list, f)) for f in pt.facets_connected(g))
    if args.format == "text":
        for f in facets:
            print(" ".join(f"{u}-{v}" for u, v in f) or "(empty face)")
    else:
        _emit({"facets": facets}, args)
    return 0


def cmd_lattice(args) -> int:
    g = _read_graph(args)
    lat = pt.incidence_signs(pt.face_lattice(g))
    if args.format == "dot":
        print(lat.to_dot())
    elif args.format == "text":
        for i, f in enumerate(lat.faces):
            gens = " ".join(f"{u}-{v}" for u, v in sorted(f)) or "(empty)"
            print(f"dim {lat.dims[i]:2d}  {gens}")
    else:
        _emit(lat.to_json(), args)
    return 0


def cmd_mg(args) -> int:
    g = _read_graph(args)
    cls = hl.mg(g)
    if args.format == "dot":
        print(cls.to_dot())
    elif args.format == "text":
        lat = cls.complex.lattice
        for c in cls.cells:
            gens = " ".join(f"{u}-{v}" for u, v in sorted(lat.faces[c]))
            print(f"dim {lat.dims[c]:2d}  {gens}")
    else:
        _emit(cls.to_json(), args)
    return 0


def cmd_fgraph(args) -> int:
    g = _read_graph(args)
    f, fverts, fedges = hl.f_graph(g)
    if args.format == "dot":
        lines = ["graph fgraph {"]
        for v in sorted(f.vertices, key=str):
            lines.append(f'  "{_fnode(v)}";')
        for a, b in sorted(f.edges, key=str):
            lines.append(f'  "{_fnode(a)}" -- "{_fnode(b)}";')
        lines.append("}")
        print("\n".join(lines))
    else:
        payload = {
            "nodes": sorted(map(_fnode, f.vertices)),
            "edges": sorted([sorted([_fnode(a), _fnode(b)])
                             for a, b in f.edges]),
            "fundamental_vertices": sorted(fverts),
            "fundamental_edges": sorted(map(list, fedges)),
        }
        if args.format == "text":
            print("nodes:", " ".join(payload["nodes"]))
            for a, b in payload["edges"]:
                print(f"{a} -- {b}")
        else:
            _emit(payload, args)
    return 0


def cmd_betti(args) -> int:
    g = _read_graph(args)
    out = {}
    for fld in _fields(args.field):
        bt = hm.hochster_betti(g, fld)
        if g.n <= vf.ORACLE_CROSS_CHECK_MAX:
            if bt.entries != hm.koszul_betti(g, fld).entries:
                raise InternalConsistencyError(
                    f"Betti oracles disagree over {fld}"
                )
        out[fld] = bt
    if args.format == "text":
        for fld, bt in out.items():
            print(f"{fld}: totals {list(bt.totals())}")
    else:
        _emit({fld: {"totals": list(bt.totals()), "entries": bt.to_json()}
               for fld, bt in out.items()}, args)
    return 0


def cmd_morse(args) -> int:
    g = _read_graph(args)
    cx = hl.hull_complex(g)
    m = mo.paper_matching(g, cx)
    mc = mo.critical_and_differential(m)
    reports = {
        fld: mo.minimality_checks(mc, hm.hochster_betti(g, fld), fld)
        for fld in _fields(args.field)
    }
    if args.format == "dot":
        # full-support class with matched cover edges dashed
        cls = hl.mg(g, cx)
        matched = set(m.pairs)
        lat = cx.lattice
        lines = ["digraph morse {", "  rankdir=BT;"]
        for c in cls.cells:
            lab = ",".join(f"{u}{v}" for u, v in sorted(lat.faces[c])) or "empty"
            shape = "box" if c in mc.critical else "ellipse"
            lines.append(f'  c{c} [label="{lab}", shape={shape}];')
        for hi, lo in cls.covers():
            style = ', style=dashed, dir=back' if (hi, lo) in matched else ""
            lines.append(f"  c{lo} -> c{hi} [{style.strip(', ')}];"
                         if style else f"  c{lo} -> c{hi};")
        lines.append("}")
        print("\n".join(lines))
    elif args.format == "text":
        print(f"cells {len(cx.lattice.faces)}  pairs {len(m.pairs)}  "
              f"critical {len(mc.critical)}")
        for fld, rep in reports.items():
            print(f"{fld}: counts_minimal={rep.counts_minimal} "
                  f"unit_minimal={rep.unit_minimal} "
                  f"path_minimal={rep.path_minimal}")
    else:
        payload = mc.to_json()
        payload["reports"] = {f: r.to_json() for f, r in reports.items()}
        _emit(payload, args)
    return 0


def cmd_verify(args) -> int:
    gbar = _read_graph(args)
    v = vf.verify_theorem(gbar, _fields(args.field))
    if args.format == "text":
        print(f"gbar {gr.format_graph6(v.gbar)}")
        print(f"two disjoint induced cycles: "
              f"{v.has_two_disjoint_induced_cycles}")
        print(f"minimizable by matching: {v.admt_minimizable}")
        print(f"agreement: {v.agreement_with_theorem}")
    else:
        _emit(v.to_json(), args)
    if not v.agreement_with_theorem:
        print("FINDING: structural prediction and algebraic certificate "
              "disagree; see report", file=sys.stderr)
    return 0


def cmd_corpus(args) -> int:
    report = vf.run_corpus(args.n, _fields(args.field),
                           tuple(args.filter))
    payload = report.to_json()
    if args.format == "text":
        c, s = payload["corpus"], payload["summary"]
        print(f"graphs {c['graphs']}  agree {s['agree']}  "
              f"disagree {s['disagree']}")
        for f in payload["findings"]:
            print(f"FINDING: {f}")
    else:
        _emit(payload, args)
        for f in payload["findings"]:
            print(f"FINDING: {f}", file=sys.stderr)
    return 0


def _add_graph_args(p) -> None:
    p.add_argument("graph", help="input file, or - for stdin")
    p.add_argument("--input", choices=["edgelist", "g6"], default="edgelist")
    p.add_argument("--format", choices=["json", "dot", "text"],
                   default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hullmorse",
        description="Exact hull resolutions of edge ideals with discrete "
                    "Morse matchings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    handlers = {
        "facets": cmd_facets, "lattice": cmd_lattice, "mg": cmd_mg,
        "fgraph": cmd_fgraph, "betti": cmd_betti, "morse": cmd_morse,
        "verify": cmd_verify,
    }
    for name, fn in handlers.items():
        p = sub.add_parser(name)
        _add_graph_args(p)
        if name in ("betti", "morse", "verify"):
            p.add_argument("--field", choices=["q", "f2", "both"],
                           default="q" if name != "verify" else "both")
        p.set_defaults(handler=fn)

    p = sub.add_parser("corpus")
    p.add_argument("--n", type=int, required=True,
                   help="largest vertex count to enumerate")
    p.add_argument("--field", choices=["q", "f2", "both"], default="both")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--filter", action="append",
                   choices=list(vf.KNOWN_FILTERS),
                   help="repeatable; defaults to connected-complement")
    p.set_defaults(handler=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "filter", None) is None and args.command == "corpus":
        args.filter = ["connected-complement"]
    try:
        return args.handler(args)
    except (InvalidInputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
