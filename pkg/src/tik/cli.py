"""Command-line front end.

Exit codes: 0 success or isomorphism found, 1 not a witness or none found,
2 input error, 3 enumeration cap exceeded, 4 numeric tolerance failure.
Failures print a single ``error code=<code> <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import acceptance, polysys
from .errors import InputError, TikError
from .field import FieldSpec
from .groups import GroupSpec, WitnessTuple, check_witness, sample
from .oracle import brute_force_isomorphic, flattening_invariant, singular_spectrum
from .reductions import REGISTRY, get, graph, system
from .reductions.trace import ReductionTrace
from .tensor import ActionKind, DWayArray, apply_five_action

_FAMILY = {"gl": "GL", "o": "O", "u": "U", "sp": "Sp", "sym": "Sym"}


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from exc


def _write_json(path: str, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n")
    print(path)


def _load_instance(path: str):
    doc = _read_json(path)
    if "arcs" in doc:
        return graph.Digraph.from_dict(doc)
    if "tensors" in doc:
        return system.TensorSystem.from_dict(doc)
    return DWayArray.from_dict(doc)


def _load_tensor(path: str) -> DWayArray:
    obj = _load_instance(path)
    if not isinstance(obj, DWayArray):
        raise InputError(f"{path} does not hold a tensor")
    return obj


def parse_groups(text: str, F: FieldSpec) -> list[GroupSpec]:
    """``GL:3,O:2`` style group lists."""
    out = []
    for part in text.split(","):
        fam, _, n = part.strip().partition(":")
        if fam.lower() not in _FAMILY or not n.isdigit():
            raise InputError(f"bad group {part!r}; expected FAMILY:n with FAMILY in {sorted(_FAMILY)}")
        out.append(GroupSpec(_FAMILY[fam.lower()], int(n), F))
    return out


def _dims(text: str) -> list[int]:
    try:
        dims = [int(x) for x in text.replace("x", ",").split(",") if x]
    except ValueError:
        raise InputError(f"bad dims {text!r}") from None
    if not dims or min(dims) < 1:
        raise InputError(f"bad dims {text!r}")
    return dims


# -- subcommands --------------------------------------------------------------

def cmd_gen(args) -> int:
    F = FieldSpec.parse_name(args.field)
    rng = np.random.default_rng(args.seed)
    dims = _dims(args.dims)
    p = args.out_prefix
    fam = _FAMILY[args.group]
    if args.kind == "digraph":
        n = dims[0]
        slots = [(i, j) for i in range(n) for j in range(n) if i != j]
        k = int(rng.integers(1, len(slots) + 1)) if len(dims) < 2 else dims[1]
        G = graph.Digraph(n, tuple(slots[i] for i in sorted(rng.choice(len(slots), k, replace=False))))
        if args.planted:
            sigma = [int(x) for x in rng.permutation(n)]
            H = G.relabel(sigma)
            _write_json(f"{p}_witness.json", graph.graph_witness(F, sigma).to_dict())
        else:
            H = graph.Digraph(n, tuple(slots[i] for i in sorted(rng.choice(len(slots), k, replace=False))))
        _write_json(f"{p}_A.json", G.to_dict())
        _write_json(f"{p}_B.json", H.to_dict())
        return 0
    if args.kind == "alt-form":
        n = dims[0]
        count = n * (n - 1) * (n - 2) // 6
        A = polysys.alt_form_from_coeffs(F, n, [F.scalar(v) for v in F.random((count,), rng)])
        kind, gs = ActionKind.UUU, [GroupSpec(fam, n, F)]
    else:
        if len(dims) != 3:
            raise InputError("tensors need three dims")
        A = DWayArray(F, F.random(dims, rng))
        kind, gs = ActionKind.UVW, [GroupSpec(fam, n, F) for n in dims]
    if args.planted:
        w = WitnessTuple(kind, [sample(G, args.seed * 31 + i) for i, G in enumerate(gs)], gs)
        B = apply_five_action(kind, w.elements, A)
        _write_json(f"{p}_witness.json", w.to_dict())
    elif args.kind == "alt-form":
        B = polysys.alt_form_from_coeffs(F, dims[0], [F.scalar(v) for v in F.random((count,), rng)])
    else:
        B = DWayArray(F, F.random(dims, rng))
    _write_json(f"{p}_A.json", A.to_dict())
    _write_json(f"{p}_B.json", B.to_dict())
    return 0


def _reducer(args):
    red = get(args.id)
    if args.id == "graph3":
        F = FieldSpec.parse_name(args.field)
        return lambda G: graph.graph_to_tensor(G, F)
    if args.id == "classical2gl":
        if not args.groups:
            raise InputError("classical2gl needs --groups")
        return lambda A: system.reduce_classical_to_gl(A, parse_groups(args.groups, A.field))
    return red.reduce


def cmd_reduce(args) -> int:
    fn = _reducer(args)
    traces = []
    for tag, path in zip("AB", args.inputs):
        out, trace = fn(_load_instance(path))
        if out is None:
            raise InputError(f"{path} reduces to the zero array")
        _write_json(f"{args.out_prefix}_{tag}.json", out.to_dict())
        traces.append(trace)
    doc = {"src": traces[0].to_dict()}
    if len(traces) == 2:
        doc["tgt"] = traces[1].to_dict()
    _write_json(f"{args.out_prefix}_trace.json", doc)
    return 0


def _traces(args) -> tuple[ReductionTrace, ReductionTrace]:
    if args.trace:
        doc = _read_json(args.trace)
        if "src" not in doc or "tgt" not in doc:
            raise InputError("pair trace needs both src and tgt; reduce two instances together")
        return ReductionTrace.from_dict(doc["src"]), ReductionTrace.from_dict(doc["tgt"])
    if not (args.src_trace and args.tgt_trace):
        raise InputError("give --trace or both --src-trace and --tgt-trace")

    def one(path: str, key: str) -> ReductionTrace:
        doc = _read_json(path)
        return ReductionTrace.from_dict(doc.get(key, doc))

    return one(args.src_trace, "src"), one(args.tgt_trace, "tgt")


def cmd_witness(args) -> int:
    src, tgt = _traces(args)
    if src.rid != tgt.rid:
        raise InputError(f"traces come from different reductions ({src.rid}, {tgt.rid})")
    red = get(src.rid)
    w = WitnessTuple.from_dict(_read_json(args.witness))
    fn = red.transport if args.direction == "transport" else red.extract
    mapped = fn(src, tgt, w)
    if args.out:
        _write_json(args.out, mapped.to_dict())
    else:
        print(json.dumps(mapped.to_dict(), separators=(",", ":")))
    return 0


def cmd_verify(args) -> int:
    A, B = _load_tensor(args.A), _load_tensor(args.B)
    w = WitnessTuple.from_dict(_read_json(args.witness))
    kind = ActionKind.parse(args.action)
    if args.groups:
        w = WitnessTuple(kind, w.elements, parse_groups(args.groups, A.field))
    elif w.action is not kind:
        raise InputError(f"witness is a {w.action.value} witness, not {kind.value}")
    ok = check_witness(w, A, B)
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    A, B = _load_tensor(args.A), _load_tensor(args.B)
    w = brute_force_isomorphic(ActionKind.parse(args.action), parse_groups(args.groups, A.field), A, B,
                               threads=args.threads)
    if w is None:
        print("none")
        return 1
    print(json.dumps(w.to_dict(), separators=(",", ":")))
    return 0


def cmd_invariant(args) -> int:
    A = _load_tensor(args.A)
    if args.which == "flatdet":
        print(" ".join(f"{v:.12g}" for v in flattening_invariant(A)))
    else:
        for d in range(A.order):
            print(f"direction {d}: " + " ".join(f"{v:.12g}" for v in singular_spectrum(A, d)))
    return 0


def cmd_polysys(args) -> int:
    A, B = _load_tensor(args.A), _load_tensor(args.B)
    constraints = [c for c in args.constraints.split(",") if c]
    if args.problem == "ti":
        S = polysys.emit_ti_system(A, B, args.variant, constraints)
    else:
        S = polysys.emit_atfe_system(A, B, _FAMILY[args.group], constraints)
    text = polysys.render(S, args.format)
    if args.out:
        Path(args.out).write_text(text)
        print(args.out)
    elif not args.solve:
        sys.stdout.write(text)
    if args.solve:
        sol = polysys.solve_tiny(S)
        if sol is None:
            print("none")
            return 1
        print(" ".join(f"{k}={v}" for k, v in sol.items()))
    return 0


def cmd_selftest(args) -> int:
    results = acceptance.run_all(quick=args.quick)
    return 0 if all(r.passed for r in results) else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tik", description="Tensor isomorphism reductions and oracles.")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for exhaustive search")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance pair")
    g.add_argument("--kind", choices=["tensor", "digraph", "alt-form"], default="tensor")
    g.add_argument("--dims", required=True, help="e.g. 2,2,3; digraphs take n[,arcs]")
    g.add_argument("--field", default="F2")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--planted", action="store_true", help="B = g.A for a sampled g")
    g.add_argument("--group", choices=sorted(_FAMILY), default="gl")
    g.add_argument("--out-prefix", default="instance")
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("reduce", help="apply a reduction to one or two instances")
    r.add_argument("--id", required=True, choices=list(REGISTRY))
    r.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="FILE")
    r.add_argument("--out-prefix", default="reduced")
    r.add_argument("--field", default="F2", help="field for graph3 outputs")
    r.add_argument("--groups", help="classical groups for classical2gl, e.g. O:2,O:2,O:2")
    r.set_defaults(fn=cmd_reduce)

    w = sub.add_parser("witness", help="move a witness across a reduction")
    w.add_argument("direction", choices=["transport", "extract"])
    w.add_argument("--trace", help="pair trace written by reduce")
    w.add_argument("--src-trace")
    w.add_argument("--tgt-trace")
    w.add_argument("--witness", required=True)
    w.add_argument("--out")
    w.set_defaults(fn=cmd_witness)

    v = sub.add_parser("verify", help="check a witness")
    v.add_argument("--action", required=True)
    v.add_argument("--groups", help="override the groups stored in the witness")
    v.add_argument("--witness", required=True)
    v.add_argument("A")
    v.add_argument("B")
    v.set_defaults(fn=cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive isomorphism search over a prime field")
    o.add_argument("--action", required=True)
    o.add_argument("--groups", required=True)
    o.add_argument("A")
    o.add_argument("B")
    o.set_defaults(fn=cmd_oracle)

    i = sub.add_parser("invariant", help="print an invariant of a real or complex tensor")
    i.add_argument("--which", choices=["flatdet", "spectrum"], required=True)
    i.add_argument("A")
    i.set_defaults(fn=cmd_invariant)

    p = sub.add_parser("polysys", help="emit a polynomial system")
    p.add_argument("--problem", choices=["ti", "atfe"], default="ti")
    p.add_argument("--variant", choices=["cubic", "quadratic"], default="cubic")
    p.add_argument("--group", choices=["gl", "o"], default="gl", help="group for atfe")
    p.add_argument("--constraints", default="invertibility")
    p.add_argument("--format", choices=["generic", "magma"], default="generic")
    p.add_argument("--out")
    p.add_argument("--solve", action="store_true", help="search for a solution over a tiny prime field")
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(fn=cmd_polysys)

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--quick", action="store_true")
    s.set_defaults(fn=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TikError as exc:
        msg = " ".join(str(exc).split())
        print(f"error code={exc.code} {msg}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
