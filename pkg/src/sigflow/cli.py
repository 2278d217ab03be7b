"""Command-line front end: ``sigflow <verb> ...``.

Exit codes: 0 success, 1 usage/parse/sort error, 2 semantic negative
(``eq`` false, deadlock in ``simulate``), 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_frac, format_rat, frac_to_json, rat, series_expand
from .circuit import classify, parse_file, port_names, sort_of, to_dsl
from .errors import InvariantViolation, SigflowError
from .machine import check_init_free, check_receptive, simulate
from .realise import as_rational_matrix, realise, trace_form
from .relation import linrel_to_json
from .semantics import axiom_corpus, dsem, equivalent, stream_view

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_BUG = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


class _Usage(Exception):
    pass


def _emit(args, obj, text: str):
    if args.json:
        print(json.dumps(obj, sort_keys=False))
    else:
        print(text)


def _vec_text(S, v) -> str:
    left = ", ".join(format_frac(c) for c in v[: S.n])
    right = ", ".join(format_frac(c) for c in v[S.n:])
    return f"({left}) | ({right})"


# ---------------------------------------------------------------------------
# verbs


def cmd_check(args):
    t = parse_file(args.file)
    s = sort_of(t)
    _emit(args, {"sort": [s.n, s.m]}, str(s))
    return EXIT_OK


def cmd_sem(args):
    t = parse_file(args.file)
    S = dsem(t)
    obj = linrel_to_json(S)
    lines = [f"{S.n} -> {S.m}, dimension {S.dim}"]
    lines += ["  " + _vec_text(S, v) for v in S.rows]
    if args.expand is not None:
        streams = []
        for sv in stream_view(t, args.expand):
            streams.append({
                "shift": sv.shift,
                "left": [[format_rat(c) for c in s] for s in sv.left],
                "right": [[format_rat(c) for c in s] for s in sv.right],
            })
            left, right = port_names(sort_of(t))
            lines.append(f"  vector scaled by x^{sv.shift}:" if sv.shift else "  vector:")
            for name, s in zip(left + right, sv.left + sv.right):
                lines.append(f"    {name}: " + ", ".join(format_rat(c) for c in s))
        obj["streams"] = streams
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_eq(args):
    same = equivalent(parse_file(args.left), parse_file(args.right))
    _emit(args, {"equal": same}, "true" if same else "false")
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_classify(args):
    t = parse_file(args.file)
    flags = classify(t).as_dict()
    rec = check_receptive(t)
    obj = dict(flags, state_total=rec.state_total, input_receptive=rec.input_receptive,
               init_free=check_init_free(t))
    _emit(args, obj, "\n".join(f"{k}: {str(v).lower()}" for k, v in obj.items()))
    return EXIT_OK


def _parse_inputs(specs, steps):
    out = {}
    for spec in specs:
        port, sep, values = spec.partition("=")
        if not sep:
            raise _Usage(f"--in expects PORT=v,v,...; got {spec!r}")
        vals = [rat(v) for v in values.split(",") if v.strip()]
        if len(vals) > steps:
            raise _Usage(f"port {port} has {len(vals)} values but --steps is {steps}")
        out[port.strip()] = vals + [rat(0)] * (steps - len(vals))
    return out


def cmd_simulate(args):
    t = parse_file(args.file)
    tr = simulate(t, _parse_inputs(args.inputs, args.steps), args.steps)
    obj = {
        "registers": list(tr.registers),
        "inputs": list(tr.inputs),
        "outputs": list(tr.outputs),
        "steps": [
            {"in": [format_rat(v) for v in s.inputs], "out": [format_rat(v) for v in s.outputs],
             "state": [format_rat(v) for v in s.state]}
            for s in tr.steps
        ],
        "deadlock": tr.deadlock,
    }
    lines = []
    for k, s in enumerate(tr.steps):
        ins = " ".join(f"{p}={format_rat(v)}" for p, v in zip(tr.inputs, s.inputs))
        outs = " ".join(f"{p}={format_rat(v)}" for p, v in zip(tr.outputs, s.outputs))
        state = ", ".join(format_rat(v) for v in s.state)
        lines.append(f"t={k}  in {ins or '-'}  out {outs or '-'}  state [{state}]")
    for p in tr.outputs:
        lines.append(f"{p}: " + ", ".join(format_rat(v) for v in tr.output_stream(p)))
    if tr.deadlock is not None:
        lines.append(f"deadlock at step {tr.deadlock}")
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK if tr.deadlock is None else EXIT_NEGATIVE


def cmd_realise(args):
    t = parse_file(args.file)
    prefer = [p for p in (args.prefer_inputs or "").split(",") if p.strip()]
    r = realise(t, [p.strip() for p in prefer])
    obj = {
        "inputs": list(r.io.inputs),
        "outputs": list(r.io.outputs),
        "transfer": [[frac_to_json(e) for e in row] for row in r.transfer.entries],
        "sf": to_dsl(r.sf_term),
        "bends": [m.to_json() for m in r.bend_log],
    }
    lines = [
        "inputs:  " + " ".join(r.io.inputs),
        "outputs: " + " ".join(r.io.outputs),
        "transfer:",
    ]
    for o, row in zip(r.io.outputs, r.transfer.entries):
        lines.append(f"  {o} = " + " + ".join(f"({format_frac(e)})*{i}" for i, e in zip(r.io.inputs, row) if e)
                     if any(row) else f"  {o} = 0")
    lines.append("sf: " + obj["sf"])
    lines.append("bends: " + (" ".join(_move_text(m) for m in r.bend_log) or "-"))
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def _move_text(m) -> str:
    return m.kind + (str(list(m.perm)) if m.perm else "")


def cmd_trace_form(args):
    t = parse_file(args.file)
    tf = trace_form(t)
    core = to_dsl(tf.core)
    _emit(args, {"z": tf.z, "core": core}, f"z: {tf.z}\ncore: {core}")
    return EXIT_OK


def cmd_transfer(args):
    A = as_rational_matrix(parse_file(args.file))
    obj = {"transfer": [[frac_to_json(e) for e in row] for row in A.entries]}
    lines = ["  ".join(format_frac(e) for e in row) for row in A.entries]
    if args.expand is not None:
        obj["streams"] = [[[format_rat(c) for c in series_expand(e, args.expand)] for e in row]
                          for row in A.entries]
        lines += [", ".join(format_rat(c) for c in series_expand(e, args.expand))
                  for row in A.entries for e in row]
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_axioms(args):
    passed, failed = 0, []
    for ax in axiom_corpus():
        if equivalent(ax.lhs, ax.rhs):
            passed += 1
        else:
            failed.append(ax)
    obj = {"passed": passed, "failed": len(failed),
           "failures": [{"name": a.name, "lhs": to_dsl(a.lhs), "rhs": to_dsl(a.rhs)} for a in failed]}
    lines = [f"passed: {passed}", f"failed: {len(failed)}"]
    lines += [f"  {a.name}: {to_dsl(a.lhs)} != {to_dsl(a.rhs)}" for a in failed]
    _emit(args, obj, "\n".join(lines))
    if failed:
        raise InvariantViolation(f"{len(failed)} axiom instances are not sound")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    p = _Parser(prog="sigflow", description="Signal flow calculus workbench.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="parse a circuit and print its sort")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("sem", parents=[common], help="print the linear relation of a circuit")
    s.add_argument("file")
    s.add_argument("--expand", type=int, metavar="T", help="also expand each basis vector to T stream values")
    s.set_defaults(func=cmd_sem)

    s = sub.add_parser("eq", parents=[common], help="decide semantic equality of two circuits")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("classify", parents=[common], help="structural flags, deadlock and initialisation checks")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("simulate", parents=[common], help="run the register machine from the zero state")
    s.add_argument("file")
    s.add_argument("--steps", type=int, required=True, metavar="T")
    s.add_argument("--in", dest="inputs", action="append", default=[], metavar="PORT=v,v,...",
                   help="input stream for one port; short streams are padded with zeros")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("realise", parents=[common], help="compile to a signal flow graph with an I/O partition")
    s.add_argument("file")
    s.add_argument("--prefer-inputs", metavar="PORTS", help="comma-separated ports to use as inputs")
    s.set_defaults(func=cmd_realise)

    s = sub.add_parser("trace-form", parents=[common], help="pull the delays of a signal flow graph into feedback")
    s.add_argument("file")
    s.set_defaults(func=cmd_trace_form)

    s = sub.add_parser("transfer", parents=[common], help="transfer matrix of a signal flow graph")
    s.add_argument("file")
    s.add_argument("--expand", type=int, metavar="T")
    s.set_defaults(func=cmd_transfer)

    s = sub.add_parser("axioms", parents=[common], help="check every axiom instance of the soundness corpus")
    s.set_defaults(func=cmd_axioms)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(f"sigflow: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SigflowError, OSError) as exc:
        print(f"sigflow: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"sigflow: internal error: {exc}", file=sys.stderr)
        return EXIT_BUG


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
