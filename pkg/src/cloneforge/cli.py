"""Command-line front end: parse operation/relation JSON, dispatch to the
deciders, and emit deterministic reports.

Exit codes: 0 = ran with a definite verdict, 2 = usage or parse error,
3 = unknown (cap exceeded).
"""

import argparse
import json
import os
import sys

from . import __version__
from .closure import DEFAULT_CAP, clone_part
from .core import Operation, builtin as make_builtin, make_operation
from .errors import CloneError, ParseError, ValidationError
from .maximal import (
    gen_all_maximal,
    is_complete,
    is_functionally_complete,
    is_sheffer,
    slupecki_criterion,
)
from .minimal import (
    NotMinorsTrivial,
    classify_minimal_type,
    enumerate_minimal_clones,
    has_taylor_witness,
    is_minimal_clone,
)
from .relations import Relation, is_rigid, make_relation, preserves

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


def _load_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}: {e.msg}") from e


def _as_operation(obj, where):
    for field in ("k", "arity", "table"):
        if field not in obj:
            raise ValidationError(f"{where}: missing field {field!r}")
    try:
        return make_operation(obj["k"], obj["arity"], obj["table"])
    except CloneError as e:
        raise ValidationError(f"{where}: {e}") from e


def _as_relation(obj, where):
    for field in ("k", "arity", "tuples"):
        if field not in obj:
            raise ValidationError(f"{where}: missing field {field!r}")
    try:
        return make_relation(
            obj["k"], obj["arity"], [tuple(t) for t in obj["tuples"]]
        )
    except CloneError as e:
        raise ValidationError(f"{where}: {e}") from e


def parse_input(path):
    """An Operation, Relation, or list of Operations from a JSON file."""
    obj = _load_json(path)
    if isinstance(obj, list):
        return [_as_operation(o, f"{path}[{i}]") for i, o in enumerate(obj)]
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object or a list")
    if "operations" in obj:
        return [
            _as_operation(o, f"{path}.operations[{i}]")
            for i, o in enumerate(obj["operations"])
        ]
    if "tuples" in obj:
        return _as_relation(obj, path)
    return _as_operation(obj, path)


def _need_ops(value, path):
    if isinstance(value, Relation):
        raise ValidationError(f"{path}: expected operations, got a relation")
    return value if isinstance(value, list) else [value]


def _need_op(value, path):
    ops = _need_ops(value, path)
    if len(ops) != 1:
        raise ValidationError(f"{path}: expected exactly one operation")
    return ops[0]


def _need_rel(value, path):
    if not isinstance(value, Relation):
        raise ValidationError(f"{path}: expected a relation")
    return value


def _op_json(op):
    return {"k": op.k, "arity": op.arity, "table": list(op.table)}


def _rel_json(rel):
    return {
        "k": rel.k,
        "arity": rel.arity,
        "tuples": [list(t) for t in rel.tuples],
    }


def _verdict_json(v):
    return {"answer": v.answer, "certificate": v.certificate}


# --- verb handlers: each returns (payload-dict, exit-code) ----------------

def _cmd_gen_maximal(args):
    witnesses = gen_all_maximal(args.k)
    return {
        "k": args.k,
        "count": len(witnesses),
        "witnesses": [
            {
                "rtype": w.rtype,
                "params": {k: v for k, v in w.params},
                "relation": _rel_json(w.relation),
            }
            for w in witnesses
        ],
    }, EXIT_OK


def _cmd_check_complete(args):
    F = _need_ops(parse_input(args.file), args.file)
    report = is_complete(F)
    return {
        "complete": report.complete,
        "witnesses": [
            {
                "rtype": w.rtype,
                "params": {k: v for k, v in w.params},
                "violator": _op_json(v) if v is not None else None,
            }
            for w, v in report.per_witness
        ],
    }, EXIT_OK


def _cmd_check_fcomplete(args):
    F = _need_ops(parse_input(args.file), args.file)
    v = is_functionally_complete(F)
    return {
        "functionally_complete": v.is_yes,
        "verdict": _verdict_json(v),
    }, EXIT_OK


def _cmd_check_sheffer(args):
    f = _need_op(parse_input(args.file), args.file)
    v = is_sheffer(f)
    return {"sheffer": v.is_yes, "verdict": _verdict_json(v)}, EXIT_OK


def _cmd_check_slupecki(args):
    F = _need_ops(parse_input(args.file), args.file)
    v = slupecki_criterion(F)
    return {"complete": v.is_yes, "verdict": _verdict_json(v)}, EXIT_OK


def _cmd_closure(args):
    F = _need_ops(parse_input(args.file), args.file)
    part = clone_part(F, args.arity, args.cap)
    payload = {
        "k": part.k,
        "arity": part.arity,
        "size": len(part),
        "closed": part.closed,
        "cap_hit": part.cap_hit,
        "non_projections": len(part.non_projections()),
        "generator_fingerprint": part.generator_fingerprint,
    }
    if len(part) <= 5000:
        payload["tables"] = [list(t) for t in part.ops]
    return payload, EXIT_UNKNOWN if part.cap_hit else EXIT_OK


def _cmd_classify_min(args):
    f = _need_op(parse_input(args.file), args.file)
    try:
        t = classify_minimal_type(f)
    except NotMinorsTrivial as e:
        return {"minors_trivial": False, "reason": str(e)}, EXIT_OK
    return {
        "minors_trivial": True,
        "tag": t.tag,
        "index": t.index,
        "arity": t.arity,
    }, EXIT_OK


def _cmd_check_min(args):
    f = _need_op(parse_input(args.file), args.file)
    rep = is_minimal_clone(f, n_max=args.nmax, cap=args.cap)
    payload = {
        "verdict": rep.verdict.answer,
        "path": rep.path,
        "witness": _op_json(rep.witness) if rep.witness else None,
        "n_max": rep.n_max,
        "exact": rep.exact,
    }
    return payload, EXIT_UNKNOWN if rep.verdict.is_unknown else EXIT_OK


def _cmd_enumerate_min(args):
    rep = enumerate_minimal_clones(args.k, cap=args.cap)
    return {
        "k": rep.k,
        "total_clones": rep.total_clones,
        "similarity_classes": rep.similarity_classes,
        "breakdown": dict(sorted(rep.breakdown.items())),
        "classes": [
            {
                "tag": c.tag,
                "representative": _op_json(c.representative),
                "clone_count": c.clone_count,
                "clone_representatives": [
                    _op_json(o) for o in c.clone_representatives
                ],
            }
            for c in rep.classes
        ],
    }, EXIT_OK


def _cmd_taylor_witness(args):
    F = _need_ops(parse_input(args.file), args.file)
    v = has_taylor_witness(F, cap=args.cap)
    return {
        "taylor": v.answer,
        "verdict": _verdict_json(v),
    }, EXIT_UNKNOWN if v.is_unknown else EXIT_OK


def _cmd_preserves(args):
    f = _need_op(parse_input(args.op_file), args.op_file)
    rho = _need_rel(parse_input(args.rel_file), args.rel_file)
    return {"preserves": preserves(f, rho)}, EXIT_OK


def _cmd_builtin(args):
    params = {}
    if args.k is not None:
        params["k"] = args.k
    for name in ("p", "d", "value"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    if args.file is not None:
        params["rho"] = _need_rel(parse_input(args.file), args.file)
    op = make_builtin(args.type, **params)
    return {"name": args.type, "operation": _op_json(op)}, EXIT_OK


def _cmd_rigid(args):
    rho = _need_rel(parse_input(args.file), args.file)
    census = enumerate_minimal_clones(rho.k, cap=args.cap)
    generators = [
        o for c in census.classes for o in c.clone_representatives
    ]
    return {
        "rigid": is_rigid(rho, generators),
        "generators_checked": len(generators),
    }, EXIT_OK


def _render_text(payload, indent=0):
    lines = []
    pad = "  " * indent
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                lines.extend(_render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value, sort_keys=True)}")
    return lines


def build_parser():
    cap_default = int(os.environ.get("CLONEFORGE_CAP", DEFAULT_CAP))
    parser = argparse.ArgumentParser(prog="cloneforge")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--cap", type=int, default=cap_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--out", default=None)

    p = sub.add_parser("gen-maximal")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_gen_maximal)

    for verb, handler in (
        ("check-complete", _cmd_check_complete),
        ("check-fcomplete", _cmd_check_fcomplete),
        ("check-sheffer", _cmd_check_sheffer),
        ("check-slupecki", _cmd_check_slupecki),
        ("classify-min", _cmd_classify_min),
        ("taylor-witness", _cmd_taylor_witness),
        ("rigid", _cmd_rigid),
    ):
        p = sub.add_parser(verb)
        p.add_argument("file")
        common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("closure")
    p.add_argument("file")
    p.add_argument("--arity", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_closure)

    p = sub.add_parser("check-min")
    p.add_argument("file")
    p.add_argument("--nmax", type=int, default=None)
    common(p)
    p.set_defaults(handler=_cmd_check_min)

    p = sub.add_parser("enumerate-min")
    p.add_argument("--k", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_enumerate_min)

    p = sub.add_parser("preserves")
    p.add_argument("op_file")
    p.add_argument("rel_file")
    common(p)
    p.set_defaults(handler=_cmd_preserves)

    p = sub.add_parser("builtin")
    p.add_argument("--type", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--value", type=int, default=None)
    p.add_argument("file", nargs="?", default=None)
    common(p)
    p.set_defaults(handler=_cmd_builtin)

    return parser


def run(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, code = args.handler(args)
    except (ParseError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CloneError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "tool": "cloneforge",
        "version": __version__,
        "verb": args.verb,
        "cap": args.cap,
        "seed": args.seed,
    }
    report.update(payload)
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(_render_text(report)) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
