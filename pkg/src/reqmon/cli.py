"""Command-line pipeline driver.

Subcommands mirror the toolchain stages:

    check      parse + validate requirement and declaration files
    formalize  write the component specification (JSON interchange file)
    gen        emit C99 monitor plus wrapper-node package tree(s)
    simulate   replay a trace file through the hosted monitor on the bus
    explain    plain-words semantics of each requirement

Exit codes: 0 ok, 1 usage, 2 parse/validate, 3 generation, 4 simulation I/O.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from .errors import (ReqmonError, ReqSyntaxError, TraceFormatError,
                     TopicTypeMismatchError, UnmappedVariableError,
                     ValidationFailedError, VarMapError)
from .formalize import (ComponentSpec, load_spec_file, make_component_spec,
                        spec_to_json)
from .monitor import compile_monitor
from .nodegen import (DEFAULT_TOPIC_PREFIX, gen_package, load_varmap,
                      plan_nodes, write_package)
from .parser import (load_requirements_text, load_var_decls_file,
                     parse_requirement)
from .ptmtl import MHistorically, subformulas
from .reqast import Persisted, SourceRequirement, format_expr, walk
from .simbus import (FixedClock, OnAllInputsChanged, OnAnyMessage, SimBus,
                     attach_monitor, load_trace_file, logger_node,
                     run_log_to_jsonl, violation_counts)
from .typecheck import validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_GEN = 3
EXIT_SIM = 4


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # map argparse's exit(2) onto our usage code
        raise _UsageError(message)


@dataclass
class _LoadedRequirements:
    requirements: list[SourceRequirement]
    diagnostics: list[str]


def _load_requirements(path) -> _LoadedRequirements:
    diags: list[str] = []
    reqs: list[SourceRequirement] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _LoadedRequirements([], ["%s: %s" % (path, exc)])
    try:
        blocks = load_requirements_text(text)
    except ReqSyntaxError as exc:
        return _LoadedRequirements([], ["%s: %s" % (path, exc)])
    for req_id, sentence, lineno in blocks:
        try:
            reqs.append(parse_requirement(sentence, req_id))
        except ReqSyntaxError as exc:
            diags.append("%s: %s (block at line %d): %s"
                         % (path, req_id, lineno, exc))
    return _LoadedRequirements(reqs, diags)


def _parse_policy(text: str):
    if text == "onany":
        return OnAnyMessage()
    if text == "onallchanged":
        return OnAllInputsChanged()
    if text.startswith("clock:"):
        try:
            period = float(text.split(":", 1)[1])
        except ValueError:
            raise _UsageError("bad clock period in %r" % text) from None
        if not period > 0:
            raise _UsageError("clock period must be > 0")
        return FixedClock(period)
    raise _UsageError("unknown policy %r (use onany, onallchanged, or clock:N)"
                      % text)


def _package_base_name(component: str) -> str:
    import re
    base = re.sub(r"[^A-Za-z0-9_]", "_", component).lower().strip("_")
    return (base or "component") + "_monitoring"


def _sanitize_id(req_id: str) -> str:
    import re
    return re.sub(r"[^A-Za-z0-9_]", "_", req_id).lower()


# subcommands ----------------------------------------------------------------

def cmd_check(args) -> int:
    loaded = _load_requirements(args.requirements)
    for line in loaded.diagnostics:
        print("error: %s" % line)
    try:
        decls = load_var_decls_file(args.variables)
    except (OSError, ReqSyntaxError) as exc:
        print("error: %s: %s" % (args.variables, exc))
        return EXIT_PARSE
    ok = not loaded.diagnostics
    for req in loaded.requirements:
        issues = validate(req, decls)
        for issue in issues:
            print("error: %s: %s" % (req.id, issue))
            ok = False
        if not issues:
            print("ok: %s" % req.id)
    if not loaded.requirements and not loaded.diagnostics:
        print("warning: no requirements found")
    return EXIT_OK if ok else EXIT_PARSE


def _formalize(args) -> ComponentSpec:
    loaded = _load_requirements(args.requirements)
    if loaded.diagnostics:
        raise ValidationFailedError(loaded.diagnostics)
    decls = load_var_decls_file(args.variables)
    return make_component_spec(loaded.requirements, decls, rate=args.rate)


def cmd_formalize(args) -> int:
    try:
        spec = _formalize(args)
    except (OSError, ReqSyntaxError, ValidationFailedError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    text = spec_to_json(spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print("wrote %s" % args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = load_spec_file(args.spec)
        varmap = load_varmap(args.varmap)
    except (OSError, ReqSyntaxError, VarMapError, KeyError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    base = _package_base_name(spec.component)
    if args.split:
        parts = [(ComponentSpec(component=spec.component, requirements=(r,),
                                variables=tuple(
                                    v for v in spec.variables
                                    if v.name in _referenced(r))),
                  "%s_%s" % (base, _sanitize_id(r.id)))
                 for r in spec.requirements]
    else:
        parts = [(spec, base)]
    try:
        for part, name in parts:
            mspec = compile_monitor(part)
            plan = plan_nodes(mspec, varmap, prefix=args.prefix)
            pkg = gen_package(plan, mspec, package_name=name,
                              float_inputs=args.c_float)
            out_dir = os.path.join(args.out, name)
            write_package(pkg, out_dir)
            for rel in sorted(pkg.files):
                print("wrote %s" % os.path.join(out_dir, rel))
    except (UnmappedVariableError, TopicTypeMismatchError, ReqmonError,
            ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_GEN
    return EXIT_OK


def _referenced(spec_req) -> set[str]:
    from .ptmtl import formula_variables
    return set(formula_variables(spec_req.ptmtl))


def cmd_simulate(args) -> int:
    try:
        spec = load_spec_file(args.spec)
        varmap = load_varmap(args.varmap)
    except (OSError, ReqSyntaxError, VarMapError, KeyError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    try:
        trace = load_trace_file(args.trace)
    except (OSError, TraceFormatError, ValueError) as exc:
        print("error: %s: %s" % (args.trace, exc), file=sys.stderr)
        return EXIT_SIM
    try:
        mspec = compile_monitor(spec)
        plan = plan_nodes(mspec, varmap, prefix=args.prefix)
    except (UnmappedVariableError, TopicTypeMismatchError, ReqmonError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_GEN
    bus = SimBus()
    attach_monitor(bus, plan, mspec, _parse_policy(args.policy))
    logger_node(bus, plan)
    try:
        log = bus.replay(trace)
    except (TopicTypeMismatchError, ReqmonError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_SIM
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(run_log_to_jsonl(log))
    for req_id, count in violation_counts(log, plan).items():
        print("%s: %d" % (req_id, count))
    return EXIT_OK


def cmd_explain(args) -> int:
    loaded = _load_requirements(args.requirements)
    if loaded.diagnostics:
        for line in loaded.diagnostics:
            print("error: %s" % line, file=sys.stderr)
        return EXIT_PARSE
    try:
        decls = load_var_decls_file(args.variables)
        spec = make_component_spec(loaded.requirements, decls, rate=args.rate)
    except (OSError, ReqSyntaxError, ValidationFailedError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    by_id = {r.id: r for r in loaded.requirements}
    for entry in spec.requirements:
        req = by_id[entry.id]
        print("%s:" % req.id)
        print("  text: %s" % req.raw_text)
        if req.condition is None:
            if req.timing.kind == "immediate":
                print("  semantics: the response must hold at every step")
            else:
                steps = req.timing.bound * args.rate
                print("  semantics: at every step, the response must hold"
                      " within %d steps" % steps)
        else:
            print("  condition: %s" % format_expr(req.condition))
            for node in walk(req.condition):
                if isinstance(node, Persisted):
                    print("    persistence: (%s) must hold for %d consecutive"
                          " steps (the current one plus the %d before it)"
                          % (format_expr(node.operand), node.bound + 1,
                             node.bound))
            print("  trigger: the step the condition becomes true, or step 0"
                  " if it is true there")
            if req.timing.kind == "within":
                steps = req.timing.bound * args.rate
                print("  deadline: response within %d %s = %d steps"
                      " (rate %d); the violation is reported when the"
                      " deadline expires" % (req.timing.bound, req.timing.unit,
                                             steps, args.rate))
            else:
                print("  deadline: immediate (response must hold at the"
                      " trigger step)")
        print("  response: %s" % format_expr(req.response))
        print("  formula: %s" % entry.smv_formula)
    return EXIT_OK


# entry point ----------------------------------------------------------------

def build_arg_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="reqmon",
                             description="requirements-to-monitors toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate requirements")
    p.add_argument("requirements")
    p.add_argument("variables")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("formalize", help="write the component specification")
    p.add_argument("requirements")
    p.add_argument("variables")
    p.add_argument("--out", required=True)
    p.add_argument("--rate", type=int, default=1,
                   help="monitor steps per time unit (default 1)")
    p.set_defaults(func=cmd_formalize)

    p = sub.add_parser("gen", help="emit C99 monitor and node package")
    p.add_argument("spec")
    p.add_argument("varmap")
    p.add_argument("--out", required=True)
    p.add_argument("--prefix", default=DEFAULT_TOPIC_PREFIX,
                   help="violation topic prefix (default %(default)s)")
    p.add_argument("--split", action="store_true",
                   help="one package per requirement")
    p.add_argument("--c-float", dest="c_float", action="store_true",
                   help="emit float (not double) numeric inputs")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("simulate", help="replay a trace through the bus")
    p.add_argument("spec")
    p.add_argument("varmap")
    p.add_argument("trace")
    p.add_argument("--policy", default="onany",
                   help="onany | onallchanged | clock:PERIOD")
    p.add_argument("--prefix", default=DEFAULT_TOPIC_PREFIX)
    p.add_argument("--out", default=None, help="write the run log (JSONL)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("explain", help="describe requirement semantics")
    p.add_argument("requirements")
    p.add_argument("variables")
    p.add_argument("--rate", type=int, default=1)
    p.set_defaults(func=cmd_explain)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "rate", 1) < 1:
            raise _UsageError("--rate must be >= 1")
        return args.func(args)
    except _UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
