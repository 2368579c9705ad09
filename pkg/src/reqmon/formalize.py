"""Requirement -> pure past-time MTL translation and the interchange file.

Translation scheme (null scope only):

  trigger      rising edge of the condition, or the condition already true
               at step 0:  cond & (FTP | Y !cond).  An absent condition
               triggers at every step.
  Immediate    !(trigger & !response)
  Within(N)    !( !response S[N,N] (trigger & !response) )
               i.e. a violation becomes detectable exactly when a trigger
               is N steps old and the response never held since, the
               trigger step included.

`persisted(n, p)` desugars to H[0,n] p: p must have held at the current
step and the n previous ones.  Timing bounds convert to steps at
`rate` steps per time unit; persisted bounds are already steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import UnsupportedScopeError, ValidationFailedError
from .ptmtl import (MAnd, MAtom, MFirst, MHistorically, MImplies, MNot,
                    MOr, MSince, MtlFormula, MYesterday, formula_variables,
                    from_smv_string, to_smv_string)
from .reqast import (And, BoolLit, Expr, Implies, Not, Or, Persisted,
                     SourceRequirement, VarDecl)
from .typecheck import validate


def desugar_persisted(e: Expr) -> MtlFormula:
    """Lift connectives to formula level; persisted(n, p) -> H[0,n] p."""
    if isinstance(e, Persisted):
        return MHistorically(0, e.bound, desugar_persisted(e.operand))
    if isinstance(e, Not):
        return MNot(desugar_persisted(e.operand))
    if isinstance(e, And):
        return MAnd(desugar_persisted(e.lhs), desugar_persisted(e.rhs))
    if isinstance(e, Or):
        return MOr(desugar_persisted(e.lhs), desugar_persisted(e.rhs))
    if isinstance(e, Implies):
        return MImplies(desugar_persisted(e.lhs), desugar_persisted(e.rhs))
    return MAtom(e)


def trigger_formula(cond: MtlFormula) -> MtlFormula:
    """Rising edge of cond, or cond true at the start of the (null) scope."""
    return MAnd(cond, MOr(MFirst(), MYesterday(MNot(cond))))


def to_ptmtl(req: SourceRequirement, rate: int = 1) -> MtlFormula:
    """Translate a validated requirement; rate = monitor steps per time unit."""
    if req.scope.kind != "null":
        raise UnsupportedScopeError("unsupported scope %r" % req.scope.kind)
    if rate < 1:
        raise ValueError("rate must be >= 1")

    resp = desugar_persisted(req.response)
    if req.condition is None:
        if req.timing.kind == "immediate":
            return resp
        n = req.timing.bound * rate
        # every step is a trigger: violated when the response stayed
        # false for a whole deadline window
        return MNot(MSince(n, n, MNot(resp), MNot(resp)))

    trigger = trigger_formula(desugar_persisted(req.condition))
    if req.timing.kind == "immediate":
        return MNot(MAnd(trigger, MNot(resp)))
    n = req.timing.bound * rate
    return MNot(MSince(n, n, MNot(resp), MAnd(trigger, MNot(resp))))


@dataclass(frozen=True)
class SpecRequirement:
    id: str
    raw_text: str
    smv_formula: str
    ptmtl: MtlFormula


@dataclass(frozen=True)
class ComponentSpec:
    component: str
    requirements: tuple[SpecRequirement, ...]
    variables: tuple[VarDecl, ...]


def make_component_spec(reqs: list[SourceRequirement],
                        decls: list[VarDecl],
                        rate: int = 1) -> ComponentSpec:
    """Formalize a requirement set into the interchange structure.

    All requirements must validate against `decls` and target the same
    component.  The variables list is restricted to variables actually
    referenced, in declaration order.
    """
    issues = []
    for req in reqs:
        for issue in validate(req, decls):
            issues.append("%s: %s" % (req.id, issue))
    if issues:
        raise ValidationFailedError(issues)

    components = {req.component for req in reqs}
    if len(components) > 1:
        raise ValidationFailedError(
            ["requirements target multiple components: %s"
             % ", ".join(sorted(components))])
    component = reqs[0].component if reqs else ""

    entries = []
    referenced: set[str] = set()
    for req in reqs:
        formula = to_ptmtl(req, rate=rate)
        referenced.update(formula_variables(formula))
        entries.append(SpecRequirement(id=req.id, raw_text=req.raw_text,
                                       smv_formula=to_smv_string(formula),
                                       ptmtl=formula))
    variables = tuple(d for d in decls if d.name in referenced)
    return ComponentSpec(component=component, requirements=tuple(entries),
                         variables=variables)


def spec_to_json(spec: ComponentSpec) -> str:
    doc = {
        "component": spec.component,
        "requirements": [
            {"id": r.id, "text": r.raw_text, "ptLTL": r.smv_formula}
            for r in spec.requirements
        ],
        "variables": [
            {"name": v.name, "kind": v.kind} for v in spec.variables
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def spec_from_json(text: str) -> ComponentSpec:
    doc = json.loads(text)
    requirements = tuple(
        SpecRequirement(id=r["id"], raw_text=r["text"], smv_formula=r["ptLTL"],
                        ptmtl=from_smv_string(r["ptLTL"]))
        for r in doc["requirements"])
    variables = tuple(VarDecl(v["name"], v["kind"]) for v in doc["variables"])
    return ComponentSpec(component=doc["component"],
                         requirements=requirements, variables=variables)


def write_spec_file(spec: ComponentSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(spec_to_json(spec))


def load_spec_file(path) -> ComponentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_json(fh.read())
