"""reqmon: structured requirements to constant-memory runtime monitors.

Pipeline: parse requirement sentences, formalize them into pure past-time
MTL, compile stream monitors that run online in constant memory, emit
C99 and pub-sub wrapper-node packages, and verify behavior by replaying
traces through an in-process simulated bus.
"""

from .errors import (DuplicateVariableError, MissingFieldError, ReqmonError,
                     ReqSyntaxError, TopicTypeMismatchError, TraceFormatError,
                     UninitializedExternError, UnknownExternError,
                     UnknownVariableError, UnmappedVariableError,
                     UnsupportedOperatorError, UnsupportedScopeError,
                     ValidationFailedError, VarMapError)
from .formalize import (ComponentSpec, SpecRequirement, desugar_persisted,
                        load_spec_file, make_component_spec, spec_from_json,
                        spec_to_json, to_ptmtl, trigger_formula,
                        write_spec_file)
from .monitor import (ExternDecl, MonitorSpec, MonitorState, StreamNode,
                      TriggerDef, compile_monitor, derive_handler_name)
from .cgen import EmittedPackage, emit_c99
from .nodegen import (NodePlan, VarBinding, VarMapping, gen_package,
                      load_varmap, plan_nodes, varmap_from_json, write_package)
from .parser import (load_requirements_file, load_requirements_text,
                     load_var_decls_file, load_var_decls_text,
                     parse_expression, parse_requirement)
from .ptmtl import (MAnd, MAtom, MFirst, MHistorically, MImplies, MNot, MOnce,
                    MOr, MSince, MtlFormula, MYesterday, formula_variables,
                    from_smv_string, is_pure_past, subformulas, temporal_depth,
                    to_smv_string)
from .reqast import (ScopeSpec, SourceRequirement, TimingSpec, VarDecl,
                     format_expr, format_requirement)
from .semantics import Trace, eval_at, eval_expr, eval_trace, false_steps
from .simbus import (BusMessage, FixedClock, LogLine, OnAllInputsChanged,
                     OnAnyMessage, ReplayTrace, SimBus, TraceEvent,
                     attach_monitor, load_trace_file, logger_node,
                     run_log_to_jsonl, trace_from_jsonl, violation_counts)
from .typecheck import TypeIssue, validate

__version__ = "0.1.0"
