"""Generation of the pub-sub wrapper package around an emitted monitor.

The package contains a monitoring node (subscribes to every monitor
input, re-evaluates on each arriving message, publishes a violation
message per fired handler), a logging node (subscribes to the violation
topics and reports them to the middleware logger), a manifest and a build
script.  Naming rules:

    subscription field   <variable>_subscription_
    publisher field      <handler>_publisher_
    violation topic      <prefix>/<handler>        (default prefix "copilot")
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .cgen import EmittedPackage, emit_c99
from .errors import (DuplicateVariableError, TopicTypeMismatchError,
                     UnmappedVariableError, VarMapError)
from .monitor import MonitorSpec

DEFAULT_TOPIC_PREFIX = "copilot"

_NUMERIC_MSG_TYPES = ("std_msgs/Float32", "std_msgs/Float64",
                      "std_msgs/Int32", "std_msgs/Int64")
_BOOLEAN_MSG_TYPES = ("std_msgs/Bool",)
_EMPTY_MSG_TYPE = "std_msgs/Empty"

_TOPIC_SEGMENT_RE = re.compile(r"^[A-Za-z0-9_]+$")


def msg_type_kind(msg_type: str) -> str:
    if msg_type in _NUMERIC_MSG_TYPES:
        return "numeric"
    if msg_type in _BOOLEAN_MSG_TYPES:
        return "boolean"
    raise VarMapError("unsupported message type %r (supported: %s)"
                      % (msg_type,
                         ", ".join(_NUMERIC_MSG_TYPES + _BOOLEAN_MSG_TYPES)))


def _normalize_msg_type(raw: str) -> str:
    parts = raw.split("/")
    if len(parts) == 3 and parts[1] == "msg":
        parts = [parts[0], parts[2]]
    if len(parts) != 2 or not all(parts):
        raise VarMapError("malformed message type %r" % raw)
    return "/".join(parts)


def _check_topic(topic: str) -> str:
    segments = topic.split("/")
    if not segments or not all(_TOPIC_SEGMENT_RE.match(s) for s in segments):
        raise VarMapError("malformed topic name %r" % topic)
    return topic


@dataclass(frozen=True)
class VarBinding:
    name: str
    msg_type: str  # normalized, e.g. "std_msgs/Float64"
    topic: str

    @property
    def kind(self) -> str:
        return msg_type_kind(self.msg_type)


@dataclass(frozen=True)
class VarMapping:
    entries: tuple[VarBinding, ...]

    def get(self, name: str) -> VarBinding | None:
        for entry in self.entries:
            if entry.name == name:
                return entry
        return None


def varmap_from_json(text: str) -> VarMapping:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise VarMapError("variable mapping is not valid JSON: %s" % exc) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("variables"), list):
        raise VarMapError('variable mapping must be {"variables": [...]}')
    entries: list[VarBinding] = []
    seen: set[str] = set()
    for item in doc["variables"]:
        try:
            name = item["name"]
            msg_type = item["type"]
            topic = item["topic"]
        except (TypeError, KeyError):
            raise VarMapError("each entry needs name, type and topic") from None
        if name in seen:
            raise DuplicateVariableError("duplicate mapping for variable %r" % name)
        seen.add(name)
        binding = VarBinding(name=name, msg_type=_normalize_msg_type(msg_type),
                             topic=_check_topic(topic))
        msg_type_kind(binding.msg_type)  # reject unsupported types early
        entries.append(binding)
    return VarMapping(entries=tuple(entries))


def load_varmap(path) -> VarMapping:
    with open(path, "r", encoding="utf-8") as fh:
        return varmap_from_json(fh.read())


@dataclass(frozen=True)
class Subscription:
    field_name: str
    topic: str
    variable: str
    msg_type: str


@dataclass(frozen=True)
class Publisher:
    field_name: str
    topic: str
    handler: str
    requirement_id: str


@dataclass(frozen=True)
class LoggerSubscription:
    field_name: str
    topic: str
    handler: str


@dataclass(frozen=True)
class NodePlan:
    subscriptions: tuple[Subscription, ...]
    publishers: tuple[Publisher, ...]
    logger_subscriptions: tuple[LoggerSubscription, ...]


def plan_nodes(m: MonitorSpec, vm: VarMapping,
               prefix: str = DEFAULT_TOPIC_PREFIX) -> NodePlan:
    """One subscription per monitor input, one publisher per trigger,
    logger mirror of every publisher."""
    subscriptions = []
    for extern in m.externs:
        binding = vm.get(extern.name)
        if binding is None:
            raise UnmappedVariableError(extern.name)
        if binding.kind != extern.kind:
            raise TopicTypeMismatchError(
                "variable '%s' is %s but topic '%s' carries %s messages"
                % (extern.name, extern.kind, binding.topic, binding.kind))
        subscriptions.append(Subscription(
            field_name=extern.name + "_subscription_",
            topic=binding.topic,
            variable=extern.name,
            msg_type=binding.msg_type))
    publishers = []
    logger_subs = []
    for trig in m.triggers:
        topic = "%s/%s" % (prefix, trig.handler_name)
        publishers.append(Publisher(
            field_name=trig.handler_name + "_publisher_",
            topic=topic,
            handler=trig.handler_name,
            requirement_id=trig.requirement_id))
        logger_subs.append(LoggerSubscription(
            field_name=trig.handler_name + "_subscription_",
            topic=topic,
            handler=trig.handler_name))
    return NodePlan(subscriptions=tuple(subscriptions),
                    publishers=tuple(publishers),
                    logger_subscriptions=tuple(logger_subs))


# text generation ------------------------------------------------------------

def _cpp_msg_type(msg_type: str) -> str:
    pkg, name = msg_type.split("/")
    return "%s::msg::%s" % (pkg, name)


def _msg_include(msg_type: str) -> str:
    pkg, name = msg_type.split("/")
    return "%s/msg/%s.hpp" % (pkg, name.lower())


def _msg_value_cast(msg_type: str, kind: str) -> str:
    # scalar std_msgs all carry a single .data field
    if kind == "numeric":
        return "static_cast<double>(msg->data)"
    return "msg->data"


def _monitor_node_cpp(plan: NodePlan, package_name: str) -> str:
    msg_types = sorted({s.msg_type for s in plan.subscriptions}
                       | {_EMPTY_MSG_TYPE})
    lines: list[str] = []
    lines.append("// Monitoring node: feeds incoming samples to the generated")
    lines.append("// monitor and publishes one empty message per violation.")
    lines.append("// Callbacks must run on a single executor thread so that each")
    lines.append("// input update and the step() that follows form one unit.")
    lines.append("")
    lines.append("#include <memory>")
    lines.append("")
    lines.append('#include "rclcpp/rclcpp.hpp"')
    for t in msg_types:
        lines.append('#include "%s"' % _msg_include(t))
    lines.append("")
    lines.append('extern "C" {')
    lines.append('#include "monitor.h"')
    lines.append("}")
    lines.append("")
    lines.append("class MonitorNode;")
    lines.append("static MonitorNode * g_monitor_node = nullptr;")
    lines.append("")
    lines.append("class MonitorNode : public rclcpp::Node {")
    lines.append("public:")
    lines.append('  MonitorNode() : Node("%s_monitor_node") {' % package_name)
    lines.append("    g_monitor_node = this;")
    for s in plan.subscriptions:
        cpp_t = _cpp_msg_type(s.msg_type)
        lines.append("    %s = this->create_subscription<%s>("
                     % (s.field_name, cpp_t))
        lines.append('        "%s", 10,' % s.topic)
        lines.append("        [this](const %s::SharedPtr msg) {" % cpp_t)
        lines.append("          %s = %s;"
                     % (s.variable, _msg_value_cast(s.msg_type, _sub_kind(s))))
        lines.append("          %s_seen_ = true;" % s.variable)
        lines.append("          this->evaluate();")
        lines.append("        });")
    for p in plan.publishers:
        lines.append("    %s = this->create_publisher<%s>("
                     % (p.field_name, _cpp_msg_type(_EMPTY_MSG_TYPE)))
        lines.append('        "%s", 10);' % p.topic)
    lines.append("  }")
    lines.append("")
    for p in plan.publishers:
        lines.append("  void publish_%s() {" % p.handler)
        lines.append("    %s->publish(%s());"
                     % (p.field_name, _cpp_msg_type(_EMPTY_MSG_TYPE)))
        lines.append("  }")
    lines.append("")
    lines.append("private:")
    lines.append("  void evaluate() {")
    if plan.subscriptions:
        conj = " && ".join("%s_seen_" % s.variable for s in plan.subscriptions)
        lines.append("    // do not step before every input has one sample")
        lines.append("    if (!(%s)) {" % conj)
        lines.append("      return;")
        lines.append("    }")
    lines.append("    step();")
    lines.append("  }")
    lines.append("")
    for s in plan.subscriptions:
        lines.append("  bool %s_seen_ = false;" % s.variable)
    for s in plan.subscriptions:
        lines.append("  rclcpp::Subscription<%s>::SharedPtr %s;"
                     % (_cpp_msg_type(s.msg_type), s.field_name))
    for p in plan.publishers:
        lines.append("  rclcpp::Publisher<%s>::SharedPtr %s;"
                     % (_cpp_msg_type(_EMPTY_MSG_TYPE), p.field_name))
    lines.append("};")
    lines.append("")
    for p in plan.publishers:
        lines.append('extern "C" void %s(void) {' % p.handler)
        lines.append("  if (g_monitor_node != nullptr) {")
        lines.append("    g_monitor_node->publish_%s();" % p.handler)
        lines.append("  }")
        lines.append("}")
        lines.append("")
    lines.append("int main(int argc, char ** argv) {")
    lines.append("  rclcpp::init(argc, argv);")
    lines.append("  rclcpp::spin(std::make_shared<MonitorNode>());")
    lines.append("  rclcpp::shutdown();")
    lines.append("  return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _sub_kind(s: Subscription) -> str:
    return msg_type_kind(s.msg_type)


def _logger_node_cpp(plan: NodePlan, package_name: str) -> str:
    lines: list[str] = []
    lines.append("// Logging node: reports every violation message to the")
    lines.append("// default logger. Remove it from the build to disable.")
    lines.append("")
    lines.append("#include <memory>")
    lines.append("")
    lines.append('#include "rclcpp/rclcpp.hpp"')
    lines.append('#include "%s"' % _msg_include(_EMPTY_MSG_TYPE))
    lines.append("")
    lines.append("class LoggerNode : public rclcpp::Node {")
    lines.append("public:")
    lines.append('  LoggerNode() : Node("%s_logger_node") {' % package_name)
    for sub in plan.logger_subscriptions:
        cpp_t = _cpp_msg_type(_EMPTY_MSG_TYPE)
        lines.append("    %s = this->create_subscription<%s>("
                     % (sub.field_name, cpp_t))
        lines.append('        "%s", 10,' % sub.topic)
        lines.append("        [this](const %s::SharedPtr) {" % cpp_t)
        lines.append('          RCLCPP_WARN(this->get_logger(), "violation: %s");'
                     % sub.handler)
        lines.append("        });")
    lines.append("  }")
    lines.append("")
    lines.append("private:")
    for sub in plan.logger_subscriptions:
        lines.append("  rclcpp::Subscription<%s>::SharedPtr %s;"
                     % (_cpp_msg_type(_EMPTY_MSG_TYPE), sub.field_name))
    lines.append("};")
    lines.append("")
    lines.append("int main(int argc, char ** argv) {")
    lines.append("  rclcpp::init(argc, argv);")
    lines.append("  rclcpp::spin(std::make_shared<LoggerNode>());")
    lines.append("  rclcpp::shutdown();")
    lines.append("  return 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _package_xml(plan: NodePlan, package_name: str) -> str:
    msg_pkgs = sorted({s.msg_type.split("/")[0] for s in plan.subscriptions}
                      | {_EMPTY_MSG_TYPE.split("/")[0]})
    lines: list[str] = []
    lines.append('<?xml version="1.0"?>')
    lines.append('<package format="3">')
    lines.append("  <name>%s</name>" % package_name)
    lines.append("  <version>0.1.0</version>")
    lines.append("  <description>Generated runtime monitoring nodes"
                 " (monitoring node plus optional logging node)</description>")
    lines.append('  <maintainer email="maintainers@example.com">'
                 "maintainers</maintainer>")
    lines.append("  <license>Apache-2.0</license>")
    lines.append("")
    lines.append("  <buildtool_depend>ament_cmake</buildtool_depend>")
    lines.append("  <depend>rclcpp</depend>")
    for pkg in msg_pkgs:
        lines.append("  <depend>%s</depend>" % pkg)
    lines.append("")
    lines.append("  <!-- The logger_node executable is optional; drop it from")
    lines.append("       CMakeLists.txt to disable violation logging. -->")
    lines.append("")
    lines.append("  <export>")
    lines.append("    <build_type>ament_cmake</build_type>")
    lines.append("  </export>")
    lines.append("</package>")
    return "\n".join(lines) + "\n"


def _cmakelists(plan: NodePlan, package_name: str) -> str:
    msg_pkgs = sorted({s.msg_type.split("/")[0] for s in plan.subscriptions}
                      | {_EMPTY_MSG_TYPE.split("/")[0]})
    deps = " ".join(["rclcpp"] + msg_pkgs)
    lines: list[str] = []
    lines.append("cmake_minimum_required(VERSION 3.8)")
    lines.append("project(%s C CXX)" % package_name)
    lines.append("")
    lines.append("find_package(ament_cmake REQUIRED)")
    lines.append("find_package(rclcpp REQUIRED)")
    for pkg in msg_pkgs:
        lines.append("find_package(%s REQUIRED)" % pkg)
    lines.append("")
    lines.append("add_library(monitor_core STATIC copilot/monitor.c)")
    lines.append("target_include_directories(monitor_core PUBLIC copilot)")
    lines.append("")
    lines.append("add_executable(monitor_node src/monitor_node.cpp)")
    lines.append("target_link_libraries(monitor_node monitor_core)")
    lines.append("ament_target_dependencies(monitor_node %s)" % deps)
    lines.append("")
    lines.append("# Optional logging node: delete the next three lines to"
                 " disable it.")
    lines.append("add_executable(logger_node src/logger_node.cpp)")
    lines.append("ament_target_dependencies(logger_node %s)" % deps)
    lines.append("")
    lines.append("install(TARGETS monitor_node logger_node"
                 " DESTINATION lib/${PROJECT_NAME})")
    lines.append("")
    lines.append("ament_package()")
    return "\n".join(lines) + "\n"


def gen_package(plan: NodePlan, m: MonitorSpec,
                package_name: str = "monitoring",
                float_inputs: bool = False) -> EmittedPackage:
    """Emit the whole package tree (deterministic text)."""
    monitor_files = emit_c99(m, float_inputs=float_inputs)
    files = {
        "copilot/monitor.c": monitor_files.file("monitor.c"),
        "copilot/monitor.h": monitor_files.file("monitor.h"),
        "src/monitor_node.cpp": _monitor_node_cpp(plan, package_name),
        "src/logger_node.cpp": _logger_node_cpp(plan, package_name),
        "package.xml": _package_xml(plan, package_name),
        "CMakeLists.txt": _cmakelists(plan, package_name),
    }
    return EmittedPackage(files=files)


def write_package(pkg: EmittedPackage, out_dir) -> None:
    import os
    for rel, content in sorted(pkg.files.items()):
        path = os.path.join(out_dir, rel)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
