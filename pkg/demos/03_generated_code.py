"""What the code generators emit: C99 monitor plus the wrapper-node package.

Prints the generated monitor header, a slice of the node source, and the
package tree layout. The C is self-contained (static buffers, no dynamic
allocation); the node package is meant to drop into a larger system as a
black box.
"""

import tempfile
from pathlib import Path

from reqmon import (VarDecl, compile_monitor, gen_package,
                    make_component_spec, parse_requirement, plan_nodes,
                    varmap_from_json, write_package)

TEXT = ("if persisted(10, current_consumption > 10 & windspeed > 5) "
        "ROS_component shall within 10 seconds "
        "satisfy current_consumption <= 10")

VARMAP = """{
  "variables": [
    {"name": "current_consumption", "type": "std_msgs/Float64",
     "topic": "motor/current"},
    {"name": "windspeed", "type": "std_msgs/Float64", "topic": "windspeed"}
  ]
}"""


def main():
    req = parse_requirement(TEXT, "ROS-001")
    decls = [VarDecl("current_consumption", "numeric"),
             VarDecl("windspeed", "numeric")]
    spec = make_component_spec([req], decls)
    mspec = compile_monitor(spec)
    plan = plan_nodes(mspec, varmap_from_json(VARMAP))
    pkg = gen_package(plan, mspec, package_name="ros_component_monitoring")

    print("== monitor.h ==")
    print(pkg.file("copilot/monitor.h"))

    node = pkg.file("src/monitor_node.cpp")
    print("== monitor_node.cpp (subscription wiring) ==")
    start = node.index("current_consumption_subscription_")
    print(node[start - 4:node.index("handlerpropROS_001_publisher_")])

    with tempfile.TemporaryDirectory() as tmp:
        write_package(pkg, tmp)
        print("== package tree ==")
        for path in sorted(Path(tmp).rglob("*")):
            if path.is_file():
                print("  %s (%d bytes)" % (path.relative_to(tmp),
                                           path.stat().st_size))

    safety = pkg.file("copilot/monitor.c")
    print("\nno dynamic allocation in monitor.c:",
          "malloc" not in safety and "free" not in safety)


if __name__ == "__main__":
    main()
