"""From a structured requirement sentence to a past-time MTL formula.

Walks the front half of the pipeline: parse the sentence, type-check it
against the variable declarations, desugar `persisted`, and render the
formula in the SMV-style interchange format.
"""

from reqmon import (VarDecl, make_component_spec, parse_requirement,
                    temporal_depth, validate)

TEXT = ("if persisted(10, current_consumption > 10 & windspeed > 5) "
        "ROS_component shall within 10 seconds "
        "satisfy current_consumption <= 10")

DECLS = [VarDecl("current_consumption", "numeric"),
         VarDecl("windspeed", "numeric")]


def main():
    print("sentence:")
    print(" ", TEXT)

    req = parse_requirement(TEXT, "ROS-001")
    print("\nparsed fields:")
    print("  id:       ", req.id)
    print("  component:", req.component)
    print("  timing:   ", req.timing)
    print("  condition present:", req.condition is not None)

    issues = validate(req, DECLS)
    print("\ntype issues:", issues or "none")

    spec = make_component_spec([req], DECLS)
    entry = spec.requirements[0]
    print("\npt-MTL (SMV-style):")
    print(" ", entry.smv_formula)
    print("\ntemporal depth (max lookback in steps):",
          temporal_depth(entry.ptmtl))

    # a deliberately broken sentence, to show the positioned diagnostics
    try:
        parse_requirement("sys shall within 0 seconds satisfy ok", "R-BAD")
    except Exception as exc:
        print("\nrejected sentence:", exc)


if __name__ == "__main__":
    main()
