/** Generation of the replay driver main.c.
 *
 * The driver reads a headerless CSV (one row per step, one column per
 * monitor input in declaration order, booleans as 0/1), assigns the
 * globals, calls step(), and implements every handler to print one
 * "step,handler" line. It stays dependency-free C99.
 */

import type { MonitorInterface } from "./header.js";

export function generateMainC(iface: MonitorInterface): string {
  const n = iface.externs.length;
  const lines: string[] = [];
  lines.push("#include <stdio.h>");
  lines.push("#include <stdlib.h>");
  lines.push("#include <string.h>");
  lines.push('#include "monitor.h"');
  lines.push("");
  lines.push("static unsigned long long current_step = 0;");
  lines.push("");
  for (const handler of iface.handlers) {
    lines.push(`void ${handler}(void) {`);
    lines.push(`    printf("%llu,${handler}\\n", current_step);`);
    lines.push("}");
    lines.push("");
  }
  lines.push("int main(int argc, char **argv) {");
  lines.push("    FILE *in = stdin;");
  lines.push("    if (argc > 1) {");
  lines.push("        in = fopen(argv[1], \"r\");");
  lines.push("        if (in == NULL) {");
  lines.push('            fprintf(stderr, "cannot open %s\\n", argv[1]);');
  lines.push("            return 2;");
  lines.push("        }");
  lines.push("    }");
  lines.push("    char line[16384];");
  lines.push("    while (fgets(line, sizeof line, in) != NULL) {");
  lines.push("        size_t len = strlen(line);");
  lines.push("        while (len > 0 && (line[len - 1] == '\\n' || line[len - 1] == '\\r')) {");
  lines.push("            line[--len] = '\\0';");
  lines.push("        }");
  lines.push("        if (len == 0) {");
  lines.push("            continue;");
  lines.push("        }");
  if (n > 0) {
    lines.push(`        double fields[${n}];`);
    lines.push("        int count = 0;");
    lines.push('        char *tok = strtok(line, ",");');
    lines.push("        while (tok != NULL) {");
    lines.push(`            if (count >= ${n}) {`);
    lines.push("                count++;");
    lines.push("                break;");
    lines.push("            }");
    lines.push("            fields[count++] = strtod(tok, NULL);");
    lines.push('            tok = strtok(NULL, ",");');
    lines.push("        }");
    lines.push(`        if (count != ${n}) {`);
    lines.push(`            fprintf(stderr, "row %llu: expected ${n} fields, got %d\\n", current_step, count);`);
    lines.push("            return 3;");
    lines.push("        }");
    iface.externs.forEach((extern, i) => {
      if (extern.kind === "boolean") {
        lines.push(`        ${extern.name} = fields[${i}] != 0.0;`);
      } else {
        lines.push(`        ${extern.name} = fields[${i}];`);
      }
    });
  }
  lines.push("        step();");
  lines.push("        current_step++;");
  lines.push("    }");
  lines.push("    if (in != stdin) {");
  lines.push("        fclose(in);");
  lines.push("    }");
  lines.push("    return 0;");
  lines.push("}");
  return lines.join("\n") + "\n";
}
