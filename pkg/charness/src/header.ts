/** Parsing of the generated monitor.h: input globals and handler names. */

export type ExternKind = "numeric" | "boolean";

export interface ExternDecl {
  name: string;
  kind: ExternKind;
}

export interface MonitorInterface {
  /** In declaration order, which is the CSV column order. */
  externs: ExternDecl[];
  /** In declaration order, which is the trigger firing order. */
  handlers: string[];
}

const EXTERN_RE = /^extern\s+(double|float|bool)\s+([A-Za-z_][A-Za-z0-9_]*);$/;
const HANDLER_RE = /^extern\s+void\s+([A-Za-z_][A-Za-z0-9_]*)\(void\);$/;

export function parseMonitorHeader(header: string): MonitorInterface {
  const externs: ExternDecl[] = [];
  const handlers: string[] = [];
  for (const raw of header.split("\n")) {
    const line = raw.trim();
    const handler = HANDLER_RE.exec(line);
    if (handler) {
      handlers.push(handler[1]);
      continue;
    }
    const extern = EXTERN_RE.exec(line);
    if (extern) {
      externs.push({
        name: extern[2],
        kind: extern[1] === "bool" ? "boolean" : "numeric",
      });
    }
  }
  return { externs, handlers };
}
