/** Driving the reqmon CLI: the harness consumes the primary toolchain only
 * through its command-line interface and file formats. */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";

import type { EmittedMonitor, Firing } from "./harness.js";
import type { ExternDecl } from "./header.js";

const REPO_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), "..", "..");
const PYTHON = process.env.REQMON_PY ?? "python3";

function reqmon(args: string[]): string {
  return execFileSync(PYTHON, ["-m", "reqmon", ...args], {
    encoding: "utf8",
    env: { ...process.env, PYTHONPATH: join(REPO_ROOT, "src") },
  });
}

export interface RequirementSet {
  /** Requirement file blocks: id -> sentence. */
  requirements: Array<{ id: string; sentence: string }>;
  /** name -> kind */
  variables: Record<string, "numeric" | "boolean">;
}

export interface GeneratedCase {
  dir: string;
  specPath: string;
  varmapPath: string;
  emitted: EmittedMonitor;
  packageName: string;
}

function topicFor(variable: string): string {
  return `in/${variable}`;
}

/** formalize + gen: returns the emitted monitor pair and the file paths
 * needed to later simulate the same spec. */
export function generateCase(set: RequirementSet): GeneratedCase {
  const dir = mkdtempSync(join(tmpdir(), "reqmon-case-"));
  const reqPath = join(dir, "case.req");
  const varsPath = join(dir, "case.vars");
  const varmapPath = join(dir, "case.varmap.json");
  const specPath = join(dir, "spec.json");

  const reqLines: string[] = [];
  for (const { id, sentence } of set.requirements) {
    reqLines.push(`# id: ${id}`);
    reqLines.push(sentence);
  }
  writeFileSync(reqPath, reqLines.join("\n") + "\n");

  const varLines = Object.entries(set.variables).map(
    ([name, kind]) => `${name} : ${kind}`,
  );
  writeFileSync(varsPath, varLines.join("\n") + "\n");

  const varmap = {
    variables: Object.entries(set.variables).map(([name, kind]) => ({
      name,
      type: kind === "boolean" ? "std_msgs/Bool" : "std_msgs/Float64",
      topic: topicFor(name),
    })),
  };
  writeFileSync(varmapPath, JSON.stringify(varmap, null, 2) + "\n");

  reqmon(["formalize", reqPath, varsPath, "--out", specPath]);
  const outDir = join(dir, "out");
  reqmon(["gen", specPath, varmapPath, "--out", outDir]);

  const spec = JSON.parse(readFileSync(specPath, "utf8")) as {
    component: string;
  };
  const packageName =
    spec.component.replace(/[^A-Za-z0-9_]/g, "_").toLowerCase() +
    "_monitoring";
  const pkgDir = join(outDir, packageName);
  const emitted: EmittedMonitor = {
    "monitor.c": readFileSync(join(pkgDir, "copilot", "monitor.c"), "utf8"),
    "monitor.h": readFileSync(join(pkgDir, "copilot", "monitor.h"), "utf8"),
  };
  return { dir, specPath, varmapPath, emitted, packageName };
}

/** Lock-step JSONL trace: one message per input per step, at t = step. */
export function lockstepTrace(
  externs: ExternDecl[],
  rows: Array<Array<number | boolean>>,
): string {
  const lines: string[] = [];
  rows.forEach((row, t) => {
    externs.forEach((extern, i) => {
      const value =
        extern.kind === "boolean" ? Boolean(row[i]) : Number(row[i]);
      lines.push(
        JSON.stringify({ t, topic: topicFor(extern.name), value }),
      );
    });
  });
  return lines.join("\n") + (lines.length > 0 ? "\n" : "");
}

/** Interpreter fired steps via `reqmon simulate` on a lock-step trace.
 * Violation messages land at the instant of the step that fired them, so
 * the run-log time is the step index. */
export function interpreterFirings(
  genCase: GeneratedCase,
  externs: ExternDecl[],
  rows: Array<Array<number | boolean>>,
  prefix = "copilot",
): Firing[] {
  const tracePath = join(genCase.dir, `trace-${process.hrtime.bigint()}.jsonl`);
  writeFileSync(tracePath, lockstepTrace(externs, rows));
  const logPath = tracePath.replace(/\.jsonl$/, ".runlog.jsonl");
  reqmon([
    "simulate",
    genCase.specPath,
    genCase.varmapPath,
    tracePath,
    "--policy",
    "onany",
    "--out",
    logPath,
  ]);
  const firings: Firing[] = [];
  for (const line of readFileSync(logPath, "utf8").split("\n")) {
    if (!line) {
      continue;
    }
    const entry = JSON.parse(line) as {
      topic?: string;
      value?: unknown;
      t?: number;
    };
    if (
      entry.topic !== undefined &&
      entry.value === null &&
      entry.topic.startsWith(`${prefix}/`)
    ) {
      firings.push({
        step: entry.t as number,
        handler: entry.topic.slice(prefix.length + 1),
      });
    }
  }
  return firings;
}
