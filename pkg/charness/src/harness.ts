/** Compile-and-run driver for an emitted monitor pair. */

import { execFileSync, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { generateMainC } from "./cmain.js";
import { parseMonitorHeader, type MonitorInterface } from "./header.js";

export interface EmittedMonitor {
  "monitor.c": string;
  "monitor.h": string;
}

export interface Firing {
  step: number;
  handler: string;
}

export class CompileError extends Error {}

export class HarnessRunError extends Error {}

const CC = process.env.CC ?? "cc";
const CFLAGS = ["-std=c99", "-Wall", "-Wextra", "-Werror", "-O1"];

export function compileHarness(emitted: EmittedMonitor): {
  binary: string;
  iface: MonitorInterface;
  dir: string;
} {
  const dir = mkdtempSync(join(tmpdir(), "charness-"));
  const iface = parseMonitorHeader(emitted["monitor.h"]);
  writeFileSync(join(dir, "monitor.c"), emitted["monitor.c"]);
  writeFileSync(join(dir, "monitor.h"), emitted["monitor.h"]);
  writeFileSync(join(dir, "main.c"), generateMainC(iface));
  const binary = join(dir, "monitor_harness");
  try {
    execFileSync(
      CC,
      [...CFLAGS, "-o", binary, join(dir, "main.c"), join(dir, "monitor.c")],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
  } catch (err) {
    const stderr = (err as { stderr?: Buffer }).stderr;
    throw new CompileError(stderr ? stderr.toString() : String(err));
  }
  return { binary, iface, dir };
}

export function runCompiled(binary: string, csv: string): Firing[] {
  const result = spawnSync(binary, [], { input: csv, encoding: "utf8" });
  if (result.status !== 0) {
    throw new HarnessRunError(
      `harness exited with ${result.status}: ${result.stderr}`,
    );
  }
  const firings: Firing[] = [];
  for (const line of result.stdout.split("\n")) {
    if (!line) {
      continue;
    }
    const comma = line.indexOf(",");
    firings.push({
      step: Number(line.slice(0, comma)),
      handler: line.slice(comma + 1),
    });
  }
  return firings;
}

/** One-shot: compile the emitted pair, replay the CSV, return firings. */
export function runHarness(emitted: EmittedMonitor, csv: string): Firing[] {
  const { binary } = compileHarness(emitted);
  return runCompiled(binary, csv);
}

/** Step samples (row-major) to CSV text; booleans become 0/1. */
export function toCsv(rows: Array<Array<number | boolean>>): string {
  return rows
    .map((row) =>
      row.map((v) => (typeof v === "boolean" ? (v ? "1" : "0") : String(v))).join(","),
    )
    .join("\n") + (rows.length > 0 ? "\n" : "");
}
