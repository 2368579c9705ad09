/** Deterministic PRNG and random requirement/trace generation. */

import type { RequirementSet } from "./reqmon.js";

export class Rng {
  private state: number;

  constructor(seed: number) {
    this.state = seed >>> 0;
  }

  /** mulberry32 */
  next(): number {
    this.state = (this.state + 0x6d2b79f5) >>> 0;
    let t = this.state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  }

  int(lo: number, hi: number): number {
    return lo + Math.floor(this.next() * (hi - lo + 1));
  }

  pick<T>(items: readonly T[]): T {
    return items[this.int(0, items.length - 1)];
  }

  bool(p = 0.5): boolean {
    return this.next() < p;
  }
}

export const NUMERIC_VARS = ["n0", "n1"] as const;
export const BOOLEAN_VARS = ["b0", "b1"] as const;

const COMPARATORS = ["<", "<=", ">", ">=", "==", "!="] as const;

/** Fully parenthesized boolean expression over the fixed variable pool. */
export function randomBoolExpr(rng: Rng, depth: number): string {
  if (depth <= 0 || rng.bool(0.3)) {
    if (rng.bool(0.55)) {
      return rng.pick(BOOLEAN_VARS);
    }
    const lhs = rng.pick(NUMERIC_VARS);
    const rhs = rng.bool(0.7) ? String(rng.int(0, 5)) : rng.pick(NUMERIC_VARS);
    return `(${lhs} ${rng.pick(COMPARATORS)} ${rhs})`;
  }
  const roll = rng.next();
  if (roll < 0.2) {
    return `(! ${randomBoolExpr(rng, depth - 1)})`;
  }
  if (roll < 0.45) {
    return `(${randomBoolExpr(rng, depth - 1)} & ${randomBoolExpr(rng, depth - 1)})`;
  }
  if (roll < 0.7) {
    return `(${randomBoolExpr(rng, depth - 1)} | ${randomBoolExpr(rng, depth - 1)})`;
  }
  if (roll < 0.85) {
    return `(${randomBoolExpr(rng, depth - 1)} -> ${randomBoolExpr(rng, depth - 1)})`;
  }
  return `persisted(${rng.int(0, 6)}, ${randomBoolExpr(rng, depth - 1)})`;
}

export function randomRequirementSet(rng: Rng): RequirementSet {
  const requirements: Array<{ id: string; sentence: string }> = [];
  const count = rng.int(1, 2);
  for (let i = 0; i < count; i++) {
    let sentence = "";
    if (rng.bool(0.7)) {
      sentence += `if ${randomBoolExpr(rng, rng.int(1, 3))}, `;
    }
    sentence += "sys shall ";
    if (rng.bool(0.6)) {
      sentence += `within ${rng.int(1, 8)} steps `;
    }
    sentence += `satisfy ${randomBoolExpr(rng, rng.int(0, 2))}`;
    requirements.push({ id: `REQ-${i}`, sentence });
  }
  return {
    requirements,
    variables: {
      n0: "numeric",
      n1: "numeric",
      b0: "boolean",
      b1: "boolean",
    },
  };
}

/** Row-major step samples for the given externs. */
export function randomRows(
  rng: Rng,
  kinds: Array<"numeric" | "boolean">,
  steps: number,
): Array<Array<number | boolean>> {
  const rows: Array<Array<number | boolean>> = [];
  for (let t = 0; t < steps; t++) {
    rows.push(kinds.map((kind) => (kind === "boolean" ? rng.bool() : rng.int(0, 5))));
  }
  return rows;
}
