/**
 * Jordan-Wigner mapping of the second-quantized molecular Hamiltonian to
 * qubit Pauli terms.  Operators are dictionaries from Pauli letter strings
 * (qubit 0 leftmost) to complex coefficients held as [re, im] pairs.
 */

import { Matrix } from "./linalg.js";

type Cplx = [number, number];
export type PauliMap = Map<string, Cplx>;

const PROD: Record<string, [Cplx, string]> = {};
for (const p of "IXYZ") {
  PROD["I" + p] = [[1, 0], p];
  PROD[p + "I"] = [[1, 0], p];
  PROD[p + p] = [[1, 0], "I"];
}
PROD["XY"] = [[0, 1], "Z"];
PROD["YX"] = [[0, -1], "Z"];
PROD["YZ"] = [[0, 1], "X"];
PROD["ZY"] = [[0, -1], "X"];
PROD["ZX"] = [[0, 1], "Y"];
PROD["XZ"] = [[0, -1], "Y"];

function cMul(a: Cplx, b: Cplx): Cplx {
  return [a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]];
}

function stringMul(s1: string, s2: string): [Cplx, string] {
  let phase: Cplx = [1, 0];
  let out = "";
  for (let q = 0; q < s1.length; q++) {
    const [ph, c] = PROD[s1[q] + s2[q]];
    phase = cMul(phase, ph);
    out += c;
  }
  return [phase, out];
}

export function opMul(o1: PauliMap, o2: PauliMap): PauliMap {
  const out: PauliMap = new Map();
  for (const [s1, c1] of o1) {
    for (const [s2, c2] of o2) {
      const [ph, s] = stringMul(s1, s2);
      const c = cMul(cMul(c1, c2), ph);
      const prev = out.get(s);
      if (prev) {
        prev[0] += c[0];
        prev[1] += c[1];
      } else {
        out.set(s, [c[0], c[1]]);
      }
    }
  }
  return out;
}

function ladder(p: number, n: number, raise: boolean): PauliMap {
  const prefix = "Z".repeat(p);
  const suffix = "I".repeat(n - p - 1);
  const out: PauliMap = new Map();
  out.set(prefix + "X" + suffix, [0.5, 0]);
  out.set(prefix + "Y" + suffix, [0, raise ? -0.5 : 0.5]);
  return out;
}

export interface QubitHamiltonian {
  nQubits: number;
  terms: Array<[number, string]>;  // [coeff, pauli string], sorted by string
}

/**
 * Build the qubit Hamiltonian from MO-basis integrals.
 *
 * Spin orbitals are interleaved (2p = orbital p alpha, 2p+1 = beta) or
 * blocked (alpha block then beta block).  Uses
 * H = E_nuc + sum h_PQ a^_P a_Q + 1/2 sum <PQ|RS> a^_P a^_Q a_S a_R
 * with <PQ|RS> = (pr|qs) delta(sP,sR) delta(sQ,sS).
 */
export function jordanWigner(hMo: Matrix, eriMo: number[][][][], eNuclear: number,
                             ordering: "interleaved" | "blocked-alpha-beta")
                             : QubitHamiltonian {
  const nOrb = hMo.length;
  const n = 2 * nOrb;
  const spat = (so: number) => ordering === "interleaved" ? (so >> 1) : (so % nOrb);
  const spin = (so: number) => ordering === "interleaved" ? (so & 1) : (so < nOrb ? 0 : 1);

  const acc: PauliMap = new Map([["I".repeat(n), [eNuclear, 0]]]);
  const add = (op: PauliMap, w: number) => {
    if (Math.abs(w) < 1e-14) return;
    for (const [s, c] of op) {
      const prev = acc.get(s);
      if (prev) {
        prev[0] += w * c[0];
        prev[1] += w * c[1];
      } else {
        acc.set(s, [w * c[0], w * c[1]]);
      }
    }
  };

  const raiseOps = Array.from({ length: n }, (_, p) => ladder(p, n, true));
  const lowerOps = Array.from({ length: n }, (_, p) => ladder(p, n, false));

  for (let P = 0; P < n; P++)
    for (let Q = 0; Q < n; Q++) {
      if (spin(P) !== spin(Q)) continue;
      const c = hMo[spat(P)][spat(Q)];
      if (Math.abs(c) < 1e-14) continue;
      add(opMul(raiseOps[P], lowerOps[Q]), c);
    }

  for (let P = 0; P < n; P++)
    for (let Q = 0; Q < n; Q++)
      for (let R = 0; R < n; R++)
        for (let S = 0; S < n; S++) {
          if (spin(P) !== spin(R) || spin(Q) !== spin(S)) continue;
          const g = eriMo[spat(P)][spat(R)][spat(Q)][spat(S)];
          if (Math.abs(g) < 1e-14) continue;
          const op = opMul(opMul(raiseOps[P], raiseOps[Q]),
                           opMul(lowerOps[S], lowerOps[R]));
          add(op, 0.5 * g);
        }

  const terms: Array<[number, string]> = [];
  for (const [s, c] of acc) {
    if (Math.abs(c[1]) > 1e-10)
      throw new Error(`imaginary coefficient ${c[1]} on ${s}`);
    if (Math.abs(c[0]) >= 1e-12) terms.push([c[0], s]);
  }
  terms.sort((a, b) => (a[1] < b[1] ? -1 : a[1] > b[1] ? 1 : 0));
  return { nQubits: n, terms };
}
