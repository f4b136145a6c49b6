/**
 * Exact diagonalization of a qubit Hamiltonian with real Pauli terms.
 *
 * Molecular Hamiltonians from Jordan-Wigner carry an even number of Y factors
 * per term, so the dense matrix is real symmetric (qubit 0 in the most
 * significant bit) and a Jacobi eigensolve applies.
 */

import { QubitHamiltonian } from "./jw.js";
import { eigh } from "./linalg.js";

interface PackedTerm {
  coeff: number;
  mx: number;     // X/Y mask
  mzy: number;    // Z/Y mask
  sign: number;   // (-1)^(nY/2) from (-i)^nY
}

export function packTerms(h: QubitHamiltonian): PackedTerm[] {
  return h.terms.map(([coeff, s]) => {
    let mx = 0, mzy = 0, ny = 0;
    for (let q = 0; q < h.nQubits; q++) {
      const bit = 1 << (h.nQubits - 1 - q);
      const c = s[q];
      if (c === "X" || c === "Y") mx |= bit;
      if (c === "Z" || c === "Y") mzy |= bit;
      if (c === "Y") ny++;
    }
    if (ny % 2 !== 0)
      throw new Error(`term ${s} has odd Y count; matrix would be complex`);
    return { coeff, mx, mzy, sign: ny % 4 === 0 ? 1 : -1 };
  });
}

function parity(x: number): number {
  x ^= x >> 16;
  x ^= x >> 8;
  x ^= x >> 4;
  x ^= x >> 2;
  x ^= x >> 1;
  return x & 1;
}

export function denseMatrix(h: QubitHamiltonian): number[][] {
  const dim = 1 << h.nQubits;
  const terms = packTerms(h);
  const m = Array.from({ length: dim }, () => new Array<number>(dim).fill(0));
  for (const t of terms) {
    for (let r = 0; r < dim; r++) {
      const val = t.coeff * t.sign * (parity(r & t.mzy) ? -1 : 1);
      m[r][r ^ t.mx] += val;
    }
  }
  return m;
}

/** Smallest eigenvalue of the full 2^n x 2^n Hamiltonian matrix. */
export function exactGroundEnergy(h: QubitHamiltonian): number {
  const { values } = eigh(denseMatrix(h));
  return values[0];
}

/** <b|H|b> for a computational basis bitstring (qubit 0 leftmost). */
export function basisStateEnergy(h: QubitHamiltonian, bits: string): number {
  const idx = parseInt(bits, 2);
  let e = 0;
  for (const t of packTerms(h)) {
    if (t.mx !== 0) continue;
    e += t.coeff * t.sign * (parity(idx & t.mzy) ? -1 : 1);
  }
  return e;
}
