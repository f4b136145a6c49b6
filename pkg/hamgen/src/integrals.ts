/**
 * One- and two-electron integrals over contracted s-type Gaussians (STO-3G
 * for hydrogen-like atoms) using the closed s-orbital forms with the Boys
 * function.  All coordinates in bohr.
 */

import { boysF0 } from "./special.js";
import { Matrix, zeros } from "./linalg.js";

export const BOHR_PER_ANGSTROM = 1 / 0.529177210903;

// STO-3G hydrogen 1s: exponents and contraction coefficients of normalized primitives
export const STO3G_H_EXPS = [3.425250914, 0.6239137298, 0.168855404];
export const STO3G_H_COEFS = [0.1543289673, 0.5353281423, 0.4446345422];

export type Vec3 = [number, number, number];

function dist2(a: Vec3, b: Vec3): number {
  const dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

function sNorm(alpha: number): number {
  return Math.pow((2 * alpha) / Math.PI, 0.75);
}

interface Primitive { alpha: number; coef: number; }

function contraction(): Primitive[] {
  return STO3G_H_EXPS.map((a, i) => ({ alpha: a, coef: STO3G_H_COEFS[i] * sNorm(a) }));
}

export interface Integrals {
  overlap: Matrix;
  kinetic: Matrix;
  nuclear: Matrix;
  eri: number[][][][];  // chemists' notation (ij|kl)
  eNuclear: number;
}

export function computeIntegrals(centers: Vec3[], charges: number[]): Integrals {
  const nb = centers.length;
  const prims = centers.map(() => contraction());

  let eNuclear = 0;
  for (let i = 0; i < nb; i++)
    for (let j = i + 1; j < nb; j++)
      eNuclear += (charges[i] * charges[j]) / Math.sqrt(dist2(centers[i], centers[j]));

  const overlap = zeros(nb, nb);
  const kinetic = zeros(nb, nb);
  const nuclear = zeros(nb, nb);
  for (let i = 0; i < nb; i++) {
    for (let j = 0; j < nb; j++) {
      const A = centers[i], B = centers[j];
      const rab2 = dist2(A, B);
      let s = 0, t = 0, v = 0;
      for (const { alpha: a, coef: ca } of prims[i]) {
        for (const { alpha: b, coef: cb } of prims[j]) {
          const p = a + b;
          const mu = (a * b) / p;
          const pref = ca * cb * Math.exp(-mu * rab2);
          const sab = pref * Math.pow(Math.PI / p, 1.5);
          s += sab;
          t += sab * mu * (3 - 2 * mu * rab2);
          const P: Vec3 = [
            (a * A[0] + b * B[0]) / p,
            (a * A[1] + b * B[1]) / p,
            (a * A[2] + b * B[2]) / p,
          ];
          for (let c = 0; c < nb; c++) {
            const rpc2 = dist2(P, centers[c]);
            v += -charges[c] * pref * ((2 * Math.PI) / p) * boysF0(p * rpc2);
          }
        }
      }
      overlap[i][j] = s;
      kinetic[i][j] = t;
      nuclear[i][j] = v;
    }
  }

  const eri: number[][][][] = Array.from({ length: nb }, () =>
    Array.from({ length: nb }, () =>
      Array.from({ length: nb }, () => new Array<number>(nb).fill(0))));
  for (let i = 0; i < nb; i++)
    for (let j = 0; j < nb; j++)
      for (let k = 0; k < nb; k++)
        for (let l = 0; l < nb; l++) {
          const A = centers[i], B = centers[j], C = centers[k], D = centers[l];
          const rab2 = dist2(A, B), rcd2 = dist2(C, D);
          let val = 0;
          for (const { alpha: a, coef: ca } of prims[i])
            for (const { alpha: b, coef: cb } of prims[j]) {
              const p = a + b;
              const P: Vec3 = [
                (a * A[0] + b * B[0]) / p,
                (a * A[1] + b * B[1]) / p,
                (a * A[2] + b * B[2]) / p,
              ];
              const eab = Math.exp((-a * b / p) * rab2);
              for (const { alpha: c, coef: cc } of prims[k])
                for (const { alpha: d, coef: cd } of prims[l]) {
                  const q = c + d;
                  const Q: Vec3 = [
                    (c * C[0] + d * D[0]) / q,
                    (c * C[1] + d * D[1]) / q,
                    (c * C[2] + d * D[2]) / q,
                  ];
                  const ecd = Math.exp((-c * d / q) * rcd2);
                  const rpq2 = dist2(P, Q);
                  val += ca * cb * cc * cd * eab * ecd *
                    ((2 * Math.pow(Math.PI, 2.5)) / (p * q * Math.sqrt(p + q))) *
                    boysF0(((p * q) / (p + q)) * rpq2);
                }
            }
          eri[i][j][k][l] = val;
        }

  return { overlap, kinetic, nuclear, eri, eNuclear };
}
