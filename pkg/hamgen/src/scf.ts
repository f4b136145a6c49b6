/** Restricted Hartree-Fock with symmetric orthogonalization. */

import { Integrals } from "./integrals.js";
import { Matrix, eigh, invSqrt, matmul, transpose, zeros } from "./linalg.js";

export interface ScfResult {
  energy: number;          // total (electronic + nuclear), Hartree
  mo: Matrix;              // mo[i][m]: AO i, MO m; deterministic sign convention
  moEnergies: number[];
}

export function rhf(ints: Integrals, nElectrons: number,
                    maxIter = 500, tol = 1e-13): ScfResult {
  const nb = ints.overlap.length;
  const nocc = nElectrons / 2;
  const hcore = zeros(nb, nb);
  for (let i = 0; i < nb; i++)
    for (let j = 0; j < nb; j++)
      hcore[i][j] = ints.kinetic[i][j] + ints.nuclear[i][j];
  const x = invSqrt(ints.overlap);

  let density = zeros(nb, nb);
  let eOld = 0;
  let mo = zeros(nb, nb);
  let moEnergies: number[] = [];
  for (let iter = 0; iter < maxIter; iter++) {
    const fock = zeros(nb, nb);
    for (let p = 0; p < nb; p++)
      for (let q = 0; q < nb; q++) {
        let jk = 0;
        for (let r = 0; r < nb; r++)
          for (let s = 0; s < nb; s++)
            jk += density[r][s] * (ints.eri[p][q][r][s] - 0.5 * ints.eri[p][r][q][s]);
        fock[p][q] = hcore[p][q] + jk;
      }
    const fPrime = matmul(transpose(x), matmul(fock, x));
    const { values, vectors } = eigh(fPrime);
    const c = matmul(x, vectors);
    const dNew = zeros(nb, nb);
    for (let p = 0; p < nb; p++)
      for (let q = 0; q < nb; q++) {
        let d = 0;
        for (let m = 0; m < nocc; m++) d += c[p][m] * c[q][m];
        dNew[p][q] = 2 * d;
      }
    let eElec = 0;
    for (let p = 0; p < nb; p++)
      for (let q = 0; q < nb; q++)
        eElec += 0.5 * dNew[p][q] * (hcore[p][q] + fock[p][q]);
    let dMax = 0;
    for (let p = 0; p < nb; p++)
      for (let q = 0; q < nb; q++)
        dMax = Math.max(dMax, Math.abs(dNew[p][q] - density[p][q]));
    density = dNew;
    mo = c;
    moEnergies = values;
    if (Math.abs(eElec - eOld) < tol && dMax < 1e-11) {
      eOld = eElec;
      break;
    }
    eOld = eElec;
  }

  // deterministic MO signs: largest-magnitude AO coefficient positive
  for (let m = 0; m < nb; m++) {
    let idx = 0;
    for (let i = 1; i < nb; i++)
      if (Math.abs(mo[i][m]) > Math.abs(mo[idx][m])) idx = i;
    if (mo[idx][m] < 0)
      for (let i = 0; i < nb; i++) mo[i][m] = -mo[i][m];
  }
  return { energy: eOld + ints.eNuclear, mo, moEnergies };
}

/** h and (pq|rs) transformed to the molecular-orbital basis. */
export function moTransform(ints: Integrals, mo: Matrix) {
  const nb = mo.length;
  const hcore = zeros(nb, nb);
  for (let i = 0; i < nb; i++)
    for (let j = 0; j < nb; j++)
      hcore[i][j] = ints.kinetic[i][j] + ints.nuclear[i][j];
  const hMo = matmul(transpose(mo), matmul(hcore, mo));

  const nb4 = (f: (i: number, j: number, k: number, l: number) => number) =>
    Array.from({ length: nb }, (_, i) =>
      Array.from({ length: nb }, (_, j) =>
        Array.from({ length: nb }, (_, k) =>
          Array.from({ length: nb }, (_, l) => f(i, j, k, l)))));

  // four quarter-transforms
  let t = ints.eri;
  for (let stage = 0; stage < 4; stage++) {
    const prev = t;
    t = nb4((i, j, k, l) => {
      let s = 0;
      for (let p = 0; p < nb; p++) {
        const w =
          stage === 0 ? prev[p][j][k][l] :
          stage === 1 ? prev[i][p][k][l] :
          stage === 2 ? prev[i][j][p][l] : prev[i][j][k][p];
        const c =
          stage === 0 ? mo[p][i] :
          stage === 1 ? mo[p][j] :
          stage === 2 ? mo[p][k] : mo[p][l];
        s += c * w;
      }
      return s;
    });
  }
  return { hMo, eriMo: t };
}
