/** End-to-end generation: geometry + basis -> qubit Hamiltonian file. */

import { BOHR_PER_ANGSTROM, Vec3, computeIntegrals } from "./integrals.js";
import { basisStateEnergy, exactGroundEnergy } from "./fci.js";
import { jordanWigner } from "./jw.js";
import { moTransform, rhf } from "./scf.js";

export type Ordering = "interleaved" | "blocked-alpha-beta";

export interface GenRequest {
  geometry: Array<[string, number, number, number]>;  // element, x, y, z (angstrom)
  basis: string;
  charge?: number;
  multiplicity?: number;
  ordering: Ordering;
}

export interface HamiltonianFile {
  format_version: number;
  n_qubits: number;
  n_electrons: number;
  ordering: Ordering;
  geometry: Array<[string, number, number, number]>;
  basis: string;
  terms: Array<[number, string]>;
  reference: { hf_energy: number; fci_energy: number };
}

export function hartreeFockBits(nQubits: number, nElectrons: number,
                                ordering: Ordering): string {
  if (ordering === "interleaved")
    return "1".repeat(nElectrons) + "0".repeat(nQubits - nElectrons);
  const nOrb = nQubits / 2;
  const na = Math.ceil(nElectrons / 2);
  const nb = Math.floor(nElectrons / 2);
  return "1".repeat(na) + "0".repeat(nOrb - na)
       + "1".repeat(nb) + "0".repeat(nOrb - nb);
}

export function generate(req: GenRequest): HamiltonianFile {
  if (req.basis.toLowerCase() !== "sto-3g")
    throw new Error(`unsupported basis ${req.basis} (only sto-3g)`);
  if ((req.charge ?? 0) !== 0 || (req.multiplicity ?? 1) !== 1)
    throw new Error("only neutral singlets are supported");
  const centers: Vec3[] = [];
  const charges: number[] = [];
  let nElectrons = 0;
  for (const [el, x, y, z] of req.geometry) {
    if (el !== "H")
      throw new Error(`unsupported element ${el} (s-orbital basis only)`);
    centers.push([x * BOHR_PER_ANGSTROM, y * BOHR_PER_ANGSTROM, z * BOHR_PER_ANGSTROM]);
    charges.push(1);
    nElectrons += 1;
  }
  if (nElectrons % 2 !== 0)
    throw new Error("restricted HF needs an even electron count");

  const ints = computeIntegrals(centers, charges);
  const scf = rhf(ints, nElectrons);
  const { hMo, eriMo } = moTransform(ints, scf.mo);
  const qubitH = jordanWigner(hMo, eriMo, ints.eNuclear, req.ordering);
  const eFci = exactGroundEnergy(qubitH);

  const bits = hartreeFockBits(qubitH.nQubits, nElectrons, req.ordering);
  const eHfCheck = basisStateEnergy(qubitH, bits);
  if (Math.abs(eHfCheck - scf.energy) > 1e-8)
    throw new Error(`HF self-check failed: qubit ${eHfCheck} vs SCF ${scf.energy}`);

  return {
    format_version: 1,
    n_qubits: qubitH.nQubits,
    n_electrons: nElectrons,
    ordering: req.ordering,
    geometry: req.geometry,
    basis: req.basis.toLowerCase(),
    terms: qubitH.terms,
    reference: { hf_energy: scf.energy, fci_energy: eFci },
  };
}

/** 17-significant-digit float formatting, matching the primary's file writer. */
export function fmt17(x: number): string {
  let s = x.toPrecision(17);
  if (s.includes("e")) {
    const [mant, exp] = s.split("e");
    const e = parseInt(exp, 10);
    s = `${trimZeros(mant)}e${e >= 0 ? "+" : "-"}${String(Math.abs(e)).padStart(2, "0")}`;
  } else if (s.includes(".")) {
    s = trimZeros(s);
  }
  return s;
}

function trimZeros(s: string): string {
  if (!s.includes(".")) return s;
  return s.replace(/0+$/, "").replace(/\.$/, "");
}

export function serialize(doc: HamiltonianFile): string {
  const lines: string[] = ["{"];
  lines.push(`  "format_version": ${doc.format_version},`);
  lines.push(`  "n_qubits": ${doc.n_qubits},`);
  lines.push(`  "n_electrons": ${doc.n_electrons},`);
  lines.push(`  "ordering": ${JSON.stringify(doc.ordering)},`);
  lines.push(`  "geometry": ${JSON.stringify(doc.geometry)},`);
  lines.push(`  "basis": ${JSON.stringify(doc.basis)},`);
  const termLines = doc.terms
    .map(([c, s]) => `    [${fmt17(c)}, "${s}"]`)
    .join(",\n");
  lines.push(`  "terms": [\n${termLines}\n  ],`);
  lines.push(`  "reference": {"hf_energy": ${fmt17(doc.reference.hf_energy)}, ` +
             `"fci_energy": ${fmt17(doc.reference.fci_energy)}}`);
  lines.push("}");
  return lines.join("\n") + "\n";
}
