import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { erf, boysF0 } from "../src/special";
import { eigh, invSqrt, matmul } from "../src/linalg";
import { basisStateEnergy, exactGroundEnergy } from "../src/fci";
import { GenRequest, generate, hartreeFockBits, serialize } from "../src/generate";

const H2_GEOMETRY: GenRequest["geometry"] = [
  ["H", 0, 0, 0],
  ["H", 0, 0, 0.74],
];
const H4_GEOMETRY: GenRequest["geometry"] = [
  ["H", 0, 0, 1],
  ["H", 0, 0, 2],
  ["H", 0, 0, 3],
  ["H", 0, 0, 4],
];

// reference values for H2/STO-3G at 0.74 A and the H4 chain (paper benchmark)
const H2_HF = -1.1167593075;
const H2_FCI = -1.1372838347;
const H4_FCI_PAPER = -2.1664;

describe("special functions", () => {
  it("erf matches double-precision references", () => {
    // frozen from the C library erf
    const refs: Array<[number, number]> = [
      [0.1, 0.1124629160182849],
      [0.5, 0.5204998778130465],
      [1.0, 0.8427007929497149],
      [2.0, 0.9953222650189527],
      [3.0, 0.9999779095030014],
      [3.9, 0.9999999652077514],
      [4.5, 0.9999999998033839],
    ];
    for (const [x, ref] of refs) {
      expect(Math.abs(erf(x) - ref)).toBeLessThan(1e-10);
      expect(erf(-x)).toBeCloseTo(-erf(x), 14);
    }
  });

  it("boys F0 limits", () => {
    expect(boysF0(0)).toBeCloseTo(1, 12);
    expect(boysF0(1e-14)).toBeCloseTo(1, 10);
    // large-argument asymptote: F0(t) -> sqrt(pi/t)/2
    expect(boysF0(400)).toBeCloseTo(0.5 * Math.sqrt(Math.PI / 400), 14);
  });
});

describe("linalg", () => {
  it("eigh diagonalizes a known symmetric matrix", () => {
    const a = [
      [2, 1, 0],
      [1, 3, 1],
      [0, 1, 2],
    ];
    const { values, vectors } = eigh(a);
    // residual check: A v = lambda v
    for (let k = 0; k < 3; k++) {
      for (let i = 0; i < 3; i++) {
        let av = 0;
        for (let j = 0; j < 3; j++) av += a[i][j] * vectors[j][k];
        expect(av).toBeCloseTo(values[k] * vectors[i][k], 10);
      }
    }
    expect(values[0]).toBeLessThan(values[1]);
  });

  it("invSqrt squares back to the inverse", () => {
    const s = [
      [1.0, 0.4],
      [0.4, 1.0],
    ];
    const x = invSqrt(s);
    const shouldBeInverse = matmul(x, x);
    const prod = matmul(shouldBeInverse, s);
    expect(prod[0][0]).toBeCloseTo(1, 12);
    expect(prod[0][1]).toBeCloseTo(0, 12);
  });
});

describe("generation", () => {
  it("H2 reproduces the literature energies and self-consistency", () => {
    const doc = generate({ geometry: H2_GEOMETRY, basis: "sto-3g", ordering: "interleaved" });
    expect(doc.n_qubits).toBe(4);
    expect(doc.n_electrons).toBe(2);
    expect(Math.abs(doc.reference.hf_energy - H2_HF)).toBeLessThan(1e-9);
    expect(Math.abs(doc.reference.fci_energy - H2_FCI)).toBeLessThan(1e-9);
    // emitted HF bitstring energy equals emitted hf_energy
    const bits = hartreeFockBits(doc.n_qubits, doc.n_electrons, doc.ordering);
    expect(bits).toBe("1100");
    const eHf = basisStateEnergy({ nQubits: doc.n_qubits, terms: doc.terms }, bits);
    expect(Math.abs(eHf - doc.reference.hf_energy)).toBeLessThan(1e-8);
  });

  it("serialized files parse back with fci self-consistency", () => {
    const doc = generate({ geometry: H2_GEOMETRY, basis: "sto-3g", ordering: "interleaved" });
    const parsed = JSON.parse(serialize(doc));
    const e = exactGroundEnergy({ nQubits: parsed.n_qubits, terms: parsed.terms });
    expect(Math.abs(e - parsed.reference.fci_energy)).toBeLessThan(1e-6);
  });

  it("blocked ordering keeps the spectrum and HF energy", () => {
    const doc = generate({ geometry: H2_GEOMETRY, basis: "sto-3g", ordering: "blocked-alpha-beta" });
    expect(Math.abs(doc.reference.hf_energy - H2_HF)).toBeLessThan(1e-9);
    expect(Math.abs(doc.reference.fci_energy - H2_FCI)).toBeLessThan(1e-9);
    const bits = hartreeFockBits(doc.n_qubits, doc.n_electrons, doc.ordering);
    expect(bits).toBe("1010");
    const eHf = basisStateEnergy({ nQubits: doc.n_qubits, terms: doc.terms }, bits);
    expect(Math.abs(eHf - doc.reference.hf_energy)).toBeLessThan(1e-8);
  });

  it("H4 hits the published FCI benchmark", () => {
    const doc = generate({ geometry: H4_GEOMETRY, basis: "sto-3g", ordering: "interleaved" });
    expect(doc.n_qubits).toBe(8);
    expect(Math.abs(doc.reference.fci_energy - H4_FCI_PAPER)).toBeLessThan(5e-4);
  });

  it("H4 regeneration matches the checked-in fixture to 1e-8", () => {
    const doc = generate({ geometry: H4_GEOMETRY, basis: "sto-3g", ordering: "interleaved" });
    const fixture = JSON.parse(
      readFileSync(join(__dirname, "../../src/mpsvqe/data/h4_sto3g.json"), "utf8"));
    const mine = new Map(doc.terms.map(([c, s]) => [s, c]));
    expect(mine.size).toBe(fixture.terms.length);
    for (const [c, s] of fixture.terms as Array<[number, string]>) {
      const v = mine.get(s);
      expect(v, `missing term ${s}`).toBeDefined();
      expect(Math.abs((v as number) - c)).toBeLessThan(1e-8);
    }
    expect(Math.abs(doc.reference.hf_energy - fixture.reference.hf_energy)).toBeLessThan(1e-8);
    expect(Math.abs(doc.reference.fci_energy - fixture.reference.fci_energy)).toBeLessThan(1e-8);
  });

  it("regeneration is deterministic", () => {
    const a = serialize(generate({ geometry: H2_GEOMETRY, basis: "sto-3g", ordering: "interleaved" }));
    const b = serialize(generate({ geometry: H2_GEOMETRY, basis: "sto-3g", ordering: "interleaved" }));
    expect(a).toBe(b);
  });

  it("rejects unsupported inputs", () => {
    expect(() => generate({ geometry: [["He", 0, 0, 0]], basis: "sto-3g", ordering: "interleaved" }))
      .toThrow(/unsupported element/);
    expect(() => generate({ geometry: H2_GEOMETRY, basis: "6-31g", ordering: "interleaved" }))
      .toThrow(/unsupported basis/);
    expect(() => generate({ geometry: [["H", 0, 0, 0]], basis: "sto-3g", ordering: "interleaved" }))
      .toThrow(/even electron/);
  });
});

describe("end to end through the primary CLI", () => {
  it("mpsvqe fci agrees with the emitted fci_energy", () => {
    const dir = mkdtempSync(join(tmpdir(), "hamgen-"));
    const geomPath = join(dir, "h2_geom.json");
    const hamPath = join(dir, "h2.json");
    writeFileSync(geomPath, JSON.stringify(H2_GEOMETRY));
    execFileSync("node", [join(__dirname, "../dist/cli.js"),
      "--geometry", geomPath, "--basis", "sto-3g",
      "--ordering", "interleaved", "--out", hamPath]);
    const doc = JSON.parse(readFileSync(hamPath, "utf8"));

    const cfgPath = join(dir, "config.json");
    writeFileSync(cfgPath, JSON.stringify({
      hamiltonian: hamPath,
      ansatz: { n_qubits: doc.n_qubits, layers: 1 },
      out_dir: join(dir, "out"),
    }));
    execFileSync("python3", ["-m", "mpsvqe.cli", "fci", "--config", cfgPath]);
    const result = JSON.parse(
      readFileSync(join(dir, "out", "fci-s0", "result.json"), "utf8"));
    expect(Math.abs(result.fci_energy - doc.reference.fci_energy)).toBeLessThan(1e-6);
  });
});
