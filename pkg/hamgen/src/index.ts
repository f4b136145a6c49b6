export { erf, boysF0 } from "./special.js";
export { eigh, invSqrt, matmul, transpose } from "./linalg.js";
export { BOHR_PER_ANGSTROM, computeIntegrals } from "./integrals.js";
export { rhf, moTransform } from "./scf.js";
export { jordanWigner } from "./jw.js";
export { exactGroundEnergy, basisStateEnergy, denseMatrix } from "./fci.js";
export { GenRequest, HamiltonianFile, generate, hartreeFockBits, serialize, fmt17 } from "./generate.js";
