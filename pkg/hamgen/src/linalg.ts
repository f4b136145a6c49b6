/** Dense real symmetric linear algebra: cyclic Jacobi eigendecomposition. */

export type Matrix = number[][];

export function zeros(n: number, m: number): Matrix {
  return Array.from({ length: n }, () => new Array<number>(m).fill(0));
}

export function matmul(a: Matrix, b: Matrix): Matrix {
  const n = a.length, k = b.length, m = b[0].length;
  const out = zeros(n, m);
  for (let i = 0; i < n; i++) {
    for (let p = 0; p < k; p++) {
      const aip = a[i][p];
      if (aip === 0) continue;
      const brow = b[p];
      const orow = out[i];
      for (let j = 0; j < m; j++) orow[j] += aip * brow[j];
    }
  }
  return out;
}

export function transpose(a: Matrix): Matrix {
  const n = a.length, m = a[0].length;
  const out = zeros(m, n);
  for (let i = 0; i < n; i++) for (let j = 0; j < m; j++) out[j][i] = a[i][j];
  return out;
}

export interface Eigh {
  values: number[];        // ascending
  vectors: Matrix;         // columns are eigenvectors, vectors[i][k] = <i|v_k>
}

/** Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations. */
export function eigh(aIn: Matrix, maxSweeps = 60, tol = 1e-14): Eigh {
  const n = aIn.length;
  const a = aIn.map(row => row.slice());
  const v = zeros(n, n);
  for (let i = 0; i < n; i++) v[i][i] = 1;

  const offNorm = () => {
    let s = 0;
    for (let i = 0; i < n; i++)
      for (let j = i + 1; j < n; j++) s += a[i][j] * a[i][j];
    return Math.sqrt(2 * s);
  };
  let scale = 0;
  for (let i = 0; i < n; i++)
    for (let j = 0; j < n; j++) scale = Math.max(scale, Math.abs(a[i][j]));
  if (scale === 0) scale = 1;

  for (let sweep = 0; sweep < maxSweeps; sweep++) {
    if (offNorm() < tol * scale * n) break;
    for (let p = 0; p < n - 1; p++) {
      for (let q = p + 1; q < n; q++) {
        const apq = a[p][q];
        if (Math.abs(apq) < 1e-300) continue;
        const theta = (a[q][q] - a[p][p]) / (2 * apq);
        const t = Math.sign(theta) / (Math.abs(theta) + Math.sqrt(theta * theta + 1)) || 1;
        const c = 1 / Math.sqrt(t * t + 1);
        const s = t * c;
        for (let k = 0; k < n; k++) {
          const akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (let k = 0; k < n; k++) {
          const apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (let k = 0; k < n; k++) {
          const vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  const order = Array.from({ length: n }, (_, i) => i)
    .sort((i, j) => a[i][i] - a[j][j]);
  const values = order.map(i => a[i][i]);
  const vectors = zeros(n, n);
  for (let k = 0; k < n; k++)
    for (let i = 0; i < n; i++) vectors[i][k] = v[i][order[k]];
  return { values, vectors };
}

/** S^(-1/2) by eigendecomposition; basis-independent up to rounding. */
export function invSqrt(s: Matrix): Matrix {
  const { values, vectors } = eigh(s);
  const n = s.length;
  const out = zeros(n, n);
  for (let k = 0; k < n; k++) {
    const w = 1 / Math.sqrt(values[k]);
    for (let i = 0; i < n; i++)
      for (let j = 0; j < n; j++) out[i][j] += vectors[i][k] * w * vectors[j][k];
  }
  return out;
}
