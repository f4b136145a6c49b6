/**
 * Double-precision error function and the zeroth Boys function.
 *
 * erf uses the Maclaurin series below |x| = 3 and a continued fraction for
 * erfc above it; both branches are accurate to ~1e-15 relative, which keeps
 * regenerated Hamiltonian coefficients well inside the 1e-8 reproducibility
 * band.
 */

const TWO_OVER_SQRT_PI = 2 / Math.sqrt(Math.PI);

export function erf(x: number): number {
  if (x < 0) return -erf(-x);
  if (x === 0) return 0;
  if (x >= 6) return 1;
  if (x < 4) {
    // sum (-1)^n x^(2n+1) / (n! (2n+1))
    let term = x;
    let sum = x;
    const x2 = x * x;
    for (let n = 1; n < 200; n++) {
      term *= -x2 / n;
      const add = term / (2 * n + 1);
      sum += add;
      if (Math.abs(add) < 1e-18 * Math.abs(sum)) break;
    }
    return TWO_OVER_SQRT_PI * sum;
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  let f = 0;
  for (let k = 120; k >= 1; k--) {
    f = (k / 2) / (x + f);
  }
  const erfc = Math.exp(-x * x) / Math.sqrt(Math.PI) / (x + f);
  return 1 - erfc;
}

/** F0(t) = (1/2) sqrt(pi/t) erf(sqrt(t)),  F0(0) = 1. */
export function boysF0(t: number): number {
  if (t < 1e-12) return 1 - t / 3;
  const s = Math.sqrt(t);
  return (0.5 * Math.sqrt(Math.PI / t)) * erf(s);
}
