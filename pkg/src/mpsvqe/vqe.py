"""Energy estimation (exact or grouped-sampled), parameter-shift gradients,
and the plain SGD training loop."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .circuit import ParamCircuit
from .errors import NumericalError
from .pauli import Hamiltonian, MeasurementGroup, group_terms
from .sim import NoiseModel, run_density, run_statevector, sample_group


@dataclass
class EnergyEstimator:
    """How energies are evaluated: exact expectations or grouped sampling.

    In exact mode the state is simulated exactly (density matrix when noise is
    attached, statevector otherwise) and the expectation is deterministic.  In
    sampled mode every measurement group is sampled with `shots` shots and the
    measurement bit-flip noise of the model is applied to the classical bits.
    """

    mode: str = "exact"
    shots: int = 10_000
    noise: NoiseModel | None = None
    grouping: list[MeasurementGroup] | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown estimator mode {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled mode needs shots >= 1")

    def groups_for(self, h: Hamiltonian) -> list[MeasurementGroup]:
        if self.grouping is None:
            self.grouping = group_terms(h)
        return self.grouping


@dataclass
class TrainConfig:
    learning_rate: float = 0.05
    max_iters: int = 2000
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning rate must be nonnegative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")


@dataclass
class TrainTrace:
    """Per-iteration (iteration, energy, gradient norm, wall time) records."""

    records: list = field(default_factory=list)

    def append(self, iteration, energy, grad_norm, wall_ms):
        self.records.append((iteration, energy, grad_norm, wall_ms))

    def energies(self) -> np.ndarray:
        return np.array([r[1] for r in self.records])

    def __len__(self):
        return len(self.records)

    def to_csv(self) -> str:
        lines = ["iter,energy_hartree,grad_norm,wall_ms"]
        for it, e, g, w in self.records:
            lines.append(f"{it},{e:.12g},{g:.6g},{w:.3f}")
        return "\n".join(lines) + "\n"


def _simulate(c: ParamCircuit, theta, est: EnergyEstimator):
    if est.noise is not None:
        return run_density(c, theta, est.noise)
    return run_statevector(c, theta)


def energy(c: ParamCircuit, theta, h: Hamiltonian, est: EnergyEstimator,
           rng=None) -> float:
    """<H> of the prepared state, exact or sampled per the estimator."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != c.n_params:
        raise ValueError(f"expected {c.n_params} parameters, got {theta.size}")
    state = _simulate(c, theta, est)
    if est.mode == "exact":
        from .sim import expectation
        return expectation(state, h)
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    p_flip = est.noise.p_meas_flip if est.noise is not None else 0.0
    total = 0.0
    for group in est.groups_for(h):
        ests = sample_group(state, group, h, est.shots, p_flip, rng)
        for idx, val in ests.items():
            total += h.terms[idx].coeff * val
    return total


def gradient(c: ParamCircuit, theta, h: Hamiltonian, est: EnergyEstimator,
             rng=None) -> np.ndarray:
    """Parameter-shift gradient: dE/dt_j = [E(t_j + pi/2) - E(t_j - pi/2)] / 2."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != c.n_params:
        raise ValueError(f"expected {c.n_params} parameters, got {theta.size}")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    grad = np.empty(c.n_params)
    shifted = theta.copy()
    for j in range(c.n_params):
        orig = shifted[j]
        shifted[j] = orig + np.pi / 2
        e_plus = energy(c, shifted, h, est, rng)
        shifted[j] = orig - np.pi / 2
        e_minus = energy(c, shifted, h, est, rng)
        shifted[j] = orig
        grad[j] = 0.5 * (e_plus - e_minus)
    return grad


def train(c: ParamCircuit, theta_init, h: Hamiltonian, est: EnergyEstimator,
          cfg: TrainConfig) -> tuple[np.ndarray, TrainTrace]:
    """Plain SGD on the estimated energy; returns the best-seen parameters.

    Stops at max_iters or when the energy change across a 10-iteration window
    drops below cfg.tol.  Non-finite energies abort with a diagnostic.
    """
    theta = np.asarray(theta_init, dtype=float).copy()
    rng = np.random.default_rng(cfg.seed)
    trace = TrainTrace()
    best_e, best_theta = np.inf, theta.copy()
    t0 = time.perf_counter()
    for it in range(cfg.max_iters):
        e = energy(c, theta, h, est, rng)
        if not np.isfinite(e):
            raise NumericalError(f"non-finite energy {e} at iteration {it}")
        g = gradient(c, theta, h, est, rng)
        trace.append(it, e, float(np.linalg.norm(g)),
                     (time.perf_counter() - t0) * 1e3)
        if e < best_e:
            best_e, best_theta = e, theta.copy()
        es = trace.energies()
        if it >= 10 and abs(es[-1] - es[-11]) < cfg.tol:
            break
        theta -= cfg.learning_rate * g
    return best_theta, trace
