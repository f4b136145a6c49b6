"""Zero-noise extrapolation: scaled-noise data collection, extrapolation-model
fitting (linear / polynomial / exponential / small neural network), and
evaluation of the noiseless limit f(0)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .circuit import ParamCircuit, fold
from .pauli import Hamiltonian
from .sim import NoiseModel
from .vqe import EnergyEstimator, energy

MODEL_KINDS = ("linear", "polynomial", "exponential", "mlp")


@dataclass
class ScalePoint:
    """Achieved noise-scale factor and the energy samples collected at it."""

    lam: float
    estimates: list[float]

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError("scale factor must be >= 1")
        if not self.estimates:
            raise ValueError("estimates must be nonempty")

    def mean(self) -> float:
        return float(np.mean(self.estimates))


@dataclass
class MlpSpec:
    """Three fully connected layers (1 -> hidden[0] -> hidden[1] -> 1).

    Trained by full-batch gradient descent on squared error with the scale
    inputs mapped to [0, 1] and the energies standardized; `restarts` seeded
    fits are run and the lowest-residual network wins.
    """

    hidden: tuple[int, int] = (16, 16)
    activation: str = "tanh"
    epochs: int = 5000
    learning_rate: float = 1e-2
    seed: int = 0
    restarts: int = 10

    def __post_init__(self):
        if len(self.hidden) != 2:
            raise ValueError("spec fixes exactly 3 layers, i.e. 2 hidden widths")
        if self.activation != "tanh":
            raise ValueError("only tanh activation is supported")


class _Mlp:
    def __init__(self, hidden, rng):
        w1, w2 = hidden
        self.W1 = rng.standard_normal((w1, 1)) / np.sqrt(1)
        self.b1 = np.zeros(w1)
        self.W2 = rng.standard_normal((w2, w1)) / np.sqrt(w1)
        self.b2 = np.zeros(w2)
        self.W3 = rng.standard_normal((1, w2)) / np.sqrt(w2)
        self.b3 = np.zeros(1)

    def forward(self, x):
        # x: (N,); returns (N,), caching activations for backprop
        self._x = x[None, :]
        self._h1 = np.tanh(self.W1 @ self._x + self.b1[:, None])
        self._h2 = np.tanh(self.W2 @ self._h1 + self.b2[:, None])
        return (self.W3 @ self._h2 + self.b3[:, None])[0]

    def step(self, x, y, lr):
        n = x.size
        out = self.forward(x)
        err = (out - y)[None, :]  # (1, N)
        loss = float(np.mean(err ** 2))
        d3 = 2.0 * err / n
        gW3 = d3 @ self._h2.T
        gb3 = d3.sum(axis=1)
        d2 = (self.W3.T @ d3) * (1 - self._h2 ** 2)
        gW2 = d2 @ self._h1.T
        gb2 = d2.sum(axis=1)
        d1 = (self.W2.T @ d2) * (1 - self._h1 ** 2)
        gW1 = d1 @ self._x.T
        gb1 = d1.sum(axis=1)
        self.W3 -= lr * gW3
        self.b3 -= lr * gb3
        self.W2 -= lr * gW2
        self.b2 -= lr * gb2
        self.W1 -= lr * gW1
        self.b1 -= lr * gb1
        return loss

    def flat_params(self):
        return np.concatenate([a.reshape(-1) for a in
                               (self.W1, self.b1, self.W2, self.b2, self.W3, self.b3)])


@dataclass
class ExtrapolationModel:
    """Fitted noise-scaling curve f(lam; p); extrapolation evaluates f(0)."""

    kind: str
    fitted_params: np.ndarray
    fit_residual: float
    warnings: list[str] = field(default_factory=list)
    _predict: object = None

    def predict(self, lam: float) -> float:
        if self._predict is None:
            raise ValueError("model has not been fitted")
        return float(self._predict(lam))


def _poly_fit(xs, ys, degree):
    coefs = np.polyfit(xs, ys, degree)
    resid = float(np.sqrt(np.mean((np.polyval(coefs, xs) - ys) ** 2)))
    return coefs, resid


def fit(model_kind: str, data: list[ScalePoint], spec: MlpSpec | None = None,
        degree: int = 2) -> ExtrapolationModel:
    """Least-squares fit of the chosen model to all (lam, estimate) pairs.

    Repeated estimates enter as replicated training points.  An exponential
    fit that fails to converge falls back to a linear fit with a warning.
    """
    if model_kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {model_kind!r}")
    xs = np.array([p.lam for p in data for _ in p.estimates])
    ys = np.array([e for p in data for e in p.estimates])
    n_distinct = np.unique(xs).size
    warnings_list: list[str] = []

    if model_kind == "linear" or (model_kind == "polynomial" and degree == 1):
        if n_distinct < 2:
            raise ValueError("linear fit needs at least 2 distinct scale factors")
        coefs, resid = _poly_fit(xs, ys, 1)
        return ExtrapolationModel("linear", coefs, resid,
                                  _predict=lambda lam: np.polyval(coefs, lam))

    if model_kind == "polynomial":
        if degree >= n_distinct:
            raise ValueError("polynomial degree must be below the number of "
                             "distinct scale factors")
        coefs, resid = _poly_fit(xs, ys, degree)
        return ExtrapolationModel("polynomial", coefs, resid,
                                  _predict=lambda lam: np.polyval(coefs, lam))

    if model_kind == "exponential":
        if n_distinct < 3:
            raise ValueError("exponential fit needs at least 3 distinct scale factors")
        f = lambda lam, a, b, c: a + b * np.exp(-c * lam)
        span = max(xs.max() - xs.min(), 1.0)
        best = None
        for c0 in (0.3 / span, 1.0 / span, 1.0, 3.0 / span):
            try:
                a0 = float(ys[np.argmax(xs)])
                b0 = float(ys[np.argmin(xs)] - a0)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", OptimizeWarning)
                    popt, _ = curve_fit(f, xs, ys,
                                        p0=(a0, b0 if b0 != 0 else 1e-3, c0),
                                        maxfev=20000)
                resid = float(np.sqrt(np.mean((f(xs, *popt) - ys) ** 2)))
                if best is None or resid < best[1]:
                    best = (popt, resid)
            except (RuntimeError, TypeError):
                continue
        if best is None:
            warnings_list.append("exponential fit failed; fell back to linear")
            coefs, resid = _poly_fit(xs, ys, 1)
            return ExtrapolationModel("linear", coefs, resid, warnings_list,
                                      _predict=lambda lam: np.polyval(coefs, lam))
        popt, resid = best
        return ExtrapolationModel("exponential", np.array(popt), resid, warnings_list,
                                  _predict=lambda lam: f(lam, *popt))

    # mlp
    if n_distinct < 3:
        raise ValueError("mlp fit needs at least 3 distinct scale factors")
    spec = spec or MlpSpec()
    x_min, x_span = xs.min(), xs.max() - xs.min()
    x_span = x_span if x_span > 0 else 1.0
    y_mu, y_sd = float(ys.mean()), float(ys.std())
    if y_sd < 1e-12:
        # degenerate constant data: no training needed
        return ExtrapolationModel("mlp", np.array([y_mu]), 0.0,
                                  _predict=lambda lam: y_mu)
    u = (xs - x_min) / x_span
    yn = (ys - y_mu) / y_sd
    best_net, best_loss, best_hist = None, np.inf, None
    root = np.random.SeedSequence(spec.seed)
    for child in root.spawn(spec.restarts):
        rng = np.random.default_rng(child)
        net = _Mlp(spec.hidden, rng)
        hist = [net.step(u, yn, spec.learning_rate) for _ in range(spec.epochs)]
        if hist[-1] < best_loss:
            best_net, best_loss, best_hist = net, hist[-1], hist
    resid = float(np.sqrt(best_loss) * y_sd)
    if resid < 1e-12:
        warnings_list.append("mlp residual below 1e-12: likely interpolating the data")
    model = ExtrapolationModel(
        "mlp", best_net.flat_params(), resid, warnings_list,
        _predict=lambda lam: best_net.forward(
            np.array([(lam - x_min) / x_span]))[0] * y_sd + y_mu)
    model.loss_history = best_hist
    return model


def extrapolate(model: ExtrapolationModel) -> float:
    """The zero-noise limit f(0) of the fitted model."""
    return model.predict(0.0)


def collect(c: ParamCircuit, theta, h: Hamiltonian, noise: NoiseModel,
            lam_list, est: EnergyEstimator, repeats: int = 1, rng=None,
            fold_mode: str = "per_gate") -> list[ScalePoint]:
    """Fold the circuit to each scale factor and estimate the energy there.

    The noise model itself is never rescaled; depth scaling does the work.
    Records the achieved scale factor of every fold.
    """
    lam_list = list(lam_list)
    if lam_list != sorted(lam_list) or lam_list[0] != 1:
        raise ValueError("scale factors must be ascending and start at 1")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    est_used = replace(est, noise=noise)
    points = []
    for lam in lam_list:
        folded, achieved = fold(c, lam, fold_mode)
        estimates = [energy(folded, theta, h, est_used, rng) for _ in range(repeats)]
        points.append(ScalePoint(achieved, estimates))
    return points


@dataclass
class ZneConfig:
    lambdas: tuple = (1.0, 3.0, 5.0)
    fold_mode: str = "per_gate"
    model_kind: str = "mlp"
    degree: int = 2
    mlp: MlpSpec = field(default_factory=MlpSpec)
    repeats: int = 1
    estimator: EnergyEstimator = field(default_factory=EnergyEstimator)
    seed: int = 0


def mitigated_energy(c: ParamCircuit, theta, h: Hamiltonian, noise: NoiseModel,
                     cfg: ZneConfig | None = None) -> tuple[float, dict]:
    """collect -> fit -> extrapolate; returns (E_zne, diagnostics)."""
    cfg = cfg or ZneConfig()
    rng = np.random.default_rng(cfg.seed)
    points = collect(c, theta, h, noise, cfg.lambdas, cfg.estimator,
                     cfg.repeats, rng, cfg.fold_mode)
    spec = replace(cfg.mlp, seed=cfg.mlp.seed + cfg.seed)
    model = fit(cfg.model_kind, points, spec=spec, degree=cfg.degree)
    e_zne = extrapolate(model)
    diagnostics = {
        "scale_points": [{"lambda": p.lam, "estimates": list(map(float, p.estimates))}
                         for p in points],
        "fold_mode": cfg.fold_mode,
        "model_kind": model.kind,
        "fitted_params": [float(v) for v in np.atleast_1d(model.fitted_params)],
        "fit_residual": model.fit_residual,
        "warnings": list(model.warnings),
        "e_zne": float(e_zne),
    }
    return float(e_zne), diagnostics
