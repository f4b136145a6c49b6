"""Experiment driver: reproduces the full pipeline from a JSON config file.

Subcommands: fci, metrics, group, pretrain, train, mitigate.  Every command is
deterministic given (config, seed); results land in out/<command>-s<seed>/ as
config.echo, result.json, and command-specific trace/diagnostic files.  Wall
times are excluded from result files so reruns are byte-identical.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 size guard.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import circuit, hamio, mps, vqe, zne
from .errors import NumericalError, SizeGuardError, ValidationError
from .pauli import group_terms
from .sim import NoiseModel

DEFAULT_CONFIG = {
    "hamiltonian": "h4_sto3g",
    "ansatz": {"n_qubits": 8, "layers": 1},
    "pretrain": {
        "enable": True,
        "learning_rate": 0.05,
        "n_sweeps": 60,
        "convergence_tol": 1e-10,
        "init_noise": 0.01,
        "max_bond": 2,
        "extract_restarts": 30,
        "refine_sweeps": 40,
    },
    "train": {
        "learning_rate": 0.05,
        "max_iters": 2000,
        "tol": 1e-8,
        "estimator": "exact",
        "shots": 10_000,
        "noise": "none",
    },
    "noise": "paper",
    "zne": {
        "lambdas": [1.0, 3.0, 5.0],
        "fold_mode": "per_gate",
        "model_kind": "mlp",
        "degree": 2,
        "repeats": 1,
        "mlp": {},
    },
    "seed": 0,
    "out_dir": "out",
}


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: str | None) -> dict:
    if path is None:
        return json.loads(json.dumps(DEFAULT_CONFIG))
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"config file not found: {p}")
    try:
        user = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise ValidationError(f"{p}: invalid JSON: {e}") from e
    return _merge(DEFAULT_CONFIG, user)


def _resolve_hamiltonian(cfg: dict):
    spec = cfg["hamiltonian"]
    path = Path(spec)
    if not path.exists():
        builtin = hamio.builtin_fixture(spec)
        if builtin.exists():
            path = builtin
        else:
            raise ValidationError(f"hamiltonian {spec!r} is neither a file nor a builtin fixture")
    h = hamio.load(path)
    if h.n_qubits != cfg["ansatz"]["n_qubits"]:
        raise ValidationError(
            f"config ansatz has {cfg['ansatz']['n_qubits']} qubits but the "
            f"Hamiltonian has {h.n_qubits}")
    return h


def _resolve_noise(spec) -> NoiseModel | None:
    if spec == "none" or spec is None:
        return None
    if spec == "paper":
        return NoiseModel()
    if isinstance(spec, str):
        p = Path(spec)
        if not p.exists():
            raise ValidationError(f"noise spec {spec!r} is not 'none', 'paper' or a file")
        spec = json.loads(p.read_text())
    if isinstance(spec, dict):
        try:
            return NoiseModel(**spec)
        except (TypeError, ValueError) as e:
            raise ValidationError(f"bad noise model: {e}") from e
    raise ValidationError(f"unrecognized noise spec {spec!r}")


def _sig10(x: float) -> float:
    return float(f"{x:.10g}")


def _out_dir(cfg: dict, command: str, seed: int) -> Path:
    d = Path(cfg["out_dir"]) / f"{command}-s{seed}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def _echo_config(cfg: dict, out: Path):
    (out / "config.echo").write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")


def _write_result(out: Path, payload: dict):
    (out / "result.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _build_circuit(cfg: dict, h):
    ans = cfg["ansatz"]
    c = circuit.build_ansatz(ans["n_qubits"], ans["layers"])
    bits = hamio.hartree_fock_bits(h)
    return circuit.prepend_reference_state(c, bits), bits


def _pretrained_theta(cfg: dict, h, bits: str, seed: int, layers: int):
    pc = cfg["pretrain"]
    m0 = mps.from_product_state(bits)
    m0.max_bond = pc["max_bond"]
    sweep_cfg = mps.SweepConfig(pc["learning_rate"], pc["n_sweeps"],
                                pc["convergence_tol"], pc["init_noise"], seed)
    trained, trace = mps.pretrain(m0, h, sweep_cfg)
    theta, info = mps.extract_circuit_params(
        trained, reference_bits=bits, restarts=pc["extract_restarts"],
        seed=seed, refine_sweeps=pc["refine_sweeps"])
    per_layer = theta.size
    if layers > 1:
        # extra layers start as copies fitted toward identity action by the
        # same overlap refinement used inside extraction
        theta = np.concatenate([theta] + [np.zeros(per_layer)] * (layers - 1))
        theta = _fit_extra_layers(trained, bits, theta, layers, seed)
    return trained, trace, theta, info


def _fit_extra_layers(trained, bits, theta, layers, seed):
    from .mps import _ascend_block, _apply_pair, _pair_env, block_unitary, dense, canonicalize
    n = len(bits)
    target = dense(canonicalize(trained, 0)).amplitudes
    target = target / np.linalg.norm(target)
    pair_q = [q for q in range(n - 2, -1, -1)] * layers
    nb = len(pair_q)
    thetas = [theta[i * 12:(i + 1) * 12].copy() for i in range(nb)]
    bvec = np.zeros(1 << n, dtype=complex)
    bvec[int(bits, 2)] = 1.0
    rng = np.random.default_rng(seed)
    overlap = -1.0
    for _ in range(40):
        mats = [block_unitary(th) for th in thetas]
        rstates = [bvec]
        for i in range(nb - 1):
            rstates.append(_apply_pair(rstates[-1], mats[i], pair_q[i], n))
        left = target.copy()
        val = overlap
        for k in range(nb - 1, -1, -1):
            p = _pair_env(left, rstates[k], pair_q[k], n).T.copy()
            val = _ascend_block(p, thetas[k], 60)
            left = _apply_pair(left, block_unitary(thetas[k]).conj().T, pair_q[k], n)
        if val - overlap < 1e-12:
            break
        overlap = val
    return np.concatenate(thetas)


def _estimator(cfg: dict, noise) -> vqe.EnergyEstimator:
    tc = cfg["train"]
    return vqe.EnergyEstimator(mode=tc["estimator"], shots=tc["shots"], noise=noise)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_fci(cfg: dict, seed: int) -> int:
    h = _resolve_hamiltonian(cfg)
    out = _out_dir(cfg, "fci", seed)
    _echo_config(cfg, out)
    e = hamio.exact_ground_energy(h)
    groups = group_terms(h)
    ref = h.metadata.get("reference", {})
    payload = {
        "fci_energy": _sig10(e),
        "n_terms": len(h),
        "n_groups": len(groups),
        "reference": {k: _sig10(v) for k, v in ref.items()},
    }
    _write_result(out, payload)
    print(f"exact ground energy: {e:.10f} Hartree "
          f"({len(h)} terms, {len(groups)} measurement groups)")
    return 0


def cmd_metrics(cfg: dict, seed: int) -> int:
    h = _resolve_hamiltonian(cfg)
    c, _ = _build_circuit(cfg, h)
    bare = circuit.build_ansatz(cfg["ansatz"]["n_qubits"], cfg["ansatz"]["layers"])
    out = _out_dir(cfg, "metrics", seed)
    _echo_config(cfg, out)
    m = circuit.metrics(bare)
    payload = {"ansatz": asdict(m), "with_reference": asdict(circuit.metrics(c)),
               "folded": {}}
    for lam in cfg["zne"]["lambdas"]:
        folded, achieved = circuit.fold(bare, lam, cfg["zne"]["fold_mode"])
        payload["folded"][str(lam)] = {"achieved_lambda": achieved,
                                       **asdict(circuit.metrics(folded))}
    _write_result(out, payload)
    print(f"ansatz: {m.total_gates} gates, {m.parameter_gates} parameterized, "
          f"{m.two_qubit_gates} two-qubit")
    return 0


def cmd_group(cfg: dict, seed: int) -> int:
    h = _resolve_hamiltonian(cfg)
    groups = group_terms(h)
    out = _out_dir(cfg, "group", seed)
    _echo_config(cfg, out)
    payload = {"n_terms": len(h), "n_groups": len(groups),
               "groups": [{"basis": g.basis, "members": g.member_indices}
                          for g in groups]}
    _write_result(out, payload)
    print(f"{len(h)} terms -> {len(groups)} qubit-wise commuting groups")
    for i, g in enumerate(groups):
        print(f"  group {i:3d} [{g.basis}] {len(g)} terms")
    return 0


def cmd_pretrain(cfg: dict, seed: int) -> int:
    h = _resolve_hamiltonian(cfg)
    bits = hamio.hartree_fock_bits(h)
    pc = cfg["pretrain"]
    m0 = mps.from_product_state(bits)
    m0.max_bond = pc["max_bond"]
    sweep_cfg = mps.SweepConfig(pc["learning_rate"], pc["n_sweeps"],
                                pc["convergence_tol"], pc["init_noise"], seed)
    trained, trace = mps.pretrain(m0, h, sweep_cfg)
    out = _out_dir(cfg, "pretrain", seed)
    _echo_config(cfg, out)
    mps.save_checkpoint(trained, out / "mps_checkpoint.json")
    lines = ["update,energy_hartree"]
    lines += [f"{i},{e:.12g}" for i, e in enumerate(trace)]
    (out / "trace.csv").write_text("\n".join(lines) + "\n")
    ref = h.metadata.get("reference", {})
    payload = {
        "final_energy": _sig10(trace[-1]),
        "initial_energy": _sig10(trace[0]),
        "n_updates": len(trace) - 1,
        "hf_energy": _sig10(ref["hf_energy"]) if "hf_energy" in ref else None,
    }
    _write_result(out, payload)
    print(f"pre-training: {trace[0]:.8f} -> {trace[-1]:.8f} Hartree "
          f"({len(trace) - 1} updates)")
    return 0


def _single_train(cfg, h, c, bits, seed, pretrain_enabled):
    tc = cfg["train"]
    noise = _resolve_noise(tc["noise"])
    est = _estimator(cfg, noise)
    layers = cfg["ansatz"]["layers"]
    if pretrain_enabled:
        _, _, theta0, _ = _pretrained_theta(cfg, h, bits, seed, layers)
    else:
        rng = np.random.default_rng(seed)
        theta0 = rng.uniform(-np.pi, np.pi, c.n_params)
    train_cfg = vqe.TrainConfig(tc["learning_rate"], tc["max_iters"], tc["tol"], seed)
    theta, trace = vqe.train(c, theta0, h, est, train_cfg)
    best = float(min(trace.energies()))
    return theta, trace, best


def cmd_train(cfg: dict, seed: int, repeat: int | None) -> int:
    h = _resolve_hamiltonian(cfg)
    c, bits = _build_circuit(cfg, h)
    out = _out_dir(cfg, "train", seed)
    _echo_config(cfg, out)
    if repeat is None:
        theta, trace, best = _single_train(cfg, h, c, bits, seed,
                                           cfg["pretrain"]["enable"])
        (out / "trace.csv").write_text(trace.to_csv())
        (out / "theta.json").write_text(json.dumps([float(t) for t in theta]) + "\n")
        payload = {"best_energy": _sig10(best),
                   "final_energy": _sig10(trace.energies()[-1]),
                   "iterations": len(trace),
                   "pretrained": cfg["pretrain"]["enable"]}
        _write_result(out, payload)
        print(f"trained energy: {best:.10f} Hartree ({len(trace)} iterations)")
        return 0

    # multi-seed comparison batch: with and without pre-training
    root = np.random.SeedSequence(seed)
    run_seeds = [int(s.generate_state(1)[0] % 2**31) for s in root.spawn(repeat)]
    rows = []
    for arm, enabled in (("pretrained", True), ("random", False)):
        for idx, rs in enumerate(run_seeds):
            _, _, best = _single_train(cfg, h, c, bits, rs, enabled)
            rows.append((idx, arm, best))
            print(f"run {idx:2d} [{arm}] best energy {best:.8f}")
    lines = ["run,arm,energy_hartree"]
    lines += [f"{i},{arm},{e:.12g}" for i, arm, e in rows]
    (out / "runs.csv").write_text("\n".join(lines) + "\n")
    summary = {}
    for arm in ("pretrained", "random"):
        es = [e for _, a, e in rows if a == arm]
        summary[arm] = {
            "best": _sig10(min(es)),
            "median": _sig10(statistics.median(es)),
            "variance": _sig10(statistics.variance(es)) if len(es) > 1 else 0.0,
        }
    _write_result(out, summary)
    print(json.dumps(summary, indent=2))
    return 0


def cmd_mitigate(cfg: dict, seed: int) -> int:
    h = _resolve_hamiltonian(cfg)
    c, bits = _build_circuit(cfg, h)
    noise = _resolve_noise(cfg["noise"])
    out = _out_dir(cfg, "mitigate", seed)
    _echo_config(cfg, out)

    theta, trace, _ = _single_train(cfg, h, c, bits, seed, cfg["pretrain"]["enable"])
    (out / "trace.csv").write_text(trace.to_csv())
    zc = cfg["zne"]
    mlp_spec = zne.MlpSpec(**zc["mlp"]) if zc["mlp"] else zne.MlpSpec()
    zcfg = zne.ZneConfig(lambdas=tuple(zc["lambdas"]), fold_mode=zc["fold_mode"],
                         model_kind=zc["model_kind"], degree=zc["degree"],
                         mlp=mlp_spec, repeats=zc["repeats"],
                         estimator=_estimator(cfg, None), seed=seed)
    if noise is None:
        # zero-noise edge: ZNE degenerates to the exact energy
        e_noiseless = vqe.energy(c, theta, h, vqe.EnergyEstimator())
        e_zne, diagnostics = e_noiseless, {"scale_points": [], "note": "no noise model"}
        e_raw = e_noiseless
    else:
        e_zne, diagnostics = zne.mitigated_energy(c, theta, h, noise, zcfg)
        e_raw = float(np.mean(diagnostics["scale_points"][0]["estimates"]))
        e_noiseless = vqe.energy(c, theta, h, vqe.EnergyEstimator())
    for w in diagnostics.get("warnings", []):
        print(f"warning: {w}", file=sys.stderr)
    (out / "zne.json").write_text(json.dumps(diagnostics, indent=2, sort_keys=True) + "\n")
    ref = h.metadata.get("reference", {})
    payload = {
        "e_zne": _sig10(e_zne),
        "e_raw_lambda1": _sig10(e_raw),
        "e_noiseless": _sig10(e_noiseless),
        "fci_reference": _sig10(ref["fci_energy"]) if "fci_energy" in ref else None,
        "mitigated_improves": bool(abs(e_zne - e_noiseless) < abs(e_raw - e_noiseless)),
    }
    _write_result(out, payload)
    print(f"mitigated energy: {e_zne:.10f} Hartree "
          f"(raw at lambda=1: {e_raw:.10f}, noiseless: {e_noiseless:.10f})")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpsvqe",
                                 description="MPS-pretrained noise-mitigated VQE driver")
    ap.add_argument("command", choices=["fci", "metrics", "group", "pretrain",
                                        "train", "mitigate"])
    ap.add_argument("--config", default=None, help="JSON config file (defaults built in)")
    ap.add_argument("--seed", type=int, default=None, help="override config seed")
    ap.add_argument("--repeat", type=int, default=None,
                    help="train only: run k seeds with and without pre-training")
    ap.add_argument("--out", default=None, help="override output directory")
    ap.add_argument("--noise", default=None,
                    help="override noise: none | paper | <file.json>")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.out is not None:
            cfg["out_dir"] = args.out
        if args.noise is not None:
            cfg["noise"] = args.noise
        seed = cfg["seed"]
        if args.repeat is not None and args.command != "train":
            raise ValidationError("--repeat is only supported by the train command")
        if args.command == "fci":
            return cmd_fci(cfg, seed)
        if args.command == "metrics":
            return cmd_metrics(cfg, seed)
        if args.command == "group":
            return cmd_group(cfg, seed)
        if args.command == "pretrain":
            return cmd_pretrain(cfg, seed)
        if args.command == "train":
            return cmd_train(cfg, seed, args.repeat)
        return cmd_mitigate(cfg, seed)
    except SizeGuardError as e:
        print(f"size guard: {e}", file=sys.stderr)
        return 4
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except (ValidationError, hamio.HamiltonianFileError, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
