"""Command-line interface: ``sharc-vqe <command> [flags]``.

Settings resolve in the order defaults < ``--config`` JSON file < flags. Every
command prints a short table and, with ``--out``, writes a JSON result file
that embeds the resolved configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .ansatz import Circuit, build_hardware_efficient, build_uccsd
from .cost_model import STRATEGIES, loglog_slope, mse_curve, shot_totals
from .hamiltonians import FIXTURES, exact_spectrum, get_fixture, load_hamiltonian
from .hamiltonians.fermion import occupied_qubits
from .pauli import PauliSum
from .sharc import SharcConfig, SignificanceWarning, exact_evaluator, partition, prepare_sharc
from .statevector import Grouping, NoiseSpec, QuantumState, analytic_mse, prepare_basis_state
from .solvers import (
    Evaluator,
    OptimizerSpec,
    iterations_to_reach,
    phi_vqe,
    random_theta,
    relative_error,
    run_repeats,
    sharc_vqe,
    vqd,
    vqe,
)

COMMANDS = ("diag", "partition", "refine", "vqe", "sharc", "vqd", "phi", "cost-model", "mse-curve", "scan")


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    command: str = "diag"
    fixture: str | None = None
    hamiltonian: str | None = None
    mapping: str = "jordan_wigner"
    occupied: list[int] | None = None
    ansatz: str | None = None
    layers: int = 2
    optimizer: str | None = None
    max_iter: int | None = None
    seed: int = 0
    evaluator: str = "exact"
    shots: int = 8192
    grouping: str = "ungrouped"
    noise: bool = False
    noise_p1: float = 1e-3
    noise_p2: float = 1e-2
    noise_readout: float = 1e-2
    trajectories: int = 32
    cutoff: float = 0.01
    i: int = 1
    j: int = 1
    delta: float = 0.1
    repeats: int = 1
    workers: int = 1
    states: int = 5
    gamma: str = "sum_squares"
    restarts: int = 4
    sharc: bool = False
    k_target: float = 0.9
    tolerance: float = 1e-3
    eigenvalues: int = 5
    n_min: int = 4
    n_max: int = 20
    epsilon: float = 1e-3
    strategies: list[str] = field(default_factory=lambda: list(STRATEGIES))
    shots_list: list[int] = field(default_factory=lambda: [2**k for k in range(8, 17)])
    seeds: int = 20
    state: str = "ground"
    param: int = 0
    grid_start: float = -np.pi
    grid_stop: float = np.pi
    grid_points: int = 41
    out: str | None = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown {self.command!r}")
        if self.command != "cost-model":
            if (self.fixture is None) == (self.hamiltonian is None):
                raise ConfigError("fixture/hamiltonian: give exactly one Hamiltonian source")
            if self.fixture is not None and self.fixture not in FIXTURES:
                raise ConfigError(f"fixture: unknown {self.fixture!r}, choose from {sorted(FIXTURES)}")
            if self.hamiltonian is not None and not Path(self.hamiltonian).is_file():
                raise ConfigError(f"hamiltonian: file {self.hamiltonian!r} does not exist")
        if self.evaluator not in ("exact", "sampled"):
            raise ConfigError("evaluator: expected 'exact' or 'sampled'")
        if self.noise and self.evaluator != "sampled":
            raise ConfigError("noise: noisy runs need --evaluator sampled")
        if self.evaluator == "sampled" and self.seed is None:
            raise ConfigError("seed: required for sampled evaluation")
        if self.ansatz not in (None, "uccsd", "hw_efficient"):
            raise ConfigError("ansatz: expected 'uccsd' or 'hw_efficient'")
        if self.optimizer not in (None, "spsa", "fd"):
            raise ConfigError("optimizer: expected 'spsa' or 'fd'")
        for name in ("shots", "repeats", "workers", "states", "seeds", "grid_points", "trajectories"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be >= 1")
        if self.max_iter is not None and self.max_iter < 1:
            raise ConfigError("max_iter: must be >= 1")
        if self.cutoff <= 0:
            raise ConfigError("cutoff: must be positive")
        if self.epsilon <= 0:
            raise ConfigError("epsilon: must be positive")
        if self.state not in ("ground", "hf"):
            raise ConfigError("state: expected 'ground' or 'hf'")
        try:
            Grouping(self.grouping)
        except ValueError:
            raise ConfigError(f"grouping: unknown {self.grouping!r}") from None
        return self


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _str_list(text: str) -> list[str]:
    return [x for x in text.replace(",", " ").split() if x]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    add = common.add_argument
    S = argparse.SUPPRESS
    add("--config", help="JSON file with RunConfig keys")
    add("--fixture", choices=sorted(FIXTURES), default=S)
    add("--hamiltonian", default=S, help="Hamiltonian text file")
    add("--mapping", choices=("jordan_wigner", "parity"), default=S,
        help="fermion-to-qubit mapping of a file Hamiltonian (sets the reference state)")
    add("--occupied", type=_int_list, default=S, help="occupied spin orbitals, e.g. '0,2'")
    add("--ansatz", choices=("uccsd", "hw_efficient"), default=S)
    add("--layers", type=int, default=S)
    add("--optimizer", choices=("spsa", "fd"), default=S)
    add("--max-iter", type=int, dest="max_iter", default=S)
    add("--seed", type=int, default=S)
    add("--evaluator", choices=("exact", "sampled"), default=S)
    add("--shots", type=int, default=S)
    add("--grouping", choices=[g.value for g in Grouping], default=S)
    add("--noise", action="store_true", default=S, help="enable the parametric noise model")
    add("--noise-p1", type=float, dest="noise_p1", default=S)
    add("--noise-p2", type=float, dest="noise_p2", default=S)
    add("--noise-readout", type=float, dest="noise_readout", default=S)
    add("--trajectories", type=int, default=S)
    add("--cutoff", type=float, default=S)
    add("--i", type=int, default=S)
    add("--j", type=int, default=S)
    add("--delta", type=float, default=S)
    add("--repeats", type=int, default=S)
    add("--workers", type=int, default=S)
    add("--out", default=S)

    parser = argparse.ArgumentParser(prog="sharc-vqe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("diag", parents=[common], help="lowest eigenvalues").add_argument(
        "--eigenvalues", type=int, default=S)
    sub.add_parser("partition", parents=[common], help="four-way term partition")
    sub.add_parser("refine", parents=[common], help="fit the refined operator")
    sub.add_parser("vqe", parents=[common], help="full-Hamiltonian VQE")
    sub.add_parser("sharc", parents=[common], help="SHARC-VQE")
    p = sub.add_parser("vqd", parents=[common], help="excited states by deflation")
    p.add_argument("--states", type=int, default=S)
    p.add_argument("--gamma", default=S, help="sum_squares | mean_squares | <number>")
    p.add_argument("--restarts", type=int, default=S)
    p.add_argument("--sharc", action="store_true", default=S, help="deflate the refined partial Hamiltonian")
    p = sub.add_parser("phi", parents=[common], help="partial-Hamiltonian-initialized VQE")
    p.add_argument("--k-target", type=float, dest="k_target", default=S)
    p.add_argument("--tolerance", type=float, default=S)
    p = sub.add_parser("cost-model", parents=[common], help="closed-form shot totals")
    p.add_argument("--n-min", type=int, dest="n_min", default=S)
    p.add_argument("--n-max", type=int, dest="n_max", default=S)
    p.add_argument("--epsilon", type=float, default=S)
    p.add_argument("--strategies", type=_str_list, default=S)
    p = sub.add_parser("mse-curve", parents=[common], help="sampled-energy MSE vs shots")
    p.add_argument("--shots-list", type=_int_list, dest="shots_list", default=S)
    p.add_argument("--seeds", type=int, default=S)
    p.add_argument("--state", choices=("ground", "hf"), default=S)
    p = sub.add_parser("scan", parents=[common], help="single-parameter energy cross-section")
    p.add_argument("--param", type=int, default=S)
    p.add_argument("--grid-start", type=float, dest="grid_start", default=S)
    p.add_argument("--grid-stop", type=float, dest="grid_stop", default=S)
    p.add_argument("--grid-points", type=int, dest="grid_points", default=S)
    return parser


def resolve_config(argv=None) -> RunConfig:
    """Parse ``argv`` into a validated RunConfig."""
    args = vars(build_parser().parse_args(argv))
    known = {f.name for f in fields(RunConfig)}
    values: dict = {}
    config_path = args.pop("config", None)
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text("utf-8"))
        except OSError as exc:
            raise ConfigError(f"config: cannot read {config_path!r}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {config_path!r} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config: top level must be an object")
        bad = sorted(set(data) - known - {"command"})
        if bad:
            raise ConfigError(f"config: unknown keys {bad}")
        values.update({k: v for k, v in data.items() if k != "command"})
    values.update(args)
    return RunConfig(**values).validate()


# --------------------------------------------------------------------------
# building blocks
# --------------------------------------------------------------------------

@dataclass
class Problem:
    h: PauliSum
    occupied_modes: tuple[int, ...]
    mapping: str
    label: str

    @property
    def reference_qubits(self) -> list[int]:
        return occupied_qubits(self.occupied_modes, self.h.n_qubits, self.mapping)


def load_problem(cfg: RunConfig) -> Problem:
    if cfg.fixture is not None:
        fx = get_fixture(cfg.fixture)
        occ = tuple(cfg.occupied) if cfg.occupied is not None else fx.occupied_modes
        return Problem(fx.load(), occ, fx.mapping, cfg.fixture)
    h = load_hamiltonian(cfg.hamiltonian)
    if cfg.occupied is None and cfg.command not in ("diag", "partition", "mse-curve"):
        raise ConfigError("occupied: required with --hamiltonian")
    return Problem(h, tuple(cfg.occupied or ()), cfg.mapping, cfg.hamiltonian)


def build_circuit(cfg: RunConfig, problem: Problem) -> Circuit:
    ansatz = cfg.ansatz
    if ansatz is None:
        hea = cfg.command == "vqd" or problem.label == "hubbard2"
        ansatz = "hw_efficient" if hea else "uccsd"
    n = problem.h.n_qubits
    if ansatz == "uccsd":
        return build_uccsd(n, problem.occupied_modes, problem.mapping)
    return build_hardware_efficient(n, cfg.layers, problem.reference_qubits)


def build_optimizer(cfg: RunConfig, seed: int) -> OptimizerSpec:
    kind = cfg.optimizer or ("spsa" if cfg.evaluator == "sampled" else "fd")
    max_iter = cfg.max_iter or (500 if kind == "spsa" else 200)
    return OptimizerSpec(kind, max_iterations=max_iter, seed=seed)


def build_evaluator(cfg: RunConfig, seed: int) -> Evaluator:
    if cfg.evaluator == "exact":
        return Evaluator.exact(cfg.grouping)
    noise = None
    if cfg.noise:
        noise = NoiseSpec(cfg.noise_p1, cfg.noise_p2, cfg.noise_readout, seed, cfg.trajectories)
    return Evaluator.sampled(cfg.shots, cfg.grouping, noise, seed)


def sharc_config(cfg: RunConfig) -> SharcConfig:
    return SharcConfig(cutoff=cfg.cutoff, i=cfg.i, j=cfg.j, delta=cfg.delta)


def _ground(h: PauliSum):
    w, v = exact_spectrum(h, 1)
    return float(w[0]), v[:, 0]


def _summary(results, e_ref: float) -> dict:
    energies = np.array([r.energy for r in results])
    errors = np.array([relative_error(e, e_ref) for e in energies])
    fids = [r.fidelity_vs_reference for r in results if r.fidelity_vs_reference is not None]
    return {
        "exact_energy": e_ref,
        "mean_energy": float(energies.mean()),
        "std_energy": float(energies.std()),
        "mean_relative_error": float(errors.mean()),
        "mean_fidelity": float(np.mean(fids)) if fids else None,
    }


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_diag(cfg: RunConfig) -> tuple[dict, list[str]]:
    problem = load_problem(cfg)
    w, _ = exact_spectrum(problem.h, min(cfg.eigenvalues, 1 << problem.h.n_qubits))
    lines = [f"{k:>3d}  {e: .6f}" for k, e in enumerate(w)]
    return {"eigenvalues": [float(e) for e in w]}, ["  k  energy (Ha)"] + lines


def cmd_partition(cfg: RunConfig):
    report = partition(load_problem(cfg).h, cfg.cutoff)
    c = report.counts
    lines = ["  es  ei  ds  di", f"{c['es']:>4d}{c['ei']:>4d}{c['ds']:>4d}{c['di']:>4d}"]
    return report.to_dict(), lines


def cmd_refine(cfg: RunConfig):
    problem = load_problem(cfg)
    circuit = build_circuit(cfg, problem)
    setup = prepare_sharc(problem.h, circuit, sharc_config(cfg), problem.occupied_modes)
    result = {
        "partition": setup.report.to_dict(),
        "refined": setup.refined.to_dict(),
        "h_refined_partial": setup.h_refined_partial.render(),
    }
    lines = [f"{c:+.5f} {s.label}" for s, c in zip(setup.refined.strings, setup.refined.coefficients)]
    lines.append(f"H_p^{{{cfg.i}{cfg.j}}}: {len(setup.h_refined_partial)} terms")
    return result, lines


def _solve_repeats(cfg: RunConfig, solve):
    seeds = [cfg.seed + r for r in range(cfg.repeats)]
    return run_repeats(solve, seeds, cfg.workers)


def _run_table(results, e_ref):
    lines = ["seed  iters  raw energy   energy      rel. error  fidelity"]
    for r in results:
        fid = "-" if r.fidelity_vs_reference is None else f"{r.fidelity_vs_reference:.4f}"
        lines.append(f"{r.seed:>4d}  {r.iterations:>5d}  {r.raw_energy: .6f}  {r.energy: .6f}"
                     f"  {relative_error(r.energy, e_ref):.3e}  {fid}")
    return lines


@dataclass
class _VqeTask:
    cfg: RunConfig
    sharc: bool

    def __call__(self, seed: int):
        cfg = self.cfg
        problem = load_problem(cfg)
        circuit = build_circuit(cfg, problem)
        _, ref = _ground(problem.h)
        opt, ev = build_optimizer(cfg, seed), build_evaluator(cfg, seed)
        if self.sharc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", SignificanceWarning)
                res = sharc_vqe(problem.h, circuit, sharc_config(cfg), problem.occupied_modes,
                                opt, ev, reference=ref)
        else:
            res = vqe(problem.h, circuit, opt, ev, reference=ref)
        res.seed = seed
        return res


def _cmd_variational(cfg: RunConfig, sharc: bool):
    problem = load_problem(cfg)
    e_ref, _ = _ground(problem.h)
    results = _solve_repeats(cfg, _VqeTask(cfg, sharc))
    out = {"summary": _summary(results, e_ref), "runs": [r.to_dict() for r in results]}
    return out, _run_table(results, e_ref)


def cmd_vqe(cfg):
    return _cmd_variational(cfg, sharc=False)


def cmd_sharc(cfg):
    return _cmd_variational(cfg, sharc=True)


def cmd_vqd(cfg: RunConfig):
    problem = load_problem(cfg)
    circuit = build_circuit(cfg, problem)
    k = min(cfg.states, 1 << problem.h.n_qubits)
    w, v = exact_spectrum(problem.h, k)
    gamma = cfg.gamma
    try:
        gamma = float(gamma)
    except ValueError:
        pass
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignificanceWarning)
        results = vqd(problem.h, k, circuit, build_optimizer(cfg, cfg.seed), build_evaluator(cfg, cfg.seed),
                      sharc=sharc_config(cfg) if cfg.sharc else None,
                      occupied=problem.occupied_modes, gamma=gamma, restarts=cfg.restarts,
                      references=list(v.T), seed=cfg.seed)
    errors = [relative_error(r.energy, e) for r, e in zip(results, w)]
    lines = ["  k  exact       energy      rel. error"]
    lines += [f"{n:>3d}  {e: .6f}  {r.energy: .6f}  {err:.3e}"
              for n, (r, e, err) in enumerate(zip(results, w, errors))]
    lines.append(f"mean relative error {np.mean(errors):.3e}")
    out = {"exact": [float(e) for e in w], "mean_relative_error": float(np.mean(errors)),
           "states": [r.to_dict() for r in results]}
    return out, lines


def cmd_phi(cfg: RunConfig):
    problem = load_problem(cfg)
    circuit = build_circuit(cfg, problem)
    e_ref, ref = _ground(problem.h)
    runs, lines = [], ["seed  k_PH    stage-1 E   stage-2 E   stage-2 iters to target  random-init iters"]
    for r in range(cfg.repeats):
        seed = cfg.seed + r
        opt = build_optimizer(cfg, seed)
        phi = phi_vqe(problem.h, cfg.k_target, circuit, opt, build_evaluator(cfg, seed), seed=seed,
                      target_energy=e_ref, tolerance=cfg.tolerance, reference=ref)
        baseline = vqe(problem.h, circuit, opt, build_evaluator(cfg, seed),
                       theta0=random_theta(circuit, seed), reference=ref, method="random_init")
        base_iters = iterations_to_reach(baseline.energy_trace, e_ref, cfg.tolerance, baseline.initial_energy)
        runs.append({**phi.to_dict(), "seed": seed, "random_init": baseline.to_dict(),
                     "random_init_iterations_to_target": base_iters})
        lines.append(f"{seed:>4d}  {phi.k_ph:.4f}  {phi.stage1.energy: .6f}  {phi.stage2.energy: .6f}"
                     f"  {str(phi.stage2.extra.get('iterations_to_target')):>23s}  {str(base_iters):>17s}")
    return {"exact_energy": e_ref, "runs": runs}, lines


def cmd_cost_model(cfg: RunConfig):
    report = shot_totals(range(cfg.n_min, cfg.n_max + 1), cfg.epsilon, cfg.strategies)
    head = "   N  " + "  ".join(f"{s:>21s}" for s in report.strategies) + "  ordered"
    lines = [head]
    for row, ok in zip(report.rows(), report.ordering_holds()):
        cells = "  ".join(f"{row[s + '_low']:>10.3e}-{row[s + '_high']:<10.3e}" for s in report.strategies)
        lines.append(f"{row['n_qubits']:>4d}  {cells}  {ok}")
    return report.to_dict(), lines


def cmd_mse_curve(cfg: RunConfig):
    problem = load_problem(cfg)
    h = problem.h
    if cfg.state == "ground":
        state = QuantumState(h.n_qubits, _ground(h)[1])
    else:
        state = prepare_basis_state(h.n_qubits, problem.reference_qubits)
    seeds = range(cfg.seed, cfg.seed + cfg.seeds)
    rows = mse_curve(h, state, cfg.shots_list, seeds)
    h_p = partition(h, cfg.cutoff).h_p
    partial = [float(analytic_mse(h_p, state.amplitudes, r.shots)) for r in rows]
    slope = loglog_slope([r.shots for r in rows], [max(r.empirical, 1e-300) for r in rows])
    lines = ["   shots  empirical    analytic     sharc analytic"]
    lines += [f"{r.shots:>8d}  {r.empirical:.4e}  {r.analytic:.4e}  {p:.4e}" for r, p in zip(rows, partial)]
    lines.append(f"log-log slope (empirical) {slope:.3f}")
    out = {"state": cfg.state, "slope": slope,
           "rows": [{**asdict(r), "sharc_analytic": p} for r, p in zip(rows, partial)]}
    return out, lines


def cmd_scan(cfg: RunConfig):
    problem = load_problem(cfg)
    circuit = build_circuit(cfg, problem)
    if not 0 <= cfg.param < circuit.n_parameters:
        raise ConfigError(f"param: index {cfg.param} out of range for {circuit.n_parameters} parameters")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SignificanceWarning)
        setup = prepare_sharc(problem.h, circuit, sharc_config(cfg), problem.occupied_modes)
    grid = np.linspace(cfg.grid_start, cfg.grid_stop, cfg.grid_points) if cfg.grid_points > 1 \
        else np.array([cfg.grid_start])
    rows = []
    for x in grid:
        theta = np.zeros(circuit.n_parameters)
        theta[cfg.param] = x
        rows.append({
            "theta": float(x),
            "e_full": exact_evaluator(circuit, theta, problem.h),
            "e_sharc_corrected": setup.corrected(theta, circuit),
            "e_partial_raw": exact_evaluator(circuit, theta, setup.h_refined_partial),
        })
    lines = ["   theta      E_full      E_corrected  E_partial"]
    lines += [f"{r['theta']: .4f}  {r['e_full']: .6f}  {r['e_sharc_corrected']: .6f}  {r['e_partial_raw']: .6f}"
              for r in rows]
    return {"param": cfg.param, "rows": rows}, lines


HANDLERS = {
    "diag": cmd_diag, "partition": cmd_partition, "refine": cmd_refine, "vqe": cmd_vqe,
    "sharc": cmd_sharc, "vqd": cmd_vqd, "phi": cmd_phi, "cost-model": cmd_cost_model,
    "mse-curve": cmd_mse_curve, "scan": cmd_scan,
}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def write_result(path: str, cfg: RunConfig, result: dict):
    payload = {
        "generated": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": asdict(cfg),
        "result": _jsonable(result),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
        result, lines = HANDLERS[cfg.command](cfg)
    except (ConfigError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("\n".join(lines))
    if cfg.out:
        write_result(cfg.out, cfg, result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
