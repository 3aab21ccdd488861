#!/usr/bin/env python3
"""
NoisyLab - Command-Line Interface

Subcommands:
    vqe      optimize a fixed ansatz (optionally averaged over randomized compilations)
    adapt    run ADAPT-VQE and print the iteration trace
    sweep    run the Cartesian product described by a YAML manifest
    exact    print the exact spectrum of a Hamiltonian
    compile  dump a compiled ansatz circuit
    config   show or change the persisted settings

Results are CSV rows on stdout (and optionally a file); logs go to stderr.
Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
"""

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

try:
    from .config.settings import LabSettings, SettingsManager, default_jobs, get_settings_manager
    from .circuits.ansatz_compiler import AnsatzFamily, AnsatzSpec, build_ansatz
    from .circuits.randomized_compiling import randomization_report
    from .ham_io import (MAX_P1, HamiltonianEntry, bundled_nah_file, load_hamiltonian, load_manifest)
    from .optimizers import OptimizerConfig, OptimizerKind
    from .simulation.density_sim import NoiseModel
    from .simulation.exact_oracle import SpectrumResult, ground_state
    from .templates.gnuplot_templates import render_sweep_script
    from .utils.errors import CapacityError, HamiltonianParseError, ManifestError, NoiseModelError
    from .utils.logger import configure_logger, get_logger
    from .vqe_driver import AdaptResult, VqeResult, run_adapt, run_vqe, run_vqe_randomized
except ImportError:
    from config.settings import LabSettings, SettingsManager, default_jobs, get_settings_manager
    from circuits.ansatz_compiler import AnsatzFamily, AnsatzSpec, build_ansatz
    from circuits.randomized_compiling import randomization_report
    from ham_io import (MAX_P1, HamiltonianEntry, bundled_nah_file, load_hamiltonian, load_manifest)
    from optimizers import OptimizerConfig, OptimizerKind
    from simulation.density_sim import NoiseModel
    from simulation.exact_oracle import SpectrumResult, ground_state
    from templates.gnuplot_templates import render_sweep_script
    from utils.errors import CapacityError, HamiltonianParseError, ManifestError, NoiseModelError
    from utils.logger import configure_logger, get_logger
    from vqe_driver import AdaptResult, VqeResult, run_adapt, run_vqe, run_vqe_randomized


EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CSV_COLUMNS = [
    "record_type", "status", "bond_length", "p1", "ansatz_family", "optimizer_kind", "seed",
    "iteration", "energy_ha", "exact_e0_ha", "energy_error_ha", "fidelity", "n_params", "n_1q",
    "n_cnot", "evaluations", "converged", "parameters", "error",
]

VALIDATION_ERRORS = (NoiseModelError, ManifestError, HamiltonianParseError, CapacityError)

# Lowest accepted value of integer options; options in POSITIVE_ARGUMENTS must be > 0
ARGUMENT_MINIMUMS = {"rc": 0, "max_depth": 1, "max_iterations": 1, "jobs": 1}
POSITIVE_ARGUMENTS = ("grad_threshold", "tolerance", "fd_step")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass
class RunRecord:
    """One CSV row."""

    record_type: str = "run"
    status: str = "ok"
    bond_length: Optional[float] = None
    p1: float = 0.0
    ansatz_family: str = ""
    optimizer_kind: str = ""
    seed: Optional[int] = None
    iteration: Optional[int] = None
    energy_ha: Optional[float] = None
    exact_e0_ha: Optional[float] = None
    energy_error_ha: Optional[float] = None
    fidelity: Optional[float] = None
    n_params: Optional[int] = None
    n_1q: Optional[int] = None
    n_cnot: Optional[int] = None
    evaluations: Optional[int] = None
    converged: Optional[bool] = None
    parameters: List[float] = field(default_factory=list)
    error: str = ""

    @classmethod
    def from_result(cls, result: VqeResult, record_type: str = "run", bond_length: Optional[float] = None,
                    seed: Optional[int] = None) -> "RunRecord":
        n_1q, n_cnot = result.gate_counts
        return cls(
            record_type=record_type,
            bond_length=bond_length,
            p1=result.noise_p1,
            ansatz_family=result.ansatz_family,
            optimizer_kind=result.optimizer_kind,
            seed=seed,
            energy_ha=result.energy,
            exact_e0_ha=result.exact_e0,
            energy_error_ha=result.energy - result.exact_e0,
            fidelity=result.fidelity,
            n_params=result.n_params,
            n_1q=n_1q,
            n_cnot=n_cnot,
            evaluations=result.evaluations,
            converged=result.converged,
            parameters=list(result.parameters),
        )

    @classmethod
    def failure(cls, error: Exception, record_type: str, **fields) -> "RunRecord":
        message = f"{type(error).__name__}: {error}".replace("\n", " ")
        return cls(record_type=record_type, status="error", error=message, **fields)

    def to_row(self) -> Dict[str, str]:
        row = {name: _fmt(getattr(self, name)) for name in CSV_COLUMNS if name != "parameters"}
        row["parameters"] = ";".join(repr(float(p)) for p in self.parameters)
        return row


def write_records(records: Iterable[RunRecord], out: Optional[str] = None, stream=None) -> str:
    """Render records as CSV, print them to `stream` and optionally save them to `out`."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow(record.to_row())
    text = buffer.getvalue()

    (stream or sys.stdout).write(text)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        get_logger().info(f"Wrote {out}", "CLI")
    return text


def _p1(value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid noise level {value!r}") from None


def _point(value: str) -> List[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid parameter list {value!r}") from None


def _add_hamiltonian_args(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--hamiltonian", metavar="PATH", help="Hamiltonian text file")
    source.add_argument("--bundled", action="store_true", help="use the bundled NaH Hamiltonian")


def _add_run_args(parser: argparse.ArgumentParser):
    _add_hamiltonian_args(parser)
    parser.add_argument("--p1", type=_p1, default=0.0, help=f"single-qubit depolarizing probability, 0..{MAX_P1}")
    parser.add_argument("--optimizer", choices=[k.value for k in OptimizerKind], default="cobyla")
    parser.add_argument("--max-iterations", type=int, help="optimizer iteration budget")
    parser.add_argument("--tolerance", type=float, help="optimizer convergence tolerance")
    parser.add_argument("--fd-step", type=float, help="central-difference step (lbfgs)")
    parser.add_argument("--no-diagonal-exemption", action="store_true",
                        help="apply noise after Z and RZ gates too")
    parser.add_argument("--out", metavar="CSV", help="also write the CSV to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisylab", description="Noisy VQE / ADAPT-VQE simulation lab")
    parser.add_argument("--config", metavar="JSON", help="settings file (defaults to the persisted settings)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="console log level")
    sub = parser.add_subparsers(dest="command", required=True)

    vqe = sub.add_parser("vqe", help="optimize a fixed ansatz")
    _add_run_args(vqe)
    vqe.add_argument("--ansatz", choices=[AnsatzFamily.UCCD.value, AnsatzFamily.SINGLET_UCCSD.value], default="uccd")
    vqe.add_argument("--seed", type=int, default=0, help="first randomized-compiling seed")
    vqe.add_argument("--rc", type=int, nargs="?", default=0, const=None, metavar="N",
                     help="average over N randomized compilations (N defaults to the rc_randomizations setting)")
    vqe.add_argument("--initial-point", type=_point, help="comma-separated starting parameters")

    adapt = sub.add_parser("adapt", help="run ADAPT-VQE")
    _add_run_args(adapt)
    adapt.add_argument("--grad-threshold", type=float, help="gradient-norm stopping threshold")
    adapt.add_argument("--max-depth", type=int, help="maximum number of generators")
    adapt.add_argument("--gradient-norm", choices=["l2", "linf"], help="norm used for the stopping test")
    adapt.add_argument("--noiseless-gradients", action="store_true",
                       help="select generators with noiseless gradients (stopping always uses them)")

    sweep = sub.add_parser("sweep", help="run a YAML study manifest")
    sweep.add_argument("manifest", help="sweep manifest (YAML)")
    sweep.add_argument("--jobs", type=int, help="concurrent cells (default $NOISYLAB_JOBS or settings)")
    sweep.add_argument("--out", metavar="CSV", help="also write the CSV to this file")
    sweep.add_argument("--plot-script", metavar="GP", help="write a gnuplot script for the CSV")
    sweep.add_argument("--no-diagonal-exemption", action="store_true", help="apply noise after Z and RZ gates too")

    exact = sub.add_parser("exact", help="exact spectrum of a Hamiltonian")
    _add_hamiltonian_args(exact)
    exact.add_argument("--state", action="store_true", help="also print the ground-state vector")

    compile_ = sub.add_parser("compile", help="dump a compiled ansatz circuit")
    compile_.add_argument("--ansatz", choices=[AnsatzFamily.UCCD.value, AnsatzFamily.SINGLET_UCCSD.value],
                          default="uccd")
    compile_.add_argument("--rc-seed", type=int, help="randomly compile with this seed")
    compile_.add_argument("--out", metavar="PATH", help="also write the circuit text to this file")

    config = sub.add_parser("config", help="show or change the persisted settings")
    actions = config.add_subparsers(dest="action", required=True)
    actions.add_parser("show", help="print the settings summary as JSON")
    get = actions.add_parser("get", help="print one setting")
    get.add_argument("key")
    set_ = actions.add_parser("set", help="change one setting (VALUE is parsed as JSON when possible)")
    set_.add_argument("key")
    set_.add_argument("value")
    actions.add_parser("reset", help="restore the defaults")
    export = actions.add_parser("export", help="write the settings to a JSON file")
    export.add_argument("path")
    import_ = actions.add_parser("import", help="validate and persist settings from a JSON file")
    import_.add_argument("path")

    return parser


def _check_capacity(entry: HamiltonianEntry, settings: LabSettings):
    n_qubits = entry.hamiltonian.n_qubits
    if n_qubits > settings.dense_qubit_limit:
        raise CapacityError(f"{entry.label} has {n_qubits} qubits, above the dense_qubit_limit setting "
                            f"of {settings.dense_qubit_limit}")


def _load_source(args, settings: LabSettings) -> HamiltonianEntry:
    source = bundled_nah_file() if args.bundled else load_hamiltonian(args.hamiltonian)
    label = "bundled" if args.bundled else str(args.hamiltonian)
    entry = HamiltonianEntry(label, source.bond_length_angstrom, source)
    _check_capacity(entry, settings)
    return entry


def _noise(p1: float, settings: LabSettings, no_exemption: bool) -> NoiseModel:
    exempt = settings.exempt_diagonal_gates and not no_exemption
    return NoiseModel.from_p1(p1, settings.two_qubit_ratio, exempt)


def _optimizer_config(args, settings: LabSettings, initial_point=None) -> OptimizerConfig:
    return OptimizerConfig.for_kind(
        OptimizerKind(args.optimizer), settings,
        max_iterations=args.max_iterations, tolerance=args.tolerance, fd_step=args.fd_step,
        initial_point=initial_point,
    )


def _vqe_records(entry: HamiltonianEntry, spec: AnsatzSpec, noise: NoiseModel, cfg: OptimizerConfig,
                 seed: int, rc: int, spectrum: SpectrumResult, per_seed_rows: bool = True,
                 record_type: str = "run") -> List[RunRecord]:
    h = entry.hamiltonian
    if rc <= 0:
        result = run_vqe(h, spec, noise, cfg, spectrum=spectrum)
        return [RunRecord.from_result(result, record_type, entry.bond_length, seed)]

    summary = run_vqe_randomized(h, spec, noise, cfg, [seed + k for k in range(rc)], spectrum=spectrum)
    records = []
    if per_seed_rows:
        records = [RunRecord.from_result(r, "rc_seed", entry.bond_length, r.rc_seed) for r in summary.runs]

    mean = RunRecord.from_result(summary.runs[0], "rc_mean" if record_type == "run" else record_type,
                                 entry.bond_length, seed)
    mean.energy_ha = summary.mean_energy
    mean.energy_error_ha = summary.mean_energy - mean.exact_e0_ha
    mean.fidelity = summary.mean_fidelity
    mean.n_1q = int(round(summary.mean_single_qubit_gates))
    mean.evaluations = sum(r.evaluations for r in summary.runs)
    mean.converged = all(r.converged for r in summary.runs)
    mean.parameters = [float(v) for v in np.mean([r.parameters for r in summary.runs], axis=0)]
    records.append(mean)
    return records


def _adapt_records(entry: HamiltonianEntry, result: AdaptResult, optimizer: str, seed: Optional[int],
                   summary_type: str = "adapt_summary", iteration_rows: bool = True) -> List[RunRecord]:
    records = []
    if iteration_rows:
        for it in result.iterations:
            records.append(RunRecord(
                record_type="adapt_iteration", bond_length=entry.bond_length, p1=result.final.noise_p1,
                ansatz_family=AnsatzFamily.ADAPT.value, optimizer_kind=optimizer, seed=seed,
                iteration=it.iteration, energy_ha=it.energy, exact_e0_ha=result.final.exact_e0,
                energy_error_ha=it.energy - result.final.exact_e0, fidelity=it.fidelity,
                n_params=len(it.parameters), n_1q=it.n_1q, n_cnot=it.n_cnot, evaluations=it.evaluations,
                converged=None, parameters=list(it.parameters),
            ))
    summary = RunRecord.from_result(result.final, summary_type, entry.bond_length, seed)
    summary.iteration = len(result.iterations)
    summary.converged = result.converged
    records.append(summary)
    return records


def cmd_vqe(args, settings: LabSettings) -> int:
    logger = get_logger()
    entry = _load_source(args, settings)
    spec = AnsatzSpec(AnsatzFamily(args.ansatz))
    noise = _noise(args.p1, settings, args.no_diagonal_exemption)
    cfg = _optimizer_config(args, settings, args.initial_point)
    spectrum = ground_state(entry.hamiltonian)
    rc = settings.rc_randomizations if args.rc is None else args.rc

    logger.info(f"VQE {spec.family.value} on {entry.label} at p1 = {noise.p1} with {cfg.kind.value}"
                + (f", {rc} randomized compilations" if rc else ""), "CLI")
    records = _vqe_records(entry, spec, noise, cfg, args.seed, rc, spectrum)
    write_records(records, args.out)
    return EXIT_OK


def cmd_adapt(args, settings: LabSettings) -> int:
    entry = _load_source(args, settings)
    noise = _noise(args.p1, settings, args.no_diagonal_exemption)
    cfg = _optimizer_config(args, settings)

    result = run_adapt(
        entry.hamiltonian, noise, cfg,
        grad_threshold=settings.adapt_grad_threshold if args.grad_threshold is None else args.grad_threshold,
        max_depth=settings.adapt_max_depth if args.max_depth is None else args.max_depth,
        gradient_norm=args.gradient_norm or settings.adapt_gradient_norm,
        noiseless_gradients=args.noiseless_gradients or settings.adapt_noiseless_gradients,
    )
    write_records(_adapt_records(entry, result, cfg.kind.value, None), args.out)
    return EXIT_OK


def _sweep_cell(entry: HamiltonianEntry, p1: float, optimizer: OptimizerKind, family: AnsatzFamily, seed: int,
                manifest_rc: int, max_iterations: Optional[int], settings: LabSettings, no_exemption: bool,
                spectrum: SpectrumResult) -> RunRecord:
    fields = dict(bond_length=entry.bond_length, p1=p1, ansatz_family=family.value,
                  optimizer_kind=optimizer.value, seed=seed)
    try:
        noise = _noise(p1, settings, no_exemption)
        cfg = OptimizerConfig.for_kind(optimizer, settings, max_iterations=max_iterations)
        if family is AnsatzFamily.ADAPT:
            result = run_adapt(entry.hamiltonian, noise, cfg, settings.adapt_grad_threshold,
                               settings.adapt_max_depth, settings.adapt_gradient_norm,
                               settings.adapt_noiseless_gradients, spectrum=spectrum)
            return _adapt_records(entry, result, optimizer.value, seed, "sweep", iteration_rows=False)[-1]
        records = _vqe_records(entry, AnsatzSpec(family), noise, cfg, seed, manifest_rc, spectrum,
                               per_seed_rows=False, record_type="sweep")
        return records[-1]
    except Exception as e:
        get_logger().log_error_with_context(e, {k: str(v) for k, v in fields.items()})
        return RunRecord.failure(e, "sweep", **fields)


def cmd_sweep(args, settings: LabSettings) -> int:
    logger = get_logger()
    manifest = load_manifest(args.manifest, settings.p1_grid)
    for entry in manifest.hamiltonians:
        _check_capacity(entry, settings)
    jobs = default_jobs(settings) if args.jobs is None else args.jobs

    spectra = [ground_state(entry.hamiltonian) for entry in manifest.hamiltonians]
    cells = [
        (entry, p1, optimizer, family, seed, spectrum)
        for entry, spectrum in zip(manifest.hamiltonians, spectra)
        for p1 in manifest.noise_levels
        for optimizer in manifest.optimizers
        for family in manifest.ansatz
        for seed in manifest.seeds
    ]

    def run(cell) -> RunRecord:
        entry, p1, optimizer, family, seed, spectrum = cell
        return _sweep_cell(entry, p1, optimizer, family, seed, manifest.rc, manifest.max_iterations,
                           settings, args.no_diagonal_exemption, spectrum)

    start = time.time()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run, cells))
    else:
        records = [run(cell) for cell in cells]

    failed = sum(1 for r in records if r.status != "ok")
    logger.log_performance("sweep", (time.time() - start) * 1000,
                           {"cells": len(cells), "failed": failed, "jobs": jobs})
    write_records(records, args.out)

    if args.plot_script:
        csv_name = Path(args.out).name if args.out else "sweep.csv"
        Path(args.plot_script).write_text(render_sweep_script(csv_name, manifest.noise_levels), encoding="utf-8")
        logger.info(f"Wrote plot script {args.plot_script}", "CLI")
    return EXIT_OK


def cmd_exact(args, settings: LabSettings) -> int:
    entry = _load_source(args, settings)
    spectrum = ground_state(entry.hamiltonian)

    lines = [f"# {entry.label}: {len(spectrum.eigenvalues)} eigenvalues (Ha), ascending"]
    lines += [f"{k} {float(e)!r}" for k, e in enumerate(spectrum.eigenvalues)]
    lines.append(f"# ground_energy {spectrum.ground_energy!r} degeneracy {spectrum.degeneracy}")
    if args.state:
        lines.append("# ground_state index real imag")
        lines += [f"{k} {complex(a).real!r} {complex(a).imag!r}" for k, a in enumerate(spectrum.ground_state)]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_compile(args, settings: LabSettings) -> int:
    circuit = build_ansatz(AnsatzSpec(AnsatzFamily(args.ansatz)))
    header = [f"# ansatz: {args.ansatz}"]
    if args.rc_seed is not None:
        circuit, report = randomization_report(circuit, args.rc_seed)
        header.append(f"# rc_seed: {args.rc_seed} single_qubit_inflation: {report.inflation!r}")
    n_1q, n_cnot = circuit.gate_counts()
    header.append(f"# single_qubit_gates: {n_1q} cnots: {n_cnot} depth: {circuit.depth()}")

    text = "\n".join(header) + "\n" + circuit.to_text()
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return EXIT_OK


def _setting_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        return text


def cmd_config(args, settings: LabSettings) -> int:
    """Inspect or edit the persisted settings under $NOISYLAB_HOME/config."""
    manager = get_settings_manager()
    if args.action in ("get", "set") and args.key not in {f.name for f in fields(LabSettings)}:
        get_logger().error(f"Unknown setting {args.key!r}", "CONFIG")
        return EXIT_USAGE

    if args.action == "show":
        sys.stdout.write(json.dumps(manager.get_settings_summary(), indent=2) + "\n")
        return EXIT_OK
    if args.action == "get":
        sys.stdout.write(json.dumps(manager.get_setting(args.key)) + "\n")
        return EXIT_OK

    if args.action == "set":
        ok = manager.set_setting(args.key, _setting_value(args.value))
        if not ok:
            return EXIT_USAGE
        sys.stdout.write(json.dumps(manager.get_setting(args.key)) + "\n")
    elif args.action == "reset":
        ok = manager.reset_to_defaults()
    elif args.action == "export":
        ok = manager.export_settings(args.path)
    else:
        ok = manager.import_settings(args.path)
    return EXIT_OK if ok else EXIT_FAILURE


COMMANDS = {
    "vqe": cmd_vqe,
    "adapt": cmd_adapt,
    "sweep": cmd_sweep,
    "exact": cmd_exact,
    "compile": cmd_compile,
    "config": cmd_config,
}


def _settings(args) -> LabSettings:
    if args.config:
        return SettingsManager().read_settings_file(Path(args.config))
    return get_settings_manager().settings


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    p1 = getattr(args, "p1", None)
    if p1 is not None and not 0.0 <= p1 <= MAX_P1:
        try:
            parser.error(f"--p1 must lie in [0, {MAX_P1}] so that the two-qubit level stays <= 1, got {p1}")
        except SystemExit:
            return EXIT_USAGE
    for name, lowest in ARGUMENT_MINIMUMS.items():
        value = getattr(args, name, None)
        if value is not None and value < lowest:
            try:
                parser.error(f"--{name.replace('_', '-')} out of range: {value}")
            except SystemExit:
                return EXIT_USAGE
    for name in POSITIVE_ARGUMENTS:
        value = getattr(args, name, None)
        if value is not None and not value > 0:
            try:
                parser.error(f"--{name.replace('_', '-')} must be positive, got {value}")
            except SystemExit:
                return EXIT_USAGE

    logger = get_logger()
    try:
        settings = _settings(args)
    except (OSError, ValueError, TypeError) as e:
        logger.error(f"Cannot read settings: {e}", "CLI")
        return EXIT_USAGE
    logger = configure_logger(args.log_level or settings.log_level, settings.log_to_file)
    if settings.log_to_file:
        logger.cleanup_old_logs(settings.keep_logs_days)

    try:
        return COMMANDS[args.command](args, settings)
    except VALIDATION_ERRORS as e:
        logger.error(str(e), "CLI", e)
        return EXIT_USAGE
    except Exception as e:
        logger.log_error_with_context(e, {"command": args.command, "argv": list(argv or sys.argv[1:])})
        return EXIT_FAILURE
