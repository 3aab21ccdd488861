#!/usr/bin/env python3
"""
NoisyLab - Hamiltonian and Sweep Manifest I/O

Hamiltonian text format (see docs/FORMATS.md):

    # comment
    molecule: NaH
    bond_length_angstrom: 1.91438
    basis: STO-3G
    n_qubits: 4

    -159.40289 IIII
    0.0202421 XXXX

Header lines are ``key: value``; term lines are ``coefficient word`` with
word letters from {I, X, Y, Z}, qubit 0 first. Sweep manifests are YAML.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import yaml

try:
    from .operators.pauli import PauliSum, PAULI_LETTERS
    from .circuits.ansatz_compiler import AnsatzFamily
    from .optimizers import OptimizerKind
    from .utils.errors import HamiltonianParseError, ManifestError
    from .utils.logger import get_logger
except ImportError:
    from operators.pauli import PauliSum, PAULI_LETTERS
    from circuits.ansatz_compiler import AnsatzFamily
    from optimizers import OptimizerKind
    from utils.errors import HamiltonianParseError, ManifestError
    from utils.logger import get_logger


DATA_DIR = Path(__file__).parent / "data"
BUNDLED_NAH = DATA_DIR / "nah_sto3g_r1.91438.ham"
HEADER_KEYS = ("molecule", "bond_length_angstrom", "basis", "n_qubits")
MAX_P1 = 0.1


@dataclass
class HamiltonianFile:
    """Parsed Hamiltonian file: metadata plus terms in file order."""

    molecule: str = ""
    bond_length_angstrom: Optional[float] = None
    basis: str = ""
    n_qubits: int = 0
    terms: List[Tuple[float, str]] = field(default_factory=list)

    def to_pauli_sum(self) -> PauliSum:
        return PauliSum.from_terms(self.n_qubits, self.terms)

    @classmethod
    def from_pauli_sum(cls, h: PauliSum, molecule: str = "", bond_length_angstrom: Optional[float] = None,
                       basis: str = "") -> "HamiltonianFile":
        if not h.has_real_coefficients:
            raise ValueError("Only real-coefficient Hamiltonians can be serialized")
        return cls(molecule, bond_length_angstrom, basis, h.n_qubits, [(c.real, k) for c, k in h])


def _parse_header(key: str, value: str, line_number: int, result: HamiltonianFile):
    if key not in HEADER_KEYS:
        raise HamiltonianParseError(f"unknown header key {key!r}", line_number)
    try:
        if key == "bond_length_angstrom":
            result.bond_length_angstrom = float(value)
        elif key == "n_qubits":
            result.n_qubits = int(value)
            if result.n_qubits < 1:
                raise ValueError(value)
        else:
            setattr(result, key, value)
    except ValueError:
        raise HamiltonianParseError(f"invalid value {value!r} for {key}", line_number) from None


def parse(text: str) -> HamiltonianFile:
    """
    Parse Hamiltonian text.

    Args:
        text: file contents

    Returns:
        HamiltonianFile with terms in file order

    Raises:
        HamiltonianParseError: malformed line, bad letter, length mismatch or duplicate word
    """
    result = HamiltonianFile()
    seen: Dict[str, int] = {}

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        if ':' in line:
            if result.terms:
                raise HamiltonianParseError("header line after the first term", line_number)
            key, value = (part.strip() for part in line.split(':', 1))
            _parse_header(key, value, line_number, result)
            continue

        parts = line.split()
        if len(parts) != 2:
            raise HamiltonianParseError(f"expected 'coefficient word', got {line!r}", line_number)
        coefficient_text, word = parts
        try:
            coefficient = float(coefficient_text)
        except ValueError:
            raise HamiltonianParseError(f"invalid coefficient {coefficient_text!r}", line_number) from None

        for letter in word:
            if letter not in PAULI_LETTERS:
                raise HamiltonianParseError(f"invalid Pauli letter {letter!r} in word {word!r}", line_number)
        if not result.n_qubits:
            result.n_qubits = len(word)
        if len(word) != result.n_qubits:
            raise HamiltonianParseError(
                f"word {word!r} has {len(word)} letters, expected {result.n_qubits}", line_number
            )
        if word in seen:
            raise HamiltonianParseError(f"duplicate word {word!r} (first on line {seen[word]})", line_number)
        seen[word] = line_number
        result.terms.append((coefficient, word))

    if not result.terms:
        raise HamiltonianParseError("no terms found")
    return result


def serialize(h: Union[HamiltonianFile, PauliSum]) -> str:
    """Render a Hamiltonian in the text format, coefficients at full repr precision."""
    if isinstance(h, PauliSum):
        h = HamiltonianFile.from_pauli_sum(h)

    lines = []
    if h.molecule:
        lines.append(f"molecule: {h.molecule}")
    if h.bond_length_angstrom is not None:
        lines.append(f"bond_length_angstrom: {h.bond_length_angstrom!r}")
    if h.basis:
        lines.append(f"basis: {h.basis}")
    lines.append(f"n_qubits: {h.n_qubits}")
    lines.append("")
    lines.extend(f"{float(c)!r} {word}" for c, word in h.terms)
    return "\n".join(lines) + "\n"


def load_hamiltonian(path: Union[str, Path]) -> HamiltonianFile:
    path = Path(path)
    get_logger().debug(f"Reading Hamiltonian {path}", "IO")
    return parse(path.read_text(encoding="utf-8"))


def save_hamiltonian(h: Union[HamiltonianFile, PauliSum], path: Union[str, Path]):
    Path(path).write_text(serialize(h), encoding="utf-8")


def bundled_nah_file() -> HamiltonianFile:
    """The bundled NaH Hamiltonian at r = 1.91438 Angstrom, with its header."""
    return load_hamiltonian(BUNDLED_NAH)


def bundled_nah() -> PauliSum:
    """The bundled 27-term NaH Hamiltonian."""
    return bundled_nah_file().to_pauli_sum()


@dataclass
class HamiltonianEntry:
    """One Hamiltonian on the sweep's bond-length axis."""

    label: str
    bond_length: Optional[float]
    source: HamiltonianFile

    @property
    def hamiltonian(self) -> PauliSum:
        return self.source.to_pauli_sum()


@dataclass
class SweepManifest:
    """Axes of a study sweep; cells are the Cartesian product in the listed order."""

    hamiltonians: List[HamiltonianEntry]
    noise_levels: List[float]
    optimizers: List[OptimizerKind]
    ansatz: List[AnsatzFamily]
    seeds: List[int] = field(default_factory=lambda: [0])
    rc: int = 0
    max_iterations: Optional[int] = None

    @property
    def n_cells(self) -> int:
        return (len(self.hamiltonians) * len(self.noise_levels) * len(self.optimizers)
                * len(self.ansatz) * len(self.seeds))


def _axis(data: Dict[str, Any], key: str, required: bool = True) -> List[Any]:
    value = data.get(key)
    if value is None:
        if required:
            raise ManifestError(f"manifest is missing the {key!r} axis")
        return []
    if not isinstance(value, list):
        value = [value]
    if required and not value:
        raise ManifestError(f"manifest axis {key!r} is empty")
    return value


def _hamiltonian_entry(item: Any, base_dir: Path, index: int) -> HamiltonianEntry:
    if isinstance(item, str):
        item = {"path": item}
    if not isinstance(item, dict):
        raise ManifestError(f"hamiltonians[{index}] must be a mapping or a path")

    try:
        if item.get("bundled"):
            source = bundled_nah_file()
            label = "bundled"
        elif "path" in item:
            path = Path(item["path"])
            if not path.is_absolute():
                path = base_dir / path
            source = load_hamiltonian(path)
            label = str(item["path"])
        else:
            raise ManifestError(f"hamiltonians[{index}] needs 'path' or 'bundled: true'")
    except (OSError, HamiltonianParseError) as e:
        raise ManifestError(f"hamiltonians[{index}]: {e}") from e

    bond_length = item.get("bond_length", source.bond_length_angstrom)
    return HamiltonianEntry(label, None if bond_length is None else float(bond_length), source)


def _float(value: Any, what: str) -> float:
    # PyYAML reads exponent-only literals such as 1e-4 as strings
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ManifestError(f"{what} must be a number, got {value!r}") from None


def manifest_from_dict(data: Dict[str, Any], base_dir: Path = Path("."),
                       default_noise_levels: Optional[Sequence[float]] = None) -> SweepManifest:
    """
    Validate a manifest mapping.

    Without a `noise_levels` axis the manifest falls back to `default_noise_levels`
    (the settings grid when called from the CLI); with neither it is rejected.

    Raises:
        ManifestError: empty or malformed axes, bad noise levels, unreadable Hamiltonians
    """
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a mapping")

    entries = [_hamiltonian_entry(item, base_dir, i) for i, item in enumerate(_axis(data, "hamiltonians"))]

    raw_levels = _axis(data, "noise_levels", required=default_noise_levels is None)
    if not raw_levels and data.get("noise_levels") is not None:
        raise ManifestError("manifest axis 'noise_levels' is empty")
    noise_levels = [_float(p, "noise level") for p in (raw_levels or default_noise_levels)]
    for p in noise_levels:
        if not 0.0 <= p <= MAX_P1:
            raise ManifestError(f"noise level {p} outside [0, {MAX_P1}]")

    try:
        optimizers = [OptimizerKind(str(o).lower()) for o in _axis(data, "optimizers")]
        ansatz = [AnsatzFamily(str(a).lower()) for a in _axis(data, "ansatz")]
    except ValueError as e:
        raise ManifestError(str(e)) from None

    seeds_raw = _axis(data, "seeds", required=False) or [0]
    try:
        seeds = [int(s) for s in seeds_raw]
        rc = int(data.get("rc") or 0)
        max_iterations = data.get("max_iterations")
        max_iterations = None if max_iterations is None else int(max_iterations)
    except (TypeError, ValueError) as e:
        raise ManifestError(f"invalid integer in manifest: {e}") from None
    if rc < 0 or (max_iterations is not None and max_iterations < 1):
        raise ManifestError("rc must be >= 0 and max_iterations >= 1")

    return SweepManifest(entries, noise_levels, optimizers, ansatz, seeds, rc, max_iterations)


def load_manifest(path: Union[str, Path], default_noise_levels: Optional[Sequence[float]] = None) -> SweepManifest:
    """Read and validate a YAML sweep manifest; relative Hamiltonian paths resolve against its directory."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ManifestError(f"cannot read manifest {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ManifestError(f"manifest {path} is not valid YAML: {e}") from e

    manifest = manifest_from_dict(data, path.parent, default_noise_levels)
    get_logger().info(f"Loaded manifest {path.name}: {manifest.n_cells} cells", "IO")
    return manifest
