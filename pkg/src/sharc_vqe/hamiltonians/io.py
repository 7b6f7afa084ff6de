"""Plain-text Hamiltonian files.

Each line is blank, a ``#`` comment, a ``qubits <n>`` header, an optional
``offset <float>`` header (constant energy shift), or a ``<float> <axes>``
term. The ``qubits`` header must precede the first term.
"""
from __future__ import annotations

from pathlib import Path

from ..pauli import PauliError, PauliSum, parse_term


class HamiltonianFileError(ValueError):
    def __init__(self, path, line_no: int | None, message: str):
        where = f"{path}:{line_no}" if line_no else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line_no = line_no


def parse_hamiltonian(text: str, source="<string>") -> PauliSum:
    n_qubits = None
    offset = 0.0
    terms = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "qubits":
            if n_qubits is not None:
                raise HamiltonianFileError(source, line_no, "duplicate 'qubits' header")
            try:
                n_qubits = int(rest.strip())
            except ValueError:
                raise HamiltonianFileError(source, line_no, f"bad qubit count {rest.strip()!r}") from None
            if n_qubits < 1:
                raise HamiltonianFileError(source, line_no, "qubit count must be positive")
            continue
        if head == "offset":
            try:
                offset += float(rest.strip())
            except ValueError:
                raise HamiltonianFileError(source, line_no, f"bad offset {rest.strip()!r}") from None
            continue
        if n_qubits is None:
            raise HamiltonianFileError(source, line_no, "term before 'qubits <n>' header")
        try:
            terms.append(parse_term(line, n_qubits))
        except PauliError as exc:
            raise HamiltonianFileError(source, line_no, str(exc)) from None
    if n_qubits is None:
        raise HamiltonianFileError(source, None, "missing 'qubits <n>' header")
    return PauliSum(n_qubits, tuple(terms), offset)


def load_hamiltonian(path) -> PauliSum:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise HamiltonianFileError(path, None, f"cannot read: {exc.strerror}") from exc
    return parse_hamiltonian(text, path)


def format_hamiltonian(h: PauliSum, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"qubits {h.n_qubits}")
    if h.offset:
        lines.append(f"offset {h.offset!r}")
    lines.extend(f"{t.coefficient!r} {t.string.label}" for t in h.terms)
    return "\n".join(lines) + "\n"


def save_hamiltonian(h: PauliSum, path, comments=()) -> None:
    Path(path).write_text(format_hamiltonian(h, comments), encoding="utf-8")
