"""Pauli strings, weighted terms and canonical Pauli sums.

Labels are written in little-endian (Qiskit) order: the last character of a
label acts on qubit 0. ``PauliString("IIXZ")`` therefore has ``Z`` on qubit 0
and ``X`` on qubit 1.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

AXES = "IXYZ"
DENSE_QUBIT_CAP = 14
MERGE_TOLERANCE = 1e-12

_TERM_RE = re.compile(r"^\s*(\S+)\s+(\S+)\s*$")

# single-qubit products: (a, b) -> (phase, a*b)
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliError(ValueError):
    """Malformed Pauli label, term or incompatible operands."""


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as its textual label."""

    label: str

    def __post_init__(self):
        if not self.label:
            raise PauliError("empty Pauli label")
        bad = set(self.label) - set(AXES)
        if bad:
            raise PauliError(f"illegal character(s) {''.join(sorted(bad))!r} in {self.label!r}")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls("I" * n_qubits)

    @classmethod
    def from_axes(cls, axes: dict[int, str], n_qubits: int) -> "PauliString":
        """Build a string from a ``{qubit: axis}`` map; unspecified qubits get I."""
        chars = ["I"] * n_qubits
        for q, a in axes.items():
            if not 0 <= q < n_qubits:
                raise PauliError(f"qubit {q} out of range for {n_qubits} qubits")
            chars[n_qubits - 1 - q] = a
        return cls("".join(chars))

    @property
    def n_qubits(self) -> int:
        return len(self.label)

    def axis(self, qubit: int) -> str:
        return self.label[self.n_qubits - 1 - qubit]

    @cached_property
    def x_mask(self) -> int:
        return sum(1 << q for q in range(self.n_qubits) if self.axis(q) in "XY")

    @cached_property
    def z_mask(self) -> int:
        return sum(1 << q for q in range(self.n_qubits) if self.axis(q) in "ZY")

    @cached_property
    def n_y(self) -> int:
        return self.label.count("Y")

    @property
    def phase(self) -> complex:
        return 1j ** self.n_y

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if self.axis(q) != "I")

    @property
    def weight(self) -> int:
        return self.n_qubits - self.label.count("I")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        if isinstance(self.coefficient, complex):
            raise PauliError("PauliTerm coefficients are real; resolve phases before storing")
        if not math.isfinite(self.coefficient):
            raise PauliError(f"non-finite coefficient {self.coefficient!r}")

    def render(self) -> str:
        return f"{self.coefficient:+.17g} {self.string.label}"


def parse_term(text: str, n_qubits: int) -> PauliTerm:
    """Parse ``"<signed decimal> <axes>"`` into a term.

    >>> parse_term("-0.22575 IIZZ", 4)
    PauliTerm(coefficient=-0.22575, string=PauliString(label='IIZZ'))
    """
    m = _TERM_RE.match(text)
    if m is None:
        raise PauliError(f"expected '<coefficient> <axes>', got {text!r}")
    number, word = m.groups()
    try:
        coefficient = float(number)
    except ValueError:
        raise PauliError(f"malformed coefficient {number!r}") from None
    if not math.isfinite(coefficient):
        raise PauliError(f"non-finite coefficient {number!r}")
    string = PauliString(word)
    if string.n_qubits != n_qubits:
        raise PauliError(f"axes word {word!r} has length {len(word)}, expected {n_qubits}")
    return PauliTerm(coefficient, string)


def is_easy(string: PauliString) -> bool:
    """True when the string holds only I and Z, i.e. it is diagonal."""
    return string.x_mask == 0


def _check_lengths(a: PauliString, b: PauliString):
    if a.n_qubits != b.n_qubits:
        raise PauliError(f"length mismatch: {a.label!r} vs {b.label!r}")


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product ``a @ b`` as ``(phase, string)`` with phase in {1, -1, 1j, -1j}."""
    _check_lengths(a, b)
    phase = 1 + 0j
    chars = []
    for ca, cb in zip(a.label, b.label):
        p, c = _PRODUCT[ca, cb]
        phase *= p
        chars.append(c)
    return complex(phase), PauliString("".join(chars))


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_lengths(a, b)
    clashes = sum(1 for ca, cb in zip(a.label, b.label) if ca != cb and ca != "I" and cb != "I")
    return clashes % 2 == 0


def qubitwise_commutes(a: PauliString, b: PauliString) -> bool:
    _check_lengths(a, b)
    return all(ca == cb or ca == "I" or cb == "I" for ca, cb in zip(a.label, b.label))


def string_matrix(string: PauliString) -> np.ndarray:
    # leftmost label character is the most significant qubit, matching kron order
    out = np.ones((1, 1), dtype=complex)
    for c in string.label:
        out = np.kron(out, _SINGLE[c])
    return out


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of distinct Pauli strings plus a constant ``offset``.

    ``offset`` is an energy shift carried outside the Pauli terms (the
    nuclear-repulsion energy of a molecular fixture, for instance). It enters
    every energy and matrix but no term-level statistic.
    """

    n_qubits: int
    terms: tuple[PauliTerm, ...] = ()
    offset: float = 0.0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise PauliError("n_qubits must be positive")
        merged: dict[PauliString, float] = {}
        for t in self.terms:
            if t.string.n_qubits != self.n_qubits:
                raise PauliError(
                    f"term {t.string.label!r} does not act on {self.n_qubits} qubits"
                )
            merged[t.string] = merged.get(t.string, 0.0) + float(t.coefficient)
        kept = tuple(
            PauliTerm(c, s) for s, c in merged.items() if abs(c) >= MERGE_TOLERANCE
        )
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_index", {t.string: i for i, t in enumerate(kept)})

    @classmethod
    def from_list(cls, items: Iterable[tuple[float, str]], n_qubits: int | None = None,
                  offset: float = 0.0) -> "PauliSum":
        items = list(items)
        if n_qubits is None:
            if not items:
                raise PauliError("n_qubits required for an empty sum")
            n_qubits = len(items[0][1])
        return cls(n_qubits, tuple(PauliTerm(float(c), PauliString(s)) for c, s in items), offset)

    @classmethod
    def parse(cls, lines: Iterable[str], n_qubits: int) -> "PauliSum":
        return cls(n_qubits, tuple(parse_term(line, n_qubits) for line in lines))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __contains__(self, string) -> bool:
        if isinstance(string, str):
            string = PauliString(string)
        return string in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and self.offset == other.offset
            and dict(self.items()) == dict(other.items())
        )

    def __hash__(self):
        return hash((self.n_qubits, self.offset, frozenset(self.items())))

    def items(self):
        return ((t.string, t.coefficient) for t in self.terms)

    def coefficient(self, string) -> float:
        if isinstance(string, str):
            string = PauliString(string)
        i = self._index.get(string)
        return 0.0 if i is None else self.terms[i].coefficient

    @property
    def strings(self) -> list[PauliString]:
        return [t.string for t in self.terms]

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms], dtype=float)

    def _check(self, other: "PauliSum"):
        if other.n_qubits != self.n_qubits:
            raise PauliError(f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._check(other)
        return PauliSum(self.n_qubits, self.terms + other.terms, self.offset + other.offset)

    def __neg__(self) -> "PauliSum":
        return self.scale(-1.0)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def scale(self, factor: float) -> "PauliSum":
        return PauliSum(
            self.n_qubits,
            tuple(PauliTerm(factor * t.coefficient, t.string) for t in self.terms),
            factor * self.offset,
        )

    def subset(self, strings: Iterable) -> "PauliSum":
        """Terms of ``self`` whose strings appear in ``strings`` (offset dropped)."""
        wanted = {PauliString(s) if isinstance(s, str) else s for s in strings}
        return PauliSum(self.n_qubits, tuple(t for t in self.terms if t.string in wanted))

    def with_offset(self, offset: float) -> "PauliSum":
        return PauliSum(self.n_qubits, self.terms, offset)

    def is_diagonal(self) -> bool:
        return all(is_easy(t.string) for t in self.terms)

    def masks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(x_masks, z_masks, phases, coefficients)`` arrays for the kernels."""
        xs = np.array([t.string.x_mask for t in self.terms], dtype=np.int64)
        zs = np.array([t.string.z_mask for t in self.terms], dtype=np.int64)
        ph = np.array([t.string.phase for t in self.terms], dtype=np.complex128)
        return xs, zs, ph, self.coefficients

    def render(self) -> list[str]:
        return [t.render() for t in self.terms]

    def __str__(self) -> str:
        body = "\n".join(self.render()) or "0"
        if self.offset:
            body += f"\n(offset {self.offset:+.12g})"
        return body


def to_dense_matrix(h: PauliSum, max_qubits: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``h`` (including its offset)."""
    if h.n_qubits > max_qubits:
        raise PauliError(f"{h.n_qubits} qubits exceeds the dense cap of {max_qubits}")
    dim = 1 << h.n_qubits
    out = h.offset * np.eye(dim, dtype=complex)
    idx = np.arange(dim)
    for t in h.terms:
        s = t.string
        # P|b> = phase * (-1)^popcount(b & z) |b ^ x>  =>  P[b ^ x, b]
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & s.z_mask) & 1)
        out[idx ^ s.x_mask, idx] += t.coefficient * s.phase * signs
    return out
