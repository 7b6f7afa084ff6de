from __future__ import annotations

import numpy as np

from ..pauli import DENSE_QUBIT_CAP, PauliSum, to_dense_matrix


def exact_spectrum(h: PauliSum, k: int | None = None, max_qubits: int = DENSE_QUBIT_CAP):
    """Lowest ``k`` eigenpairs of ``h`` by dense Hermitian diagonalization.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
    eigenvectors as columns.
    """
    m = to_dense_matrix(h, max_qubits=max_qubits)
    w, v = np.linalg.eigh(m)
    if k is not None:
        w, v = w[:k], v[:, :k]
    return w, v
