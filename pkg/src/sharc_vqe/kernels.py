"""Statevector kernels.

Bit ``q`` of a basis index is qubit ``q``. A Pauli string is carried as an
``x`` mask (X or Y positions), a ``z`` mask (Z or Y positions) and the scalar
``i**n_y``, so that ``P|b> = i**n_y * (-1)**popcount(b & z) * |b ^ x>``.

Each kernel has a numba and a numpy implementation with identical semantics;
``_backend.BACKEND`` picks the exported one.
"""
import numpy as np

from ._backend import USE_NUMBA, njit


# --------------------------------------------------------------------------
# numba kernels
# --------------------------------------------------------------------------

@njit
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit
def _pauli_expectations_nb(psi, xs, zs, phases):
    out = np.empty(xs.shape[0])
    dim = psi.shape[0]
    for k in range(xs.shape[0]):
        x = xs[k]
        z = zs[k]
        acc = 0.0 + 0.0j
        for b in range(dim):
            a = psi[b]
            if _parity(b & z):
                a = -a
            acc += np.conj(psi[b ^ x]) * a
        out[k] = (phases[k] * acc).real
    return out


@njit
def _apply_pauli_rotation_nb(psi, x, z, phase, angle):
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    dim = psi.shape[0]
    if x == 0:
        em = c - 1j * s
        ep = c + 1j * s
        for b in range(dim):
            if _parity(b & z):
                psi[b] *= ep
            else:
                psi[b] *= em
        return
    ms = -1j * s * phase
    for b in range(dim):
        b2 = b ^ x
        if b2 < b:
            continue
        a0 = psi[b]
        a1 = psi[b2]
        # (P psi)[b2] = phase * sign(b) * a0 ; (P psi)[b] = phase * sign(b2) * a1
        s0 = -1.0 if _parity(b & z) else 1.0
        s1 = -1.0 if _parity(b2 & z) else 1.0
        psi[b] = c * a0 + ms * s1 * a1
        psi[b2] = c * a1 + ms * s0 * a0


@njit
def _apply_pauli_nb(psi, x, z, phase):
    dim = psi.shape[0]
    out = np.empty_like(psi)
    for b in range(dim):
        a = psi[b] * phase
        if _parity(b & z):
            a = -a
        out[b ^ x] = a
    psi[:] = out


@njit
def _diagonal_values_nb(zs, coeffs, dim):
    out = np.zeros(dim)
    for k in range(zs.shape[0]):
        z = zs[k]
        c = coeffs[k]
        for b in range(dim):
            if _parity(b & z):
                out[b] -= c
            else:
                out[b] += c
    return out


@njit
def _parity_expectations_nb(weights, masks):
    out = np.empty(masks.shape[0])
    total = weights.sum()
    for k in range(masks.shape[0]):
        m = masks[k]
        acc = 0.0
        for b in range(weights.shape[0]):
            if _parity(b & m):
                acc -= weights[b]
            else:
                acc += weights[b]
        out[k] = acc / total
    return out


# --------------------------------------------------------------------------
# numpy kernels
# --------------------------------------------------------------------------

_INDEX_CACHE = {}


def _indices(dim):
    idx = _INDEX_CACHE.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.int64)
        _INDEX_CACHE[dim] = idx
    return idx


def _signs(dim, z):
    idx = _indices(dim)
    return 1.0 - 2.0 * (np.bitwise_count(idx & z) & 1)


def _pauli_expectations_np(psi, xs, zs, phases):
    dim = psi.shape[0]
    idx = _indices(dim)
    out = np.empty(len(xs))
    for k in range(len(xs)):
        acc = np.vdot(psi[idx ^ xs[k]], _signs(dim, zs[k]) * psi)
        out[k] = (phases[k] * acc).real
    return out


def _apply_pauli_rotation_np(psi, x, z, phase, angle):
    dim = psi.shape[0]
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    sign = _signs(dim, z)
    if x == 0:
        psi *= c - 1j * s * sign
        return
    p_psi = np.empty_like(psi)
    p_psi[_indices(dim) ^ x] = phase * sign * psi
    psi *= c
    psi += -1j * s * p_psi


def _apply_pauli_np(psi, x, z, phase):
    dim = psi.shape[0]
    out = np.empty_like(psi)
    out[_indices(dim) ^ x] = phase * _signs(dim, z) * psi
    psi[:] = out


def _diagonal_values_np(zs, coeffs, dim):
    out = np.zeros(dim)
    for z, c in zip(zs, coeffs):
        out += c * _signs(dim, z)
    return out


def _parity_expectations_np(weights, masks):
    dim = weights.shape[0]
    total = weights.sum()
    return np.array([np.dot(weights, _signs(dim, m)) / total for m in masks])


NUMBA_KERNELS = {
    "pauli_expectations": _pauli_expectations_nb,
    "apply_pauli_rotation": _apply_pauli_rotation_nb,
    "apply_pauli": _apply_pauli_nb,
    "diagonal_values": _diagonal_values_nb,
    "parity_expectations": _parity_expectations_nb,
}
NUMPY_KERNELS = {
    "pauli_expectations": _pauli_expectations_np,
    "apply_pauli_rotation": _apply_pauli_rotation_np,
    "apply_pauli": _apply_pauli_np,
    "diagonal_values": _diagonal_values_np,
    "parity_expectations": _parity_expectations_np,
}

_active = NUMBA_KERNELS if USE_NUMBA else NUMPY_KERNELS

pauli_expectations = _active["pauli_expectations"]
apply_pauli_rotation = _active["apply_pauli_rotation"]
apply_pauli = _active["apply_pauli"]
diagonal_values = _active["diagonal_values"]
parity_expectations = _active["parity_expectations"]
