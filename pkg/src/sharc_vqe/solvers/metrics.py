from __future__ import annotations

import numpy as np

CHEMICAL_ACCURACY_HA = 1.6e-3


def relative_error(e_vqe: float, e_ref: float) -> float:
    if e_ref == 0:
        raise ZeroDivisionError("reference energy is zero")
    return abs((e_vqe - e_ref) / e_ref)


def chemical_accuracy(e_ref: float) -> float:
    """1.6 mHa expressed relative to ``e_ref``."""
    if e_ref == 0:
        raise ZeroDivisionError("reference energy is zero")
    return abs(CHEMICAL_ACCURACY_HA / e_ref)


def _amps(state):
    return np.asarray(getattr(state, "amplitudes", state), dtype=complex)


def fidelity(a, b) -> float:
    """``|<a|b>|**2`` of two normalized states."""
    va, vb = _amps(a), _amps(b)
    if va.shape != vb.shape:
        raise ValueError("states differ in dimension")
    return float(min(1.0, abs(np.vdot(va, vb)) ** 2))


def iterations_to_reach(trace, target: float, tol: float, initial: float | None = None):
    """First iteration (1-based) whose value is within ``tol`` of ``target``.

    Returns 0 when ``initial`` already qualifies and ``None`` if never reached.
    """
    if initial is not None and abs(initial - target) <= tol:
        return 0
    for k, e in enumerate(trace, start=1):
        if abs(e - target) <= tol:
            return k
    return None
