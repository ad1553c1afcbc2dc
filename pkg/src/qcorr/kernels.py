"""Objective-kernel backend selection.

The compiled extension is preferred when importable; the pure-python
module is the fallback. Both expose the same functions with identical
semantics, so the choice affects speed only. Call ``set_backend`` to
force one explicitly (used by the benchmark and by tests).
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

_active = _kernels_c if _kernels_c is not None else _kernels_py


def available_backends() -> tuple:
    return ("python",) if _kernels_c is None else ("compiled", "python")


def active_backend() -> str:
    return _active.BACKEND


def set_backend(name: str) -> None:
    """Select 'compiled' or 'python'; raises if the backend is missing."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _kernels_c is None:
            raise RuntimeError("compiled kernels are not available in this installation")
        _active = _kernels_c
    else:
        raise ValueError(f"unknown backend '{name}'")


def povm_objective(x, rho_t, d_m, d_o, n_out):
    if _active is not _kernels_py and d_o == 2 and d_m <= 4:
        return _active.povm_objective(x, rho_t, d_m, d_o, n_out)
    return _kernels_py.povm_objective(x, rho_t, d_m, d_o, n_out)


def projective_objective(x, rho_t, d_m, d_o):
    if _active is not _kernels_py and d_o == 2 and d_m <= 4:
        return _active.projective_objective(x, rho_t, d_m, d_o)
    return _kernels_py.projective_objective(x, rho_t, d_m, d_o)


def ensemble_objective(x, phi, d_a, d_b, m, r):
    if _active is not _kernels_py and d_b == 2 and m <= 16 and r <= 4:
        return _active.ensemble_objective(x, phi, d_a, d_b, m, r)
    return _kernels_py.ensemble_objective(x, phi, d_a, d_b, m, r)


def unitary_from_params(x, d):
    return _kernels_py.unitary_from_params(x, d)


def isometry_from_params(x, n, d):
    """Decode the Gram-Schmidt isometry used by povm/ensemble objectives."""
    import numpy as np

    half = n * d
    z = (x[:half] + 1j * x[half:]).reshape(n, d).astype(complex)
    q = _kernels_py._gram_schmidt(z)
    if q is None:
        raise ValueError("degenerate parameter block")
    return q
