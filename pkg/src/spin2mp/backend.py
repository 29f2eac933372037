"""Kernel backend selection: compiled extension if available, numpy fallback.

Both backends expose `eigh` and `finite_amplitudes` with identical contracts;
tests compare them directly. `use_backend` swaps the active one temporarily
(benchmarks and cross-checks), everything else goes through the module-level
wrappers below.
"""
from contextlib import contextmanager

import numpy as np

from . import _core_py

try:
    from . import _core
except ImportError:
    _core = None

_active = _core if _core is not None else _core_py


def available_backends():
    return ("compiled", "python") if _core is not None else ("python",)


def active_backend():
    return "compiled" if _active is _core else "python"


def set_backend(name):
    global _active
    if name == "compiled":
        if _core is None:
            raise ValueError("compiled backend not available")
        _active = _core
    elif name == "python":
        _active = _core_py
    else:
        raise ValueError("unknown backend %r" % (name,))


@contextmanager
def use_backend(name):
    previous = active_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def eigh(H):
    """Hermitian eigendecomposition, ascending eigenvalues, column vectors."""
    w, V = _active.eigh(np.asarray(H, dtype=complex))
    return np.asarray(w, dtype=float), np.asarray(V, dtype=complex)


def finite_amplitudes(A, L):
    """All 5^L periodic-chain amplitudes of the site tensor A."""
    return np.asarray(_active.finite_amplitudes(np.asarray(A, dtype=complex), int(L)))
