"""Site tensor of the spin-2 matrix-product ground-state family and exact
finite periodic chains built from it.

The tensor A[s] (s = -2..+2, basis ordered ascending) is 3x3 in the bond
space; sqrt(x) is taken as i*sqrt(|x|) when x < 0, which keeps the family
defined for all real x. A local phase on |+-1> combined with the bond gauge
diag(1,-1,1) maps the x<0 tensor onto the real tensor at |x| without moving
any observable; `realify_gauge` implements that map and the oracle module
verifies it.
"""
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ChainTooLong, NotNegativeX, SiteOutOfRange

L_MAX = 8


@dataclass(frozen=True)
class ModelParams:
    """Parameter triple (a, x, gamma) of the ground-state family."""
    a: float
    x: float
    gamma: float

    def __post_init__(self):
        for name in ("a", "x", "gamma"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError("%s must be finite, got %r" % (name, v))
            object.__setattr__(self, name, v)

    @classmethod
    def acritical(cls, a):
        """Gapped slice through the VBS point: x=-3, gamma=-2."""
        return cls(a=a, x=-3.0, gamma=-2.0)

    @classmethod
    def critical(cls, a):
        """Slice through the critical point at a=0: x=0, gamma=1."""
        return cls(a=a, x=0.0, gamma=1.0)


@dataclass(frozen=True, eq=False)
class GTensor:
    """Site tensor with its generating parameters; tensor[s] is A[s-2]."""
    params: ModelParams
    tensor: np.ndarray

    def __post_init__(self):
        self.tensor.setflags(write=False)

    def __hash__(self):
        return hash(self.params)


def build_g(params):
    """Site tensor of the family at the given parameter triple."""
    a, x, gamma = params.a, params.x, params.gamma
    sqx = 1j * np.sqrt(-x) if x < 0 else complex(np.sqrt(x))
    A = np.zeros((5, 3, 3), dtype=complex)
    A[2, 0, 0] = 1.0
    A[2, 1, 1] = gamma
    A[2, 2, 2] = 1.0
    A[3, 0, 1] = sqx
    A[3, 1, 2] = sqx
    A[1, 1, 0] = sqx
    A[1, 2, 1] = sqx
    A[4, 0, 2] = a
    A[0, 2, 0] = a
    if x >= 0:
        A = A.real.astype(complex)
    return GTensor(params=params, tensor=A)


def realify_gauge(G):
    """Gauge-equivalent real tensor for an x<0 input.

    The local phase |+-1> -> i|+-1> contributes i to each A[+-1] entry and
    the bond similarity diag(1,-1,1) contributes -1, so i*sqrt(|x|) maps to
    sqrt(|x|) while every other matrix is untouched.
    """
    if G.params.x >= 0:
        raise NotNegativeX("realify_gauge needs x < 0, got x=%g" % G.params.x)
    p = G.params
    return build_g(ModelParams(a=p.a, x=-p.x, gamma=p.gamma))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Finite periodic-chain state; amplitudes indexed base-5, site 1 most
    significant digit."""
    L: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes.setflags(write=False)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self):
        n = self.norm()
        return StateVector(L=self.L, amplitudes=self.amplitudes / n)


def build_finite_state(G, L, l_max=L_MAX):
    """Unnormalized amplitudes tr(A[s1]...A[sL]) of the length-L ring."""
    L = int(L)
    if L < 2:
        raise ChainTooLong("chain length must be at least 2, got %d" % L)
    if L > l_max:
        raise ChainTooLong(
            "L=%d exceeds the cap %d (5^%d amplitudes); raise l_max explicitly "
            "if you have the memory" % (L, l_max, L))
    amps = backend.finite_amplitudes(G.tensor, L)
    return StateVector(L=L, amplitudes=amps)


def one_site_rdm_finite(psi, site):
    """Reduce the normalized state to the 5x5 density matrix of one site."""
    site = int(site)
    if not 1 <= site <= psi.L:
        raise SiteOutOfRange("site %d outside 1..%d" % (site, psi.L))
    v = psi.amplitudes
    nrm = np.linalg.norm(v)
    if abs(nrm - 1.0) > 1e-10:
        v = v / nrm
    left = 5 ** (site - 1)
    right = 5 ** (psi.L - site)
    v = v.reshape(left, 5, right)
    rho = np.einsum('asb,atb->st', v, v.conj())
    return (rho + rho.conj().T) / 2
