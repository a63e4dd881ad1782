"""Clock/shift operators and the d+1 mutually unbiased bases for odd prime d.

Conventions, with omega = exp(2*pi*i/d) and |n + d> identified with |n>:

    Z|n> = omega^n |n>          (clock)
    X|n> = |n + 1>              (shift)
    ZX   = omega XZ

Basis b (b = 0..d-1) diagonalises X Z^b; its column c is

    |b;c> = d^{-1/2} sum_n omega^{b n(n-1)/2 - c n} |n>

with eigenvalue omega^c. All phase exponents are reduced exactly mod d as
integers before a single complex exponential, so no rounding accumulates.
The amplitude at n = 0 is the positive real d^{-1/2}; this pins the free
global phase of each ket and makes serialization reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvariantViolation
from .finite_field import PrimeModulus

_UNITARY_TOL = 1e-12


def clock_operator(modulus: PrimeModulus) -> np.ndarray:
    """Diagonal matrix diag(1, omega, ..., omega^(d-1))."""
    d = modulus.d
    n = np.arange(d)
    return np.diag(np.exp(2j * np.pi * n / d))


def shift_operator(modulus: PrimeModulus) -> np.ndarray:
    """Cyclic permutation sending basis column n to row n+1 mod d."""
    d = modulus.d
    X = np.zeros((d, d), dtype=complex)
    X[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    return X


def weyl_operator(modulus: PrimeModulus, m: int, l: int) -> np.ndarray:
    """X^m Z^l assembled entrywise: column n holds omega^(l n) at row n+m.

    Exact for any exponents; m and l are reduced mod d.
    """
    d = modulus.d
    n = np.arange(d)
    M = np.zeros((d, d), dtype=complex)
    M[(n + m) % d, n] = np.exp(2j * np.pi * ((l * n) % d) / d)
    return M


def mub_vector(modulus: PrimeModulus, b: int, c: int) -> np.ndarray:
    """Ket |b;c> in the computational basis, unit norm."""
    d = modulus.d
    if not (0 <= b < d and 0 <= c < d):
        raise IndexOutOfRange(f"(b, c) = ({b}, {c}) outside [0, {d})^2")
    n = np.arange(d)
    expo = (b * (n * (n - 1) // 2) - c * n) % d
    return np.exp(2j * np.pi * expo / d) / np.sqrt(d)


def basis_matrix(modulus: PrimeModulus, b: int) -> np.ndarray:
    """Unitary whose column c is |b;c>."""
    d = modulus.d
    U = np.empty((d, d), dtype=complex)
    for c in range(d):
        U[:, c] = mub_vector(modulus, b, c)
    return U


@dataclass(frozen=True, eq=False)
class MubBasisSet:
    """The full measurement family: computational basis plus the d bases b.

    ``bases[0]`` is the identity (computational basis); ``bases[1 + b]``
    diagonalises X Z^b. Cross-basis overlaps all have modulus 1/sqrt(d);
    ``mub_deviation`` measures how far a given set strays from that.
    """

    dim: int
    bases: tuple

    def __post_init__(self):
        if len(self.bases) != self.dim + 1:
            raise InvariantViolation(
                f"expected {self.dim + 1} bases for d = {self.dim}, got {len(self.bases)}"
            )
        eye = np.eye(self.dim)
        frozen = []
        for k, U in enumerate(self.bases):
            U = np.asarray(U, dtype=complex)
            if U.shape != (self.dim, self.dim):
                raise InvariantViolation(f"basis {k} has shape {U.shape}")
            if np.max(np.abs(U.conj().T @ U - eye)) > _UNITARY_TOL:
                raise InvariantViolation(f"basis {k} is not unitary within {_UNITARY_TOL}")
            U = U.copy()
            U.setflags(write=False)
            frozen.append(U)
        object.__setattr__(self, "bases", tuple(frozen))


def build_mub_set(modulus: PrimeModulus) -> MubBasisSet:
    """Construct all d+1 bases for the validated odd prime d."""
    d = modulus.d
    bases = [np.eye(d, dtype=complex)]
    bases.extend(basis_matrix(modulus, b) for b in range(d))
    return MubBasisSet(dim=d, bases=tuple(bases))


def mub_deviation(mub_set: MubBasisSet) -> float:
    """Worst-case | |<u|v>| - 1/sqrt(d) | over all cross-basis ket pairs."""
    target = 1.0 / np.sqrt(mub_set.dim)
    worst = 0.0
    for a in range(len(mub_set.bases)):
        for b in range(a + 1, len(mub_set.bases)):
            overlaps = np.abs(mub_set.bases[a].conj().T @ mub_set.bases[b])
            worst = max(worst, float(np.max(np.abs(overlaps - target))))
    return worst
