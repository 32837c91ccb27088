"""Brute-force reference on the full Fock space of the truncated model.

Everything here is exact up to dense linear-algebra roundoff: the ``2L``
retained modes are mapped to a register of ``2L`` occupation slots by a
Jordan-Wigner construction (same array ordering ``i = n + L`` as the rest
of the package), the quadratic generator is assembled as a ``4^L`` square
matrix, and the drive is the literal matrix exponential via Hermitian
eigendecomposition.  Intended purpose is validating the Gaussian pipeline
at small cutoff, hence the hard size guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, NumericalFailure, SizeGuardError
from .model import ModelConfig, build_quadratic_form

__all__ = [
    "FockOperators",
    "build_fock_operators",
    "oracle_state",
    "oracle_char",
    "oracle_moment",
    "oracle_distribution",
    "oracle_pair_amplitudes",
]

DEFAULT_GUARD = 5
HARD_GUARD = 6


@dataclass(frozen=True)
class FockOperators:
    """Dense model operators over the ``4^L``-dimensional Fock space.

    ``ops[i]`` annihilates mode ``n = i - L``; ``energy`` and ``number``
    are the diagonals of the final-time energy (units ``pi*v/l_final``)
    and particle-number operators in the occupation basis; ``evals`` and
    ``evecs`` diagonalize ``h_tilde``.
    """

    cutoff: int
    dim: int
    h_tilde: np.ndarray = field(repr=False)
    energy: np.ndarray = field(repr=False)
    number: np.ndarray = field(repr=False)
    ops: tuple = field(repr=False)
    evals: np.ndarray = field(repr=False)
    evecs: np.ndarray = field(repr=False)


def jordan_wigner_annihilators(n_modes: int) -> tuple:
    """Sparse annihilation operators with sign strings, slot 0 leftmost."""
    lower = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    zstr = sp.csr_matrix(np.diag([1.0, -1.0]))
    eye = sp.identity(2, format="csr")
    ops = []
    for j in range(n_modes):
        mats = [zstr] * j + [lower] + [eye] * (n_modes - j - 1)
        full = mats[0]
        for m in mats[1:]:
            full = sp.kron(full, m, format="csr")
        ops.append(full)
    return tuple(ops)


def build_fock_operators(config: ModelConfig, *, allow_large: bool = False) -> FockOperators:
    """Assemble the exact operators for a drive configuration.

    Guarded at ``L <= 5`` (``L <= 6`` with ``allow_large``); the Fock
    dimension is ``4^L``.
    """
    L = config.cutoff
    guard = HARD_GUARD if allow_large else DEFAULT_GUARD
    if L > guard:
        raise SizeGuardError(
            f"Fock oracle guarded at L <= {guard}; L={L} would need a "
            f"{4**L}-dimensional space"
        )
    form = build_quadratic_form(config)
    n_modes = form.dim
    dim = 2**n_modes
    ops = jordan_wigner_annihilators(n_modes)

    h = sp.csr_matrix((dim, dim), dtype=complex)
    a, b = form.a_block, form.b_block
    for m in range(n_modes):
        for n in range(n_modes):
            if a[m, n] != 0:
                h = h + a[m, n] * (ops[m].conj().T @ ops[n])
            if b[m, n] != 0:
                pair = 0.5 * b[m, n] * (ops[m].conj().T @ ops[n].conj().T)
                h = h + pair + pair.conj().T
    h_tilde = np.asarray(h.todense())
    herm = float(np.max(np.abs(h_tilde - h_tilde.conj().T)))
    if herm > 1e-12 * dim:
        raise NumericalFailure(f"Fock generator not Hermitian: residual {herm:.3e}")

    # occupation bits: slot j is bit (n_modes - 1 - j) of the basis index
    occ = (np.arange(dim)[:, None] >> np.arange(n_modes - 1, -1, -1)[None, :]) & 1
    freq_abs = np.abs(form.modes + 0.5)
    energy = occ @ freq_abs
    number = occ.sum(axis=1)

    evals, evecs = np.linalg.eigh(h_tilde)
    return FockOperators(
        cutoff=L,
        dim=dim,
        h_tilde=h_tilde,
        energy=energy,
        number=number.astype(int),
        ops=ops,
        evals=evals,
        evecs=evecs,
    )


def oracle_state(ops: FockOperators, delta_l: float) -> np.ndarray:
    """Driven vacuum ``exp(-i H delta_l)|0>`` as a dense state vector."""
    phases = np.exp(-1j * ops.evals * float(delta_l))
    return ops.evecs @ (phases * ops.evecs[0, :].conj())


def _diagonal(ops: FockOperators, which: str) -> np.ndarray:
    if which == "work":
        return ops.energy
    if which == "number":
        return ops.number
    raise DomainError(f"unknown observable {which!r}")


def oracle_char(ops: FockOperators, delta_l: float, u: float, which: str) -> complex:
    """Exact characteristic function ``<0| U^† exp(i u X) U |0>``."""
    psi = oracle_state(ops, delta_l)
    diag = _diagonal(ops, which)
    return complex(np.sum(np.exp(1j * u * diag) * np.abs(psi) ** 2))


def oracle_moment(ops: FockOperators, delta_l: float, which: str, order: int = 1) -> float:
    """Exact moment ``<X^order>`` over the driven vacuum."""
    if order < 0:
        raise DomainError("moment order must be nonnegative")
    psi = oracle_state(ops, delta_l)
    diag = _diagonal(ops, which)
    return float(np.sum(diag.astype(float) ** order * np.abs(psi) ** 2))


def oracle_distribution(ops: FockOperators, delta_l: float, which: str) -> np.ndarray:
    """Exact distribution over the integer lattice of the observable.

    Work values are aggregated at integers ``0..L^2``; number values at
    ``0..2L`` (all integers; the even-only support is a property of the
    state, not imposed here).
    """
    psi = oracle_state(ops, delta_l)
    weights = np.abs(psi) ** 2
    diag = _diagonal(ops, which).astype(float)
    top = ops.cutoff**2 if which == "work" else 2 * ops.cutoff
    nearest = np.round(diag).astype(int)
    offgrid = float(np.sum(weights[np.abs(diag - nearest) > 1e-9]))
    if offgrid > 1e-12:
        raise NumericalFailure(
            f"driven vacuum puts weight {offgrid:.3e} outside the integer lattice"
        )
    probs = np.zeros(top + 1)
    np.add.at(probs, nearest, weights)
    return probs


def oracle_pair_amplitudes(ops: FockOperators, delta_l: float) -> np.ndarray:
    """Amplitude matrix ``<0| b_n a_m U |0> / <0|U|0>`` over ``m, n >= 0``."""
    psi = oracle_state(ops, delta_l)
    overlap = psi[0]
    if abs(overlap) < 1e-12:
        raise NumericalFailure(
            f"vacuum persistence amplitude vanished at delta_l={delta_l}; "
            "pair amplitudes are undefined"
        )
    L = ops.cutoff
    amp = np.zeros((L, L), dtype=complex)
    for m in range(L):
        ia = m + L
        reduced = ops.ops[ia] @ psi
        for n in range(L):
            ib = (-1 - n) + L
            amp[m, n] = (ops.ops[ib] @ reduced)[0] / overlap
    return amp
