"""Diagonalization of the quadratic generator and its finite-drive transform.

The generator ``H = sum c^† A c + (1/2)(c^† B c^† + h.c.)`` is brought to
``sum_k Lambda_k eta_k^† eta_k`` by a Bogoliubov transformation
``c = u eta + v eta^†``.  The pair ``(u, v)`` comes out of the Hermitian
particle-hole doubled matrix ``[[A, B], [-conj(B), -conj(A)]]``: its
eigenvalues come in ``±Lambda`` pairs and the nonnegative half encodes one
column ``(u_k, conj(v_k))`` each.

A finite drive of logarithmic size ``delta_l`` then maps the mode operators
to ``c_tilde = u_t c + v_t c^†`` with ``u_t = u D u^† + v conj(D) v^†`` and
``v_t = u D v^T + v conj(D) u^T``, ``D = diag(exp(-i Lambda delta_l))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure
from .model import QuadraticForm

__all__ = [
    "BogoliubovSolution",
    "EvolvedTransform",
    "diagonalize",
    "evolve",
    "compose",
    "canonical_residuals",
]

ZERO_MODE_TOL = 1e-10


@dataclass(frozen=True)
class BogoliubovSolution:
    """Mode matrices ``u``, ``v`` and quasiparticle energies ``Lambda``."""

    u: np.ndarray
    v: np.ndarray
    lam: np.ndarray

    @property
    def dim(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class EvolvedTransform:
    """Heisenberg-picture mode transform after a drive of size ``delta_l``."""

    u_t: np.ndarray
    v_t: np.ndarray
    delta_l: float

    @property
    def dim(self) -> int:
        return self.u_t.shape[0]


def canonical_residuals(t: EvolvedTransform | BogoliubovSolution) -> tuple[float, float]:
    """Max-norm violations of the two canonical anticommutation relations.

    Returns ``(|u u^† + v v^† - I|_max, |u v^T + v u^T|_max)`` for either a
    static solution or an evolved transform.
    """
    if isinstance(t, BogoliubovSolution):
        u, v = t.u, t.v
    else:
        u, v = t.u_t, t.v_t
    eye = np.eye(u.shape[0])
    r1 = float(np.max(np.abs(u @ u.conj().T + v @ v.conj().T - eye)))
    r2 = float(np.max(np.abs(u @ v.T + v @ u.T)))
    return r1, r2


def _select_zero_modes(vecs: np.ndarray, count: int) -> np.ndarray:
    """Pick one column per particle-hole pair from a zero-eigenvalue basis.

    The particle-hole conjugation ``x -> [[0, I], [I, 0]] conj(x)`` maps the
    zero subspace to itself; a valid selection keeps ``count`` columns that
    are orthonormal together with their conjugates.
    """
    n = vecs.shape[0] // 2
    swap = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    chosen: list[np.ndarray] = []
    span: list[np.ndarray] = []
    for j in range(vecs.shape[1]):
        cand = vecs[:, j].copy()
        for s in span:
            cand -= s * (s.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm < 1e-7:
            continue
        cand /= norm
        partner = cand.conj()[swap]
        for s in span + [cand]:
            partner -= s * (s.conj() @ partner)
        pnorm = np.linalg.norm(partner)
        if pnorm < 1e-7:
            raise NumericalFailure(
                "particle-hole partner selection failed in a degenerate zero subspace"
            )
        chosen.append(cand)
        span.extend([cand, partner / pnorm])
        if len(chosen) == count:
            return np.column_stack(chosen)
    raise NumericalFailure(
        f"could only select {len(chosen)} of {count} zero-mode particle-hole pairs"
    )


def diagonalize(form: QuadraticForm) -> BogoliubovSolution:
    """Solve ``A u + B conj(v) = u Lambda``, ``A v + B conj(u) = -v Lambda``.

    Dense Hermitian eigendecomposition of the doubled matrix; the
    eigenvectors with ``Lambda >= 0`` are kept (with explicit particle-hole
    partner selection if the spectrum touches zero).  Raises
    :class:`~fermidce.errors.NumericalFailure` if the assembled pair violates
    the canonical or diagonalization residual bounds.
    """
    a, b = form.a_block, form.b_block
    n = form.dim
    bdg = np.block([[a, b], [-b.conj(), -a.conj()]])
    w, vecs = np.linalg.eigh(bdg)

    scale = max(float(np.max(np.abs(a))), 1.0)
    pos = w > ZERO_MODE_TOL * scale
    zero = np.abs(w) <= ZERO_MODE_TOL * scale
    n_pos = int(np.sum(pos))
    cols = vecs[:, pos]
    lam = w[pos]
    if n_pos < n:
        missing = n - n_pos
        zvecs = _select_zero_modes(vecs[:, zero], missing)
        cols = np.concatenate([zvecs, cols], axis=1)
        lam = np.concatenate([np.zeros(missing), lam])
    order = np.argsort(lam, kind="stable")
    cols = cols[:, order]
    lam = lam[order]

    u = cols[:n, :]
    v = cols[n:, :].conj()
    sol = BogoliubovSolution(u=u, v=v, lam=lam)

    tol = 1e-9 * scale
    r1 = float(np.max(np.abs(a @ u + b @ v.conj() - u * lam)))
    r2 = float(np.max(np.abs(a @ v + b @ u.conj() + v * lam)))
    c1, c2 = canonical_residuals(sol)
    if r1 > tol or r2 > tol or c1 > 1e-9 or c2 > 1e-9:
        raise NumericalFailure(
            "Bogoliubov diagonalization failed its residual bounds: "
            f"|Au+Bv*-uL|={r1:.3e}, |Av+Bu*+vL|={r2:.3e} (tol {tol:.3e}); "
            f"canonical residuals ({c1:.3e}, {c2:.3e}) (tol 1e-09)"
        )
    return sol


def evolve(solution: BogoliubovSolution, delta_l: float) -> EvolvedTransform:
    """Finite-drive transform ``(u_t, v_t)`` for a logarithmic step ``delta_l``.

    ``delta_l = 0`` returns the identity transform exactly.
    """
    u, v, lam = solution.u, solution.v, solution.lam
    d = np.exp(-1j * lam * float(delta_l))
    u_t = (u * d) @ u.conj().T + (v * d.conj()) @ v.conj().T
    v_t = (u * d) @ v.T + (v * d.conj()) @ u.T
    return EvolvedTransform(u_t=u_t, v_t=v_t, delta_l=float(delta_l))


def compose(outer: EvolvedTransform, inner: EvolvedTransform) -> EvolvedTransform:
    """Composition law of two mode transforms (outer applied after inner)."""
    u2, v2 = outer.u_t, outer.v_t
    u1, v1 = inner.u_t, inner.v_t
    return EvolvedTransform(
        u_t=u2 @ u1 + v2 @ v1.conj(),
        v_t=u2 @ v1 + v2 @ u1.conj(),
        delta_l=outer.delta_l + inner.delta_l,
    )
