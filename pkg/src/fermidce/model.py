"""Physical model of a massless fermion in a box with one moving wall.

The field lives on ``0 <= x <= l(t)`` with confining (bag) boundary
conditions at both walls and a linearly moving right wall
``l(t) = l0 + alpha*t``.  Everything downstream is driven by two matrices
over the ``2L`` retained modes ``n = -L .. L-1``:

* the Hermitian block ``A`` (mode energies plus same-sign-mode mixing),
* the antisymmetric block ``B`` (pair creation between opposite-sign modes),

which together define the dimensionless generator of the evolution.  Both
depend only on the speed ratio ``alpha/v`` and the cutoff ``L``.

Energies are handled internally in units of ``pi*v/l_final``; in these
units the mode ``n`` carries ``|n + 1/2|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConvergenceError, DegenerateDriveError, DomainError

__all__ = [
    "ModelConfig",
    "QuadraticForm",
    "index_of_mode",
    "mode_of_index",
    "mode_frequency",
    "mode_function",
    "mode_function_dl",
    "coupling_element",
    "coupling_quadrature",
    "build_quadratic_form",
    "bag_condition_residual",
]

# Dirac matrices in the fixed two-dimensional representation used throughout:
# gamma^0 = sigma_x, gamma^1 = -i sigma_y, gamma_5 = gamma^0 gamma^1 = sigma_z.
GAMMA0 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
GAMMA1 = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
GAMMA5 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@dataclass(frozen=True)
class ModelConfig:
    """Physical and numerical inputs of a single drive.

    Parameters
    ----------
    speed_ratio : float
        Wall speed over mode speed, ``alpha/v``.  Must be nonzero unless
        ``delta_l`` is zero, and must share its sign with ``delta_l``
        (a linear drive with ``l > 0`` throughout forces sign agreement).
    delta_l : float
        Logarithm of the expansion ratio, ``ln(l_final/l_initial)``.
    cutoff : int
        Number of retained positive-index modes ``L``;  the simulation
        keeps the ``2L`` modes ``n = -L .. L-1``.
    theta0 : float
        Boundary phase entering the mode functions only; it cancels from
        every statistic.
    l_ref, v_ref : float
        Final box length and mode speed used when converting reported
        energies from internal units ``pi*v/l_final`` to absolute ones.
    """

    speed_ratio: float
    delta_l: float
    cutoff: int
    theta0: float = 0.0
    l_ref: float = 1.0
    v_ref: float = 1.0

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise DomainError(f"cutoff must be a positive integer, got {self.cutoff}")
        if self.l_ref <= 0 or self.v_ref <= 0:
            raise DomainError("l_ref and v_ref must be positive")
        if self.delta_l != 0.0:
            if self.speed_ratio == 0.0:
                raise DegenerateDriveError(
                    "speed_ratio = 0 with delta_l != 0: a still wall cannot expand the box"
                )
            if np.sign(self.speed_ratio) != np.sign(self.delta_l):
                raise DomainError(
                    "speed_ratio and delta_l must share a sign "
                    f"(got {self.speed_ratio} and {self.delta_l})"
                )

    @property
    def n_modes(self) -> int:
        return 2 * self.cutoff

    @property
    def energy_scale(self) -> float:
        """Absolute value of one internal energy unit, ``pi*v_ref/l_ref``."""
        return float(np.pi * self.v_ref / self.l_ref)

    def mode_labels(self) -> np.ndarray:
        """Mode indices ``n`` in array order, ``n = i - L``."""
        return np.arange(-self.cutoff, self.cutoff)


def index_of_mode(n: int, cutoff: int) -> int:
    """Array index of mode ``n`` under the single global ordering ``i = n + L``."""
    if not -cutoff <= n < cutoff:
        raise DomainError(f"mode {n} outside [-{cutoff}, {cutoff - 1}]")
    return n + cutoff


def mode_of_index(i: int, cutoff: int) -> int:
    """Inverse of :func:`index_of_mode`."""
    if not 0 <= i < 2 * cutoff:
        raise DomainError(f"index {i} outside [0, {2 * cutoff - 1}]")
    return i - cutoff


@dataclass(frozen=True)
class QuadraticForm:
    """Blocks of the dimensionless quadratic generator over ``2L`` modes.

    ``a_block`` is Hermitian, ``b_block`` antisymmetric; entries follow the
    global mode ordering ``i = n + L``.  ``a_block`` couples only modes of
    equal index sign, ``b_block`` only modes of opposite index sign.
    """

    dim: int
    a_block: np.ndarray
    b_block: np.ndarray
    modes: np.ndarray = field(repr=False)

    def index_of(self, n: int) -> int:
        return index_of_mode(n, self.dim // 2)

    def mode_of(self, i: int) -> int:
        return mode_of_index(i, self.dim // 2)

    def residuals(self) -> dict[str, float]:
        """Max-norm violations of the structural invariants."""
        a, b = self.a_block, self.b_block
        neg = self.modes < 0
        cross = np.logical_xor.outer(neg, neg)
        return {
            "hermitian": float(np.max(np.abs(a - a.conj().T))),
            "antisymmetric": float(np.max(np.abs(b + b.T))),
            "a_cross_block": float(np.max(np.abs(np.where(cross, a, 0.0)))),
            "b_same_block": float(np.max(np.abs(np.where(cross, 0.0, b)))),
        }


def mode_frequency(n: int, l: float, v: float) -> float:
    """One-particle energy ``(n + 1/2) * pi * v / l`` of mode ``n``."""
    if l <= 0 or v <= 0:
        raise DomainError(f"box length and speed must be positive, got l={l}, v={v}")
    return (n + 0.5) * np.pi * v / l


def mode_function(n: int, x, l: float, theta0: float = 0.0) -> np.ndarray:
    """Instantaneous two-component eigenspinor of mode ``n``.

    Returns ``(1/sqrt(2l)) * (exp(i k x), i exp(-i (k x - theta0)))`` with
    ``k = (n + 1/2) pi / l``.  ``x`` may be a scalar or an array in
    ``[0, l]``; the spinor index is the leading axis of the result.
    """
    if l <= 0:
        raise DomainError(f"box length must be positive, got {l}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > l):
        raise DomainError("x outside the box [0, l]")
    k = (n + 0.5) * np.pi / l
    norm = 1.0 / np.sqrt(2.0 * l)
    upper = norm * np.exp(1j * k * x)
    lower = 1j * norm * np.exp(-1j * (k * x - theta0))
    return np.stack([upper, lower])


def mode_function_dl(n: int, x, l: float, ldot: float, theta0: float = 0.0) -> np.ndarray:
    """Time derivative of :func:`mode_function` at fixed mode index.

    The time dependence enters only through ``l(t)``, so
    ``psi_dot = ldot * d(psi)/dl`` with ``k(l) = (n + 1/2) pi / l``.
    """
    psi = mode_function(n, x, l, theta0)
    x = np.asarray(x, dtype=float)
    k = (n + 0.5) * np.pi / l
    # d/dl of the normalization gives -1/(2l); d/dl of k gives -k/l.
    dup = psi[0] * (-0.5 / l - 1j * k * x / l)
    dlo = psi[1] * (-0.5 / l + 1j * k * x / l)
    return ldot * np.stack([dup, dlo])


def coupling_element(m: int, n: int) -> float:
    """Closed form of the dimensionless mode coupling ``K_mn``.

    ``K_mn = (-1)^(m-n) (m+n+1) / (2(m-n))`` for ``m != n`` and zero on the
    diagonal; exactly antisymmetric.  The physical matrix element is
    ``K_mn * ldot / l``.
    """
    if m == n:
        return 0.0
    return ((-1.0) ** (m - n)) * (m + n + 1) / (2.0 * (m - n))


def _coupling_integral(m: int, n: int, l: float, ldot: float, theta0: float, points: int) -> complex:
    """Gauss-Legendre value of the coupling integral with ``points`` nodes."""
    nodes, weights = leggauss(points)
    x = 0.5 * l * (nodes + 1.0)
    w = 0.5 * l * weights
    psi_m = mode_function(m, x, l, theta0)
    psi_n = mode_function(n, x, l, theta0)
    dpsi_m = mode_function_dl(m, x, l, ldot, theta0)
    dpsi_n = mode_function_dl(n, x, l, ldot, theta0)
    integrand = 0.5 * (
        np.sum(psi_m.conj() * dpsi_n, axis=0) - np.sum(dpsi_m.conj() * psi_n, axis=0)
    )
    return complex(np.sum(w * integrand))


def coupling_quadrature(
    m: int,
    n: int,
    l: float = 1.0,
    ldot: float = 0.25,
    theta0: float = 0.0,
    points: int = 128,
) -> float:
    """Coupling element evaluated by numerical quadrature.

    Integrates ``(1/2) * (psi_m^† psi_n_dot - psi_m_dot^† psi_n)`` over the
    box and divides out ``ldot/l``, so the result is directly comparable to
    :func:`coupling_element`.  Node counts are doubled until two successive
    values differ by less than 1e-10.
    """
    if points < 64:
        raise DomainError(f"need at least 64 quadrature points, got {points}")
    if l <= 0:
        raise DomainError(f"box length must be positive, got {l}")
    if ldot == 0.0:
        raise DomainError("ldot must be nonzero to normalize the matrix element")
    scale = ldot / l
    prev = _coupling_integral(m, n, l, ldot, theta0, points) / scale
    cur = _coupling_integral(m, n, l, ldot, theta0, 2 * points) / scale
    if abs(cur - prev) > 1e-8:
        raise ConvergenceError(
            f"coupling quadrature for (m={m}, n={n}) not converged to 1e-8 "
            f"between {points} and {2 * points} points (|delta| = {abs(cur - prev):.3e})"
        )
    pts = 2 * points
    while abs(cur - prev) >= 1e-10 and pts < 64 * points:
        prev, pts = cur, 2 * pts
        cur = _coupling_integral(m, n, l, ldot, theta0, pts) / scale
    if abs(cur.imag) > 1e-9:
        raise ConvergenceError(
            f"coupling integrand for (m={m}, n={n}) kept an imaginary part {cur.imag:.3e}"
        )
    return float(cur.real)


def build_quadratic_form(config: ModelConfig) -> QuadraticForm:
    """Assemble the dimensionless blocks ``A`` and ``B`` for a drive.

    Diagonal of ``A`` holds ``|n + 1/2| * pi / (alpha/v)``; off-diagonal
    entries are ``-i K_mn`` routed into ``A`` when ``m`` and ``n`` have the
    same index sign and into ``B`` otherwise.  The result depends on the
    configuration only through ``speed_ratio`` and ``cutoff``.
    """
    if config.speed_ratio == 0.0:
        raise DegenerateDriveError(
            "speed_ratio = 0 has no quadratic form; a zero-length drive is the identity"
        )
    L = config.cutoff
    modes = config.mode_labels()
    N = 2 * L
    a = np.zeros((N, N), dtype=complex)
    b = np.zeros((N, N), dtype=complex)
    np.fill_diagonal(a, np.abs(modes + 0.5) * np.pi / config.speed_ratio)

    mm, nn = np.meshgrid(modes, modes, indexing="ij")
    diff = mm - nn
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(diff != 0, ((-1.0) ** diff) * (mm + nn + 1) / (2.0 * diff), 0.0)
    same_sign = (mm >= 0) == (nn >= 0)
    off = ~np.eye(N, dtype=bool)
    a[same_sign & off] = -1j * K[same_sign & off]
    b[~same_sign] = -1j * K[~same_sign]
    return QuadraticForm(dim=N, a_block=a, b_block=b, modes=modes)


def bag_condition_residual(n: int, l: float, theta0: float = 0.0) -> float:
    """Max violation of the confining boundary condition at both walls.

    Checks ``exp(i theta gamma_5) psi = i n_mu gamma^mu psi`` for mode ``n``,
    where the exterior normal makes the right-hand side ``+sigma_y psi`` at
    ``x = 0`` and ``-sigma_y psi`` at ``x = l``.
    """
    sigma_y = np.array([[0.0, -1j], [1j, 0.0]])
    phase = np.diag([np.exp(1j * theta0), np.exp(-1j * theta0)])
    res = 0.0
    for x, sign in ((0.0, 1.0), (l, -1.0)):
        psi = mode_function(n, x, l, theta0)
        res = max(res, float(np.max(np.abs(phase @ psi - sign * (sigma_y @ psi)))))
    return res
