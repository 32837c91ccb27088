"""End-to-end drives, cutoff/speed sweeps, scaling fits and CSV emission.

The scaling study fits the mean work with ``b0 + b1*L + b2*L^2`` and the
mean particle number with ``g0 + g1*L + gl*ln L`` over a grid of cutoffs;
sweeping the drive speed then traces the coefficients ``b2`` and ``g1``
through the slow/fast crossover.

CSV layout is fixed and deterministic (12 significant digits, one header
row, ``#``-prefixed metadata lines); energy columns carry their unit in the
column name.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .bogoliubov import diagonalize, evolve
from .errors import ConsistencyError, DomainError, FitError
from .model import ModelConfig, build_quadratic_form
from .statistics import (
    m2_number_analytic,
    m2_work_analytic,
    mean_number_analytic,
    mean_work_analytic,
    moments_fd,
    pairing_matrix,
)

__all__ = [
    "MomentReport",
    "SweepRow",
    "SweepTable",
    "SpeedRow",
    "SpeedTable",
    "FitResult",
    "run_point",
    "sweep_cutoff",
    "fit_scaling",
    "sweep_speed",
    "ENERGY_UNIT",
    "SWEEP_COLUMNS",
    "SPEED_COLUMNS",
]

ENERGY_UNIT = "pi*v/l_final"
SWEEP_COLUMNS = (
    "L",
    "alpha_over_v",
    "delta_l",
    f"mean_w[{ENERGY_UNIT}]",
    f"m2_w[({ENERGY_UNIT})^2]",
    "mean_n",
    "m2_n",
)
SPEED_COLUMNS = (
    "alpha_over_v",
    f"beta2[{ENERGY_UNIT}]",
    "gamma1",
    f"resid_w[{ENERGY_UNIT}]",
    "resid_n",
)
FIT_MIN_CUTOFF = 16


@dataclass(frozen=True)
class MomentReport:
    """Work and number moments of one drive, internal energy units."""

    config: ModelConfig
    mean_w: float
    m2_w: float
    var_w: float
    mean_n: float
    m2_n: float
    var_n: float
    method_mean: str = "analytic"
    method_m2: str = "finite-difference"
    fd_step_w: float | None = None
    fd_step_n: float | None = None
    flags: tuple = ()
    energy_unit: str = ENERGY_UNIT

    def __post_init__(self):
        checks = (
            (self.mean_w, -1e-10, "mean_w"),
            (self.mean_n, -1e-10, "mean_n"),
            (self.var_w, -1e-8, "var_w"),
            (self.var_n, -1e-8, "var_n"),
        )
        for value, floor, name in checks:
            if not np.isfinite(value) or value < floor:
                raise ConsistencyError(f"{name} = {value} violates its lower bound {floor}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["config"] = asdict(self.config)
        d["flags"] = list(self.flags)
        return d


def run_point(config: ModelConfig, *, fd_step: float | None = None) -> MomentReport:
    """Full pipeline for one drive: build, diagonalize, evolve, measure.

    Both orders are analytic by default (exact Wick sums over the evolved
    transform).  Passing ``fd_step`` switches the second moments to central
    finite differences of the characteristic functions with that step,
    cross-checked against the analytic means.  ``delta_l = 0``
    short-circuits to the identity drive.
    """
    if config.delta_l == 0.0:
        return MomentReport(
            config=config,
            mean_w=0.0, m2_w=0.0, var_w=0.0,
            mean_n=0.0, m2_n=0.0, var_n=0.0,
            method_m2="analytic",
        )
    try:
        form = build_quadratic_form(config)
        t = evolve(diagonalize(form), config.delta_l)
        state = pairing_matrix(t, config)
        mean_w = mean_work_analytic(t, state)
        mean_n = mean_number_analytic(t)
        flags: tuple = ()
        if fd_step is None:
            m2_w = m2_work_analytic(t, state)
            m2_n = m2_number_analytic(t)
            method_m2 = "analytic"
        else:
            fd_w = moments_fd(state, "work", 2, h=fd_step, mean_reference=mean_w)
            fd_n = moments_fd(state, "number", 2, h=fd_step, mean_reference=mean_n)
            m2_w, m2_n = fd_w.moments[2], fd_n.moments[2]
            method_m2 = "finite-difference"
            flags = tuple(
                f"{fd.which}:{fd.mean_flag}"
                for fd in (fd_w, fd_n) if fd.mean_flag != "ok"
            )
    except Exception as exc:
        label = (
            f"alpha_over_v={config.speed_ratio}, delta_l={config.delta_l}, "
            f"L={config.cutoff}"
        )
        try:
            raise type(exc)(f"{exc} [at {label}]") from exc
        except TypeError:
            raise exc
    return MomentReport(
        config=config,
        mean_w=mean_w,
        m2_w=m2_w,
        var_w=m2_w - mean_w**2,
        mean_n=mean_n,
        m2_n=m2_n,
        var_n=m2_n - mean_n**2,
        method_m2=method_m2,
        fd_step_w=fd_step,
        fd_step_n=fd_step,
        flags=flags,
    )


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepRow:
    cutoff: int
    alpha_over_v: float
    delta_l: float
    mean_w: float
    m2_w: float
    mean_n: float
    m2_n: float
    method: str = "mean:analytic;m2:finite-difference"

    def csv_values(self) -> tuple:
        return (
            self.cutoff, self.alpha_over_v, self.delta_l,
            self.mean_w, self.m2_w, self.mean_n, self.m2_n,
        )


class SweepAborted(RuntimeError):
    """A sweep point failed; completed rows are kept on ``partial``."""

    def __init__(self, message: str, partial: "SweepTable"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SweepTable:
    """Moment rows over a cutoff grid, sorted by (alpha_over_v, L)."""

    rows: tuple
    meta: dict

    def __post_init__(self):
        keys = [(r.alpha_over_v, r.cutoff) for r in self.rows]
        if sorted(set(keys)) != keys:
            raise DomainError("sweep rows must be sorted by (alpha_over_v, L) and unique")
        for r in self.rows:
            vals = (r.mean_w, r.m2_w, r.mean_n, r.m2_n)
            if not all(np.isfinite(v) for v in vals):
                raise ConsistencyError(f"non-finite moments in sweep row L={r.cutoff}")

    def cutoffs(self) -> np.ndarray:
        return np.array([r.cutoff for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        return _format_csv(SWEEP_COLUMNS, [r.csv_values() for r in self.rows], self.meta)

    @staticmethod
    def from_csv(text: str) -> "SweepTable":
        meta, header, records = _parse_csv(text)
        if tuple(header) != SWEEP_COLUMNS:
            raise DomainError(
                f"sweep CSV header mismatch: expected {list(SWEEP_COLUMNS)}, got {header}"
            )
        rows = tuple(
            SweepRow(
                cutoff=int(float(r[0])), alpha_over_v=float(r[1]), delta_l=float(r[2]),
                mean_w=float(r[3]), m2_w=float(r[4]), mean_n=float(r[5]), m2_n=float(r[6]),
            )
            for r in records
        )
        return SweepTable(rows=rows, meta=meta)


def sweep_cutoff(base: ModelConfig, l_values) -> SweepTable:
    """One :func:`run_point` per cutoff, all other parameters fixed."""
    l_values = [int(v) for v in l_values]
    if any(v < 1 for v in l_values) or sorted(set(l_values)) != l_values:
        raise DomainError("cutoff values must be strictly increasing positive integers")
    rows = []
    for L in l_values:
        cfg = replace(base, cutoff=L)
        try:
            rep = run_point(cfg)
        except Exception as exc:
            done = SweepTable(rows=tuple(rows), meta=_sweep_meta(base, l_values))
            raise SweepAborted(
                f"sweep aborted at L={L} after {len(rows)} rows: {exc}", done
            ) from exc
        rows.append(
            SweepRow(
                cutoff=L,
                alpha_over_v=base.speed_ratio,
                delta_l=base.delta_l,
                mean_w=rep.mean_w,
                m2_w=rep.m2_w,
                mean_n=rep.mean_n,
                m2_n=rep.m2_n,
            )
        )
    return SweepTable(rows=tuple(rows), meta=_sweep_meta(base, l_values))


def _sweep_meta(base: ModelConfig, l_values) -> dict:
    return {
        "alpha_over_v": base.speed_ratio,
        "delta_l": base.delta_l,
        "theta0": base.theta0,
        "l_ref": base.l_ref,
        "v_ref": base.v_ref,
        "l_values": list(l_values),
        "energy_unit": ENERGY_UNIT,
    }


# ---------------------------------------------------------------------------
# scaling fits

@dataclass(frozen=True)
class FitResult:
    """Least-squares coefficients of one scaling ansatz."""

    target: str
    names: tuple
    coefficients: tuple
    residual_norm: float
    condition: float
    l_range: tuple

    def coefficient(self, name: str) -> float:
        return self.coefficients[self.names.index(name)]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["names"] = list(self.names)
        d["coefficients"] = list(self.coefficients)
        d["l_range"] = list(self.l_range)
        return d


def fit_scaling(table: SweepTable, target: str, *, min_cutoff: int = FIT_MIN_CUTOFF) -> FitResult:
    """Ordinary least squares of the mean against its scaling basis.

    Basis ``{1, L, L^2}`` for work, ``{1, L, ln L}`` for number; columns are
    scaled to unit norm before solving and the condition number of the
    scaled design matrix is reported (the number basis is nearly collinear
    over short ranges).  Rows below ``min_cutoff`` are dropped: the ansatz
    is asymptotic.
    """
    if target == "work":
        names = ("beta0", "beta1", "beta2")
        column = "mean_w"
    elif target == "number":
        names = ("gamma0", "gamma1", "gamma_l")
        column = "mean_n"
    else:
        raise DomainError(f"unknown fit target {target!r}")

    rows = [r for r in table.rows if r.cutoff >= min_cutoff]
    ls = np.array([r.cutoff for r in rows], dtype=float)
    if len(set(ls)) < 4:
        raise DomainError(
            f"fit needs at least 4 distinct cutoffs >= {min_cutoff}, got {sorted(set(ls))}"
        )
    y = np.array([getattr(r, column) for r in rows])
    third = ls**2 if target == "work" else np.log(ls)
    design = np.column_stack([np.ones_like(ls), ls, third])
    scale = np.linalg.norm(design, axis=0)
    scaled = design / scale
    condition = float(np.linalg.cond(scaled))
    coef_scaled, _, rank, _ = np.linalg.lstsq(scaled, y, rcond=None)
    if rank < 3 or condition > 1e14:
        raise FitError(
            f"rank-deficient scaling fit for {target}: rank={rank}, "
            f"condition={condition:.3e}"
        )
    coef = coef_scaled / scale
    resid = float(np.linalg.norm(y - design @ coef))
    return FitResult(
        target=target,
        names=names,
        coefficients=tuple(float(c) for c in coef),
        residual_norm=resid,
        condition=condition,
        l_range=(int(ls.min()), int(ls.max())),
    )


# ---------------------------------------------------------------------------
# speed sweep

@dataclass(frozen=True)
class SpeedRow:
    alpha_over_v: float
    beta2: float
    gamma1: float
    resid_w: float
    resid_n: float

    def csv_values(self) -> tuple:
        return (self.alpha_over_v, self.beta2, self.gamma1, self.resid_w, self.resid_n)


@dataclass(frozen=True)
class SpeedTable:
    """Fitted scaling coefficients per drive speed."""

    rows: tuple
    meta: dict
    failures: tuple = ()

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        return _format_csv(SPEED_COLUMNS, [r.csv_values() for r in self.rows], self.meta)

    @staticmethod
    def from_csv(text: str) -> "SpeedTable":
        meta, header, records = _parse_csv(text)
        if tuple(header) != SPEED_COLUMNS:
            raise DomainError(
                f"speed CSV header mismatch: expected {list(SPEED_COLUMNS)}, got {header}"
            )
        rows = tuple(SpeedRow(*(float(v) for v in r)) for r in records)
        return SpeedTable(rows=rows, meta=meta)


def sweep_speed(base: ModelConfig, speed_values, l_values) -> SpeedTable:
    """Cutoff sweep plus both scaling fits at each drive speed.

    Failed speeds are recorded on ``failures`` and skipped; the sweep
    continues.  Results are keyed and sorted by speed, never by completion
    order.
    """
    speeds = [float(s) for s in speed_values]
    l_values = [int(v) for v in l_values]
    if not speeds or not l_values:
        raise DomainError("speed and cutoff grids must be nonempty")
    if any(s == 0 for s in speeds):
        raise DomainError("drive speeds must be nonzero")
    rows = []
    failures = []
    for s in sorted(speeds):
        try:
            cfg = replace(base, speed_ratio=s)
            table = sweep_cutoff(cfg, l_values)
            fw = fit_scaling(table, "work")
            fn = fit_scaling(table, "number")
        except Exception as exc:
            failures.append((s, str(exc)))
            continue
        rows.append(
            SpeedRow(
                alpha_over_v=s,
                beta2=fw.coefficient("beta2"),
                gamma1=fn.coefficient("gamma1"),
                resid_w=fw.residual_norm,
                resid_n=fn.residual_norm,
            )
        )
    meta = _sweep_meta(base, l_values)
    meta.pop("alpha_over_v", None)
    meta["speed_values"] = sorted(speeds)
    return SpeedTable(rows=tuple(rows), meta=meta, failures=tuple(failures))


# ---------------------------------------------------------------------------
# CSV plumbing

def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(float(value), ".12g")


def _format_csv(columns, rows, meta: dict) -> str:
    buf = io.StringIO()
    from . import __version__

    buf.write(f"# fermidce {__version__}\n")
    buf.write(f"# meta: {json.dumps(meta, sort_keys=True)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _parse_csv(text: str):
    meta = {}
    header = None
    records = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("meta:"):
                meta = json.loads(body[len("meta:"):].strip())
            continue
        if header is None:
            header = line.split(",")
            continue
        records.append(line.split(","))
    if header is None:
        raise DomainError("CSV has no header row")
    return meta, header, records
