"""Figures from fermidce CSV output.

Four figure kinds, one per CSV schema:

* ``fig1`` — two panels of moments against the mode cutoff, from a
  cutoff-sweep CSV (work on the left, particle number on the right);
  log-log by default so the power laws read as straight lines.
* ``fig2`` — fitted scaling coefficients ``beta2`` and ``gamma1`` against
  the drive speed, from a speed-sweep CSV.
* ``chi`` — real part, imaginary part and modulus of a characteristic
  function on its u grid.
* ``distribution`` — a probability mass function on its integer support.

The renderer never touches numbers: it validates the header, reads the
columns, and draws.  A header that does not match the expected schema
raises :class:`SchemaError` before any output file is created.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotSpec", "SchemaError", "render", "build_figure", "EXPECTED_HEADERS"]


class SchemaError(ValueError):
    """Input CSV does not carry the expected column header."""


SWEEP_HEADER = (
    "L",
    "alpha_over_v",
    "delta_l",
    "mean_w[pi*v/l_final]",
    "m2_w[(pi*v/l_final)^2]",
    "mean_n",
    "m2_n",
)
SPEED_HEADER = (
    "alpha_over_v",
    "beta2[pi*v/l_final]",
    "gamma1",
    "resid_w[pi*v/l_final]",
    "resid_n",
)
CHI_HEADER = ("u", "re_chi", "im_chi")

EXPECTED_HEADERS = {
    "fig1": SWEEP_HEADER,
    "fig2": SPEED_HEADER,
    "chi": CHI_HEADER,
    # distribution headers carry the observable name in the first column
    "distribution": ("<n|w[...]>", "probability"),
}

KIND_DEFAULTS = {  # (log_x, log_y)
    "fig1": (True, True),
    "fig2": (False, False),
    "chi": (False, False),
    "distribution": (False, False),
}


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: figure kind, input CSV, output image, axis scales.

    ``log_x``/``log_y`` of ``None`` pick the kind's default (log-log for
    ``fig1``, linear otherwise).  The output format follows the file
    extension (anything matplotlib can save: png, pdf, svg, ...).
    """

    kind: str
    input_path: str
    output_path: str
    log_x: bool | None = None
    log_y: bool | None = None

    def __post_init__(self):
        if self.kind not in KIND_DEFAULTS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; "
                f"expected one of {sorted(KIND_DEFAULTS)}"
            )

    def scales(self) -> tuple[bool, bool]:
        dx, dy = KIND_DEFAULTS[self.kind]
        return (dx if self.log_x is None else self.log_x,
                dy if self.log_y is None else self.log_y)


def _unit_of(column: str) -> str:
    """Bracketed unit annotation of a column name, empty if none."""
    if "[" in column and column.endswith("]"):
        return column[column.index("[") + 1:-1]
    return ""


def _base_name(column: str) -> str:
    return column.split("[")[0]


def _read_csv(path: str):
    """Header tuple and per-column float arrays; ``#`` lines are metadata."""
    header = None
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = tuple(line.split(","))
                continue
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise SchemaError(f"{path}: no header row found (empty CSV?)")
    if not rows:
        raise SchemaError(f"{path}: header but no data rows")
    data = np.asarray(rows)
    if data.shape[1] != len(header):
        raise SchemaError(
            f"{path}: {data.shape[1]} columns of data under {len(header)} headers"
        )
    return header, {name: data[:, i] for i, name in enumerate(header)}


def _require_header(path: str, header, expected) -> None:
    if tuple(header) != tuple(expected):
        raise SchemaError(
            f"{path}: column header mismatch\n"
            f"  expected: {','.join(expected)}\n"
            f"  found:    {','.join(header)}"
        )


def _apply_scales(ax, spec: PlotSpec) -> None:
    log_x, log_y = spec.scales()
    if log_x:
        ax.set_xscale("log")
    if log_y:
        ax.set_yscale("log")


def _fig1(spec: PlotSpec) -> plt.Figure:
    header, cols = _read_csv(spec.input_path)
    _require_header(spec.input_path, header, SWEEP_HEADER)
    ls = cols["L"]
    unit = _unit_of(SWEEP_HEADER[3])
    fig, (ax_w, ax_n) = plt.subplots(1, 2, figsize=(9, 4))
    ax_w.plot(ls, cols[SWEEP_HEADER[3]], "o-", label=r"$\langle w \rangle$")
    ax_w.plot(ls, cols[SWEEP_HEADER[4]], "s--", label=r"$\langle w^2 \rangle$")
    ax_w.set_xlabel("cutoff L")
    ax_w.set_ylabel(f"work moments [{unit}]")
    ax_n.plot(ls, cols["mean_n"], "o-", label=r"$\langle N \rangle$")
    ax_n.plot(ls, cols["m2_n"], "s--", label=r"$\langle N^2 \rangle$")
    ax_n.set_xlabel("cutoff L")
    ax_n.set_ylabel("number moments")
    for ax in (ax_w, ax_n):
        _apply_scales(ax, spec)
        ax.legend()
        ax.grid(True, which="both", alpha=0.3)
    alpha = cols["alpha_over_v"][0]
    dl = cols["delta_l"][0]
    fig.suptitle(rf"moments vs cutoff ($\alpha/v = {alpha:g}$, $\Delta l = {dl:g}$)")
    fig.tight_layout()
    return fig


def _fig2(spec: PlotSpec) -> plt.Figure:
    header, cols = _read_csv(spec.input_path)
    _require_header(spec.input_path, header, SPEED_HEADER)
    speeds = cols["alpha_over_v"]
    unit = _unit_of(SPEED_HEADER[1])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(speeds, cols[SPEED_HEADER[1]], "o-", label=rf"$\beta_2$ [{unit}]")
    ax.plot(speeds, cols["gamma1"], "s--", label=r"$\gamma_1$")
    ax.set_xlabel(r"$\alpha/v$")
    ax.set_ylabel("fitted coefficient")
    _apply_scales(ax, spec)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.suptitle("scaling coefficients vs drive speed")
    fig.tight_layout()
    return fig


def _chi(spec: PlotSpec) -> plt.Figure:
    header, cols = _read_csv(spec.input_path)
    _require_header(spec.input_path, header, CHI_HEADER)
    u, re, im = cols["u"], cols["re_chi"], cols["im_chi"]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(u, re, "-", label=r"$\mathrm{Re}\,\chi$")
    ax.plot(u, im, "--", label=r"$\mathrm{Im}\,\chi$")
    ax.plot(u, np.hypot(re, im), ":", label=r"$|\chi|$")
    ax.set_xlabel("u")
    ax.set_ylabel(r"$\chi(u)$")
    _apply_scales(ax, spec)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def _distribution(spec: PlotSpec) -> plt.Figure:
    header, cols = _read_csv(spec.input_path)
    if len(header) != 2 or header[1] != "probability" or \
            _base_name(header[0]) not in ("n", "w"):
        raise SchemaError(
            f"{spec.input_path}: column header mismatch\n"
            f"  expected: n,probability or w[<unit>],probability\n"
            f"  found:    {','.join(header)}"
        )
    support = cols[header[0]]
    probs = cols["probability"]
    unit = _unit_of(header[0])
    label = _base_name(header[0]) + (f" [{unit}]" if unit else "")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(support, probs, width=0.8 if _base_name(header[0]) == "w" else 1.6)
    ax.set_xlabel(label)
    ax.set_ylabel("probability")
    _apply_scales(ax, spec)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


_BUILDERS = {"fig1": _fig1, "fig2": _fig2, "chi": _chi, "distribution": _distribution}


def build_figure(spec: PlotSpec) -> plt.Figure:
    """Validate the input and build the matplotlib figure (not saved)."""
    return _BUILDERS[spec.kind](spec)


def render(spec: PlotSpec) -> str:
    """Write the figure for ``spec`` and return the output path.

    Input validation happens before the output file is touched, so a
    schema error leaves no file behind.
    """
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output_path, dpi=150)
    finally:
        plt.close(fig)
    return spec.output_path
