"""Turn brightdark CLI outputs into the three standard figures.

Pure file mapping: the renderer parses CSV bodies written by the CLI and
draws them; it never recomputes any physics. Figure ids:

  fig2 - one panel, output intensity in arm A versus the interferometer
         phase, one curve per input scan (schema: phi,nA,nB).
  fig3 - two panels over time: field population nA and excited-state
         population sigma_ee, one curve per input trajectory
         (schema: t,sigma_ee,nA,nB,n_bright,n_dark[,alpha_c_re,alpha_c_im]).
  fig4 - two panels (in-phase, out-of-phase), each overlaying a quantum
         and a semiclassical sigma_ee trajectory; inputs ordered
         [quantum_in, semiclassical_in, quantum_out, semiclassical_out].

Invoked as a script with --spec pointing to a JSON FigureSpec:
{"figure": "fig2", "inputs": [...], "labels": [...], "output": "fig2.svg",
 "xlabel": "...", "ylabel": "..."}. A sidecar report (<output>.report.json)
records the plotted data ranges per series.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "RenderReport", "render", "read_csv", "main"]

_STYLE = Path(__file__).resolve().parent / "brightdark.mplstyle"

_SCHEMAS = {
    "fig2": ("phi", "nA"),
    "fig3": ("t", "sigma_ee", "nA"),
    "fig4": ("t", "sigma_ee"),
}


class RenderError(ValueError):
    """Bad figure spec or input files that do not match the schema."""


@dataclass(frozen=True)
class FigureSpec:
    figure: str
    inputs: tuple[str, ...]
    output: str
    labels: tuple[str, ...] = ()
    xlabel: str = ""
    ylabel: str = ""

    def __post_init__(self):
        if self.figure not in _SCHEMAS:
            raise RenderError(f"unknown figure id {self.figure!r}")
        if not self.inputs:
            raise RenderError("figure spec lists no input files")
        if self.figure == "fig4" and len(self.inputs) != 4:
            raise RenderError("fig4 takes exactly four inputs "
                              "(quantum/semiclassical for each panel)")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        labels = tuple(self.labels) if self.labels else tuple(
            Path(p).stem for p in self.inputs
        )
        if len(labels) != len(self.inputs):
            raise RenderError("labels and inputs must have equal length")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_json(cls, path) -> "FigureSpec":
        data = json.loads(Path(path).read_text())
        return cls(
            figure=data["figure"],
            inputs=tuple(data["inputs"]),
            output=data.get("output", f"{data['figure']}.svg"),
            labels=tuple(data.get("labels", ())),
            xlabel=data.get("xlabel", ""),
            ylabel=data.get("ylabel", ""),
        )


@dataclass
class RenderReport:
    figure: str
    output: str
    series: list = field(default_factory=list)

    def add(self, panel: str, label: str, x: np.ndarray, y: np.ndarray):
        self.series.append(
            {
                "panel": panel,
                "label": label,
                "x_min": float(x.min()),
                "x_max": float(x.max()),
                "y_min": float(y.min()),
                "y_max": float(y.max()),
                "points": int(len(x)),
            }
        )

    def to_json(self) -> str:
        return json.dumps(
            {"figure": self.figure, "output": self.output, "series": self.series},
            indent=2,
            sort_keys=True,
        )


def read_csv(path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Parse a CLI CSV body into named columns, checking the schema."""
    path = Path(path)
    if not path.exists():
        raise RenderError(f"input file {path} does not exist")
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise RenderError(f"input file {path} is empty")
    header = lines[0].split(",")
    missing = [c for c in required if c not in header]
    if missing:
        raise RenderError(f"{path} lacks required columns {missing}")
    if len(lines) < 2:
        raise RenderError(f"{path} has a header but no data rows")
    table = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if table.shape[1] != len(header):
        raise RenderError(f"{path} has ragged rows")
    return {name: table[:, k] for k, name in enumerate(header)}


def render(spec: FigureSpec) -> RenderReport:
    """Draw the requested figure and return the plotted-range report."""
    report = RenderReport(figure=spec.figure, output=str(spec.output))
    with plt.style.context(str(_STYLE)):
        if spec.figure == "fig2":
            fig = _render_fig2(spec, report)
        elif spec.figure == "fig3":
            fig = _render_fig3(spec, report)
        else:
            fig = _render_fig4(spec, report)
        out = Path(spec.output)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
        plt.close(fig)
    Path(str(spec.output) + ".report.json").write_text(report.to_json() + "\n")
    return report


def _render_fig2(spec: FigureSpec, report: RenderReport):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for path, label in zip(spec.inputs, spec.labels):
        cols = read_csv(path, _SCHEMAS["fig2"])
        ax.plot(cols["phi"], cols["nA"], label=label)
        report.add("main", label, cols["phi"], cols["nA"])
    ax.set_xlabel(spec.xlabel or "relative phase")
    ax.set_ylabel(spec.ylabel or "output intensity, arm A")
    ax.legend()
    fig.tight_layout()
    return fig


def _render_fig3(spec: FigureSpec, report: RenderReport):
    fig, (ax_field, ax_atom) = plt.subplots(
        2, 1, figsize=(6.0, 6.4), sharex=True
    )
    for path, label in zip(spec.inputs, spec.labels):
        cols = read_csv(path, _SCHEMAS["fig3"])
        ax_field.plot(cols["t"], cols["nA"], label=label)
        ax_atom.plot(cols["t"], cols["sigma_ee"], label=label)
        report.add("field", label, cols["t"], cols["nA"])
        report.add("atom", label, cols["t"], cols["sigma_ee"])
    ax_field.set_ylabel("mode A population")
    ax_atom.set_ylabel("excited-state population")
    ax_atom.set_xlabel(spec.xlabel or "time (units of 1/g)")
    ax_field.legend()
    fig.tight_layout()
    return fig


def _render_fig4(spec: FigureSpec, report: RenderReport):
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 6.4), sharex=True)
    panels = ("in-phase", "out-of-phase")
    for k, ax in enumerate(axes):
        for path, label in zip(spec.inputs[2 * k : 2 * k + 2],
                               spec.labels[2 * k : 2 * k + 2]):
            cols = read_csv(path, _SCHEMAS["fig4"])
            ax.plot(cols["t"], cols["sigma_ee"], label=label)
            report.add(panels[k], label, cols["t"], cols["sigma_ee"])
        ax.set_ylabel("excited-state population")
        ax.set_title(panels[k])
        ax.legend()
    axes[-1].set_xlabel(spec.xlabel or "time (units of 1/g)")
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figrender", description="render brightdark CLI outputs to figures"
    )
    parser.add_argument("--spec", required=True, help="path to a FigureSpec JSON")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec.from_json(args.spec)
        report = render(spec)
    except (RenderError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {report.output} ({len(report.series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
