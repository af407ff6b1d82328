"""Figure output: matplotlib PNGs and self-contained gnuplot scripts.

matplotlib is imported lazily so that the numerical modules never depend
on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Series:
    x: tuple
    y: tuple
    label: str
    style: str = "line"

    def __post_init__(self):
        if self.style not in ("line", "step", "points"):
            raise ValueError(f"unknown style {self.style!r}")
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if len(self.x) != len(self.y):
            raise ValueError("x and y differ in length")


@dataclass(frozen=True)
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: tuple = field(default_factory=tuple)


def render_png(panels, path, dpi: int = 110) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    panels = list(panels)
    fig, axes = plt.subplots(1, len(panels), figsize=(6.4 * len(panels), 4.6), squeeze=False)
    for ax, panel in zip(axes[0], panels):
        for s in panel.series:
            if s.style == "step":
                ax.step(s.x, s.y, where="post", label=s.label)
            elif s.style == "points":
                ax.plot(s.x, s.y, "o-", ms=3, label=s.label)
            else:
                ax.plot(s.x, s.y, label=s.label)
        ax.set_title(panel.title, fontsize=10)
        ax.set_xlabel(panel.xlabel)
        ax.set_ylabel(panel.ylabel)
        ax.grid(True, alpha=0.3)
        if panel.series:
            ax.legend(fontsize=7)
    fig.tight_layout()
    path = Path(path)
    # fixed metadata keeps the PNG bytes reproducible
    fig.savefig(path, dpi=dpi, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def gnuplot_script(panels, png_name: str) -> str:
    """Plot script with the data inlined as named blocks."""
    panels = list(panels)
    out = [f"set terminal pngcairo size {640 * len(panels)},460",
           f"set output {_quote(png_name)}", "set grid", "set key top left"]
    names = []
    for p_i, panel in enumerate(panels):
        for s_i, s in enumerate(panel.series):
            name = f"$d{p_i}_{s_i}"
            names.append(name)
            out.append(f"{name} << EOD")
            out.extend(f"{x!r} {y!r}" for x, y in zip(s.x, s.y))
            out.append("EOD")
    if len(panels) > 1:
        out.append(f"set multiplot layout 1,{len(panels)}")
    for p_i, panel in enumerate(panels):
        out += [f"set title {_quote(panel.title)}", f"set xlabel {_quote(panel.xlabel)}",
                f"set ylabel {_quote(panel.ylabel)}"]
        parts = []
        for s_i, s in enumerate(panel.series):
            w = {"line": "lines", "step": "steps", "points": "linespoints"}[s.style]
            parts.append(f"$d{p_i}_{s_i} using 1:2 with {w} title {_quote(s.label)}")
        out.append("plot " + ", \\\n     ".join(parts) if parts else "plot 0 notitle")
    if len(panels) > 1:
        out.append("unset multiplot")
    return "\n".join(out) + "\n"
