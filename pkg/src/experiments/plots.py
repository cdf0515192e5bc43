"""Self-contained SVG log-log plots for regression experiments."""

from pathlib import Path
from typing import Optional, Sequence

import matplotlib
import numpy as np
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from const import APP_SLUG
from utils.logger import get_logger

logger = get_logger("plots")

# Fixed id salt and no date, so identical data gives identical bytes
SVG_RC = {
    "svg.hashsalt": APP_SLUG,
    "svg.fonttype": "none",
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}


def plot_name(prefix: str, slope: float) -> str:
    """File name carrying the fitted exponent, e.g. ``spectrum_t1_slope+2.0031.svg``."""
    return f"{prefix}_slope{slope:+.4f}.svg"


def loglog_plot(
    directory: Path,
    prefix: str,
    x: Sequence[float],
    y: Sequence[float],
    slope: float,
    intercept: float,
    xlabel: str,
    ylabel: str,
    title: Optional[str] = None,
    expected: Optional[float] = None,
) -> Path:
    """
    Scatter of (log x, log y) with the fitted line and a slope annotation.

    ``x`` and ``y`` are already logarithms; the fitted line is
    y = intercept + slope * x. An ``expected`` slope is drawn dashed through
    the data mean.

    Returns:
        Path of the written SVG
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    path = Path(directory) / plot_name(prefix, slope)

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(5.5, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(1, 1, 1)
        ax.plot(x, y, "o", ms=4.5, color="black", label="data")
        xs = np.linspace(float(x.min()), float(x.max()), 2)
        ax.plot(xs, intercept + slope * xs, "-", lw=1.6, color="tab:blue", label=f"fit, slope {slope:.4f}")
        if expected is not None:
            ax.plot(
                xs,
                float(y.mean()) + expected * (xs - float(x.mean())),
                "--",
                lw=1.2,
                color="tab:red",
                label=f"expected {expected:.4f}",
            )
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})

    logger.debug(f"Plot written to {path}")
    return path
