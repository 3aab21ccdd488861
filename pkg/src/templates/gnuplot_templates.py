#!/usr/bin/env python3
"""
NoisyLab - Plot Script Templates

Renders gnuplot scripts for sweep CSV files: energy error and fidelity
against bond length, one line per single-qubit noise level p1.
"""

from dataclasses import dataclass, field
from typing import List, Sequence

from jinja2 import Environment, StrictUndefined

try:
    from ..utils.logger import get_logger
except ImportError:
    from utils.logger import get_logger


SWEEP_TEMPLATE = """\
# gnuplot script generated by NoisyLab from {{ csv_name }}
set datafile separator ","
set key outside right
set grid
set terminal {{ terminal }} size 1200,500
set output "{{ output }}"
set multiplot layout 1,2 title "{{ title }}"

set xlabel "bond length (Angstrom)"
set ylabel "energy error (Ha)"
set logscale y
plot \\
{%- for p1 in noise_levels %}
    "{{ csv_name }}" using ((strcol(1) eq "{{ record_type }}" && strcol(2) eq "ok" && abs($4 - {{ p1 }}) < 1e-12) ? $3 : 1/0):11 \\
        with linespoints title "p1 = {{ p1 }}"{{ ", \\\\" if not loop.last else "" }}
{%- endfor %}

unset logscale y
set ylabel "fidelity"
plot \\
{%- for p1 in noise_levels %}
    "{{ csv_name }}" using ((strcol(1) eq "{{ record_type }}" && strcol(2) eq "ok" && abs($4 - {{ p1 }}) < 1e-12) ? $3 : 1/0):12 \\
        with linespoints title "p1 = {{ p1 }}"{{ ", \\\\" if not loop.last else "" }}
{%- endfor %}

unset multiplot
"""


@dataclass
class PlotConfig:
    """Inputs for a sweep plot script."""

    csv_name: str
    noise_levels: List[float] = field(default_factory=list)
    title: str = "NoisyLab sweep"
    output: str = "sweep.png"
    terminal: str = "pngcairo"
    record_type: str = "sweep"


class GnuplotTemplateEngine:
    """Jinja2 renderer for gnuplot scripts."""

    def __init__(self):
        self.logger = get_logger()
        self.environment = Environment(undefined=StrictUndefined, keep_trailing_newline=True,
                                       autoescape=False)
        self.templates = {
            'sweep': self.environment.from_string(SWEEP_TEMPLATE),
        }

    def render(self, config: PlotConfig, template_name: str = 'sweep') -> str:
        """
        Render a plot script.

        Args:
            config: plot inputs
            template_name: registered template

        Returns:
            gnuplot script text
        """
        if template_name not in self.templates:
            raise ValueError(f"Unknown plot template {template_name!r}")
        if not config.noise_levels:
            raise ValueError("Plot script needs at least one noise level")

        script = self.templates[template_name].render(
            csv_name=config.csv_name,
            noise_levels=[repr(float(p)) for p in config.noise_levels],
            title=config.title,
            output=config.output,
            terminal=config.terminal,
            record_type=config.record_type,
        )
        self.logger.debug(f"Rendered {template_name} plot script for {config.csv_name}", "PLOT")
        return script


def render_sweep_script(csv_name: str, noise_levels: Sequence[float], output: str = "sweep.png") -> str:
    """Convenience wrapper around GnuplotTemplateEngine for sweep CSVs."""
    ordered = sorted(set(float(p) for p in noise_levels))
    return GnuplotTemplateEngine().render(PlotConfig(csv_name, ordered, output=output))
