__copyright__ = "Copyright 2015 Contributing Entities"
__license__   = """
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
"""
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .Logger import SgfemLogger


class Plot(object):
    """
    Static SVG figures: log-log convergence plots, solution profiles and basis functions.
    """
    #: Figure size in inches
    FIGURE_SIZE = (6.4, 4.8)
    #: Markers cycled over the series of a convergence plot
    MARKERS     = ["o", "s", "^", "v", "D", "x", "+", "*"]

    @staticmethod
    def _save(fig, output_file, name):
        with matplotlib.rc_context({"svg.hashsalt": "sgfem", "svg.fonttype": "path"}):
            fig.savefig(output_file, format="svg", metadata={"Date": None})
        plt.close(fig)
        SgfemLogger.info("Wrote %s plot to %s" % (name, output_file))

    @staticmethod
    def convergence(table, output_file, ylabel, title=None, label_columns=("method", "p")):
        """
        One log-log series of error against h per series of the :py:class:`sgfem.Analysis.RateTable`,
        labelled with the fitted slope.
        """
        fig, ax = plt.subplots(figsize=Plot.FIGURE_SIZE)
        for idx, (_, slope_row) in enumerate(table.slopes.iterrows()):
            rows = table.rows
            for column in table.series:
                rows = rows.loc[rows[column] == slope_row[column]]
            label = " ".join("%s=%s" % (column, slope_row[column]) if column == "p" else str(slope_row[column])
                             for column in label_columns if column in table.series)
            ax.loglog(rows["h"], rows["error"], marker=Plot.MARKERS[idx % len(Plot.MARKERS)],
                      label="%s (slope %.2f)" % (label, slope_row["slope"]))
        ax.set_xlabel("h")
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, which="both", linewidth=0.3)
        ax.legend(fontsize="small")
        Plot._save(fig, output_file, ylabel)

    @staticmethod
    def profile(x, curves, output_file, title=None, interfaces=()):
        """
        Solution profile: each of *curves* (label -> values at *x*) against x, interfaces marked.
        """
        fig, ax = plt.subplots(figsize=Plot.FIGURE_SIZE)
        for label, values in curves.items():
            ax.plot(x, values, label=label, linewidth=1.0)
        for gamma in interfaces:
            ax.axvline(gamma, color="gray", linestyle=":", linewidth=0.8)
        ax.set_xlabel("x")
        ax.set_ylabel("u")
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small")
        Plot._save(fig, output_file, "profile")

    @staticmethod
    def basis(x, functions, output_file, title=None, gamma=None):
        """
        Shape functions on one element: *functions* maps labels to values at *x*.
        """
        fig, ax = plt.subplots(figsize=Plot.FIGURE_SIZE)
        for label, values in functions.items():
            ax.plot(x, values, label=label, linestyle="--" if label.startswith("enriched") else "-")
        if gamma is not None:
            ax.axvline(gamma, color="gray", linestyle=":", linewidth=0.8)
        ax.axhline(0.0, color="black", linewidth=0.5)
        ax.set_xlabel("x")
        if title:
            ax.set_title(title)
        ax.legend(fontsize="small", ncol=2)
        Plot._save(fig, output_file, "basis")
