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
import os

import numpy as np
import pandas as pd

from .Analysis    import Analysis
from .Assembly    import DiscreteSolution
from .Error       import ConfigurationError, InsufficientData
from .Logger      import SgfemLogger, setupLogging
from .Mesh        import Mesh
from .Performance import Performance
from .Plot        import Plot
from .Solver      import Solver
from .Study       import Study
from .Util        import Util


class Sgfem(object):
    """
    This is the model itself.  Should be simple and run pieces and store the big data structures.

    Each ``cmd_*`` method runs one command of the command line over the configured problem and
    writes its tables and plots to the output directory.
    """

    #: Info log for this run
    INFO_LOG  = "sgfem_info%s.log"
    #: Debug log for this run
    DEBUG_LOG = "sgfem_debug%s.log"

    #: Output files
    OUTPUT_SOLUTION_FILE          = "solution.csv"
    OUTPUT_SOLUTION_PLOT          = "solution.svg"
    OUTPUT_REPORT_FILE            = "report.txt"
    OUTPUT_RATES_FILE             = "rates.csv"
    OUTPUT_SUBDOMAIN_ERRORS_FILE  = "errors_by_subdomain.csv"
    OUTPUT_H1_PLOT                = "h1.svg"
    OUTPUT_L2_PLOT                = "l2.svg"
    OUTPUT_LCE_FILE               = "lce.csv"
    OUTPUT_LCE_MEAN_FILE          = "lce_mean.csv"
    OUTPUT_LCE_MEAN_PLOT          = "lce_mean.svg"
    OUTPUT_RATES_LC_FILE          = "rates_lc.csv"
    OUTPUT_L2_LC_PLOT             = "l2_lc.svg"
    OUTPUT_INTERP_RATES_FILE      = "interp_rates.csv"
    OUTPUT_INTERP_PLOT            = "interp_h1.svg"
    OUTPUT_BASIS_FILE             = "basis.csv"
    OUTPUT_BASIS_PLOT             = "basis.svg"

    #: Samples per element for the basis rendering
    BASIS_SAMPLES                 = 201
    #: Step sizes for the Jacobian consistency check reported by the solve command
    JACOBIAN_CHECK_EPSILONS       = (1e-2, 1e-3, 1e-4)

    def __init__(self, output_dir, logname_append="", appendLog=False, logToConsole=True):
        """
        Constructor.  Sets up logging to files in *output_dir*.
        """
        Study.OUTPUT_DIR = output_dir

        setupLogging(infoLogFilename  = os.path.join(output_dir, Sgfem.INFO_LOG % logname_append),
                     debugLogFilename = os.path.join(output_dir, Sgfem.DEBUG_LOG % logname_append),
                     logToConsole     = logToConsole,
                     append           = appendLog)

        #: the configured :py:class:`sgfem.Problem.Problem`
        self.problem     = None
        #: command line overrides, passed on to worker processes
        self.overrides   = {}
        #: :py:class:`sgfem.Performance.Performance`
        self.performance = Performance()

    def read_configuration(self, run_config=None, overrides=None):
        """
        Reads the configuration file and overrides, then builds the problem.
        """
        self.performance.record_step_start("read_configuration")
        self.overrides = dict(overrides or {})
        Study.read_configuration(run_config, self.overrides)
        self.problem   = Study.build_problem()
        SgfemLogger.info("Problem %s parameters %s interfaces %s" %
                         (self.problem.name, str(self.problem.parameters), str(list(self.problem.interfaces))))
        Study.check_meshes(self.problem)
        self.performance.record_step_end()

    def write_outputs(self):
        """
        Writes the effective configuration and the performance records.
        """
        SgfemLogger.info("Process memory use %s" % Util.get_process_mem_use_str())
        Study.write_configuration(Study.OUTPUT_DIR)
        self.performance.write(Study.OUTPUT_DIR)

    def _output(self, filename):
        return os.path.join(Study.OUTPUT_DIR, filename)

    def _require_reference(self, command):
        if self.problem.reference is None:
            msg = "%s needs a reference solution; problem %s has none" % (command, self.problem.name)
            SgfemLogger.fatal(msg)
            raise ConfigurationError(Study.CONFIGURATION_FILE, msg)

    def _grid(self, methods=None):
        methods = methods if methods is not None else Study.METHODS
        return [(method, p, N) for method in methods for p in Study.ORDERS for N in Study.MESH_SIZES]

    @staticmethod
    def _add_rates(frame, error_columns, series):
        """
        Fits error against h per series for each of *error_columns*, adding ``slope_<name>`` (the
        fitted slope, on every row of the series) and ``pairwise_<name>`` columns.

        :return: (frame, dict of name -> :py:class:`sgfem.Analysis.RateTable`)
        """
        tables = {}
        for column in error_columns:
            name  = column[len("err_"):] if column.startswith("err_") else column
            rows  = frame[series + ["N", "h"]].copy()
            rows["error"] = frame[column].to_numpy(dtype=float)
            table = Analysis.fit_rates(rows, series)
            tables[name] = table

            slopes = table.slopes.rename(columns={"slope": "slope_%s" % name})
            frame  = frame.merge(slopes, on=series, how="left", sort=False)
            pairwise = table.rows[series + ["N", "pairwise_slope"]].rename(columns={"pairwise_slope": "pairwise_%s" % name})
            frame  = frame.merge(pairwise, on=series + ["N"], how="left", sort=False)
        return frame, tables

    # ---------------------------------------------------------------- solve
    def cmd_solve(self):
        """
        Newton solve of one (method, p, N): writes the sampled profile, the run report and a
        profile plot.
        """
        if len(Study.METHODS) != 1 or len(Study.ORDERS) != 1 or len(Study.MESH_SIZES) != 1:
            msg = "solve takes a single method, order and mesh size; got method %s orders %s mesh_sizes %s" % \
                  (str(Study.METHODS), str(Study.ORDERS), str(Study.MESH_SIZES))
            SgfemLogger.fatal(msg)
            raise ConfigurationError(Study.CONFIGURATION_FILE, msg)
        method, p, N = Study.METHODS[0], Study.ORDERS[0], Study.MESH_SIZES[0]
        problem      = self.problem

        self.performance.record_step_start("solve")
        dofmap      = Study.build_dofmap(problem, method, p, N)
        u_h, report = Solver.newton_solve(dofmap, problem.model, problem.source, estimate_condition=True)
        SgfemLogger.info("Newton: %s" % str(report))

        self.performance.record_step_start("solution_output")
        solution_df = self.sample_solution(u_h, problem.reference)
        Util.write_dataframe(solution_df, "solution_df", self._output(Sgfem.OUTPUT_SOLUTION_FILE))

        curves = {"u_h (%s p=%d N=%d)" % (method, p, N): solution_df["u_h"].to_numpy()}
        if problem.reference is not None:
            curves["u (reference)"] = solution_df["u_ref"].to_numpy()
        Plot.profile(solution_df["x"].to_numpy(), curves, self._output(Sgfem.OUTPUT_SOLUTION_PLOT),
                     title=problem.name, interfaces=problem.interfaces)

        self.performance.record_step_start("jacobian_check")
        if problem.model.linear:
            # residual is affine; central differences are exact up to roundoff
            check = ["jacobian_check_slope = n/a"]
        else:
            rng       = np.random.default_rng(Study.SEED)
            perturbed = DiscreteSolution(dofmap, u_h.coefficients + 0.1*rng.uniform(-1.0, 1.0, dofmap.dimension))
            direction = rng.uniform(-1.0, 1.0, dofmap.dimension)
            diffs, jacobian_slope = Analysis.jacobian_consistency(perturbed, direction, problem.model, problem.source,
                                                                  Sgfem.JACOBIAN_CHECK_EPSILONS)
            check = ["jacobian_check_epsilons = %s" % Util.format_list(Sgfem.JACOBIAN_CHECK_EPSILONS),
                     "jacobian_check_differences = %s" % ",".join("%.17g" % diff for diff in diffs),
                     "jacobian_check_slope = %.17g" % jacobian_slope]

        lines = ["problem = %s" % problem.name,
                 "parameters = %s" % Util.format_list(problem.parameters),
                 "interfaces = %s" % Util.format_list(problem.interfaces),
                 "method = %s" % method,
                 "p = %d" % p,
                 "N = %d" % N,
                 "dofs = %d" % dofmap.dimension,
                 "iterations = %d" % report.iterations,
                 "converged = %s" % report.converged,
                 "final_residual_inf = %.17g" % report.final_residual_inf,
                 "condition_estimate = %.17g" % report.condition_estimate]
        if problem.reference is not None:
            errors = Analysis.error_norms(u_h, problem.reference)
            lines += ["contrast_ratio = %.17g" % problem.contrast_ratio(),
                      "err_l2 = %.17g" % errors.l2,
                      "err_h1 = %.17g" % errors.h1_semi]
            for key, value in sorted(problem.reference.constants.items()):
                lines.append("constant_%s = %.17g" % (key, value))
        lines += ["seed = %d" % Study.SEED] + check
        Util.write_text(lines, "report", self._output(Sgfem.OUTPUT_REPORT_FILE))
        self.performance.record_step_end()
        return u_h, report

    @staticmethod
    def sample_solution(u_h, reference=None):
        """
        Samples *u_h* (and *reference*, if given) at :py:attr:`Study.SOLUTION_SAMPLES` uniform points plus
        all nodes, with a row from each side at every interface.

        :return: :py:class:`pandas.DataFrame` with columns x, u_h, u_ref, side, du_h, du_ref
        """
        mesh = u_h.mesh
        x    = np.union1d(np.linspace(0.0, mesh.domain_length, Study.SOLUTION_SAMPLES), mesh.nodes)
        for gamma in mesh.interfaces:
            x = x[~np.isclose(x, gamma, rtol=0.0, atol=Mesh.INTERFACE_TOLERANCE*mesh.domain_length)]
        side = np.zeros(len(x), dtype=int)

        x    = np.concatenate((x, np.repeat(mesh.interfaces, 2)))
        side = np.concatenate((side, np.tile([Mesh.LEFT, Mesh.RIGHT], len(mesh.interfaces))))
        order = np.lexsort((side, x))
        x, side = x[order], side[order]

        solution_df = pd.DataFrame({"x": x})
        u_h_values  = np.zeros(len(x))
        du_h_values = np.zeros(len(x))
        u_ref       = np.full(len(x), np.nan)
        du_ref      = np.full(len(x), np.nan)
        for flag in [Mesh.LEFT, Mesh.RIGHT]:
            mask = side == flag
            if flag == Mesh.LEFT:
                # interior points are evaluated from the left
                mask |= side == 0
            if not mask.any():
                continue
            u_h_values[mask]  = u_h.value(x[mask], flag)
            du_h_values[mask] = u_h.derivative(x[mask], flag)
            if reference is not None:
                u_ref[mask]  = reference(x[mask], flag)
                du_ref[mask] = reference.derivative(x[mask], flag)
        solution_df["u_h"]    = u_h_values
        solution_df["u_ref"]  = u_ref
        solution_df["side"]   = side
        solution_df["du_h"]   = du_h_values
        solution_df["du_ref"] = du_ref
        return solution_df

    # ---------------------------------------------------------------- convergence
    def cmd_convergence(self):
        """
        Newton solves over the (method, p, N) grid with L2 and H1 rates, per-subdomain errors
        and log-log plots.
        """
        if len(Study.MESH_SIZES) < Analysis.MIN_RATE_ROWS:
            msg = "convergence needs at least %d mesh sizes; got %s" % (Analysis.MIN_RATE_ROWS, str(Study.MESH_SIZES))
            SgfemLogger.fatal(msg)
            raise InsufficientData(msg)
        self._require_reference("convergence")

        self.performance.record_step_start("convergence")
        results = Study.run_cells(self.problem, Study.CELL_CONVERGENCE, self._grid(), self.performance, self.overrides)

        self.performance.record_step_start("convergence_output")
        columns  = ["method", "p", "N", "h", "dofs", "err_l2", "err_h1", "iterations", "residual", "cond"]
        rates_df = pd.DataFrame([{column: result[column] for column in columns} for result in results], columns=columns)
        rates_df, tables = Sgfem._add_rates(rates_df, ["err_l2", "err_h1"], ["method", "p"])
        rates_df = rates_df[["method", "p", "N", "h", "err_l2", "err_h1", "slope_l2", "slope_h1",
                             "pairwise_l2", "pairwise_h1", "dofs", "iterations", "residual", "cond"]]
        Util.write_dataframe(rates_df, "rates_df", self._output(Sgfem.OUTPUT_RATES_FILE))

        subdomain_frames = []
        for result in results:
            frame = result["subdomains"].copy()
            for column in ["h", "N", "p", "method"]:
                frame.insert(0, column, result[column])
            subdomain_frames.append(frame)
        Util.write_dataframe(pd.concat(subdomain_frames, ignore_index=True), "subdomain_errors_df",
                             self._output(Sgfem.OUTPUT_SUBDOMAIN_ERRORS_FILE))

        Plot.convergence(tables["h1"], self._output(Sgfem.OUTPUT_H1_PLOT), "|u - u_h|_1", title=self.problem.name)
        Plot.convergence(tables["l2"], self._output(Sgfem.OUTPUT_L2_PLOT), "||u - u_h||_0", title=self.problem.name)
        for _, row in tables["h1"].slopes.iterrows():
            SgfemLogger.info("H1 slope %-5s p=%d: %.3f" % (row["method"], row["p"], row["slope"]))
        self.performance.record_step_end()
        return rates_df

    # ---------------------------------------------------------------- conservation
    def cmd_conservation(self):
        """
        Unconstrained and locally conservative solves over the grid: per-volume and mean local
        conservation errors, and the corrected L2 rates when a reference solution exists.
        """
        if not Study.CONSTRAINED:
            msg = "conservation needs constrained = True"
            SgfemLogger.fatal(msg)
            raise ConfigurationError(Study.CONFIGURATION_FILE, msg)

        self.performance.record_step_start("conservation")
        results = Study.run_cells(self.problem, Study.CELL_CONSERVATION, self._grid(), self.performance, self.overrides)

        self.performance.record_step_start("conservation_output")
        lce_rows = []
        for result in results:
            for k, (left, right) in enumerate(result["volumes"]):
                lce_rows.append({"method"            : result["method"],
                                 "p"                 : result["p"],
                                 "N"                 : result["N"],
                                 "h"                 : result["h"],
                                 "volume"            : k,
                                 "left"              : left,
                                 "right"             : right,
                                 "lce_unconstrained" : result["lce_unconstrained"][k],
                                 "lce_constrained"   : result["lce_constrained"][k],
                                 "multiplier"        : result["multipliers"][k]})
        lce_df = pd.DataFrame(lce_rows)
        Util.write_dataframe(lce_df, "lce_df", self._output(Sgfem.OUTPUT_LCE_FILE))

        mean_columns = ["method", "p", "N", "h", "mean_lce_unconstrained", "mean_lce_constrained", "iterations"]
        mean_df = pd.DataFrame([{column: result[column] for column in mean_columns} for result in results], columns=mean_columns)
        Util.write_dataframe(mean_df, "lce_mean_df", self._output(Sgfem.OUTPUT_LCE_MEAN_FILE))

        if len(Study.MESH_SIZES) < Analysis.MIN_RATE_ROWS:
            SgfemLogger.info("Fewer than %d mesh sizes; skipping %s and plots" % (Analysis.MIN_RATE_ROWS, Sgfem.OUTPUT_RATES_LC_FILE))
            self.performance.record_step_end()
            return lce_df, mean_df, None

        mean_rows = mean_df[["method", "p", "N", "h"]].copy()
        mean_rows["error"] = mean_df["mean_lce_unconstrained"]
        Plot.convergence(Analysis.fit_rates(mean_rows, ["method", "p"]), self._output(Sgfem.OUTPUT_LCE_MEAN_PLOT),
                         "mean |LCE| (unconstrained)", title=self.problem.name)

        rates_lc_df = None
        if self.problem.reference is not None:
            columns     = ["method", "p", "N", "h", "err_l2", "err_h1", "err_l2_lc", "err_h1_lc", "err_l2_lc_lambda"]
            rates_lc_df = pd.DataFrame([{column: result[column] for column in columns} for result in results], columns=columns)
            rates_lc_df, tables = Sgfem._add_rates(rates_lc_df, columns[4:], ["method", "p"])
            Util.write_dataframe(rates_lc_df, "rates_lc_df", self._output(Sgfem.OUTPUT_RATES_LC_FILE))

            # one plot with uncorrected and corrected L2 series
            combined = []
            for name, label in [("l2", "unconstrained"), ("l2_lc", "LC"), ("l2_lc_lambda", "LC - lambda")]:
                rows = tables[name].rows[["method", "p", "N", "h", "error"]].copy()
                rows.insert(0, "series", label)
                combined.append(rows)
            Plot.convergence(Analysis.fit_rates(pd.concat(combined, ignore_index=True), ["series", "method", "p"]),
                             self._output(Sgfem.OUTPUT_L2_LC_PLOT), "||u - u_h||_0", title=self.problem.name,
                             label_columns=("series", "method", "p"))
        self.performance.record_step_end()
        return lce_df, mean_df, rates_lc_df

    # ---------------------------------------------------------------- interpolation
    def cmd_interp_study(self):
        """
        H1 and W^{1,6} seminorm errors of the standard and enriched interpolants of the reference
        solution across the grid, with fitted slopes.
        """
        if len(Study.MESH_SIZES) < Analysis.MIN_RATE_ROWS:
            msg = "interp-study needs at least %d mesh sizes; got %s" % (Analysis.MIN_RATE_ROWS, str(Study.MESH_SIZES))
            SgfemLogger.fatal(msg)
            raise InsufficientData(msg)
        self._require_reference("interp-study")

        self.performance.record_step_start("interp_study")
        results = Study.run_cells(self.problem, Study.CELL_INTERPOLATION, self._grid([Study.METHOD_SGFEM]),
                                  self.performance, self.overrides)

        self.performance.record_step_start("interp_study_output")
        columns   = ["p", "N", "h", "standard_h1", "standard_w16", "enriched_h1", "enriched_w16"]
        interp_df = pd.DataFrame([{column: result[column] for column in columns} for result in results], columns=columns)
        interp_df, tables = Sgfem._add_rates(interp_df, columns[3:], ["p"])
        Util.write_dataframe(interp_df, "interp_df", self._output(Sgfem.OUTPUT_INTERP_RATES_FILE))

        combined = []
        for name in ["standard_h1", "enriched_h1"]:
            rows = tables[name].rows[["p", "N", "h", "error"]].copy()
            rows.insert(0, "method", name.split("_")[0])
            combined.append(rows)
        Plot.convergence(Analysis.fit_rates(pd.concat(combined, ignore_index=True), ["method", "p"]),
                         self._output(Sgfem.OUTPUT_INTERP_PLOT), "|v - Iv|_1", title=self.problem.name)
        self.performance.record_step_end()
        return interp_df

    # ---------------------------------------------------------------- basis
    def cmd_basis(self):
        """
        Samples the standard and enriched shape functions on the first enriched element of the
        first configured (p, N).
        """
        p, N   = Study.ORDERS[0], Study.MESH_SIZES[0]
        dofmap = Study.build_dofmap(self.problem, Study.METHOD_SGFEM, p, N)
        if len(dofmap.mesh.enriched_elements) == 0:
            msg = "basis needs a mesh with an enriched element; problem %s has no interfaces" % self.problem.name
            SgfemLogger.fatal(msg)
            raise ConfigurationError(Study.CONFIGURATION_FILE, msg)

        self.performance.record_step_start("basis")
        e          = dofmap.mesh.enriched_elements[0]
        enrichment = dofmap.enrichments[e]
        element    = dofmap.mesh.element(e)
        x          = np.linspace(element.left, element.right, Sgfem.BASIS_SAMPLES)
        x          = np.union1d(x, [enrichment.gamma])

        # the local tables hold the p+1 standard functions then the p+1 enriched ones
        values, _  = dofmap.local_eval(e, x)
        functions  = {}
        for k in range(p+1):
            functions["phi_%d" % k] = values[k]
        for k in range(p+1):
            functions["enriched_%d" % k] = values[p+1+k]

        basis_df = pd.DataFrame({"x": x})
        for label, column in functions.items():
            basis_df[label] = column
        Util.write_dataframe(basis_df, "basis_df", self._output(Sgfem.OUTPUT_BASIS_FILE))
        Plot.basis(x, functions, self._output(Sgfem.OUTPUT_BASIS_PLOT),
                   title="p=%d element (%.4g, %.4g)" % (p, element.left, element.right), gamma=enrichment.gamma)
        self.performance.record_step_end()
        return basis_df
