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
import configparser
import datetime
import multiprocessing
import os
import queue
import runpy
import traceback

import numpy as np

from .Analysis    import Analysis
from .Basis       import DofMap
from .Error       import ConfigurationError, Error
from .Logger      import SgfemLogger, setupLogging
from .Mesh        import ControlVolumeSet, Mesh
from .Performance import Performance
from .Problem     import Problem, ReferenceSolution
from .Solver      import Solver
from .Util        import Util


class Study(object):
    """
    Study class.

    Holds the run configuration (read from the ``[sgfem]`` and ``[solver]`` sections of the
    configuration file into class attributes), builds the problem and the discrete spaces,
    and computes the (method, p, N) cells of a study, in worker processes when configured.
    """
    #: Configuration file for the run, if any
    CONFIGURATION_FILE              = None
    #: Python file defining the pieces of a custom problem, if any
    CONFIGURATION_FUNCTIONS_FILE    = None
    #: Configuration written back with the output
    CONFIGURATION_OUTPUT_FILE       = "sgfem_config_output.txt"
    #: Output directory
    OUTPUT_DIR                      = None

    #: Functions read from :py:attr:`Study.CONFIGURATION_FUNCTIONS_FILE`
    CONFIGURED_FUNCTIONS            = {}

    #: Problem choices
    PROBLEM_EXAMPLE1                = "example1"
    PROBLEM_EXAMPLE2                = "example2"
    PROBLEM_CUSTOM                  = "custom"
    PROBLEMS                        = [PROBLEM_EXAMPLE1, PROBLEM_EXAMPLE2, PROBLEM_CUSTOM]
    #: Which problem to solve
    PROBLEM                         = PROBLEM_EXAMPLE1
    #: Problem parameters a_i; empty means the experiment defaults
    PARAMETERS                      = []
    #: Interfaces, custom problems only
    INTERFACES                      = []
    #: Domain length L, custom problems only
    DOMAIN_LENGTH                   = 1.0

    #: Method choices
    METHOD_FEM                      = "fem"
    METHOD_SGFEM                    = "sgfem"
    METHODS_SUPPORTED               = [METHOD_FEM, METHOD_SGFEM]
    #: Methods to run
    METHODS                         = [METHOD_SGFEM]
    #: Polynomial orders we support in studies
    ORDERS_SUPPORTED                = [1, 2, 3, 4]
    #: Orders to run
    ORDERS                          = [1]
    #: Mesh sizes N to run
    MESH_SIZES                      = [10, 20, 40, 80, 160]

    #: Solve the locally conservative (constrained) problem too?
    CONSTRAINED                     = False
    #: Control volume kind for constrained solves, one of :py:attr:`sgfem.Mesh.ControlVolumeSet.KINDS`
    CONTROL_VOLUMES                 = ControlVolumeSet.KIND_DUAL_MIDPOINT
    #: Constrained solver choices
    CONSTRAINED_SOLVER_NEWTON       = "newton"
    CONSTRAINED_SOLVER_FIXED_POINT  = "fixed_point"
    CONSTRAINED_SOLVERS             = [CONSTRAINED_SOLVER_NEWTON, CONSTRAINED_SOLVER_FIXED_POINT]
    #: Constrained solver to use
    CONSTRAINED_SOLVER              = CONSTRAINED_SOLVER_NEWTON

    #: Random seed for randomized diagnostics
    SEED                            = 0
    #: Number of processes for study cells (via :py:mod:`multiprocessing`)
    #: Set to less than 1 to use the result of :py:func:`multiprocessing.cpu_count`
    NUMBER_OF_PROCESSES             = 0
    #: Environment variable capping the number of processes
    THREADS_ENVIRONMENT_VARIABLE    = "SGFEM_THREADS"
    #: Uniform samples of the solution profile written by the solve command
    SOLUTION_SAMPLES                = 1000

    #: Cell kinds
    CELL_CONVERGENCE                = "convergence"
    CELL_CONSERVATION               = "conservation"
    CELL_INTERPOLATION              = "interpolation"

    #: Seconds to wait on the worker queue before checking the workers are alive
    WORKER_QUEUE_TIMEOUT            = 30

    #: Options that live in the [solver] section
    SOLVER_OPTIONS                  = ["newton_tolerance", "max_newton_iterations", "fixed_point_tolerance",
                                       "max_fixed_point_iterations", "constrained_relative_tolerance",
                                       "max_constrained_iterations", "kkt_jacobian", "divergence_factor",
                                       "condition_estimate"]

    def __init__(self):
        """
        This does nothing.  Study methods are static methods for now.
        """
        pass

    @staticmethod
    def read_functions(func_file):
        """
        Read the functions defining a custom problem from :py:attr:`Study.CONFIGURATION_FUNCTIONS_FILE`.

        The file is plain python defining ``kappa_pieces`` (numbers or callables ``kappa(x, u)``) and
        ``source`` (a number or callable ``f(x)``), and optionally ``dkappa_pieces``, ``u_box``,
        ``reference_pieces`` and ``reference_derivative_pieces``.
        """
        Study.CONFIGURED_FUNCTIONS = {}
        if not func_file:
            return
        if not os.path.exists(func_file):
            msg = "Functions file [%s] not found" % func_file
            SgfemLogger.fatal(msg)
            raise ConfigurationError(func_file, msg)
        SgfemLogger.info("Reading %s" % func_file)
        Study.CONFIGURED_FUNCTIONS = runpy.run_path(func_file)
        SgfemLogger.debug("Study.CONFIGURED_FUNCTIONS keys = %s" %
                          str(sorted(key for key in Study.CONFIGURED_FUNCTIONS if not key.startswith("__"))))

    @staticmethod
    def read_configuration(config_fullpath=None, overrides=None):
        """
        Read the configuration parameters from *config_fullpath* (may be None for defaults only), then
        apply *overrides*, a dict of option name to string value as given on the command line.
        """
        parser = configparser.RawConfigParser(
            defaults={'problem'                         :'example1',
                      'parameters'                      :'',
                      'interfaces'                      :'',
                      'domain_length'                   :'1.0',
                      'input_functions'                 :'',
                      'method'                          :'sgfem',
                      'orders'                          :'1',
                      'mesh_sizes'                      :'10,20,40,80,160',
                      'constrained'                     :'False',
                      'control_volumes'                 :ControlVolumeSet.KIND_DUAL_MIDPOINT,
                      'constrained_solver'              :'newton',
                      'seed'                            :'0',
                      'number_of_processes'             :'0',
                      'solution_samples'                :'1000',

                      # solver
                      'newton_tolerance'                :'1e-10',
                      'max_newton_iterations'           :'50',
                      'fixed_point_tolerance'           :'1e-10',
                      'max_fixed_point_iterations'      :'200',
                      'constrained_relative_tolerance'  :'1e-10',
                      'max_constrained_iterations'      :'50',
                      'kkt_jacobian'                    :Solver.KKT_JACOBIAN_EXACT,
                      'divergence_factor'               :'1e4',
                      'condition_estimate'              :'False',
                     })

        config_name = config_fullpath if config_fullpath else "command line"
        if config_fullpath:
            if not os.path.exists(config_fullpath):
                msg = "Configuration file [%s] not found" % config_fullpath
                SgfemLogger.fatal(msg)
                raise ConfigurationError(config_fullpath, msg)
            SgfemLogger.info("Reading configuration file %s" % config_fullpath)
            try:
                parser.read(config_fullpath)
            except configparser.Error as error:
                msg = "Couldn't parse configuration: %s" % str(error).replace("\n", " ")
                SgfemLogger.fatal(msg)
                raise ConfigurationError(config_fullpath, msg)
        for section in ['sgfem', 'solver']:
            if not parser.has_section(section):
                parser.add_section(section)
        for option, value in (overrides or {}).items():
            parser.set('solver' if option in Study.SOLVER_OPTIONS else 'sgfem', option, str(value))

        try:
            Study.PROBLEM                     = parser.get       ('sgfem', 'problem').strip()
            Study.PARAMETERS                  = Util.parse_list  (parser.get('sgfem', 'parameters'), float)
            Study.INTERFACES                  = Util.parse_list  (parser.get('sgfem', 'interfaces'), float)
            Study.DOMAIN_LENGTH               = parser.getfloat  ('sgfem', 'domain_length')
            Study.CONFIGURATION_FUNCTIONS_FILE= parser.get       ('sgfem', 'input_functions').strip() or None
            Study.METHODS                     = Util.parse_list  (parser.get('sgfem', 'method'), str)
            Study.ORDERS                      = Util.parse_list  (parser.get('sgfem', 'orders'), int)
            Study.MESH_SIZES                  = Util.parse_list  (parser.get('sgfem', 'mesh_sizes'), int)
            Study.CONSTRAINED                 = parser.getboolean('sgfem', 'constrained')
            Study.CONTROL_VOLUMES             = parser.get       ('sgfem', 'control_volumes').strip()
            Study.CONSTRAINED_SOLVER          = parser.get       ('sgfem', 'constrained_solver').strip()
            Study.SEED                        = parser.getint    ('sgfem', 'seed')
            Study.NUMBER_OF_PROCESSES         = parser.getint    ('sgfem', 'number_of_processes')
            Study.SOLUTION_SAMPLES            = parser.getint    ('sgfem', 'solution_samples')

            Solver.NEWTON_TOLERANCE               = parser.getfloat  ('solver', 'newton_tolerance')
            Solver.MAX_NEWTON_ITERATIONS          = parser.getint    ('solver', 'max_newton_iterations')
            Solver.FIXED_POINT_TOLERANCE          = parser.getfloat  ('solver', 'fixed_point_tolerance')
            Solver.MAX_FIXED_POINT_ITERATIONS     = parser.getint    ('solver', 'max_fixed_point_iterations')
            Solver.CONSTRAINED_RELATIVE_TOLERANCE = parser.getfloat  ('solver', 'constrained_relative_tolerance')
            Solver.MAX_CONSTRAINED_ITERATIONS     = parser.getint    ('solver', 'max_constrained_iterations')
            Solver.KKT_JACOBIAN                   = parser.get       ('solver', 'kkt_jacobian').strip()
            Solver.DIVERGENCE_FACTOR              = parser.getfloat  ('solver', 'divergence_factor')
            Solver.ESTIMATE_CONDITION             = parser.getboolean('solver', 'condition_estimate')
        except ValueError as error:
            msg = "Bad configuration value: %s" % str(error)
            SgfemLogger.fatal(msg)
            raise ConfigurationError(config_name, msg)

        # functions files named in the configuration file are relative to it
        if Study.CONFIGURATION_FUNCTIONS_FILE and config_fullpath and "input_functions" not in (overrides or {}) \
           and not os.path.isabs(Study.CONFIGURATION_FUNCTIONS_FILE):
            Study.CONFIGURATION_FUNCTIONS_FILE = os.path.join(os.path.dirname(os.path.abspath(config_fullpath)),
                                                              Study.CONFIGURATION_FUNCTIONS_FILE)

        Study.CONFIGURATION_FILE = config_fullpath
        Study.validate(config_name)
        Study.read_functions(Study.CONFIGURATION_FUNCTIONS_FILE)

    @staticmethod
    def validate(config_name):
        """
        Checks the configuration read into the class attributes.
        """
        problems = []
        if Study.PROBLEM not in Study.PROBLEMS:
            problems.append("problem [%s] not available. Expected values: %s" % (Study.PROBLEM, str(Study.PROBLEMS)))
        if len(Study.METHODS) == 0 or not set(Study.METHODS) <= set(Study.METHODS_SUPPORTED):
            problems.append("method %s not available. Expected values: %s" % (str(Study.METHODS), str(Study.METHODS_SUPPORTED)))
        if len(Study.ORDERS) == 0 or not set(Study.ORDERS) <= set(Study.ORDERS_SUPPORTED):
            problems.append("orders %s not supported. Expected a subset of %s" % (str(Study.ORDERS), str(Study.ORDERS_SUPPORTED)))
        if len(Study.MESH_SIZES) == 0 or min(Study.MESH_SIZES) < 2 or np.any(np.diff(Study.MESH_SIZES) <= 0):
            problems.append("mesh_sizes %s must be at least 2 and strictly increasing" % str(Study.MESH_SIZES))
        if Study.CONTROL_VOLUMES not in ControlVolumeSet.KINDS:
            problems.append("control_volumes [%s] not available. Expected values: %s" % (Study.CONTROL_VOLUMES, str(ControlVolumeSet.KINDS)))
        if Study.CONSTRAINED_SOLVER not in Study.CONSTRAINED_SOLVERS:
            problems.append("constrained_solver [%s] not available. Expected values: %s" % (Study.CONSTRAINED_SOLVER, str(Study.CONSTRAINED_SOLVERS)))
        if Solver.KKT_JACOBIAN not in [Solver.KKT_JACOBIAN_EXACT, Solver.KKT_JACOBIAN_MODIFIED]:
            problems.append("kkt_jacobian [%s] not available. Expected values: %s" % (Solver.KKT_JACOBIAN, str([Solver.KKT_JACOBIAN_EXACT, Solver.KKT_JACOBIAN_MODIFIED])))
        if Study.DOMAIN_LENGTH <= 0:
            problems.append("domain_length %g must be positive" % Study.DOMAIN_LENGTH)
        if Study.SOLUTION_SAMPLES < 2:
            problems.append("solution_samples %d must be at least 2" % Study.SOLUTION_SAMPLES)
        if Study.PROBLEM == Study.PROBLEM_CUSTOM and not Study.CONFIGURATION_FUNCTIONS_FILE:
            problems.append("custom problem needs input_functions")
        if Solver.NEWTON_TOLERANCE <= 0 or Solver.FIXED_POINT_TOLERANCE <= 0 or Solver.CONSTRAINED_RELATIVE_TOLERANCE <= 0:
            problems.append("solver tolerances must be positive")
        if problems:
            msg = "; ".join(problems)
            SgfemLogger.fatal(msg)
            raise ConfigurationError(config_name, msg)

    @staticmethod
    def write_configuration(output_dir):
        """
        Write the configuration parameters to function as a record with the output.
        """
        parser = configparser.RawConfigParser()
        parser.add_section('sgfem')
        parser.set('sgfem', 'problem',                  Study.PROBLEM)
        parser.set('sgfem', 'parameters',               Util.format_list(Study.PARAMETERS))
        parser.set('sgfem', 'interfaces',               Util.format_list(Study.INTERFACES))
        parser.set('sgfem', 'domain_length',            '%r' % Study.DOMAIN_LENGTH)
        if Study.CONFIGURATION_FUNCTIONS_FILE:
            parser.set('sgfem', 'input_functions',      Study.CONFIGURATION_FUNCTIONS_FILE)
        parser.set('sgfem', 'method',                   Util.format_list(Study.METHODS))
        parser.set('sgfem', 'orders',                   Util.format_list(Study.ORDERS))
        parser.set('sgfem', 'mesh_sizes',               Util.format_list(Study.MESH_SIZES))
        parser.set('sgfem', 'constrained',              'True' if Study.CONSTRAINED else 'False')
        parser.set('sgfem', 'control_volumes',          Study.CONTROL_VOLUMES)
        parser.set('sgfem', 'constrained_solver',       Study.CONSTRAINED_SOLVER)
        parser.set('sgfem', 'seed',                     '%d' % Study.SEED)
        parser.set('sgfem', 'number_of_processes',      '%d' % Study.NUMBER_OF_PROCESSES)
        parser.set('sgfem', 'solution_samples',         '%d' % Study.SOLUTION_SAMPLES)

        parser.add_section('solver')
        parser.set('solver', 'newton_tolerance',               '%r' % Solver.NEWTON_TOLERANCE)
        parser.set('solver', 'max_newton_iterations',          '%d' % Solver.MAX_NEWTON_ITERATIONS)
        parser.set('solver', 'fixed_point_tolerance',          '%r' % Solver.FIXED_POINT_TOLERANCE)
        parser.set('solver', 'max_fixed_point_iterations',     '%d' % Solver.MAX_FIXED_POINT_ITERATIONS)
        parser.set('solver', 'constrained_relative_tolerance', '%r' % Solver.CONSTRAINED_RELATIVE_TOLERANCE)
        parser.set('solver', 'max_constrained_iterations',     '%d' % Solver.MAX_CONSTRAINED_ITERATIONS)
        parser.set('solver', 'kkt_jacobian',                   Solver.KKT_JACOBIAN)
        parser.set('solver', 'divergence_factor',              '%r' % Solver.DIVERGENCE_FACTOR)
        parser.set('solver', 'condition_estimate',             'True' if Solver.ESTIMATE_CONDITION else 'False')

        with open(os.path.join(output_dir, Study.CONFIGURATION_OUTPUT_FILE), 'w', newline='\n') as output_file:
            parser.write(output_file)

    @staticmethod
    def build_problem():
        """
        Builds the configured :py:class:`sgfem.Problem.Problem`.
        """
        if Study.PROBLEM == Study.PROBLEM_EXAMPLE1:
            return Study._example(Problem.example1, Problem.EXAMPLE1_DEFAULTS)
        if Study.PROBLEM == Study.PROBLEM_EXAMPLE2:
            return Study._example(Problem.example2, Problem.EXAMPLE2_DEFAULTS)

        funcs = Study.CONFIGURED_FUNCTIONS
        for required in ["kappa_pieces", "source"]:
            if required not in funcs:
                msg = "Functions file [%s] doesn't define %s" % (Study.CONFIGURATION_FUNCTIONS_FILE, required)
                SgfemLogger.fatal(msg)
                raise ConfigurationError(Study.CONFIGURATION_FUNCTIONS_FILE, msg)
        problem = Problem.custom_problem(funcs["kappa_pieces"], funcs.get("dkappa_pieces"), funcs["source"],
                                         Study.INTERFACES, Study.DOMAIN_LENGTH, funcs.get("u_box", (-1.0, 1.0)))
        if "reference_pieces" in funcs and "reference_derivative_pieces" in funcs:
            problem.reference = ReferenceSolution(Study.INTERFACES, funcs["reference_pieces"],
                                                  funcs["reference_derivative_pieces"], {}, Study.DOMAIN_LENGTH)
        return problem

    @staticmethod
    def _example(builder, defaults):
        parameters = Study.PARAMETERS if Study.PARAMETERS else list(defaults)
        if len(parameters) != len(defaults):
            msg = "problem %s takes %d parameters; got %s" % (Study.PROBLEM, len(defaults), str(parameters))
            SgfemLogger.fatal(msg)
            raise ConfigurationError(Study.CONFIGURATION_FILE, msg)
        return builder(*parameters)

    @staticmethod
    def build_dofmap(problem, method, p, N):
        """
        The discrete space for one cell: uniform mesh with N elements, degree p, enriched for SGFEM.
        """
        mesh = Mesh.build_uniform_mesh(problem.domain_length, N, problem.interfaces)
        return DofMap(mesh, p, enriched=(method == Study.METHOD_SGFEM))

    @staticmethod
    def check_meshes(problem):
        """
        Builds every configured mesh so inadmissible (N, interfaces) pairs fail before any solve.
        """
        for N in Study.MESH_SIZES:
            Mesh.build_uniform_mesh(problem.domain_length, N, problem.interfaces)
            if Study.CONSTRAINED:
                Mesh.build_uniform_mesh(problem.domain_length, N, problem.interfaces).build_control_volumes(Study.CONTROL_VOLUMES)

    @staticmethod
    def constrained_solve(dofmap, problem, cvs):
        """
        Solves the locally conservative problem with the configured constrained solver.
        """
        if Study.CONSTRAINED_SOLVER == Study.CONSTRAINED_SOLVER_FIXED_POINT:
            return Solver.constrained_fixed_point(dofmap, problem.model, problem.source, cvs)
        return Solver.constrained_newton(dofmap, problem.model, problem.source, cvs)

    # ---------------------------------------------------------------- cells
    @staticmethod
    def convergence_cell(problem, method, p, N):
        """
        Newton solve and errors for one cell.
        """
        dofmap      = Study.build_dofmap(problem, method, p, N)
        u_h, report = Solver.newton_solve(dofmap, problem.model, problem.source, estimate_condition=True)
        result = {"method"      : method,
                  "p"           : p,
                  "N"           : N,
                  "h"           : dofmap.mesh.h,
                  "dofs"        : dofmap.dimension,
                  "iterations"  : report.iterations,
                  "residual"    : report.final_residual_inf,
                  "cond"        : report.condition_estimate}
        if problem.reference is not None:
            errors = Analysis.error_norms(u_h, problem.reference)
            result["err_l2"]     = errors.l2
            result["err_h1"]     = errors.h1_semi
            result["subdomains"] = errors.subdomain_frame()
        return result

    @staticmethod
    def conservation_cell(problem, method, p, N):
        """
        Unconstrained and constrained solves for one cell with their local conservation errors.
        """
        dofmap      = Study.build_dofmap(problem, method, p, N)
        cvs         = dofmap.mesh.build_control_volumes(Study.CONTROL_VOLUMES)
        u_h, _      = Solver.newton_solve(dofmap, problem.model, problem.source)
        constrained = Study.constrained_solve(dofmap, problem, cvs)

        lce_u, mean_u = Analysis.lce(u_h, problem.model, problem.source, cvs)
        lce_c, mean_c = Analysis.lce(constrained.solution, problem.model, problem.source, cvs)
        result = {"method"                : method,
                  "p"                     : p,
                  "N"                     : N,
                  "h"                     : dofmap.mesh.h,
                  "volumes"               : [(vol.left, vol.right) for vol in cvs],
                  "multipliers"           : constrained.multipliers,
                  "lce_unconstrained"     : lce_u,
                  "lce_constrained"       : lce_c,
                  "mean_lce_unconstrained": mean_u,
                  "mean_lce_constrained"  : mean_c,
                  "iterations"            : constrained.report.iterations}
        if problem.reference is not None:
            errors_u = Analysis.error_norms(u_h, problem.reference)
            errors_c = Analysis.error_norms(constrained.solution, problem.reference)
            result["err_l2"]           = errors_u.l2
            result["err_h1"]           = errors_u.h1_semi
            result["err_l2_lc"]        = errors_c.l2
            result["err_h1_lc"]        = errors_c.h1_semi
            result["err_l2_lc_lambda"] = Analysis.lambda_corrected_l2(constrained.solution, constrained.multipliers,
                                                                      cvs, problem.reference)
        return result

    @staticmethod
    def interpolation_cell(problem, method, p, N):
        """
        Standard and enriched interpolation errors of the reference solution for one cell.
        """
        dofmap   = Study.build_dofmap(problem, Study.METHOD_SGFEM, p, N)
        standard = Analysis.error_norms(Analysis.standard_interpolant(problem.reference, dofmap), problem.reference, w16=True)
        enriched = Analysis.error_norms(Analysis.enriched_interpolant(problem.reference, dofmap), problem.reference, w16=True)
        return {"p"            : p,
                "N"            : N,
                "h"            : dofmap.mesh.h,
                "standard_h1"  : standard.h1_semi,
                "standard_w16" : standard.w16_semi,
                "enriched_h1"  : enriched.h1_semi,
                "enriched_w16" : enriched.w16_semi}

    @staticmethod
    def run_cell(problem, index, kind, method, p, N):
        """
        Computes one cell, returning its result dict with the cell index and a performance record.
        """
        cell     = "%s %s p=%d N=%d" % (kind, method, p, N)
        start    = (datetime.datetime.now(), Util.get_process_mem_use_bytes()/1000000.0)
        SgfemLogger.info("Starting cell %s" % cell)
        if kind == Study.CELL_CONVERGENCE:
            result = Study.convergence_cell(problem, method, p, N)
        elif kind == Study.CELL_CONSERVATION:
            result = Study.conservation_cell(problem, method, p, N)
        else:
            result = Study.interpolation_cell(problem, method, p, N)
        result["index"]       = index
        result["performance"] = {Performance.PERFORMANCE_COL_STEP_NAME    : [kind],
                                 Performance.PERFORMANCE_COL_CELL         : [cell],
                                 Performance.PERFORMANCE_COL_START_TIME   : [start[0]],
                                 Performance.PERFORMANCE_COL_END_TIME     : [datetime.datetime.now()],
                                 Performance.PERFORMANCE_COL_START_MEM_MB : [start[1]],
                                 Performance.PERFORMANCE_COL_END_MEM_MB   : [Util.get_process_mem_use_bytes()/1000000.0]}
        SgfemLogger.info("Finished cell %s" % cell)
        return result

    @staticmethod
    def number_of_processes(num_cells):
        """
        Processes to use for *num_cells* cells: :py:attr:`Study.NUMBER_OF_PROCESSES` (all cores if less than 1),
        capped by the :py:attr:`Study.THREADS_ENVIRONMENT_VARIABLE` environment variable and by the number of cells.
        """
        num_processes = Study.NUMBER_OF_PROCESSES
        if num_processes < 1:
            num_processes = multiprocessing.cpu_count()
        cap = os.environ.get(Study.THREADS_ENVIRONMENT_VARIABLE)
        if cap:
            try:
                num_processes = min(num_processes, max(1, int(cap)))
            except ValueError:
                msg = "%s=%s is not an integer" % (Study.THREADS_ENVIRONMENT_VARIABLE, cap)
                SgfemLogger.fatal(msg)
                raise ConfigurationError(Study.THREADS_ENVIRONMENT_VARIABLE, msg)
        return max(1, min(num_processes, num_cells))

    @staticmethod
    def run_cells(problem, kind, cells, performance=None, overrides=None):
        """
        Computes the cells, a list of (method, p, N), in worker processes when more than one is configured.

        :return: list of result dicts in the order of *cells*
        """
        tasks         = [(index, kind, method, p, N) for index, (method, p, N) in enumerate(cells)]
        num_processes = Study.number_of_processes(len(tasks))
        results       = []

        if num_processes <= 1:
            for task in tasks:
                results.append(Study.run_cell(problem, *task))
        else:
            results = Study._run_workers(tasks, num_processes, overrides)

        results.sort(key=lambda result: result["index"])
        if performance is not None:
            for result in results:
                performance.add_records(result["performance"])
        return results

    @staticmethod
    def _run_workers(tasks, num_processes, overrides):
        todo_queue   = multiprocessing.Queue()
        done_queue   = multiprocessing.Queue()
        process_dict = {}
        for process_idx in range(1, 1+num_processes):
            SgfemLogger.info("Starting worker process %2d" % process_idx)
            process_dict[process_idx] = {
                "process":multiprocessing.Process(target=study_cell_process_worker,
                    args=(process_idx, Study.CONFIGURATION_FILE, overrides, Study.OUTPUT_DIR, todo_queue, done_queue)),
                "alive":True
            }
            process_dict[process_idx]["process"].start()

        for task in tasks:
            todo_queue.put(task)
        for process_idx in process_dict:
            todo_queue.put('DONE')

        results = []
        failure = None
        while any(info["alive"] for info in process_dict.values()):
            try:
                message = done_queue.get(True, Study.WORKER_QUEUE_TIMEOUT)
            except queue.Empty:
                for process_idx, info in process_dict.items():
                    if info["alive"] and not info["process"].is_alive():
                        SgfemLogger.error("Worker %2d died with exit code %s" % (process_idx, info["process"].exitcode))
                        info["alive"] = False
                        failure = failure or ("", "Worker process %d died" % process_idx)
                continue

            worker_num = message[0]
            if message[1] == "DONE":
                process_dict[worker_num]["alive"] = False
            elif message[1] == "COMPLETED":
                results.append(message[2])
            elif message[1] == "EXCEPTION":
                SgfemLogger.error("Worker %2d failed: %s %s" % (worker_num, message[2], message[3]))
                process_dict[worker_num]["alive"] = False
                failure = failure or (message[2], message[3])
                for info in process_dict.values():
                    if info["alive"]:
                        info["process"].terminate()
                        info["alive"] = False

        for info in process_dict.values():
            info["process"].join()

        if failure:
            error = Error.from_name(failure[0], failure[1])
            if error is None:
                raise RuntimeError(failure[1])
            raise error
        return results


def study_cell_process_worker(worker_num, run_config, overrides, output_dir, todo_queue, done_queue):
    """
    Process worker function.  Processes study cells from todo_queue until it receives 'DONE'.

    todo_queue has (index, kind, method, p, N) tuples.
    """
    worker_str = "_worker%02d" % worker_num

    from .Sgfem import Sgfem
    setupLogging(infoLogFilename  = None,
                 debugLogFilename = os.path.join(output_dir, Sgfem.DEBUG_LOG % worker_str) if output_dir else None,
                 logToConsole     = False)
    SgfemLogger.info("Worker %2d starting" % worker_num)

    try:
        # the child process doesn't have these set so read them
        Study.read_configuration(run_config, overrides)
        problem = Study.build_problem()

        while True:
            todo = todo_queue.get()
            if todo == 'DONE':
                done_queue.put( (worker_num, 'DONE') )
                SgfemLogger.debug("Received DONE from the todo_queue")
                return
            done_queue.put( (worker_num, "COMPLETED", Study.run_cell(problem, *todo)) )

    except Error as error:
        SgfemLogger.exception("Exception")
        done_queue.put( (worker_num, "EXCEPTION", error.__class__.__name__, error.msg) )
    except Exception:
        SgfemLogger.exception("Exception")
        done_queue.put( (worker_num, "EXCEPTION", "", traceback.format_exc()) )
