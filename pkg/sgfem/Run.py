"""
Functions to simplify running sgfem.
"""
__copyright__ = "Copyright 2015-2017 Contributing Entities"
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
import argparse
import os
import sys

from .Error  import ConfigurationError, InputError, NumericalError
from .Logger import SgfemLogger
from .Sgfem  import Sgfem
from .Study  import Study

#: Subcommands and the :py:class:`sgfem.Sgfem.Sgfem` method each runs
COMMANDS = {"solve"        : "cmd_solve",
            "convergence"  : "cmd_convergence",
            "conservation" : "cmd_conservation",
            "interp-study" : "cmd_interp_study",
            "basis"        : "cmd_basis"}

#: Exit codes
EXIT_OK              = 0
EXIT_INPUT_ERROR     = 2
EXIT_NUMERICAL_ERROR = 3

#: Configuration keys that can be given on the command line, with their help
OPTIONS = [
    ("problem",                        "One of %s" % str(Study.PROBLEMS)),
    ("parameters",                     "Comma separated problem parameters a_i"),
    ("interfaces",                     "Comma separated interface coordinates (custom problem)"),
    ("domain_length",                  "Domain length L (custom problem)"),
    ("input_functions",                "Python file defining kappa_pieces and source (custom problem)"),
    ("method",                         "Comma separated methods from %s" % str(Study.METHODS_SUPPORTED)),
    ("orders",                         "Comma separated polynomial orders from %s" % str(Study.ORDERS_SUPPORTED)),
    ("mesh_sizes",                     "Comma separated, strictly increasing element counts N"),
    ("constrained",                    "Also solve the locally conservative problem? (true/false)"),
    ("control_volumes",                "Control volume kind"),
    ("constrained_solver",             "One of %s" % str(Study.CONSTRAINED_SOLVERS)),
    ("seed",                           "Random seed for randomized diagnostics"),
    ("number_of_processes",            "Worker processes for study cells; less than 1 means all cores"),
    ("solution_samples",               "Uniform samples of the solution profile"),
    ("newton_tolerance",               "Newton residual tolerance"),
    ("max_newton_iterations",          "Newton iteration limit"),
    ("fixed_point_tolerance",          "Constrained fixed point update tolerance"),
    ("max_fixed_point_iterations",     "Constrained fixed point iteration limit"),
    ("constrained_relative_tolerance", "Constrained Newton relative residual tolerance"),
    ("max_constrained_iterations",     "Constrained Newton iteration limit"),
    ("kkt_jacobian",                   "Constrained Newton Jacobian: exact or modified"),
    ("divergence_factor",              "Residual growth over its minimum treated as divergence"),
    ("condition_estimate",             "Estimate the Newton matrix condition number? (true/false)"),
]


def run_setup(command, output_dir, run_config=None, **kwargs):
    """
    Reads the run configuration file, if any.  Additional keyword arguments are configuration
    options (see :py:data:`OPTIONS`) and override the file.

    Named Keyword arguments:
        command -- one of the keys of :py:data:`COMMANDS` (required)
        output_dir -- where to put the output (required). Will be created if it doesn't already exist.
        run_config -- the configuration file
    """
    if command not in COMMANDS:
        msg = "command [%s] not defined. Expected values: %s" % (command, str(sorted(COMMANDS)))
        SgfemLogger.fatal(msg)
        raise ConfigurationError("external input", msg)

    if not output_dir:
        msg = "Must specify where to write output"
        SgfemLogger.fatal(msg)
        raise ConfigurationError("external input", msg)

    unknown = sorted(set(kwargs) - set(option for option, _ in OPTIONS))
    if unknown:
        msg = "Unknown options %s" % str(unknown)
        SgfemLogger.fatal(msg)
        raise ConfigurationError("external override", msg)

    # create folder if it doesn't already exist
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)

    overrides = {key: str(value) for key, value in kwargs.items() if value is not None}
    if command == "conservation":
        overrides.setdefault("constrained", "True")

    sg = Sgfem(output_dir)
    sg.read_configuration(run_config, overrides)
    return sg


def run_sgfem(command, output_dir, run_config=None, **kwargs):
    """
    Wrapper function to set up and run one sgfem command.
    The parameters are those read from the configuration file, overwritten with those passed into this function.
    """
    sg     = run_setup(command, output_dir, run_config, **kwargs)
    result = getattr(sg, COMMANDS[command])()
    sg.write_outputs()
    return result


USAGE = r"""

  run_sgfem <command> <output_dir> [--config file.ini] [--option value ...]

  Commands: solve, convergence, conservation, interp-study, basis

"""

def main(argv=None):
    """
    Does arg parsing for command line interface.  Returns the exit code.
    """
    parser = argparse.ArgumentParser(usage=USAGE)
    parser.add_argument("command",      choices=sorted(COMMANDS), help="What to run")
    parser.add_argument("output_dir",   type=str, help="Location to write sgfem output")
    parser.add_argument("-c", "--config", dest="run_config", type=str, help="The run configuration file")
    for option, help_text in OPTIONS:
        parser.add_argument("--%s" % option.replace("_", "-"), dest=option, type=str, help=help_text)

    args = parser.parse_args(sys.argv[1:] if argv is None else argv)

    # don't pass on items that aren't set
    args_dict = vars(args)
    for key in list(args_dict.keys()):
        if args_dict[key] is None: del args_dict[key]

    try:
        run_sgfem(**args_dict)
    except InputError as error:
        sys.stderr.write("ERROR %s: %s\n" % (error.__class__.__name__, error.msg))
        return EXIT_INPUT_ERROR
    except NumericalError as error:
        sys.stderr.write("ERROR %s: %s\n" % (error.__class__.__name__, error.msg))
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main())
