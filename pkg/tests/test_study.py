import configparser
import os

import pytest

from sgfem.Error   import ConfigurationError, NonpositiveCoefficient
from sgfem.Mesh    import ControlVolumeSet
from sgfem.Solver  import Solver
from sgfem.Study   import Study
from sgfem.Util    import Util

pytestmark = pytest.mark.usefixtures("restore_configuration")

HOME_DIR      = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir)
CUSTOM_CONFIG = os.path.join(HOME_DIR, "sgfem", "Examples", "Custom", "config_sgfem.txt")


def test_defaults():
    Study.read_configuration()
    assert Study.PROBLEM         == Study.PROBLEM_EXAMPLE1
    assert Study.METHODS         == [Study.METHOD_SGFEM]
    assert Study.ORDERS          == [1]
    assert Study.MESH_SIZES      == [10, 20, 40, 80, 160]
    assert Study.CONTROL_VOLUMES == ControlVolumeSet.KIND_DUAL_MIDPOINT
    assert not Study.CONSTRAINED
    assert Solver.KKT_JACOBIAN   == Solver.KKT_JACOBIAN_EXACT

    problem = Study.build_problem()
    assert problem.name       == "example1"
    assert problem.parameters == (0.01, -6.0, 1.0)

def test_overrides():
    Study.read_configuration(None, {"problem"           : "example2",
                                    "parameters"        : "1,0.05,100,0.1",
                                    "orders"            : "2, 3",
                                    "mesh_sizes"        : "10,20",
                                    "constrained"       : "true",
                                    "kkt_jacobian"      : "modified",
                                    "newton_tolerance"  : "1e-12"})
    assert Study.PROBLEM      == "example2"
    assert Study.PARAMETERS   == [1.0, 0.05, 100.0, 0.1]
    assert Study.ORDERS       == [2, 3]
    assert Study.MESH_SIZES   == [10, 20]
    assert Study.CONSTRAINED
    assert Solver.KKT_JACOBIAN     == Solver.KKT_JACOBIAN_MODIFIED
    assert Solver.NEWTON_TOLERANCE == 1e-12

@pytest.mark.parametrize("overrides", [
    {"problem"         : "example3"},
    {"method"          : "xfem"},
    {"orders"          : "5"},
    {"orders"          : "two"},
    {"mesh_sizes"      : "20,10"},
    {"mesh_sizes"      : "1"},
    {"control_volumes" : "everything"},
    {"kkt_jacobian"    : "secant"},
    {"newton_tolerance": "0"},
    {"problem"         : "custom"},
])
def test_bad_configuration(overrides):
    with pytest.raises(ConfigurationError):
        Study.read_configuration(None, overrides)

def test_wrong_parameter_count():
    Study.read_configuration(None, {"parameters": "1,2"})
    with pytest.raises(ConfigurationError):
        Study.build_problem()

def test_missing_files(tmp_path):
    with pytest.raises(ConfigurationError):
        Study.read_configuration(str(tmp_path / "nothing.txt"))
    with pytest.raises(ConfigurationError):
        Study.read_configuration(None, {"problem": "custom", "input_functions": str(tmp_path / "nothing.py")})

def test_custom_functions_relative_to_config():
    Study.read_configuration(CUSTOM_CONFIG)
    assert os.path.isabs(Study.CONFIGURATION_FUNCTIONS_FILE)
    assert Study.METHODS == [Study.METHOD_FEM, Study.METHOD_SGFEM]

    problem = Study.build_problem()
    assert problem.name == "custom"
    assert list(problem.interfaces) == [0.3183098861837907]
    assert problem.reference is not None
    assert problem.model.linear

def test_custom_functions_errors(tmp_path):
    functions = tmp_path / "functions.py"
    functions.write_text("kappa_pieces = [1.0, -2.0]\nsource = 1.0\n")
    Study.read_configuration(None, {"problem": "custom", "interfaces": "0.5", "input_functions": str(functions)})
    with pytest.raises(NonpositiveCoefficient):
        Study.build_problem()

    functions.write_text("kappa_pieces = [1.0, 2.0]\n")
    Study.read_configuration(None, {"problem": "custom", "interfaces": "0.5", "input_functions": str(functions)})
    with pytest.raises(ConfigurationError):
        Study.build_problem()

def test_write_configuration(tmp_path):
    Study.read_configuration(None, {"problem": "example2", "orders": "1,2", "constrained": "True"})
    Study.write_configuration(str(tmp_path))

    parser = configparser.RawConfigParser()
    parser.read(str(tmp_path / Study.CONFIGURATION_OUTPUT_FILE))
    assert parser.get("sgfem", "problem")  == "example2"
    assert parser.get("sgfem", "orders")   == "1,2"
    assert parser.getboolean("sgfem", "constrained")
    assert parser.getfloat("solver", "newton_tolerance") == Solver.NEWTON_TOLERANCE

    # and it reads back to the same configuration
    Study.read_configuration(str(tmp_path / Study.CONFIGURATION_OUTPUT_FILE))
    assert Study.PROBLEM == "example2"
    assert Study.ORDERS  == [1, 2]
    assert Study.CONSTRAINED

def test_number_of_processes(monkeypatch):
    Study.read_configuration(None, {"number_of_processes": "3"})
    monkeypatch.delenv(Study.THREADS_ENVIRONMENT_VARIABLE, raising=False)
    assert Study.number_of_processes(10) == 3
    assert Study.number_of_processes(2)  == 2

    monkeypatch.setenv(Study.THREADS_ENVIRONMENT_VARIABLE, "1")
    assert Study.number_of_processes(10) == 1
    monkeypatch.setenv(Study.THREADS_ENVIRONMENT_VARIABLE, "many")
    with pytest.raises(ConfigurationError):
        Study.number_of_processes(10)

def test_run_cells(example1):
    Study.read_configuration(None, {"number_of_processes": "1"})
    cells   = [("sgfem", 1, 20), ("fem", 1, 10), ("sgfem", 2, 10)]
    results = Study.run_cells(example1, Study.CELL_CONVERGENCE, cells)
    assert [(result["method"], result["p"], result["N"]) for result in results] == cells
    assert [result["index"] for result in results] == [0, 1, 2]
    assert results[2]["err_h1"] < results[1]["err_h1"]
    assert results[0]["dofs"] == 19 + 2*2

def test_parse_list():
    assert Util.parse_list("1, 2,3", int) == [1, 2, 3]
    assert Util.parse_list("", float) == []
    assert Util.parse_list((1, 2), float) == [1.0, 2.0]
    assert Util.format_list([0.5, 1.0/3.0]) == "0.5,0.3333333333333333"
    assert Util.parse_list(Util.format_list([1.0/3.0]), float) == [1.0/3.0]

if __name__ == '__main__':
    test_defaults()
