import numpy as np
import pytest

from sgfem.Logger  import setupLogging
from sgfem.Problem import Problem, ReferenceSolution
from sgfem.Solver  import Solver
from sgfem.Study   import Study

# interface of the two-material custom example; never a node of a uniform mesh
CUSTOM_GAMMA = 0.3183098861837907


@pytest.fixture(scope="module")
def example1():
    yield Problem.example1(*Problem.EXAMPLE1_DEFAULTS)

@pytest.fixture(scope="module")
def example2():
    yield Problem.example2(*Problem.EXAMPLE2_DEFAULTS)

@pytest.fixture(scope="module", params=["example1", "example2"])
def example(request, example1, example2):
    yield {"example1": example1, "example2": example2}[request.param]

@pytest.fixture(scope="module")
def two_material():
    """
    -(kappa u')' = 1 with kappa = 1 | 10 at CUSTOM_GAMMA; the solution is piecewise quadratic.
    """
    kappa_right = 10.0
    gamma       = CUSTOM_GAMMA
    c           = (kappa_right*gamma**2 - gamma**2 + 1.0)/(2.0*(gamma*(kappa_right - 1.0) + 1.0))
    problem     = Problem.custom_problem([1.0, kappa_right], None, 1.0, [gamma])
    problem.reference = ReferenceSolution([gamma],
                                          [lambda x: c*x - 0.5*x**2,
                                           lambda x: (c*(x - 1.0) - 0.5*(x**2 - 1.0))/kappa_right],
                                          [lambda x: c - x,
                                           lambda x: (c - x)/kappa_right],
                                          {"c": c})
    yield problem

@pytest.fixture(scope="module")
def smooth_reference():
    """
    sin(pi x) on (0,1) with no interfaces.
    """
    yield ReferenceSolution([], [lambda x: np.sin(np.pi*x)], [lambda x: np.pi*np.cos(np.pi*x)], {})

@pytest.fixture(scope="function")
def restore_configuration():
    """
    Puts the Study and Solver class level configuration back after the test, and drops the log
    handlers it set up.
    """
    saved = {cls: {key: value for key, value in vars(cls).items() if key.isupper()} for cls in [Study, Solver]}
    yield
    for cls, values in saved.items():
        for key, value in values.items():
            setattr(cls, key, value)
    setupLogging(None, None, logToConsole=False)
