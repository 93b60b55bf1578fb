"""
This file will define the various exceptions that can be raised in the course of running sgfem.
"""

__copyright__ = "Copyright 2016 Contributing Entities"
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

class Error(Exception):
    """
    Base class for exceptions in sgfem.

    Attributes:
       msg   -- explanation of the error
    """
    def __init__(self, msg):
        super(Error, self).__init__(msg)
        self.msg      = msg

    def __str__(self):
        return self.msg

    @staticmethod
    def from_name(class_name, msg):
        """
        Rebuilds the error named *class_name* with *msg*, e.g. from a worker process report.
        Returns None for names that aren't sgfem errors.
        """
        cls = globals().get(class_name)
        if not (isinstance(cls, type) and issubclass(cls, Error)):
            return None
        error = cls.__new__(cls)
        Error.__init__(error, msg)
        return error

class InputError(Error):
    """
    Problem setup that can't be run: bad configuration, inadmissible mesh, bad coefficient.
    The command line exits with status 2 for these.
    """
    pass

class NumericalError(Error):
    """
    Numerical failure while computing.  The command line exits with status 3 for these.
    """
    pass

class ConfigurationError(InputError):
    """
    Exception raised for errors in configuration.

    Attributes:
       expr  -- the input file in which the error occurred
       msg   -- explanation of the error
    """
    def __init__(self, filename, msg):
        super(ConfigurationError, self).__init__(msg)
        self.expr     = filename

class InvalidMesh(InputError):
    """
    Nodes or interfaces that do not describe a partition of (0,L).
    """
    pass

class InterfaceOnNode(InputError):
    """
    An interface coincides with a mesh node.
    """
    pass

class TwoInterfacesInElement(InputError):
    """
    An element contains more than one interface.
    """
    pass

class OutOfDomain(InputError):
    """
    A coordinate outside [0,L].
    """
    pass

class EndpointOnInterface(InputError):
    """
    A control volume endpoint lies on an interface where the flux is side dependent.
    """
    pass

class IndexOutOfRange(InputError):
    """
    Local or global degree of freedom index out of range.
    """
    pass

class UnsupportedOrder(InputError):
    """
    Quadrature or polynomial order we don't support.
    """
    pass

class PieceCountMismatch(InputError):
    """
    The number of coefficient pieces doesn't match the number of subdomains.
    """
    pass

class NonpositiveCoefficient(InputError):
    """
    A coefficient piece was sampled nonpositive.
    """
    pass

class DegenerateConstants(InputError):
    """
    Closed form constants of a reference solution are undefined for these parameters.
    """
    pass

class DimensionMismatch(InputError):
    """
    Vector lengths that should agree don't.
    """
    pass

class InsufficientData(InputError):
    """
    Too few rows to fit a convergence rate.
    """
    pass

class ConstantSolveFailed(NumericalError):
    """
    The nonlinear solve for reference solution constants stagnated.

    Attributes:
       msg      -- explanation of the error
       residual -- final residual infinity norm
    """
    def __init__(self, msg, residual):
        super(ConstantSolveFailed, self).__init__(msg)
        self.residual = residual

class MaxIterationsExceeded(NumericalError):
    """
    An iteration failed to converge, either by running out of iterations or by diverging.

    Attributes:
       msg      -- explanation of the error
       solution -- the best iterate found (lowest residual)
       report   -- the :py:class:`sgfem.Solver.SolveReport` for the run
    """
    def __init__(self, msg, solution=None, report=None):
        super(MaxIterationsExceeded, self).__init__(msg)
        self.solution = solution
        self.report   = report

class SingularMatrix(NumericalError):
    """
    LU factorization broke down.
    """
    pass

class SingularJacobian(SingularMatrix):
    """
    The Newton matrix is singular.
    """
    pass

class SingularSaddleSystem(SingularMatrix):
    """
    The constrained (saddle point) matrix is singular.
    """
    pass

class SingularLocalSystem(NumericalError):
    """
    The local enriched interpolation system is singular.
    """
    pass
