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

from .Analysis    import Analysis, ErrorReport, RateTable
from .Assembly    import Assembly, AssembledSystem, DiscreteSolution
from .Basis       import DofMap, EnrichmentFunction, LagrangeBasis
from .Error       import *
from .Logger      import SgfemLogger, setupLogging
from .Mesh        import ControlVolumeSet, Interval, Mesh
from .Performance import Performance
from .Plot        import Plot
from .Problem     import CoefficientModel, Problem, ReferenceSolution
from .Quadrature  import Quadrature
from .Sgfem       import Sgfem
from .Solver      import ConstrainedSolution, Solver, SolveReport
from .Study       import Study
from .Util        import Util
from .Run         import run_sgfem, main

__all__ = [
    'Analysis', 'ErrorReport', 'RateTable',
    'Assembly', 'AssembledSystem', 'DiscreteSolution',
    'DofMap', 'EnrichmentFunction', 'LagrangeBasis',
    'SgfemLogger', 'setupLogging',
    'ControlVolumeSet', 'Interval', 'Mesh',
    'Performance',
    'Plot',
    'CoefficientModel', 'Problem', 'ReferenceSolution',
    'Quadrature',
    'Run', 'run_sgfem', 'main',
    'Sgfem',
    'ConstrainedSolution', 'Solver', 'SolveReport',
    'Study',
    'Util',
    'Error', 'InputError', 'NumericalError', 'ConfigurationError',
]
