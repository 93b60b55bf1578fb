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
import warnings

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .Assembly import Assembly, AssembledSystem, DiscreteSolution
from .Error    import ConfigurationError, DimensionMismatch, MaxIterationsExceeded, SingularJacobian, SingularMatrix, SingularSaddleSystem
from .Logger   import SgfemLogger


class SolveReport(object):
    """
    What happened in an iterative solve.
    """
    def __init__(self, method, tolerance):
        #: which solver produced this
        self.method             = method
        #: tolerance the final residual was compared against
        self.tolerance          = tolerance
        #: number of updates performed
        self.iterations         = 0
        #: infinity norm of the final residual (or final step, for the fixed point iteration)
        self.final_residual_inf = np.inf
        #: did it converge?
        self.converged          = False
        #: scaled 1-norm condition estimate of the last matrix, if requested
        self.condition_estimate = None
        #: per-iteration residual (or step) norms
        self.history            = []

    def as_dict(self):
        return {"method"             : self.method,
                "iterations"         : self.iterations,
                "converged"          : self.converged,
                "final_residual_inf" : self.final_residual_inf,
                "tolerance"          : self.tolerance,
                "condition_estimate" : self.condition_estimate}

    def __repr__(self):
        return "SolveReport(%s)" % ", ".join("%s=%r" % item for item in sorted(self.as_dict().items()))


class ConstrainedSolution(object):
    """
    Result of a locally conservative solve: the solution, one multiplier per control volume, and the report.
    """
    def __init__(self, solution, multipliers, report, cvs):
        #: :py:class:`sgfem.Assembly.DiscreteSolution`
        self.solution    = solution
        #: numpy array of multipliers, one per control volume
        self.multipliers = np.asarray(multipliers, dtype=float)
        #: :py:class:`SolveReport`
        self.report      = report
        #: the :py:class:`sgfem.Mesh.ControlVolumeSet`
        self.cvs         = cvs


class Solver(object):
    """
    Newton for the Galerkin problem, the fixed point and Newton iterations for the locally
    conservative (constrained) problem, dense LU and the condition diagnostic.

    The class attributes are the defaults; they are set from the ``[solver]`` section of the
    run configuration.
    """
    #: Newton stops when the residual infinity norm is at most this
    NEWTON_TOLERANCE                  = 1e-10
    #: Newton iteration limit
    MAX_NEWTON_ITERATIONS             = 50

    #: Fixed point iteration stops when the update infinity norm is at most this
    FIXED_POINT_TOLERANCE             = 1e-10
    #: ... after which passes continue while the constraint residual at the current iterate decreases
    #: and is above this
    FIXED_POINT_BALANCE_TOLERANCE     = 1e-14
    #: Fixed point iteration limit
    MAX_FIXED_POINT_ITERATIONS        = 200

    #: Constrained Newton stops when the stacked residual is reduced by this factor
    CONSTRAINED_RELATIVE_TOLERANCE    = 1e-10
    #: ... or falls below this
    CONSTRAINED_ABSOLUTE_TOLERANCE    = 1e-13
    #: ... or stops decreasing for STAGNATION_ITERATIONS iterations while below this
    STAGNATION_TOLERANCE              = 1e-10
    STAGNATION_ITERATIONS             = 3
    #: Constrained Newton iteration limit
    MAX_CONSTRAINED_ITERATIONS        = 50
    #: Constrained Newton Jacobian: exact linearization or the modified block form
    KKT_JACOBIAN_EXACT                = "exact"
    KKT_JACOBIAN_MODIFIED             = "modified"
    KKT_JACOBIAN                      = KKT_JACOBIAN_EXACT

    #: Abort when the residual grows by this factor over its minimum
    DIVERGENCE_FACTOR                 = 1e4
    #: Pivots smaller than this times the matrix infinity norm mean singular
    PIVOT_TOLERANCE                   = 1e-14
    #: Compute the condition estimate of the final matrix?
    ESTIMATE_CONDITION                = False

    @staticmethod
    def lu_factor(matrix, error_class=SingularMatrix):
        """
        Dense LU with partial pivoting, with a pivot check.

        :return: the scipy (lu, piv) pair
        """
        if not np.all(np.isfinite(matrix)):
            raise error_class("Matrix has non-finite entries")
        scale = np.max(np.sum(np.abs(matrix), axis=1)) if matrix.size else 0.0
        if scale == 0.0:
            raise error_class("Matrix is zero")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu_piv = scipy.linalg.lu_factor(matrix, check_finite=False)
        pivots = np.abs(np.diag(lu_piv[0]))
        small  = np.argmin(pivots)
        if pivots[small] < Solver.PIVOT_TOLERANCE*scale:
            raise error_class("LU pivot %d is %.3e, below %.1e times the matrix norm %.3e" %
                              (small, pivots[small], Solver.PIVOT_TOLERANCE, scale))
        return lu_piv

    @staticmethod
    def lu_solve(matrix, rhs, error_class=SingularMatrix):
        return scipy.linalg.lu_solve(Solver.lu_factor(matrix, error_class), rhs, check_finite=False)

    @staticmethod
    def condition_estimate(matrix):
        """
        1-norm condition estimate of :math:`D^{-1/2} M D^{-1/2}` with D the absolute diagonal (zero
        diagonal entries count as one), using the block Hager/Higham estimator for the inverse norm.
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch("Condition estimate needs a square matrix; got shape %s" % str(matrix.shape))
        diag          = np.abs(np.diag(matrix)).copy()
        diag[diag == 0.0] = 1.0
        scale         = 1.0/np.sqrt(diag)
        scaled        = scale[:, None]*matrix*scale[None, :]
        lu_piv        = Solver.lu_factor(scaled, SingularMatrix)
        inverse       = scipy.sparse.linalg.LinearOperator(scaled.shape, dtype=float,
                            matvec =lambda x: scipy.linalg.lu_solve(lu_piv, x, check_finite=False),
                            rmatvec=lambda x: scipy.linalg.lu_solve(lu_piv, x, trans=1, check_finite=False))
        return float(np.linalg.norm(scaled, 1)*scipy.sparse.linalg.onenormest(inverse))

    @staticmethod
    def _check_divergence(report, best_norm, method, best_solution):
        norm = report.history[-1]
        if norm > Solver.DIVERGENCE_FACTOR*best_norm or not np.isfinite(norm):
            report.final_residual_inf = norm
            raise MaxIterationsExceeded("%s diverged: residual %.3e exceeds %.0e times its minimum %.3e" %
                                        (method, norm, Solver.DIVERGENCE_FACTOR, best_norm), best_solution, report)

    @staticmethod
    def newton_solve(dofmap, model, source, tol=None, max_iter=None, initial=None, estimate_condition=None):
        """
        Newton's method for :math:`a(u;u,w) = \\ell(w)`: solve :math:`(A+B)\\delta = r` and update until
        :math:`\\|r\\|_\\infty \\le` *tol*.

        :param dofmap:  the discrete space, :py:class:`sgfem.Basis.DofMap`
        :param model:   :py:class:`sgfem.Problem.CoefficientModel`
        :param source:  vectorized f(x)
        :param initial: initial :py:class:`sgfem.Assembly.DiscreteSolution`; zero by default
        :return: (:py:class:`sgfem.Assembly.DiscreteSolution`, :py:class:`SolveReport`)
        """
        tol                = Solver.NEWTON_TOLERANCE       if tol is None else tol
        max_iter           = Solver.MAX_NEWTON_ITERATIONS  if max_iter is None else max_iter
        estimate_condition = Solver.ESTIMATE_CONDITION     if estimate_condition is None else estimate_condition
        if dofmap.dimension < 1:
            raise DimensionMismatch("Discrete space has no degrees of freedom")

        report    = SolveReport("newton", tol)
        v         = DiscreteSolution(dofmap, None if initial is None else initial.coefficients)
        best      = (np.inf, v.coefficients.copy())

        while True:
            system = Assembly.assemble_newton(v, model, source)
            norm   = np.max(np.abs(system.rhs))
            report.history.append(norm)
            SgfemLogger.debug("Newton iteration %3d residual %.6e" % (report.iterations, norm))
            if norm < best[0]:
                best = (norm, v.coefficients.copy())
            report.final_residual_inf = norm

            if norm <= tol:
                report.converged = True
                break
            Solver._check_divergence(report, best[0], "Newton", DiscreteSolution(dofmap, best[1]))
            if report.iterations >= max_iter:
                raise MaxIterationsExceeded("Newton did not converge in %d iterations; residual %.3e" % (max_iter, norm),
                                            DiscreteSolution(dofmap, best[1]), report)

            delta = Solver.lu_solve(system.matrix, system.rhs, SingularJacobian)
            v     = DiscreteSolution(dofmap, v.coefficients + delta)
            report.iterations += 1

        if estimate_condition:
            report.condition_estimate = Solver.condition_estimate(system.matrix)
        SgfemLogger.debug("Newton converged in %d iterations; residual %.3e" % (report.iterations, report.final_residual_inf))
        return v, report

    @staticmethod
    def _check_constraint_count(dofmap, cvs):
        if len(cvs) >= dofmap.dimension:
            raise DimensionMismatch("%d control volumes need fewer than that many dofs; space dimension is %d" %
                                    (len(cvs), dofmap.dimension))

    @staticmethod
    def saddle_system(matrix, upper, lower, rhs_top, rhs_bottom):
        """
        Builds the saddle point :py:class:`sgfem.Assembly.AssembledSystem` [[matrix, upper^T], [lower, 0]].
        """
        dim, num = matrix.shape[0], lower.shape[0]
        kkt      = np.zeros((dim + num, dim + num))
        kkt[:dim, :dim] = matrix
        kkt[:dim, dim:] = upper.T
        kkt[dim:, :dim] = lower
        return AssembledSystem(kkt, np.concatenate((rhs_top, rhs_bottom)), dim)

    @staticmethod
    def constrained_fixed_point(dofmap, model, source, cvs, tol=None, max_iter=None, initial=None):
        """
        Fixed point iteration for the constrained problem: each pass freezes the coefficient at the previous
        iterate and solves the linear saddle point system
        [A(u_prev), C^T; C, 0] [u; lambda] = [l; l*], C rows being :math:`C_{\\tau^*}(u_{prev};\\varphi_g)`.

        Once the update is below *tol*, passes continue while :math:`\\max|\\ell_{\\tau^*} - C_{\\tau^*}(u;u)|`
        keeps decreasing, and the iterate with the smallest one is returned.

        :return: :py:class:`ConstrainedSolution`; the report history holds the update norms
        """
        tol      = Solver.FIXED_POINT_TOLERANCE      if tol is None else tol
        max_iter = Solver.MAX_FIXED_POINT_ITERATIONS if max_iter is None else max_iter
        Solver._check_constraint_count(dofmap, cvs)

        report   = SolveReport("fixed_point", tol)
        load     = Assembly.assemble_load(source, dofmap)
        v        = DiscreteSolution(dofmap, None if initial is None else initial.coefficients)
        mult     = np.zeros(len(cvs))
        best     = np.inf
        step     = np.inf
        previous = np.inf
        settled  = None

        while True:
            matrix              = Assembly.assemble_a(v, model)
            rows, loads, values = Assembly.constraint_system(v, cvs, model, source)
            # constraint residual C(u; u) - l* at the current iterate
            balance             = np.max(np.abs(loads - values)) if len(cvs) else 0.0
            if step <= tol:
                if settled is None or balance < settled[0]:
                    settled = (balance, v, mult)
                if balance <= Solver.FIXED_POINT_BALANCE_TOLERANCE or balance >= previous:
                    v, mult = settled[1], settled[2]
                    report.converged = True
                    break
            previous = balance

            if report.iterations >= max_iter:
                raise MaxIterationsExceeded("Fixed point iteration did not converge in %d passes; update %.3e" %
                                            (max_iter, report.final_residual_inf), v, report)
            system         = Solver.saddle_system(matrix, rows, rows, load, loads)
            result         = Solver.lu_solve(system.matrix, system.rhs, SingularSaddleSystem)
            step           = np.max(np.abs(result[:dofmap.dimension] - v.coefficients))
            v, mult        = DiscreteSolution(dofmap, result[:dofmap.dimension]), result[dofmap.dimension:]

            report.iterations += 1
            report.history.append(step)
            report.final_residual_inf = step
            best = min(best, step)
            SgfemLogger.debug("Fixed point pass %3d update %.6e" % (report.iterations, step))
            if step > tol:
                Solver._check_divergence(report, best, "Fixed point iteration", v)

        SgfemLogger.debug("Fixed point converged in %d passes; constraint residual %.3e" % (report.iterations, settled[0]))
        return ConstrainedSolution(v, mult, report, cvs)

    @staticmethod
    def constrained_newton(dofmap, model, source, cvs, tol=None, max_iter=None, initial=None, jacobian=None):
        """
        Newton iteration for the constrained problem

        .. math::

           a(u;u,w) + \\sum_{\\tau^*} \\lambda_{\\tau^*} C_{\\tau^*}(u;w) = \\ell(w), \\qquad C_{\\tau^*}(u;u) = \\ell_{\\tau^*}

        with residuals R1 (first equation) and R2 (second).  Each step solves the saddle point system
        [J, G^T; Q, 0] for the updates of u and lambda, Q holding the rows :math:`Q_{\\tau^*}(u)`.
        With *jacobian* ``exact`` J adds the multiplier term to A + B and G holds the rows
        :math:`C_{\\tau^*}(u;\\cdot)`; with ``modified`` J = A + B and G = Q.

        The initial guess is one unconstrained Newton step from zero with zero multipliers.  Stops when the
        stacked residual is reduced by *tol* relative to the initial guess.

        :return: :py:class:`ConstrainedSolution`
        """
        tol      = Solver.CONSTRAINED_RELATIVE_TOLERANCE if tol is None else tol
        max_iter = Solver.MAX_CONSTRAINED_ITERATIONS     if max_iter is None else max_iter
        jacobian = Solver.KKT_JACOBIAN                   if jacobian is None else jacobian
        if jacobian not in [Solver.KKT_JACOBIAN_EXACT, Solver.KKT_JACOBIAN_MODIFIED]:
            raise ConfigurationError("constrained_newton", "Unknown KKT jacobian [%s]" % jacobian)
        Solver._check_constraint_count(dofmap, cvs)
        allow    = cvs.interface_endpoints_allowed

        if initial is None:
            v      = DiscreteSolution(dofmap)
            system = Assembly.assemble_newton(v, model, source)
            v      = DiscreteSolution(dofmap, Solver.lu_solve(system.matrix, system.rhs, SingularJacobian))
        else:
            v      = DiscreteSolution(dofmap, initial.coefficients)
        mult       = np.zeros(len(cvs))

        report     = SolveReport("constrained_newton", tol)
        best       = (np.inf, v, mult)
        target     = None
        stagnant   = 0

        while True:
            system              = Assembly.assemble_newton(v, model, source)
            rows, loads, values = Assembly.constraint_system(v, cvs, model, source)
            residual            = np.concatenate((system.rhs - rows.T.dot(mult), loads - values))
            norm                = np.max(np.abs(residual)) if len(residual) else 0.0
            report.history.append(norm)
            report.final_residual_inf = norm
            SgfemLogger.debug("Constrained Newton iteration %3d residual %.6e constraint residual %.3e" %
                              (report.iterations, norm, np.max(np.abs(loads - values)) if len(cvs) else 0.0))

            if target is None:
                target = max(tol*norm, Solver.CONSTRAINED_ABSOLUTE_TOLERANCE)
                report.tolerance = target
            if norm < best[0]:
                stagnant = 0
                best     = (norm, v, mult)
            else:
                stagnant += 1

            if norm <= target:
                report.converged = True
                break
            if stagnant >= Solver.STAGNATION_ITERATIONS and best[0] <= Solver.STAGNATION_TOLERANCE:
                SgfemLogger.debug("Constrained Newton stagnated at %.3e; accepting best iterate" % best[0])
                v, mult = best[1], best[2]
                report.final_residual_inf = best[0]
                report.tolerance          = Solver.STAGNATION_TOLERANCE
                report.converged          = True
                break
            Solver._check_divergence(report, best[0], "Constrained Newton", best[1])
            if report.iterations >= max_iter:
                raise MaxIterationsExceeded("Constrained Newton did not converge in %d iterations; residual %.3e" %
                                            (max_iter, norm), best[1], report)

            lower = np.array([Assembly.linearized_row(v, vol, model, allow) for vol in cvs]).reshape(len(cvs), dofmap.dimension)
            if jacobian == Solver.KKT_JACOBIAN_EXACT:
                matrix = system.matrix.copy()
                for lam, vol in zip(mult, cvs):
                    if lam != 0.0:
                        matrix += lam*Assembly.constraint_curvature(v, vol, model, allow)
                upper  = rows
            else:
                matrix = system.matrix
                upper  = lower
            kkt    = Solver.saddle_system(matrix, upper, lower, residual[:dofmap.dimension], residual[dofmap.dimension:])
            delta  = Solver.lu_solve(kkt.matrix, kkt.rhs, SingularSaddleSystem)
            v      = DiscreteSolution(dofmap, v.coefficients + delta[:dofmap.dimension])
            mult   = mult + delta[dofmap.dimension:]
            report.iterations += 1

        SgfemLogger.debug("Constrained Newton converged in %d iterations; residual %.3e" % (report.iterations, report.final_residual_inf))
        return ConstrainedSolution(v, mult, report, cvs)
