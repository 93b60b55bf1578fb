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
import functools
import numbers

import numpy as np
import scipy.optimize

from .Error  import ConstantSolveFailed, DegenerateConstants, NonpositiveCoefficient, PieceCountMismatch
from .Logger import SgfemLogger
from .Mesh   import Mesh


def _constant(value, x, u=None):
    return np.full(np.shape(x), float(value))

def _zero(x, u):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(u)).shape)

def _exp_kappa(a, x, u):
    return np.exp(a*np.asarray(u))*np.ones(np.shape(x))

def _exp_dkappa(a, x, u):
    return a*np.exp(a*np.asarray(u))*np.ones(np.shape(x))

def _scaled_expneg_kappa(a, x, u):
    return a*np.exp(-np.asarray(u))*np.ones(np.shape(x))

def _scaled_expneg_dkappa(a, x, u):
    return -a*np.exp(-np.asarray(u))*np.ones(np.shape(x))

def _linear_source(slope, x):
    return slope*np.asarray(x, dtype=float)

def _sine_source(x):
    return np.sin(np.pi*np.asarray(x, dtype=float))


class CoefficientModel(object):
    """
    The quasilinear coefficient :math:`\\kappa(x,u)`, defined piecewise by
    :math:`\\kappa_j(x,u)` on the subdomains :math:`\\Omega_j = (\\gamma_j, \\gamma_{j+1})`,
    with its u-derivative :math:`D_2\\kappa_j`.

    Pieces are vectorized callables ``piece(x, u)`` that broadcast over numpy arrays.
    """
    def __init__(self, interfaces, pieces, derivative_pieces=None, domain_length=1.0,
                 kappa_min=None, kappa_max=None, lipschitz=None):
        interfaces = np.asarray(interfaces, dtype=float).reshape(-1)
        if len(pieces) != len(interfaces) + 1:
            raise PieceCountMismatch("%d coefficient pieces given for %d interfaces; expected %d" %
                                     (len(pieces), len(interfaces), len(interfaces)+1))
        if derivative_pieces is None:
            derivative_pieces = [_zero]*len(pieces)
            #: True when the coefficient does not depend on u
            self.linear = True
        else:
            if len(derivative_pieces) != len(pieces):
                raise PieceCountMismatch("%d derivative pieces given for %d coefficient pieces" %
                                         (len(derivative_pieces), len(pieces)))
            self.linear = False

        #: interface coordinates
        self.interfaces        = interfaces
        #: domain length L
        self.domain_length     = float(domain_length)
        #: :math:`\\kappa_j`
        self.pieces            = [CoefficientModel.as_piece(piece) for piece in pieces]
        #: :math:`D_2 \\kappa_j`
        self.derivative_pieces = [CoefficientModel.as_piece(piece) for piece in derivative_pieces]
        #: lower bound for kappa, if known
        self.kappa_min         = kappa_min
        #: upper bound for kappa, if known
        self.kappa_max         = kappa_max
        #: Lipschitz constant in u, metadata only
        self.lipschitz         = lipschitz

    @staticmethod
    def as_piece(piece):
        """
        Numbers become constant pieces; callables are used as given.
        """
        if isinstance(piece, numbers.Number):
            return functools.partial(_constant, piece)
        return piece

    @property
    def num_pieces(self):
        return len(self.pieces)

    def piece_kappa(self, j, x, u):
        return np.asarray(self.pieces[j](x, u), dtype=float)

    def piece_dkappa(self, j, x, u):
        return np.asarray(self.derivative_pieces[j](x, u), dtype=float)

    def subdomains(self, x, side=Mesh.LEFT):
        return np.searchsorted(self.interfaces, np.asarray(x, dtype=float), side='right' if side == Mesh.RIGHT else 'left')

    def _piecewise(self, funcs, x, u, side):
        x      = np.asarray(x, dtype=float)
        u      = np.broadcast_to(np.asarray(u, dtype=float), x.shape)
        j      = self.subdomains(x, side)
        result = np.empty(x.shape)
        for idx in np.unique(j):
            mask         = (j == idx)
            result[mask] = funcs[idx](x[mask], u[mask])
        return result if result.ndim else float(result)

    def kappa(self, x, u, side=Mesh.LEFT):
        """
        :math:`\\kappa(x,u)`, with the piece at an interface chosen by *side*.
        """
        return self._piecewise(self.pieces, x, u, side)

    def dkappa(self, x, u, side=Mesh.LEFT):
        """
        :math:`D_2\\kappa(x,u)`, with the piece at an interface chosen by *side*.
        """
        return self._piecewise(self.derivative_pieces, x, u, side)


class ReferenceSolution(object):
    """
    Analytic solution u given piecewise per subdomain, with analytic derivative.

    ``value_pieces[j](x)`` and ``derivative_pieces[j](x)`` give u and u' on the closure of
    subdomain j.
    """
    def __init__(self, interfaces, value_pieces, derivative_pieces, constants, domain_length=1.0):
        #: interface coordinates
        self.interfaces        = np.asarray(interfaces, dtype=float).reshape(-1)
        #: domain length L
        self.domain_length     = float(domain_length)
        self.value_pieces      = value_pieces
        self.derivative_pieces = derivative_pieces
        #: named constants of the closed form
        self.constants         = dict(constants)

    def _piecewise(self, funcs, x, side):
        x      = np.asarray(x, dtype=float)
        j      = np.searchsorted(self.interfaces, x, side='right' if side == Mesh.RIGHT else 'left')
        result = np.empty(x.shape)
        for idx in np.unique(j):
            mask         = (j == idx)
            result[mask] = funcs[idx](x[mask])
        return result if result.ndim else float(result)

    def __call__(self, x, side=Mesh.LEFT):
        return self._piecewise(self.value_pieces, x, side)

    def derivative(self, x, side=Mesh.LEFT):
        return self._piecewise(self.derivative_pieces, x, side)

    def evaluate(self, x, side=Mesh.LEFT):
        """
        Returns (u(x), u'(x)) from *side*.
        """
        return self(x, side), self.derivative(x, side)


class Problem(object):
    """
    A quasilinear interface problem :math:`-(\\kappa(x,u)u')' = f` on (0,L), u=0 on the boundary:
    coefficient model, source and (when known) the reference solution.
    """
    #: Example 1 interfaces
    EXAMPLE1_INTERFACES = (1.0/3.0, 2.0/3.0)
    #: Example 1 parameters of the experiments
    EXAMPLE1_DEFAULTS   = (0.01, -6.0, 1.0)
    #: Example 2 interfaces
    EXAMPLE2_INTERFACES = (1.0/3.0, 2.0/3.0, 8.0/9.0)
    #: Example 2 parameters of the experiments
    EXAMPLE2_DEFAULTS   = (1.0, 0.05, 100.0, 0.1)

    #: Residual target for the Example 1 constants
    CONSTANT_TOLERANCE      = 1e-13
    #: Newton iterations for the Example 1 constants before giving up on Newton alone
    CONSTANT_MAX_ITERATIONS = 100
    #: Random Newton starts that re-solve the Example 1 constants to check they are unique
    UNIQUENESS_STARTS       = 10
    #: (low, high) of the random (C1, C2) starts
    UNIQUENESS_BOX          = (-5.0, 5.0)
    #: Converged starts must reproduce the constants to this
    UNIQUENESS_TOLERANCE    = 1e-10
    UNIQUENESS_SEED         = 0

    #: Samples per subdomain for the positivity check of custom problems
    SAMPLES_PER_SUBDOMAIN   = 50

    def __init__(self, name, model, source, reference=None, parameters=()):
        #: problem name
        self.name       = name
        #: :py:class:`CoefficientModel`
        self.model      = model
        #: vectorized source f(x)
        self.source     = source
        #: :py:class:`ReferenceSolution` or None
        self.reference  = reference
        #: parameters a_i
        self.parameters = tuple(parameters)

    @property
    def interfaces(self):
        return self.model.interfaces

    @property
    def domain_length(self):
        return self.model.domain_length

    def contrast_ratio(self, samples=10**4):
        """
        :math:`\\kappa_{max}/\\kappa_{min}` over the graph of the reference solution, sampled per
        subdomain closure so both one-sided values at each interface count.
        """
        if self.reference is None:
            return None
        bounds  = np.concatenate(([0.0], self.interfaces, [self.domain_length]))
        per_sub = max(2, samples//len(self.model.pieces))
        kmin, kmax = np.inf, 0.0
        for j in range(len(self.model.pieces)):
            x     = np.linspace(bounds[j], bounds[j+1], per_sub)
            u     = self.reference.value_pieces[j](x)
            kappa = self.model.piece_kappa(j, x, u)
            kmin, kmax = min(kmin, np.min(kappa)), max(kmax, np.max(kappa))
        return kmax/kmin

    # ---------------------------------------------------------------- Example 1
    @staticmethod
    def _log_map(a, s):
        # inverse Kirchhoff map for e^{au}: u = log(1 + a s)/a, the identity as a -> 0
        s = np.asarray(s, dtype=float)
        return np.log1p(a*s)/a if a != 0.0 else s

    @staticmethod
    def _log_map_deriv(a, s):
        return 1.0/(1.0 + a*np.asarray(s, dtype=float))

    @staticmethod
    def _exp_map(a, u):
        return np.expm1(a*u)/a if a != 0.0 else u

    @staticmethod
    def _example1_residual(a, C1, D1):
        g1, g2   = Problem.EXAMPLE1_INTERFACES
        g        = lambda x: -5.0*x**3/6.0 + C1*x
        s0, s1   = g(g1), g(g1) + D1
        t1, t2   = g(g2) + D1, g(g2) - g(1.0)
        args     = [(a[0], s0), (a[1], s1), (a[1], t1), (a[2], t2)]
        if any(1.0 + ai*si <= 0.0 for ai, si in args):
            return None, None
        R = np.array([Problem._log_map(a[0], s0) - Problem._log_map(a[1], s1),
                      Problem._log_map(a[1], t1) - Problem._log_map(a[2], t2)])
        J = np.array([[g1*Problem._log_map_deriv(a[0], s0) - g1*Problem._log_map_deriv(a[1], s1),
                       -Problem._log_map_deriv(a[1], s1)],
                      [g2*Problem._log_map_deriv(a[1], t1) - (g2 - 1.0)*Problem._log_map_deriv(a[2], t2),
                       Problem._log_map_deriv(a[1], t1)]])
        return R, J

    @staticmethod
    def _example1_eliminated(a, C1):
        # D1 from the first continuity condition, then the second condition's residual
        g1, g2 = Problem.EXAMPLE1_INTERFACES
        g      = lambda x: -5.0*x**3/6.0 + C1*x
        if 1.0 + a[0]*g(g1) <= 0.0:
            return np.nan, np.nan
        D1     = Problem._exp_map(a[1], Problem._log_map(a[0], g(g1))) - g(g1)
        R, J   = Problem._example1_residual(a, C1, D1)
        if R is None:
            return np.nan, D1
        return R[1], D1

    @staticmethod
    def solve_example1_constants(a, initial=(5.0/6.0, 0.0)):
        """
        Solves the two continuity conditions at the interfaces of Example 1 for (C1, D1).

        On subdomain j the solution satisfies :math:`(e^{a_j u}-1)/a_j = -5x^3/6 + C_1 x + D_j`
        with :math:`D_0 = 0` and :math:`D_2` fixed by u(1)=0, so flux continuity holds by
        construction and the unknowns are C1 and D1.  Damped Newton first; if that stagnates,
        D1 is eliminated and C1 bracketed and bisected.

        :return: (C1, D1, residual infinity norm)
        """
        a       = tuple(float(ai) for ai in a)
        x, norm = Problem._example1_newton(a, initial)

        if norm > Problem.CONSTANT_TOLERANCE:
            SgfemLogger.debug("Example 1 constants: Newton stagnated at %.3e; bracketing C1" % norm)
            x, norm = Problem._example1_bracket(a, x, norm)

        if norm > Problem.CONSTANT_TOLERANCE:
            raise ConstantSolveFailed("Example 1 constants for a=%s did not converge; residual %.3e" % (str(a), norm), norm)
        return x[0], x[1], norm

    @staticmethod
    def example1_uniqueness(a, constants, num_starts=None, seed=None):
        """
        Re-solves the Example 1 constants by damped Newton from *num_starts* random (C1, C2) starts in
        :py:attr:`Problem.UNIQUENESS_BOX` and compares each converged start with *constants* = (C1, D1).
        Starts that leave the domain of the logarithms or stagnate are counted but not compared.

        :return: dict with ``uniqueness_starts``, ``uniqueness_converged``, ``uniqueness_max_deviation``
                 and ``uniqueness_agrees`` (1.0 when every converged start is within
                 :py:attr:`Problem.UNIQUENESS_TOLERANCE`, else 0.0)
        """
        a          = tuple(float(ai) for ai in a)
        num_starts = Problem.UNIQUENESS_STARTS if num_starts is None else num_starts
        seed       = Problem.UNIQUENESS_SEED   if seed is None else seed
        rng        = np.random.default_rng(seed)
        expected   = np.array(constants, dtype=float)

        converged, deviation = 0, 0.0
        for start in rng.uniform(Problem.UNIQUENESS_BOX[0], Problem.UNIQUENESS_BOX[1], (num_starts, 2)):
            # D1 = C2 - 1/a1
            D1      = start[1] - 1.0/a[1] if a[1] != 0.0 else start[1]
            x, norm = Problem._example1_newton(a, (start[0], D1))
            if norm > Problem.CONSTANT_TOLERANCE:
                continue
            converged += 1
            deviation  = max(deviation, float(np.max(np.abs(x - expected))))

        agrees = deviation <= Problem.UNIQUENESS_TOLERANCE
        if not agrees:
            SgfemLogger.warning("Example 1 constants for a=%s are not unique: random starts deviate by %.3e" %
                                (str(a), deviation))
        return {"uniqueness_starts"        : float(num_starts),
                "uniqueness_converged"     : float(converged),
                "uniqueness_max_deviation" : deviation,
                "uniqueness_agrees"        : 1.0 if agrees else 0.0}

    @staticmethod
    def _example1_newton(a, initial):
        # damped Newton on the continuity conditions; returns (x, residual norm), norm inf when it left the domain
        x     = np.array(initial, dtype=float)
        R, J  = Problem._example1_residual(a, x[0], x[1])
        norm  = np.max(np.abs(R)) if R is not None else np.inf

        for iteration in range(Problem.CONSTANT_MAX_ITERATIONS):
            if R is None or norm <= Problem.CONSTANT_TOLERANCE:
                break
            try:
                step = np.linalg.solve(J, R)
            except np.linalg.LinAlgError:
                break
            damping = 1.0
            while damping > 1e-10:
                trial          = x - damping*step
                R_new, J_new   = Problem._example1_residual(a, trial[0], trial[1])
                if R_new is not None and np.max(np.abs(R_new)) < norm:
                    break
                damping *= 0.5
            else:
                break
            x, R, J = trial, R_new, J_new
            norm    = np.max(np.abs(R))
            SgfemLogger.debug("Example 1 constants iteration %2d damping %.3g residual %.3e" % (iteration, damping, norm))

        return x, norm

    @staticmethod
    def _example1_bracket(a, best, best_norm):
        grid   = np.linspace(-50.0, 50.0, 4001)
        values = np.array([Problem._example1_eliminated(a, c)[0] for c in grid])
        for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
            if np.isfinite(flo) and np.isfinite(fhi) and flo*fhi <= 0.0:
                C1    = scipy.optimize.brentq(lambda c: Problem._example1_eliminated(a, c)[0], lo, hi, xtol=1e-15, rtol=4*np.finfo(float).eps)
                D1    = Problem._example1_eliminated(a, C1)[1]
                R, J  = Problem._example1_residual(a, C1, D1)
                x     = np.array([C1, D1])
                # a couple of full Newton steps to polish
                for _ in range(3):
                    if R is None:
                        break
                    trial = x - np.linalg.solve(J, R)
                    R_new, J_new = Problem._example1_residual(a, trial[0], trial[1])
                    if R_new is None or np.max(np.abs(R_new)) >= np.max(np.abs(R)):
                        break
                    x, R, J = trial, R_new, J_new
                norm = np.max(np.abs(R)) if R is not None else np.inf
                if norm < best_norm:
                    return x, norm
        return best, best_norm

    @staticmethod
    def example1(a0=EXAMPLE1_DEFAULTS[0], a1=EXAMPLE1_DEFAULTS[1], a2=EXAMPLE1_DEFAULTS[2]):
        """
        Example 1: :math:`\\kappa = e^{a_j u}` on the three subdomains split at 1/3 and 2/3, f(x) = 5x.

        :return: :py:class:`Problem` with its :py:class:`ReferenceSolution`
        """
        a = (float(a0), float(a1), float(a2))
        if not np.all(np.isfinite(a)):
            raise DegenerateConstants("Example 1 parameters must be finite: %s" % str(a))
        C1, D1, residual = Problem.solve_example1_constants(a)
        offsets = (0.0, D1, 5.0/6.0 - C1)

        def value_piece(j, x):
            return Problem._log_map(a[j], -5.0*x**3/6.0 + C1*x + offsets[j])

        def derivative_piece(j, x):
            return (-2.5*x**2 + C1)*Problem._log_map_deriv(a[j], -5.0*x**3/6.0 + C1*x + offsets[j])

        constants = {"C1": C1, "D1": D1, "residual": residual}
        if a[1] != 0.0:
            constants["C2"] = D1 + 1.0/a[1]
        constants.update(Problem.example1_uniqueness(a, (C1, D1)))
        reference = ReferenceSolution(Problem.EXAMPLE1_INTERFACES,
                                      [functools.partial(value_piece, j) for j in range(3)],
                                      [functools.partial(derivative_piece, j) for j in range(3)],
                                      constants)
        # bounds over the solution graph
        model = CoefficientModel(Problem.EXAMPLE1_INTERFACES,
                                 [functools.partial(_exp_kappa, ai) for ai in a],
                                 [functools.partial(_exp_dkappa, ai) for ai in a],
                                 lipschitz=None)
        problem = Problem("example1", model, functools.partial(_linear_source, 5.0), reference, a)
        Problem._set_bounds(problem)
        SgfemLogger.debug("Example 1 a=%s: C1=%.17g D1=%.17g residual %.3e" % (str(a), C1, D1, residual))
        return problem

    # ---------------------------------------------------------------- Example 2
    @staticmethod
    def example2_constants(a):
        """
        Closed form constants of Example 2 as a dict with keys p, q, r, C1, C2, C3, C4.
        """
        a0, a1, a2, a3 = a
        g1, g2, g3     = Problem.EXAMPLE2_INTERFACES
        pi             = np.pi
        s1, s2, s3     = np.sin(pi*g1), np.sin(pi*g2), np.sin(pi*g3)

        r = 1.0 - g3 + a3*g1/a0 + a3*(g2 - g1)/a1 + a3*(g3 - g2)/a2
        if abs(r) <= 1e-14*(1.0 + abs(a3*g1/a0) + abs(a3*(g2 - g1)/a1) + abs(a3*(g3 - g2)/a2)):
            raise DegenerateConstants("Example 2 constants undefined for a=%s: r = %g" % (str(a), r))
        p  = s3/(a3*pi**2) + (s2 - s3)/(a2*pi**2) + (s1 - s2)/(a1*pi**2) - s1/(a0*pi**2)
        q  = -g1/(a0*pi) + (g1 - g2)/(a1*pi) + (g2 - g3)/(a2*pi) + (g3 - 1.0)/(a3*pi)
        C2 = (p + q)/r
        C1 = 2.0/(a0*pi) + a3*C2/a0
        C3 = -s1/(a0*pi**2) + g1/(a0*pi) + 1.0 - g1*C1
        C4 = (s1 - s2)/(a1*pi**2) + (1.0/(a1*pi) + a3*C2/a1)*(g1 - g2) + C3
        return {"p": p, "q": q, "r": r, "C1": C1, "C2": C2, "C3": C3, "C4": C4}

    @staticmethod
    def example2(a0=EXAMPLE2_DEFAULTS[0], a1=EXAMPLE2_DEFAULTS[1], a2=EXAMPLE2_DEFAULTS[2], a3=EXAMPLE2_DEFAULTS[3]):
        """
        Example 2: :math:`\\kappa = a_j e^{-u}` on four subdomains split at 1/3, 2/3 and 8/9,
        :math:`f(x) = \\sin(\\pi x)`.  With :math:`S = e^{-u}` each piece is
        :math:`S(x) = S(x_a) - (\\sin\\pi x - \\sin\\pi x_a)/(a_j\\pi^2) - c(x - x_a)/a_j`
        around an anchor :math:`x_a` where S is known.
        """
        a = (float(a0), float(a1), float(a2), float(a3))
        if min(a) <= 0.0:
            raise NonpositiveCoefficient("Example 2 needs positive parameters; got %s" % str(a))
        constants = Problem.example2_constants(a)

        g1, g2, g3 = Problem.EXAMPLE2_INTERFACES
        c          = 1.0/np.pi + a[3]*constants["C2"]
        anchors    = [(0.0, 1.0), (g1, constants["C3"]), (g2, constants["C4"]), (1.0, 1.0)]

        def exp_neg_u(j, x):
            xa, sa = anchors[j]
            return sa - (np.sin(np.pi*x) - np.sin(np.pi*xa))/(a[j]*np.pi**2) - c*(x - xa)/a[j]

        def value_piece(j, x):
            return -np.log(exp_neg_u(j, x))

        def derivative_piece(j, x):
            return (np.cos(np.pi*x)/np.pi + c)/(a[j]*exp_neg_u(j, x))

        bounds = (0.0, g1, g2, g3, 1.0)
        for j in range(4):
            sample = exp_neg_u(j, np.linspace(bounds[j], bounds[j+1], 101))
            if np.min(sample) <= 0.0:
                raise DegenerateConstants("Example 2 solution undefined for a=%s on subdomain %d" % (str(a), j))

        reference = ReferenceSolution(Problem.EXAMPLE2_INTERFACES,
                                      [functools.partial(value_piece, j) for j in range(4)],
                                      [functools.partial(derivative_piece, j) for j in range(4)],
                                      constants)
        model = CoefficientModel(Problem.EXAMPLE2_INTERFACES,
                                 [functools.partial(_scaled_expneg_kappa, ai) for ai in a],
                                 [functools.partial(_scaled_expneg_dkappa, ai) for ai in a])
        problem = Problem("example2", model, _sine_source, reference, a)
        Problem._set_bounds(problem)
        SgfemLogger.debug("Example 2 a=%s: %s" % (str(a), str(constants)))
        return problem

    @staticmethod
    def _set_bounds(problem):
        bounds  = np.concatenate(([0.0], problem.interfaces, [problem.domain_length]))
        kmin, kmax = np.inf, 0.0
        for j in range(problem.model.num_pieces):
            x     = np.linspace(bounds[j], bounds[j+1], 201)
            kappa = problem.model.piece_kappa(j, x, problem.reference.value_pieces[j](x))
            kmin, kmax = min(kmin, np.min(kappa)), max(kmax, np.max(kappa))
        problem.model.kappa_min = kmin
        problem.model.kappa_max = kmax

    # ---------------------------------------------------------------- custom
    @staticmethod
    def custom_problem(pieces, derivative_pieces, source, interfaces, domain_length=1.0, u_box=(-1.0, 1.0), name="custom"):
        """
        A user-defined problem.  Pieces may be numbers or callables ``piece(x, u)``; *derivative_pieces*
        may be None for a u-independent coefficient.  Each piece is sampled on its subdomain times
        *u_box* and must be positive there.

        :return: :py:class:`Problem` without a reference solution
        """
        model   = CoefficientModel(interfaces, pieces, derivative_pieces, domain_length)
        bounds  = np.concatenate(([0.0], model.interfaces, [model.domain_length]))
        u_grid  = np.linspace(u_box[0], u_box[1], 21)
        kmin, kmax = np.inf, 0.0
        for j in range(model.num_pieces):
            x      = np.linspace(bounds[j], bounds[j+1], Problem.SAMPLES_PER_SUBDOMAIN)
            X, U   = np.meshgrid(x, u_grid)
            kappa  = np.broadcast_to(model.piece_kappa(j, X, U), X.shape)
            bad    = ~(np.isfinite(kappa) & (kappa > 0.0))
            if np.any(bad):
                idx = np.argmax(bad)
                raise NonpositiveCoefficient("Coefficient piece %d is %r at x=%.6g u=%.6g" %
                                             (j, kappa.flat[idx], X.flat[idx], U.flat[idx]))
            kmin, kmax = min(kmin, np.min(kappa)), max(kmax, np.max(kappa))
        model.kappa_min, model.kappa_max = kmin, kmax

        if isinstance(source, numbers.Number):
            source = functools.partial(_constant, source)
        return Problem(name, model, source)
