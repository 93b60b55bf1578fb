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
import numpy as np
import pandas as pd

from .Assembly   import Assembly, DiscreteSolution
from .Basis      import EnrichmentFunction
from .Error      import DimensionMismatch, InsufficientData, SingularLocalSystem
from .Logger     import SgfemLogger
from .Quadrature import Quadrature
from .Solver     import Solver


class ErrorReport(object):
    """
    Error norms of u - u_h over the domain and per subdomain.
    """
    def __init__(self, subdomain_l2, subdomain_h1, subdomain_w16=None):
        #: per subdomain L2 norms
        self.subdomain_l2  = np.asarray(subdomain_l2, dtype=float)
        #: per subdomain H1 seminorms
        self.subdomain_h1  = np.asarray(subdomain_h1, dtype=float)
        #: per subdomain W^{1,6} seminorms, or None
        self.subdomain_w16 = None if subdomain_w16 is None else np.asarray(subdomain_w16, dtype=float)

        #: L2 norm
        self.l2       = float(np.sqrt(np.sum(self.subdomain_l2**2)))
        #: H1 seminorm
        self.h1_semi  = float(np.sqrt(np.sum(self.subdomain_h1**2)))
        #: W^{1,6} seminorm, or None
        self.w16_semi = None if self.subdomain_w16 is None else float(np.sum(self.subdomain_w16**6)**(1.0/6.0))

    def subdomain_frame(self):
        """
        The per subdomain breakdown as a :py:class:`pandas.DataFrame`.
        """
        frame = pd.DataFrame({"subdomain" : np.arange(len(self.subdomain_l2)),
                              "err_l2"    : self.subdomain_l2,
                              "err_h1"    : self.subdomain_h1})
        if self.subdomain_w16 is not None:
            frame["err_w16"] = self.subdomain_w16
        return frame

    def __repr__(self):
        return "ErrorReport(l2=%.6e, h1_semi=%.6e, w16_semi=%s)" % (self.l2, self.h1_semi, self.w16_semi)


class RateTable(object):
    """
    Convergence table: the error rows and the fitted slope of log(error) against log(h) per series.
    """
    def __init__(self, rows, slopes, series):
        #: :py:class:`pandas.DataFrame` with the series columns, N, h, error and pairwise_slope
        self.rows   = rows
        #: :py:class:`pandas.DataFrame` with the series columns and slope
        self.slopes = slopes
        #: the columns identifying a series
        self.series = list(series)

    def slope(self, **key):
        """
        The fitted slope of the series matching *key*, e.g. ``table.slope(method="sgfem", p=2, kind="h1")``.
        """
        match = self.slopes
        for column, value in key.items():
            match = match.loc[match[column] == value]
        if len(match) != 1:
            raise InsufficientData("No unique series matches %r" % key)
        return float(match["slope"].iloc[0])


class Analysis(object):
    """
    Error norms, interpolants, local conservation errors and convergence rates.
    """
    #: Warn when the local interpolation system condition number exceeds this
    LOCAL_CONDITION_WARNING  = 1e12
    #: Relative tolerance for the vertex and leading term checks of the local interpolant
    LOCAL_CHECK_TOLERANCE    = 1e-10
    #: A series needs at least this many rows for a rate fit
    MIN_RATE_ROWS            = 3

    @staticmethod
    def _error_pieces(mesh, cuts=()):
        """
        Yields (element, left, right, side, subdomain) pieces: elements split at their interface and
        at any of *cuts* inside them.
        """
        cuts = np.sort(np.asarray(cuts, dtype=float))
        for e in range(mesh.num_elements):
            for left, right, side in Quadrature.element_pieces(mesh, e):
                inside    = cuts[(cuts > left) & (cuts < right)]
                points    = np.concatenate(([left], inside, [right]))
                subdomain = mesh.subdomain_of(0.5*(left + right))
                for a, b in zip(points[:-1], points[1:]):
                    yield e, a, b, side, subdomain

    @staticmethod
    def _norms(u_h, ref, w16, num_points, correction=None, cuts=()):
        mesh    = u_h.mesh
        dofmap  = u_h.dofmap
        if num_points is None:
            num_points = dofmap.degree + Quadrature.ERROR_NORM_EXTRA
        rule    = Quadrature.gauss_rule(num_points)
        l2      = np.zeros(mesh.num_subdomains)
        h1      = np.zeros(mesh.num_subdomains)
        w6      = np.zeros(mesh.num_subdomains)
        local   = {}
        for e, left, right, side, j in Analysis._error_pieces(mesh, cuts):
            if e not in local:
                local[e] = dofmap.local_coefficients(e, u_h.coefficients)
            x, wt      = rule.mapped(left, right)
            vals, ders = dofmap.local_eval(e, x, side)
            err        = ref(x, side) - local[e].dot(vals)
            if correction is not None:
                err    = err - correction(x)
            derr       = ref.derivative(x, side) - local[e].dot(ders)
            l2[j]     += np.dot(wt, err**2)
            h1[j]     += np.dot(wt, derr**2)
            if w16:
                w6[j] += np.dot(wt, derr**6)
        return ErrorReport(np.sqrt(l2), np.sqrt(h1), w6**(1.0/6.0) if w16 else None)

    @staticmethod
    def error_norms(u_h, ref, w16=False, num_points=None):
        """
        L2 norm and H1 seminorm (and optionally the W^{1,6} seminorm) of ``ref - u_h`` by
        interface-split Gauss quadrature with p + :py:attr:`Quadrature.ERROR_NORM_EXTRA` points per piece.

        :param u_h: :py:class:`sgfem.Assembly.DiscreteSolution`
        :param ref: anything evaluating ``ref(x, side)`` and ``ref.derivative(x, side)``, like
                    :py:class:`sgfem.Problem.ReferenceSolution`
        :return: :py:class:`ErrorReport`
        """
        return Analysis._norms(u_h, ref, w16, num_points)

    @staticmethod
    def standard_interpolant(v, dofmap):
        """
        Nodal interpolant :math:`\\mathcal{I}^p_h v` in *dofmap*; enriched coefficients are zero.

        :param v: vectorized callable v(x)
        """
        coefficients = np.zeros(dofmap.dimension)
        nodes        = dofmap.node_coordinates()[1:-1]
        coefficients[:dofmap.standard_count] = v(nodes)
        return DiscreteSolution(dofmap, coefficients)

    @staticmethod
    def local_enriched_interpolant(v, element, gamma, basis):
        """
        The interpolant of *v* on one enriched element: finds (alpha, beta) with
        :math:`\\sum_k \\alpha_k\\varphi_k + w_\\tau \\sum_k \\beta_k \\varphi_k` equal to v at the p+1
        equispaced points of each side of gamma (gamma counted once) and with no degree p+1 term on
        either side.

        :param v:       vectorized callable v(x)
        :param element: the :py:class:`sgfem.Mesh.Interval`
        :param gamma:   interface inside the element
        :param basis:   :py:class:`sgfem.Basis.LagrangeBasis`
        :return: (alpha, beta), each of length p+1
        """
        p       = basis.degree
        enrich  = EnrichmentFunction(element, gamma)
        points  = np.concatenate((np.linspace(element.left, gamma, p+1),
                                  np.linspace(gamma, element.right, p+1)[1:]))
        phi     = basis.values((points - element.left)/element.length)
        w, _    = enrich.values(points)

        system  = np.zeros((2*p+2, 2*p+2))
        system[:2*p+1, :p+1] = phi.T
        system[:2*p+1, p+1:] = (w*phi).T

        left_piece, right_piece = enrich.reference_pieces()
        left_lead  = np.array([(left_piece *poly).coef[p+1] for poly in basis.polynomials])
        right_lead = np.array([(right_piece*poly).coef[p+1] for poly in basis.polynomials])
        system[2*p+1, p+1:] = left_lead/np.max(np.abs(left_lead))

        rhs       = np.concatenate((v(points), [0.0]))
        condition = np.linalg.cond(system)
        if condition > Analysis.LOCAL_CONDITION_WARNING:
            SgfemLogger.warning("Local interpolation system on %r with gamma=%.17g has condition %.3e" % (element, gamma, condition))
        solution  = Solver.lu_solve(system, rhs, SingularLocalSystem)
        alpha, beta = solution[:p+1], solution[p+1:]

        scale = max(1.0, np.max(np.abs(solution)))
        if abs(np.dot(right_lead, beta)) > Analysis.LOCAL_CHECK_TOLERANCE*scale*np.max(np.abs(right_lead)):
            raise SingularLocalSystem("Leading term right of gamma=%.17g not annihilated on %r" % (gamma, element))
        return alpha, beta

    @staticmethod
    def enriched_interpolant(v, dofmap):
        """
        The enriched interpolant :math:`\\mathcal{I}^p_{h,E} v`: nodal interpolation on standard elements and
        :py:meth:`Analysis.local_enriched_interpolant` on enriched ones.  Element vertices are shared with
        the neighbors, which interpolate v there as well.
        """
        interpolant = Analysis.standard_interpolant(v, dofmap)
        if not dofmap.enriched:
            return interpolant
        coefficients = interpolant.coefficients
        mesh         = dofmap.mesh
        p            = dofmap.degree
        for e in mesh.enriched_elements:
            element     = mesh.element(e)
            alpha, beta = Analysis.local_enriched_interpolant(v, element, mesh.element_interface[e], dofmap.basis)
            vertices    = v(np.array([element.left, element.right]))
            if not np.allclose(alpha[[0, p]], vertices, rtol=Analysis.LOCAL_CHECK_TOLERANCE,
                               atol=Analysis.LOCAL_CHECK_TOLERANCE*max(1.0, np.max(np.abs(vertices)))):
                raise SingularLocalSystem("Local interpolant on %r disagrees with v at the vertices: %r vs %r" %
                                          (element, alpha[[0, p]], vertices))
            dofs  = dofmap.element_dofs(e)
            local = np.concatenate((alpha, beta))
            mask  = dofs >= 0
            coefficients[dofs[mask]] = local[mask]
        return DiscreteSolution(dofmap, coefficients)

    @staticmethod
    def interpolant(v, dofmap, enriched=True):
        if enriched:
            return Analysis.enriched_interpolant(v, dofmap)
        return Analysis.standard_interpolant(v, dofmap)

    @staticmethod
    def w16_seminorm_rate_check(v, dofmaps, enriched=True):
        """
        :math:`|v - \\mathcal{I} v|_{1,6}` over a sequence of spaces with the fitted slope.

        :param v:       reference (value and derivative), e.g. :py:class:`sgfem.Problem.ReferenceSolution`
        :param dofmaps: the :py:class:`sgfem.Basis.DofMap` sequence, coarse to fine
        :return: :py:class:`RateTable`
        """
        rows = []
        for dofmap in dofmaps:
            report = Analysis.error_norms(Analysis.interpolant(v, dofmap, enriched), v, w16=True)
            rows.append({"method" : "enriched" if enriched else "standard",
                         "p"      : dofmap.degree,
                         "kind"   : "w16",
                         "N"      : dofmap.mesh.num_elements,
                         "h"      : dofmap.mesh.h,
                         "error"  : report.w16_semi})
        return Analysis.fit_rates(rows)

    @staticmethod
    def jacobian_consistency(v, direction, model, source, epsilons=(1e-2, 1e-3, 1e-4)):
        """
        Compares the Newton matrix with central differences of the residual along *direction*:
        the residual's derivative is :math:`-(A+B)`.

        :return: (max abs differences per epsilon, log-log slope of those against epsilon)
        """
        dofmap   = v.dofmap
        system   = Assembly.assemble_newton(v, model, source)
        expected = -system.matrix.dot(direction)
        diffs    = []
        for eps in epsilons:
            plus  = Assembly.residual(DiscreteSolution(dofmap, v.coefficients + eps*direction), model, source)
            minus = Assembly.residual(DiscreteSolution(dofmap, v.coefficients - eps*direction), model, source)
            diffs.append(np.max(np.abs((plus - minus)/(2.0*eps) - expected)))
        diffs = np.array(diffs)
        if np.any(diffs <= 0.0):
            return diffs, np.nan
        return diffs, float(np.polyfit(np.log(epsilons), np.log(diffs), 1)[0])

    @staticmethod
    def lce(u_h, model, source, cvs):
        """
        Local conservation errors :math:`C_{\\tau^*}(u_h;u_h) - \\ell_{\\tau^*}` per control volume.

        :return: (numpy array of errors, mean absolute error)
        """
        allow  = cvs.interface_endpoints_allowed
        values = np.array([Assembly.constraint_value(u_h, u_h, vol, model, allow) -
                           Assembly.constraint_load(source, vol, u_h.mesh) for vol in cvs])
        mean   = float(np.mean(np.abs(values))) if len(values) else 0.0
        return values, mean

    @staticmethod
    def lambda_corrected_l2(u_h, multipliers, cvs, ref, num_points=None):
        """
        :math:`\\|u - u_h - \\hat\\lambda\\|` with :math:`\\hat\\lambda` equal to the multiplier of each control
        volume on it and zero outside every volume.
        """
        multipliers = np.asarray(multipliers, dtype=float).reshape(-1)
        if len(multipliers) != len(cvs):
            raise DimensionMismatch("%d multipliers for %d control volumes" % (len(multipliers), len(cvs)))
        lefts  = np.array([vol.left  for vol in cvs])
        rights = np.array([vol.right for vol in cvs])

        def correction(x):
            result = np.zeros(np.shape(x))
            for left, right, lam in zip(lefts, rights, multipliers):
                result[(x > left) & (x < right)] = lam
            return result

        cuts = np.concatenate((lefts, rights))
        return Analysis._norms(u_h, ref, False, num_points, correction, cuts).l2

    @staticmethod
    def fit_rates(rows, series=None):
        """
        Least squares slope of log(error) against log(h) per series, and the pairwise slopes between
        consecutive rows of each series.

        :param rows:   a :py:class:`pandas.DataFrame` or a list of dicts with columns h, error and the series columns
        :param series: the columns identifying a series; by default every column but N, h and error
        :return: :py:class:`RateTable`
        """
        frame = pd.DataFrame(rows).copy()
        if len(frame) == 0 or "h" not in frame or "error" not in frame:
            raise InsufficientData("Rate fit needs rows with h and error columns")
        if series is None:
            series = [column for column in frame.columns if column not in ["N", "h", "error", "pairwise_slope"]]

        frame.sort_values(by=series + ["h"], ascending=[True]*len(series) + [False], inplace=True, kind="mergesort")
        frame.reset_index(drop=True, inplace=True)
        frame["pairwise_slope"] = np.nan

        slopes = []
        groups = frame.groupby(series, sort=True) if series else [((), frame)]
        for key, group in groups:
            if len(group) < Analysis.MIN_RATE_ROWS:
                raise InsufficientData("Series %r has %d rows; a rate fit needs at least %d" %
                                       (key, len(group), Analysis.MIN_RATE_ROWS))
            error = group["error"].to_numpy(dtype=float)
            h     = group["h"].to_numpy(dtype=float)
            if np.any(error <= 0.0):
                SgfemLogger.warning("Series %r has nonpositive errors; slope undefined" % (key,))
                slope = np.nan
            else:
                slope = float(np.polyfit(np.log(h), np.log(error), 1)[0])
                frame.loc[group.index[1:], "pairwise_slope"] = np.diff(np.log(error))/np.diff(np.log(h))
            if not isinstance(key, tuple):
                key = (key,)
            entry = dict(zip(series, key))
            entry["slope"] = slope
            slopes.append(entry)

        return RateTable(frame, pd.DataFrame(slopes, columns=series + ["slope"]), series)
