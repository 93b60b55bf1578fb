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

import numpy as np

from .Error import UnsupportedOrder
from .Mesh  import Mesh


class QuadRule(object):
    """
    A quadrature rule on the reference interval [0,1].
    """
    def __init__(self, points, weights):
        #: nodes in (0,1)
        self.points  = np.asarray(points, dtype=float)
        #: positive weights summing to one
        self.weights = np.asarray(weights, dtype=float)
        self.points.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.points)

    def mapped(self, left, right):
        """
        Returns (physical points, physical weights) of this rule on (left, right).
        """
        length = right - left
        return left + length*self.points, length*self.weights


class Quadrature(object):
    """
    Gauss-Legendre rules and interface-splitting composite quadrature.
    """
    #: Largest supported number of Gauss points
    MAX_POINTS          = 32

    #: Assembly uses degree + this many points per (sub)interval
    ASSEMBLY_EXTRA      = 3
    #: Error norms use degree + this many points per (sub)interval
    ERROR_NORM_EXTRA    = 5

    @staticmethod
    @functools.lru_cache(maxsize=None)
    def gauss_rule(n):
        """
        The n-point Gauss-Legendre rule mapped to [0,1].

        :param n: number of points, 1 <= n <= :py:attr:`Quadrature.MAX_POINTS`
        :return: :py:class:`QuadRule`
        """
        if int(n) != n or n < 1 or n > Quadrature.MAX_POINTS:
            raise UnsupportedOrder("Gauss rule with %r points not supported (1..%d)" % (n, Quadrature.MAX_POINTS))
        xi, wt = np.polynomial.legendre.leggauss(int(n))
        return QuadRule(0.5*(xi + 1.0), 0.5*wt)

    @staticmethod
    def element_pieces(mesh, e):
        """
        Returns the list of (left, right, side) smooth pieces of element *e*: the whole element, or
        the halves on either side of its interface with the matching side flag.
        """
        left, right = mesh.nodes[e], mesh.nodes[e+1]
        gamma       = mesh.element_interface[e]
        if gamma is None:
            return [(left, right, Mesh.LEFT)]
        return [(left, gamma, Mesh.LEFT), (gamma, right, Mesh.RIGHT)]

    @staticmethod
    def interval_pieces(mesh, left, right):
        """
        Splits (left, right) at every mesh node and interface inside it.  The pieces are smooth for any
        integrand built from the discrete space and the coefficient pieces.
        """
        cuts  = np.concatenate(([left], mesh.nodes, mesh.interfaces, [right]))
        cuts  = np.unique(cuts[(cuts >= left) & (cuts <= right)])
        return [(a, b) for a, b in zip(cuts[:-1], cuts[1:]) if b > a]

    @staticmethod
    def integrate_element(mesh, e, f, rule):
        """
        Integrates *f* over element *e*, splitting at the interface if there is one.

        :param f:    callback ``f(x, side)`` taking a numpy array of points and returning values there
        :param rule: :py:class:`QuadRule`
        """
        total = 0.0
        for left, right, side in Quadrature.element_pieces(mesh, e):
            x, w   = rule.mapped(left, right)
            total += np.dot(w, f(x, side))
        return total

    @staticmethod
    def integrate_interval(mesh, left, right, f, rule):
        """
        Integrates *f* over (left, right) with the rule applied on every piece from
        :py:meth:`Quadrature.interval_pieces`.  *f* is called as ``f(x, side)`` with the
        side of the piece relative to its left end.
        """
        total = 0.0
        for a, b in Quadrature.interval_pieces(mesh, left, right):
            x, w   = rule.mapped(a, b)
            total += np.dot(w, f(x, Mesh.RIGHT))
        return total
