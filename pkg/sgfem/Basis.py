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
import collections

import numpy as np
from numpy.polynomial import Polynomial

from .Error      import IndexOutOfRange, OutOfDomain, UnsupportedOrder
from .Logger     import SgfemLogger
from .Mesh       import Interval, Mesh
from .Quadrature import Quadrature


#: One smooth quadrature piece of an element, with everything assembly needs there.
#: values and derivatives are (local dofs, points) arrays in physical coordinates.
Segment = collections.namedtuple("Segment", ["element", "subdomain", "side", "points", "weights",
                                             "dofs", "values", "derivatives"])


class LagrangeBasis(object):
    """
    Nodal Lagrange shape functions of degree p on the reference element [0,1] with
    equispaced nodes, :math:`\\varphi_i(t_j) = \\delta_{ij}`.
    """
    def __init__(self, degree):
        if int(degree) != degree or degree < 1:
            raise UnsupportedOrder("Lagrange degree must be a positive integer; got %r" % degree)
        #: polynomial degree p
        self.degree = int(degree)
        #: reference nodes, p+1 equispaced points on [0,1]
        self.nodes  = np.linspace(0.0, 1.0, self.degree+1)

        #: shape functions as :py:class:`numpy.polynomial.Polynomial` in the reference coordinate
        self.polynomials = []
        for i, ti in enumerate(self.nodes):
            others = np.delete(self.nodes, i)
            poly   = Polynomial.fromroots(others)
            self.polynomials.append(poly/poly(ti))
        #: derivatives of the shape functions with respect to the reference coordinate
        self.derivative_polynomials = [poly.deriv() for poly in self.polynomials]

    def __len__(self):
        return self.degree + 1

    def shape_eval(self, i, xi):
        """
        Returns (value, derivative) of shape function *i* at reference coordinate *xi*.
        """
        if int(i) != i or i < 0 or i > self.degree:
            raise IndexOutOfRange("Local index %r out of range for degree %d" % (i, self.degree))
        if not 0.0 <= xi <= 1.0:
            raise OutOfDomain("Reference coordinate %r outside [0,1]" % xi)
        return float(self.polynomials[i](xi)), float(self.derivative_polynomials[i](xi))

    def values(self, xi):
        """
        Returns the (p+1, len(xi)) array of shape function values.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return np.array([poly(xi) for poly in self.polynomials])

    def derivatives(self, xi):
        """
        Returns the (p+1, len(xi)) array of shape function derivatives in the reference coordinate.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        return np.array([poly(xi) for poly in self.derivative_polynomials])


class EnrichmentFunction(object):
    """
    The stable enrichment :math:`w_\\tau = \\mathcal{I}^1_h w^*_\\tau - w^*_\\tau` with
    :math:`w^*_\\tau(x) = |x - \\gamma|` on the element :math:`\\tau` containing :math:`\\gamma`.

    It vanishes at both element endpoints and outside the element, and is linear on each
    side of :math:`\\gamma`: with :math:`g = (\\gamma - x_l)/h` the slope is :math:`2(1-g)`
    left of :math:`\\gamma` and :math:`-2g` right of it.
    """
    def __init__(self, element, gamma):
        if not element.contains(gamma):
            raise OutOfDomain("Interface %r not strictly inside %r" % (gamma, element))
        #: the element :py:class:`sgfem.Mesh.Interval`
        self.element     = element
        #: the interface coordinate
        self.gamma       = float(gamma)
        #: relative position of the interface in the reference element
        self.ratio       = (self.gamma - element.left)/element.length
        #: slope left of gamma
        self.left_slope  = 2.0*(1.0 - self.ratio)
        #: slope right of gamma
        self.right_slope = -2.0*self.ratio

    @property
    def peak(self):
        """
        The value at the kink, :math:`2(\\gamma-x_l)(x_r-\\gamma)/h`.
        """
        return self.left_slope*(self.gamma - self.element.left)

    def reference_pieces(self):
        """
        The two linear pieces (left, right) as polynomials in the reference coordinate.
        """
        h = self.element.length
        return (Polynomial([0.0, h*self.left_slope]),
                Polynomial([-h*self.right_slope, h*self.right_slope]))

    def values(self, x, side=Mesh.LEFT):
        """
        Returns (value, derivative) arrays at points *x* inside the element closure.  At gamma the
        derivative is the one from *side*.
        """
        x      = np.atleast_1d(np.asarray(x, dtype=float))
        if side == Mesh.RIGHT:
            on_left = x < self.gamma
        else:
            on_left = x <= self.gamma
        value  = np.where(on_left, self.left_slope*(x - self.element.left), self.right_slope*(x - self.element.right))
        deriv  = np.where(on_left, self.left_slope, self.right_slope)
        return value, deriv

    def enrichment_eval(self, x):
        """
        Returns (value, (left derivative, right derivative)) at *x*.  Zero outside the element.
        """
        left, right = self.element.left, self.element.right
        if x < left or x > right:
            return 0.0, (0.0, 0.0)

        value = float(self.values(x)[0][0])
        dleft  = 0.0 if x == left  else float(self.values(x, Mesh.LEFT )[1][0])
        dright = 0.0 if x == right else float(self.values(x, Mesh.RIGHT)[1][0])
        return value, (dleft, dright)


class DofMap(object):
    """
    The discrete space :math:`V^p_{h,E}` (or :math:`V^p_h` when not enriched) and its global
    degree of freedom numbering.

    Standard dofs are the interior Lagrange nodes numbered left to right, ``0 .. pN-2``; the
    boundary nodes carry no dof.  Enriched dofs follow, p+1 per enriched element, in element
    order.  Local dofs of an element are its p+1 standard shape functions followed (when enriched)
    by the p+1 products :math:`w_\\tau \\varphi_k`.
    """
    #: Dof kind: standard Lagrange
    KIND_STANDARD = "standard"
    #: Dof kind: enriched
    KIND_ENRICHED = "enriched"

    def __init__(self, mesh, degree, enriched=True):
        """
        :param mesh:     the :py:class:`sgfem.Mesh.Mesh`
        :param degree:   polynomial degree p
        :param enriched: if False, this is the standard FEM space even if there are interfaces
        """
        #: the mesh
        self.mesh      = mesh
        #: the :py:class:`LagrangeBasis`
        self.basis     = LagrangeBasis(degree)
        #: is this the enriched (SGFEM) space?
        self.enriched  = bool(enriched)

        p = self.basis.degree
        N = mesh.num_elements
        #: number of standard dofs
        self.standard_count = p*N - 1

        #: per element :py:class:`EnrichmentFunction` or None
        self.enrichments      = [None]*N
        #: per element, global index of the first enriched dof or None
        self.enriched_offset  = [None]*N
        offset = self.standard_count
        if self.enriched:
            for e in mesh.enriched_elements:
                self.enrichments[e]     = EnrichmentFunction(mesh.element(e), mesh.element_interface[e])
                self.enriched_offset[e] = offset
                offset += p + 1
        #: number of enriched dofs
        self.enriched_count = offset - self.standard_count

        self._segments = {}
        SgfemLogger.debug("DofMap p=%d N=%d enriched=%s: %d standard + %d enriched dofs" %
                          (p, N, self.enriched, self.standard_count, self.enriched_count))

    @property
    def degree(self):
        return self.basis.degree

    @property
    def dimension(self):
        return self.standard_count + self.enriched_count

    def node_coordinates(self):
        """
        Coordinates of all pN+1 Lagrange nodes, boundary nodes included.
        """
        p      = self.degree
        coords = [self.mesh.nodes[0]]
        for e in range(self.mesh.num_elements):
            left, right = self.mesh.nodes[e], self.mesh.nodes[e+1]
            coords.extend(left + (right - left)*self.basis.nodes[1:])
        coords = np.array(coords)
        coords[-1] = self.mesh.domain_length
        return coords

    def standard_dof(self, node):
        """
        Global dof of Lagrange node *node* (0..pN), or -1 for the boundary nodes.
        """
        if node <= 0 or node >= self.standard_count + 1:
            return -1
        return node - 1

    def element_dofs(self, e):
        """
        Global indices of the local dofs of element *e*; -1 marks a boundary node.
        """
        p    = self.degree
        dofs = [self.standard_dof(e*p + k) for k in range(p+1)]
        if self.enrichments[e] is not None:
            dofs.extend(range(self.enriched_offset[e], self.enriched_offset[e] + p + 1))
        return np.array(dofs, dtype=int)

    def local_eval(self, e, x, side=Mesh.LEFT):
        """
        Values and x-derivatives of the local basis functions of element *e* at points *x* in its closure.

        :return: (values, derivatives), each of shape (local dofs, len(x))
        """
        x        = np.atleast_1d(np.asarray(x, dtype=float))
        left     = self.mesh.nodes[e]
        h        = self.mesh.nodes[e+1] - left
        xi       = np.clip((x - left)/h, 0.0, 1.0)
        phi      = self.basis.values(xi)
        dphi     = self.basis.derivatives(xi)/h

        enrich   = self.enrichments[e]
        if enrich is None:
            return phi, dphi

        w, dw    = enrich.values(x, side)
        values   = np.vstack((phi, w*phi))
        derivs   = np.vstack((dphi, dw*phi + w*dphi))
        return values, derivs

    def local_coefficients(self, e, coefficients):
        """
        The entries of a global coefficient vector for the local dofs of element *e*; boundary dofs are zero.
        """
        dofs  = self.element_dofs(e)
        local = np.zeros(len(dofs))
        mask  = dofs >= 0
        local[mask] = coefficients[dofs[mask]]
        return local

    def support(self, g):
        """
        Returns the list of (element, local index) pairs where global dof *g* lives.
        """
        if int(g) != g or g < 0 or g >= self.dimension:
            raise IndexOutOfRange("Global dof %r out of range (dimension %d)" % (g, self.dimension))
        p = self.degree
        if g < self.standard_count:
            node = g + 1
            if node % p == 0:
                return [(node//p - 1, p), (node//p, 0)]
            return [(node//p, node % p)]
        for e, offset in enumerate(self.enriched_offset):
            if offset is not None and offset <= g < offset + p + 1:
                return [(e, p + 1 + g - offset)]
        raise IndexOutOfRange("Global dof %r not found" % g)

    def dof_kind(self, g):
        return DofMap.KIND_STANDARD if g < self.standard_count else DofMap.KIND_ENRICHED

    def enriched_basis_eval(self, g, x):
        """
        Returns (value, (left derivative, right derivative)) of global basis function *g* at *x*.
        """
        self.mesh.check_in_domain(x)
        value, dleft, dright = 0.0, 0.0, 0.0
        for e, k in self.support(g):
            left, right = self.mesh.nodes[e], self.mesh.nodes[e+1]
            if x < left or x > right:
                continue
            vals, ders = self.local_eval(e, x, Mesh.LEFT)
            value      = float(vals[k][0])
            if x > left:
                dleft  = float(ders[k][0])
            if x < right:
                dright = float(self.local_eval(e, x, Mesh.RIGHT)[1][k][0])
        return value, (dleft, dright)

    def basis_at(self, x, side):
        """
        Returns (global dofs, values, derivatives) of every local basis function of the element
        containing *x*, seen from *side*.  Boundary dofs (-1) are dropped.
        """
        e          = self.mesh.element_of(x, side)
        vals, ders = self.local_eval(e, x, side)
        dofs       = self.element_dofs(e)
        mask       = dofs >= 0
        return dofs[mask], vals[mask, 0], ders[mask, 0]

    def segments(self, num_points=None):
        """
        The quadrature :py:class:`Segment` list for this space, split at interfaces, with the
        basis tabulated at the points.  Cached per number of points.

        :param num_points: points per (sub)interval; defaults to p + :py:attr:`Quadrature.ASSEMBLY_EXTRA`
        """
        if num_points is None:
            num_points = self.degree + Quadrature.ASSEMBLY_EXTRA
        if num_points not in self._segments:
            rule     = Quadrature.gauss_rule(num_points)
            segments = []
            for e in range(self.mesh.num_elements):
                dofs = self.element_dofs(e)
                for left, right, side in Quadrature.element_pieces(self.mesh, e):
                    x, w         = rule.mapped(left, right)
                    vals, ders   = self.local_eval(e, x, side)
                    subdomain    = self.mesh.subdomain_of(0.5*(left + right))
                    segments.append(Segment(e, subdomain, side, x, w, dofs, vals, ders))
            self._segments[num_points] = segments
        return self._segments[num_points]
