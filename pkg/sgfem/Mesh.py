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

from .Error  import EndpointOnInterface, InterfaceOnNode, InvalidMesh, OutOfDomain, TwoInterfacesInElement
from .Logger import SgfemLogger


class Interval(object):
    """
    An open interval (left, right) with left < right.  Used for elements and control volumes.
    """
    def __init__(self, left, right):
        if not left < right:
            raise InvalidMesh("Interval requires left < right; got (%r, %r)" % (left, right))
        #: left endpoint
        self.left  = float(left)
        #: right endpoint
        self.right = float(right)

    @property
    def length(self):
        return self.right - self.left

    @property
    def midpoint(self):
        return 0.5*(self.left + self.right)

    def contains(self, x):
        """
        Returns True if *x* is strictly inside.
        """
        return self.left < x < self.right

    def __eq__(self, other):
        return isinstance(other, Interval) and (self.left, self.right) == (other.left, other.right)

    def __hash__(self):
        return hash((self.left, self.right))

    def __repr__(self):
        return "Interval(%r, %r)" % (self.left, self.right)


class ControlVolumeSet(object):
    """
    An ordered collection of non-overlapping control volumes :math:`\\tau^*` on which local
    conservation is measured or enforced.
    """
    #: Control volume kind: the whole domain
    KIND_WHOLE_DOMAIN   = "whole-domain"
    #: Control volume kind: one volume per subdomain between interfaces
    KIND_PER_SUBDOMAIN  = "per-subdomain"
    #: Control volume kind: volumes between consecutive element midpoints
    KIND_DUAL_MIDPOINT  = "dual-midpoint"
    #: All the kinds
    KINDS               = [KIND_WHOLE_DOMAIN, KIND_PER_SUBDOMAIN, KIND_DUAL_MIDPOINT]

    def __init__(self, volumes, kind):
        for prev, vol in zip(volumes[:-1], volumes[1:]):
            if vol.left < prev.right:
                raise InvalidMesh("Control volumes %r and %r overlap" % (prev, vol))
        #: list of :py:class:`Interval`
        self.volumes = list(volumes)
        #: one of :py:attr:`ControlVolumeSet.KINDS`
        self.kind    = kind

    @property
    def interface_endpoints_allowed(self):
        """
        Per-subdomain volumes end on interfaces by definition.  Their one-sided flux from the
        inside is the material flux of that subdomain, so interface endpoints are fine there.
        """
        return self.kind == ControlVolumeSet.KIND_PER_SUBDOMAIN

    def __len__(self):
        return len(self.volumes)

    def __iter__(self):
        return iter(self.volumes)

    def __getitem__(self, idx):
        return self.volumes[idx]


class Mesh(object):
    """
    Mesh class.

    A partition of :math:`\\Omega = (0,L)` into elements :math:`(x_{i-1}, x_i)`, the
    interfaces :math:`\\gamma_1 < \\ldots < \\gamma_m` and, per element, the interface it
    contains (if any).  Immutable after construction.
    """
    #: Interfaces within this tolerance (times L) of a node are considered on the node
    INTERFACE_TOLERANCE = 1e-14

    #: Side flag: the limit from the left
    LEFT                = -1
    #: Side flag: the limit from the right
    RIGHT               = 1

    def __init__(self, nodes, interfaces=()):
        """
        Constructor from explicit nodes; use :py:meth:`Mesh.build_uniform_mesh` for the uniform case.

        :param nodes:      strictly increasing coordinates :math:`0 = x_0 < \\ldots < x_N = L`
        :type nodes:       sequence of float
        :param interfaces: strictly increasing interface coordinates inside (0,L)
        :type interfaces:  sequence of float
        """
        nodes      = np.asarray(nodes, dtype=float)
        interfaces = np.asarray(interfaces, dtype=float).reshape(-1)

        if nodes.ndim != 1 or len(nodes) < 2:
            raise InvalidMesh("A mesh needs at least two nodes")
        if nodes[0] != 0.0:
            raise InvalidMesh("The first node must be 0; got %r" % nodes[0])
        if np.any(np.diff(nodes) <= 0):
            raise InvalidMesh("Mesh nodes must be strictly increasing")

        #: :math:`L`
        self.domain_length = float(nodes[-1])
        #: node coordinates, numpy array of length N+1
        self.nodes         = nodes
        self.nodes.setflags(write=False)

        if np.any(np.diff(interfaces) <= 0):
            raise InvalidMesh("Interfaces must be strictly increasing: %s" % str(interfaces.tolist()))
        if len(interfaces) > 0 and (interfaces[0] <= 0.0 or interfaces[-1] >= self.domain_length):
            raise InvalidMesh("Interfaces must lie in (0, %g): %s" % (self.domain_length, str(interfaces.tolist())))

        #: interface coordinates
        self.interfaces    = interfaces
        self.interfaces.setflags(write=False)

        tol = Mesh.INTERFACE_TOLERANCE*self.domain_length
        #: per element, the interface coordinate inside it or None
        self.element_interface = [None]*self.num_elements
        for gamma in interfaces:
            nearest = np.min(np.abs(nodes - gamma))
            if nearest <= tol:
                raise InterfaceOnNode("Interface %.17g coincides with a mesh node (distance %.3g)" % (gamma, nearest))
            elem = int(np.searchsorted(nodes, gamma)) - 1
            if self.element_interface[elem] is not None:
                raise TwoInterfacesInElement("Element %d (%.17g, %.17g) contains interfaces %.17g and %.17g" %
                                             (elem, nodes[elem], nodes[elem+1], self.element_interface[elem], gamma))
            self.element_interface[elem] = float(gamma)

        #: indices of elements containing an interface, in increasing order
        self.enriched_elements = [e for e, g in enumerate(self.element_interface) if g is not None]

    @staticmethod
    def build_uniform_mesh(L, N, interfaces=()):
        """
        Uniform mesh with nodes :math:`x_i = iL/N`.

        :param L:          domain length
        :param N:          number of elements, at least 2
        :param interfaces: interface coordinates
        """
        if int(N) != N or N < 2:
            raise InvalidMesh("Uniform mesh needs N >= 2 elements; got %r" % N)
        if not L > 0:
            raise InvalidMesh("Domain length must be positive; got %r" % L)
        N = int(N)
        # i*L/N rather than i*h so nodes like 1/3 come out bitwise equal to the interface
        nodes = np.array([i*L/N for i in range(N+1)], dtype=float)
        nodes[-1] = L
        return Mesh(nodes, interfaces)

    @property
    def num_elements(self):
        return len(self.nodes) - 1

    @property
    def num_subdomains(self):
        return len(self.interfaces) + 1

    @property
    def h(self):
        """
        Mesh size, the largest element length.
        """
        return float(np.max(np.diff(self.nodes)))

    def element(self, e):
        """
        Returns element *e* as an :py:class:`Interval`.
        """
        return Interval(self.nodes[e], self.nodes[e+1])

    def element_lengths(self):
        return np.diff(self.nodes)

    def subdomain_bounds(self, j):
        """
        Returns :math:`\\Omega_j` as an :py:class:`Interval`.
        """
        bounds = np.concatenate(([0.0], self.interfaces, [self.domain_length]))
        return Interval(bounds[j], bounds[j+1])

    def check_in_domain(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0) or np.any(x > self.domain_length) or np.any(np.isnan(x)):
            raise OutOfDomain("Coordinate(s) outside [0, %g]: %s" % (self.domain_length, str(x[(x < 0) | (x > self.domain_length)])))
        return x

    def subdomain_of(self, x, side=LEFT):
        """
        Returns the index j of the subdomain :math:`\\Omega_j` containing *x*.

        At an interface the left subdomain is returned unless *side* is :py:attr:`Mesh.RIGHT`.
        Accepts a scalar or a numpy array of coordinates.
        """
        xa  = self.check_in_domain(x)
        idx = np.searchsorted(self.interfaces, xa, side='right' if side == Mesh.RIGHT else 'left')
        if np.ndim(x) == 0:
            return int(idx)
        return idx

    def element_of(self, x, side=LEFT):
        """
        Returns the index of the element containing *x*.  At a node, *side* picks the element to
        the left or to the right of it; the boundary nodes always resolve into the domain.
        """
        xa  = self.check_in_domain(x)
        if side == Mesh.RIGHT:
            idx = np.searchsorted(self.nodes, xa, side='right') - 1
        else:
            idx = np.searchsorted(self.nodes, xa, side='left') - 1
        idx = np.clip(idx, 0, self.num_elements-1)
        if np.ndim(x) == 0:
            return int(idx)
        return idx

    def interface_at(self, x):
        """
        Returns the interface coordinate within tolerance of *x*, or None.
        """
        if len(self.interfaces) == 0:
            return None
        tol  = Mesh.INTERFACE_TOLERANCE*self.domain_length
        dist = np.abs(self.interfaces - x)
        k    = int(np.argmin(dist))
        return float(self.interfaces[k]) if dist[k] <= tol else None

    def build_control_volumes(self, kind):
        """
        Builds the control volume collection :math:`\\mathcal{T}^*` of the given kind.

        :param kind: one of :py:attr:`ControlVolumeSet.KINDS`
        :return: :py:class:`ControlVolumeSet`
        """
        if kind == ControlVolumeSet.KIND_WHOLE_DOMAIN:
            volumes = [Interval(0.0, self.domain_length)]

        elif kind == ControlVolumeSet.KIND_PER_SUBDOMAIN:
            volumes = [self.subdomain_bounds(j) for j in range(self.num_subdomains)]

        elif kind == ControlVolumeSet.KIND_DUAL_MIDPOINT:
            midpoints = 0.5*(self.nodes[:-1] + self.nodes[1:])
            for t in midpoints:
                gamma = self.interface_at(t)
                if gamma is not None:
                    raise EndpointOnInterface("Element midpoint %.17g coincides with interface %.17g" % (t, gamma))
            volumes = [Interval(midpoints[j], midpoints[j+1]) for j in range(len(midpoints)-1)]

        else:
            raise InvalidMesh("Unknown control volume kind [%s]; expected one of %s" % (kind, ControlVolumeSet.KINDS))

        SgfemLogger.debug("Built %d %s control volumes" % (len(volumes), kind))
        return ControlVolumeSet(volumes, kind)
