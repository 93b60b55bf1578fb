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

from .Error      import DimensionMismatch, EndpointOnInterface
from .Mesh       import Mesh
from .Quadrature import Quadrature


class DiscreteSolution(object):
    """
    A function of the discrete space: a coefficient vector over a :py:class:`sgfem.Basis.DofMap`.
    Boundary values are zero since the boundary nodes carry no dof.
    """
    def __init__(self, dofmap, coefficients=None):
        if coefficients is None:
            coefficients = np.zeros(dofmap.dimension)
        coefficients = np.array(coefficients, dtype=float)
        if coefficients.shape != (dofmap.dimension,):
            raise DimensionMismatch("Coefficient vector has shape %s; space dimension is %d" %
                                    (str(coefficients.shape), dofmap.dimension))
        #: the :py:class:`sgfem.Basis.DofMap`
        self.dofmap       = dofmap
        #: coefficient vector
        self.coefficients = coefficients

    @property
    def mesh(self):
        return self.dofmap.mesh

    def _evaluate(self, x, side, which):
        x        = np.asarray(x, dtype=float)
        flat     = np.atleast_1d(x).ravel()
        elements = np.atleast_1d(self.mesh.element_of(flat, side))
        result   = np.zeros(flat.shape)
        for e in np.unique(elements):
            mask         = elements == e
            tables       = self.dofmap.local_eval(e, flat[mask], side)
            result[mask] = self.dofmap.local_coefficients(e, self.coefficients).dot(tables[which])
        if x.ndim == 0:
            return float(result[0])
        return result.reshape(x.shape)

    def value(self, x, side=Mesh.LEFT):
        """
        :math:`u_h(x)`; continuous, so *side* only matters for which element is used.
        """
        return self._evaluate(x, side, 0)

    __call__ = value

    def derivative(self, x, side=Mesh.LEFT):
        """
        :math:`u_h'(x)`, the one-sided limit from *side* at nodes and interfaces.
        """
        return self._evaluate(x, side, 1)

    def flux(self, x, model, side=Mesh.LEFT):
        """
        :math:`-\\kappa(x, u_h) u_h'` from *side*.
        """
        u = self.value(x, side)
        return -model.kappa(x, u, side)*self.derivative(x, side)


class AssembledSystem(object):
    """
    A dense linear system.  For saddle point systems the first *dimension* unknowns are the
    solution dofs and the rest are multipliers.
    """
    def __init__(self, matrix, rhs, dimension=None):
        #: dense square matrix
        self.matrix    = matrix
        #: right hand side
        self.rhs       = rhs
        #: number of solution dofs
        self.dimension = len(rhs) if dimension is None else dimension

    @property
    def num_constraints(self):
        return len(self.rhs) - self.dimension


class Assembly(object):
    """
    Assembly of the discrete forms.  Newton system, residual and the local conservation constraint
    functionals.

    Matrices are indexed [test function, trial function]:

    * ``a(v; u, w) = int kappa(x,v) u' w'``
    * ``b(v; eta, w) = int D2kappa(x,v) v' eta w'``
    * ``l(w) = int f w``
    """

    @staticmethod
    def _segments(dofmap, num_points, element_order):
        segments = dofmap.segments(num_points)
        if element_order is None:
            return segments
        rank = dict((e, i) for i, e in enumerate(element_order))
        return sorted(segments, key=lambda seg: rank[seg.element])

    @staticmethod
    def _scatter_matrix(matrix, dofs, local):
        mask = dofs >= 0
        idx  = dofs[mask]
        matrix[np.ix_(idx, idx)] += local[np.ix_(mask, mask)]

    @staticmethod
    def _scatter_vector(vector, dofs, local):
        mask = dofs >= 0
        vector[dofs[mask]] += local[mask]

    @staticmethod
    def _iterate_values(v, seg):
        local = np.zeros(len(seg.dofs))
        mask  = seg.dofs >= 0
        local[mask] = v.coefficients[seg.dofs[mask]]
        return local.dot(seg.values), local.dot(seg.derivatives)

    @staticmethod
    def assemble_load(source, dofmap, num_points=None, element_order=None):
        """
        The load vector :math:`\\ell(\\varphi_g)`.
        """
        load = np.zeros(dofmap.dimension)
        for seg in Assembly._segments(dofmap, num_points, element_order):
            local = seg.values.dot(seg.weights*source(seg.points))
            Assembly._scatter_vector(load, seg.dofs, local)
        return load

    @staticmethod
    def assemble_a(v, model, num_points=None, element_order=None):
        """
        The matrix :math:`a(v;\\varphi_{g'},\\varphi_g)`, symmetric.
        """
        dofmap = v.dofmap
        matrix = np.zeros((dofmap.dimension, dofmap.dimension))
        for seg in Assembly._segments(dofmap, num_points, element_order):
            u, du  = Assembly._iterate_values(v, seg)
            kappa  = model.piece_kappa(seg.subdomain, seg.points, u)
            local  = (seg.derivatives*(seg.weights*kappa)).dot(seg.derivatives.T)
            Assembly._scatter_matrix(matrix, seg.dofs, local)
        return matrix

    @staticmethod
    def assemble_b(v, model, num_points=None, element_order=None):
        """
        The matrix :math:`b(v;\\varphi_{g'},\\varphi_g)`, trial function undifferentiated.  Not symmetric.
        """
        dofmap = v.dofmap
        matrix = np.zeros((dofmap.dimension, dofmap.dimension))
        if model.linear:
            return matrix
        for seg in Assembly._segments(dofmap, num_points, element_order):
            u, du  = Assembly._iterate_values(v, seg)
            dkappa = model.piece_dkappa(seg.subdomain, seg.points, u)
            local  = (seg.derivatives*(seg.weights*dkappa*du)).dot(seg.values.T)
            Assembly._scatter_matrix(matrix, seg.dofs, local)
        return matrix

    @staticmethod
    def residual(v, model, source, num_points=None):
        """
        :math:`r_g = \\ell(\\varphi_g) - a(v; v, \\varphi_g)`.
        """
        dofmap = v.dofmap
        vector = np.zeros(dofmap.dimension)
        for seg in dofmap.segments(num_points):
            u, du  = Assembly._iterate_values(v, seg)
            kappa  = model.piece_kappa(seg.subdomain, seg.points, u)
            local  = seg.values.dot(seg.weights*source(seg.points)) - seg.derivatives.dot(seg.weights*kappa*du)
            Assembly._scatter_vector(vector, seg.dofs, local)
        return vector

    @staticmethod
    def assemble_newton(v, model, source, num_points=None):
        """
        Newton system at iterate *v* in one pass over the elements: matrix A + B and the residual.

        :return: :py:class:`AssembledSystem`
        """
        dofmap = v.dofmap
        matrix = np.zeros((dofmap.dimension, dofmap.dimension))
        vector = np.zeros(dofmap.dimension)
        for seg in dofmap.segments(num_points):
            u, du  = Assembly._iterate_values(v, seg)
            kappa  = model.piece_kappa(seg.subdomain, seg.points, u)
            local  = (seg.derivatives*(seg.weights*kappa)).dot(seg.derivatives.T)
            if not model.linear:
                dkappa = model.piece_dkappa(seg.subdomain, seg.points, u)
                local  = local + (seg.derivatives*(seg.weights*dkappa*du)).dot(seg.values.T)
            Assembly._scatter_matrix(matrix, seg.dofs, local)
            Assembly._scatter_vector(vector, seg.dofs,
                                     seg.values.dot(seg.weights*source(seg.points)) - seg.derivatives.dot(seg.weights*kappa*du))
        return AssembledSystem(matrix, vector)

    # ---------------------------------------------------------------- constraints
    @staticmethod
    def _endpoints(mesh, volume, allow_interface_endpoints):
        """
        The two (coordinate, side, sign) triples of a control volume: the right end seen from the left
        and the left end seen from the right, with the sign of the boundary difference.
        """
        for t in (volume.left, volume.right):
            if not allow_interface_endpoints and mesh.interface_at(t) is not None:
                raise EndpointOnInterface("Control volume %r has endpoint %.17g on an interface" % (volume, t))
        return [(volume.right, Mesh.LEFT, 1.0), (volume.left, Mesh.RIGHT, -1.0)]

    @staticmethod
    def constraint_value(v, w, volume, model, allow_interface_endpoints=False):
        """
        :math:`C_{\\tau^*}(v;w) = -\\kappa(x,v(x))w'(x)\\big|_{t_l}^{t_r}` with one-sided limits from inside the volume.
        """
        total = 0.0
        for t, side, sign in Assembly._endpoints(v.mesh, volume, allow_interface_endpoints):
            kappa  = model.kappa(t, v.value(t, side), side)
            total += -sign*kappa*w.derivative(t, side)
        return total

    @staticmethod
    def constraint_row(v, volume, model, allow_interface_endpoints=False):
        """
        The vector :math:`C_{\\tau^*}(v;\\varphi_g)` over all global dofs g.
        """
        row = np.zeros(v.dofmap.dimension)
        for t, side, sign in Assembly._endpoints(v.mesh, volume, allow_interface_endpoints):
            dofs, phi, dphi = v.dofmap.basis_at(t, side)
            kappa           = model.kappa(t, v.value(t, side), side)
            row[dofs]      += -sign*kappa*dphi
        return row

    @staticmethod
    def constraint_load(source, volume, mesh, num_points=None):
        """
        :math:`\\ell_{\\tau^*} = \\int_{t_l}^{t_r} f`, split at nodes and interfaces inside the volume.
        """
        if num_points is None:
            num_points = 2*Quadrature.ASSEMBLY_EXTRA + 2
        rule = Quadrature.gauss_rule(num_points)
        return Quadrature.integrate_interval(mesh, volume.left, volume.right, lambda x, side: source(x), rule)

    @staticmethod
    def constraint_linearized(z, w, volume, model, allow_interface_endpoints=False):
        """
        :math:`[Q_{\\tau^*}(z)](w) = -\\kappa(x,z)w' - D_2\\kappa(x,z)z'w\\big|_{t_l}^{t_r}`, the derivative
        of :math:`C_{\\tau^*}(z;z)` in direction w.

        :param w: a :py:class:`DiscreteSolution` or a global dof index
        """
        if isinstance(w, (int, np.integer)):
            return float(Assembly.linearized_row(z, volume, model, allow_interface_endpoints)[w])
        total = 0.0
        for t, side, sign in Assembly._endpoints(z.mesh, volume, allow_interface_endpoints):
            zt     = z.value(t, side)
            kappa  = model.kappa(t, zt, side)
            dkappa = model.dkappa(t, zt, side)
            total += -sign*(kappa*w.derivative(t, side) + dkappa*z.derivative(t, side)*w.value(t, side))
        return total

    @staticmethod
    def linearized_row(z, volume, model, allow_interface_endpoints=False):
        """
        The vector :math:`[Q_{\\tau^*}(z)](\\varphi_g)` over all global dofs g.
        """
        row = np.zeros(z.dofmap.dimension)
        for t, side, sign in Assembly._endpoints(z.mesh, volume, allow_interface_endpoints):
            dofs, phi, dphi = z.dofmap.basis_at(t, side)
            zt              = z.value(t, side)
            kappa           = model.kappa(t, zt, side)
            dkappa          = model.dkappa(t, zt, side)
            row[dofs]      += -sign*(kappa*dphi + dkappa*z.derivative(t, side)*phi)
        return row

    @staticmethod
    def constraint_curvature(z, volume, model, allow_interface_endpoints=False):
        """
        Derivative of the row :math:`C_{\\tau^*}(z;\\varphi_i)` with respect to the coefficients of z,
        as a matrix [i, j] = :math:`-D_2\\kappa(x,z)\\varphi_j\\varphi_i'\\big|_{t_l}^{t_r}`.
        """
        dim    = z.dofmap.dimension
        matrix = np.zeros((dim, dim))
        if model.linear:
            return matrix
        for t, side, sign in Assembly._endpoints(z.mesh, volume, allow_interface_endpoints):
            dofs, phi, dphi = z.dofmap.basis_at(t, side)
            dkappa          = model.dkappa(t, z.value(t, side), side)
            matrix[np.ix_(dofs, dofs)] += -sign*dkappa*np.outer(dphi, phi)
        return matrix

    @staticmethod
    def constraint_system(v, cvs, model, source):
        """
        Rows and loads of all control volumes at *v*.

        :return: (C matrix of shape (N*, dim), vector of :math:`\\ell_{\\tau^*}`, vector of :math:`C_{\\tau^*}(v;v)`)
        """
        allow = cvs.interface_endpoints_allowed
        rows  = np.array([Assembly.constraint_row(v, vol, model, allow) for vol in cvs]).reshape(len(cvs), v.dofmap.dimension)
        loads = np.array([Assembly.constraint_load(source, vol, v.mesh) for vol in cvs])
        return rows, loads, rows.dot(v.coefficients)
