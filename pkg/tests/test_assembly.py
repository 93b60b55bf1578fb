import numpy as np
import pytest
import scipy.integrate

from sgfem.Analysis import Analysis
from sgfem.Assembly import Assembly, DiscreteSolution
from sgfem.Basis    import DofMap
from sgfem.Error    import DimensionMismatch, EndpointOnInterface
from sgfem.Mesh     import ControlVolumeSet, Interval, Mesh
from sgfem.Problem  import CoefficientModel

UNIT = CoefficientModel([], [1.0])


def ones(x):
    return np.ones(np.shape(x))

def unit_vector(dofmap, g):
    coefficients    = np.zeros(dofmap.dimension)
    coefficients[g] = 1.0
    return DiscreteSolution(dofmap, coefficients)

def random_iterate(dofmap, rng, scale=0.1):
    return DiscreteSolution(dofmap, scale*rng.standard_normal(dofmap.dimension))

def smooth_pieces(mesh):
    cuts = np.unique(np.concatenate((mesh.nodes, mesh.interfaces)))
    return list(zip(cuts[:-1], cuts[1:]))


def test_discrete_solution():
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 4), 1)
    u_h    = DiscreteSolution(dofmap, [1.0, 2.0, 1.0])
    assert u_h(0.5) == pytest.approx(2.0)
    assert u_h(0.125) == pytest.approx(0.5)
    assert u_h.value(1.0) == 0.0
    assert u_h.derivative(0.5, Mesh.LEFT)  == pytest.approx(4.0)
    assert u_h.derivative(0.5, Mesh.RIGHT) == pytest.approx(-4.0)
    assert np.allclose(u_h(np.array([0.0, 0.25, 0.375])), [0.0, 1.0, 1.5])
    assert u_h.flux(0.1, CoefficientModel([], [3.0])) == pytest.approx(-12.0)

    with pytest.raises(DimensionMismatch):
        DiscreteSolution(dofmap, [1.0, 2.0])

def test_load_standard():
    assert np.allclose(Assembly.assemble_load(ones, DofMap(Mesh.build_uniform_mesh(1.0, 4), 1)), [0.25]*3)
    # Simpson weights
    load = Assembly.assemble_load(ones, DofMap(Mesh.build_uniform_mesh(1.0, 4), 2))
    assert np.allclose(load, [1.0/6, 1.0/12, 1.0/6, 1.0/12, 1.0/6, 1.0/12, 1.0/6])

def test_load_enriched():
    mesh   = Mesh.build_uniform_mesh(1.0, 4, [0.3])
    dofmap = DofMap(mesh, 2)
    load   = Assembly.assemble_load(lambda x: np.sin(np.pi*x), dofmap)
    for g in range(dofmap.standard_count, dofmap.dimension):
        phi      = unit_vector(dofmap, g)
        expected = sum(scipy.integrate.quad(lambda x: np.sin(np.pi*x)*phi(x), a, b, epsabs=1e-14)[0]
                       for a, b in smooth_pieces(mesh))
        assert load[g] == pytest.approx(expected, abs=1e-12)

def test_stiffness_stencil():
    matrix = Assembly.assemble_a(DiscreteSolution(DofMap(Mesh.build_uniform_mesh(1.0, 4), 1)), CoefficientModel([], [3.0]))
    assert np.allclose(matrix, 12.0*np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]))

def test_stiffness_enriched_entries():
    mesh   = Mesh.build_uniform_mesh(1.0, 4, [0.3])
    dofmap = DofMap(mesh, 2)
    model  = CoefficientModel([0.3], [1.0, 10.0])
    matrix = Assembly.assemble_a(DiscreteSolution(dofmap), model)
    assert np.allclose(matrix, matrix.T, atol=1e-12)

    dofs   = [g for g in dofmap.element_dofs(1) if g >= 0]
    assert len(dofs) == 2*dofmap.degree + 2
    for i in dofs:
        for j in dofs:
            phi_i, phi_j = unit_vector(dofmap, i), unit_vector(dofmap, j)
            expected = 0.0
            for a, b in smooth_pieces(mesh):
                kappa     = 1.0 if b <= 0.3 else 10.0
                expected += scipy.integrate.quad(lambda x: kappa*phi_i.derivative(x)*phi_j.derivative(x), a, b, epsabs=1e-13)[0]
            assert matrix[j, i] == pytest.approx(expected, abs=1e-10, rel=1e-10)

def test_b_matrix_zero(example1):
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 10, example1.interfaces), 2)
    v      = random_iterate(dofmap, np.random.default_rng(3))
    # u-independent coefficient
    assert not np.any(Assembly.assemble_b(v, UNIT))
    # constant iterate has no gradient
    assert not np.any(Assembly.assemble_b(DiscreteSolution(dofmap), example1.model))
    assert np.any(Assembly.assemble_b(v, example1.model))

def test_newton_system(example):
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 10, example.interfaces), 2)
    v      = random_iterate(dofmap, np.random.default_rng(11))
    system = Assembly.assemble_newton(v, example.model, example.source)
    assert np.allclose(system.matrix, Assembly.assemble_a(v, example.model) + Assembly.assemble_b(v, example.model))
    assert np.allclose(system.rhs, Assembly.residual(v, example.model, example.source))

def test_residual():
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 8, [0.3]), 2)
    load   = Assembly.assemble_load(ones, dofmap)
    assert np.allclose(Assembly.residual(DiscreteSolution(dofmap), UNIT, ones), load)

    # linear coefficient: r = l - A v
    v      = random_iterate(dofmap, np.random.default_rng(5))
    matrix = Assembly.assemble_a(v, UNIT)
    assert np.allclose(Assembly.residual(v, UNIT, ones), load - matrix.dot(v.coefficients))

def test_constraint_value():
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 4), 2, enriched=False)
    w      = Analysis.standard_interpolant(lambda x: x*(1.0 - x), dofmap)
    volume = Interval(0.25, 0.75)
    assert Assembly.constraint_value(w, w, volume, UNIT) == pytest.approx(1.0, abs=1e-13)

    constant = DiscreteSolution(dofmap)
    assert Assembly.constraint_value(w, constant, volume, UNIT) == 0.0

def test_constraint_endpoint_on_interface():
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 4, [0.3]), 1)
    v      = DiscreteSolution(dofmap)
    with pytest.raises(EndpointOnInterface):
        Assembly.constraint_value(v, v, Interval(0.3, 0.5), UNIT)
    # allowed for per-subdomain volumes
    Assembly.constraint_value(v, v, Interval(0.3, 1.0), UNIT, True)

@pytest.mark.parametrize("source,volume,expected", [
    (ones,                           Interval(0.25, 0.75), 0.5),
    (lambda x: 5.0*x,                Interval(0.0,  1.0),  2.5),
    (lambda x: np.sin(np.pi*x),      Interval(0.0,  1.0),  2.0/np.pi),
])
def test_constraint_load(source, volume, expected):
    mesh = Mesh.build_uniform_mesh(1.0, 4, [0.3])
    assert Assembly.constraint_load(source, volume, mesh) == pytest.approx(expected, abs=1e-14)

def test_constraint_rows(example1):
    mesh   = Mesh.build_uniform_mesh(1.0, 10, example1.interfaces)
    dofmap = DofMap(mesh, 2)
    rng    = np.random.default_rng(7)
    cvs    = mesh.build_control_volumes(ControlVolumeSet.KIND_DUAL_MIDPOINT)
    v, w1, w2 = [random_iterate(dofmap, rng) for _ in range(3)]

    for volume in [cvs[2], cvs[5]]:
        row = Assembly.constraint_row(v, volume, example1.model)
        assert row.dot(w1.coefficients) == pytest.approx(Assembly.constraint_value(v, w1, volume, example1.model), abs=1e-12)
        # linear in the second argument
        combined = DiscreteSolution(dofmap, 2.5*w1.coefficients + w2.coefficients)
        assert Assembly.constraint_value(v, combined, volume, example1.model) == pytest.approx(
            2.5*Assembly.constraint_value(v, w1, volume, example1.model) + Assembly.constraint_value(v, w2, volume, example1.model), abs=1e-12)

    rows, loads, values = Assembly.constraint_system(v, cvs, example1.model, example1.source)
    assert rows.shape == (len(cvs), dofmap.dimension)
    assert loads[0] == pytest.approx(2.5*(0.15**2 - 0.05**2))
    assert values[2] == pytest.approx(Assembly.constraint_value(v, v, cvs[2], example1.model), abs=1e-12)

def test_constraint_linearized(example):
    """
    The linearization matches central differences of C(z; z).
    """
    mesh   = Mesh.build_uniform_mesh(1.0, 10, example.interfaces)
    dofmap = DofMap(mesh, 2)
    rng    = np.random.default_rng(17)
    cvs    = mesh.build_control_volumes(ControlVolumeSet.KIND_DUAL_MIDPOINT)
    eps    = 1e-6

    for trial in range(3):
        z, w   = random_iterate(dofmap, rng), random_iterate(dofmap, rng)
        volume = cvs[int(rng.integers(len(cvs)))]
        plus   = DiscreteSolution(dofmap, z.coefficients + eps*w.coefficients)
        minus  = DiscreteSolution(dofmap, z.coefficients - eps*w.coefficients)
        fd     = (Assembly.constraint_value(plus,  plus,  volume, example.model) -
                  Assembly.constraint_value(minus, minus, volume, example.model))/(2.0*eps)
        exact  = Assembly.constraint_linearized(z, w, volume, example.model)
        assert exact == pytest.approx(fd, rel=1e-5, abs=1e-6)

        row    = Assembly.linearized_row(z, volume, example.model)
        assert row.dot(w.coefficients) == pytest.approx(exact, rel=1e-10, abs=1e-10)
        assert Assembly.constraint_linearized(z, 4, volume, example.model) == pytest.approx(row[4])

def test_constraint_curvature(example2):
    mesh   = Mesh.build_uniform_mesh(1.0, 10, example2.interfaces)
    dofmap = DofMap(mesh, 2)
    z      = random_iterate(dofmap, np.random.default_rng(23))
    volume = mesh.build_control_volumes(ControlVolumeSet.KIND_DUAL_MIDPOINT)[4]
    matrix = Assembly.constraint_curvature(z, volume, example2.model)
    eps    = 1e-6
    for j in np.nonzero(np.any(matrix, axis=0))[0]:
        step     = np.zeros(dofmap.dimension)
        step[j]  = eps
        fd       = (Assembly.constraint_row(DiscreteSolution(dofmap, z.coefficients + step), volume, example2.model) -
                    Assembly.constraint_row(DiscreteSolution(dofmap, z.coefficients - step), volume, example2.model))/(2.0*eps)
        assert np.allclose(matrix[:, j], fd, rtol=1e-5, atol=1e-5)

    assert not np.any(Assembly.constraint_curvature(z, volume, UNIT))

@pytest.mark.parametrize("p", [1, 2, 3])
def test_jacobian_consistency(example, p):
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 10, example.interfaces), p)
    rng    = np.random.default_rng(p)
    for trial in range(10):
        v         = random_iterate(dofmap, rng)
        direction = rng.standard_normal(dofmap.dimension)
        diffs, slope = Analysis.jacobian_consistency(v, direction, example.model, example.source)
        assert 1.9 <= slope <= 2.1, "slope %f diffs %s" % (slope, diffs)

def test_coercivity(example):
    """
    a(v; w, w) >= kappa_min |w|_1^2, kappa_min bounding kappa over the range of v.
    """
    mesh   = Mesh.build_uniform_mesh(1.0, 10, example.interfaces)
    dofmap = DofMap(mesh, 2)
    unit   = CoefficientModel(example.interfaces, [1.0]*example.model.num_pieces)
    rng    = np.random.default_rng(29)
    x      = np.linspace(0.0, 1.0, 4001)
    for trial in range(5):
        v, w   = random_iterate(dofmap, rng), random_iterate(dofmap, rng, 1.0)
        values = v(x)
        u      = np.linspace(np.min(values) - 0.05, np.max(values) + 0.05, 201)
        kappa_min = min(np.min(example.model.piece_kappa(j, np.full(u.shape, 0.5), u)) for j in range(example.model.num_pieces))
        energy    = w.coefficients.dot(Assembly.assemble_a(v, example.model).dot(w.coefficients))
        seminorm  = w.coefficients.dot(Assembly.assemble_a(v, unit).dot(w.coefficients))
        assert seminorm > 0.0
        assert energy >= kappa_min*seminorm - 1e-10

def test_element_order(example):
    mesh   = Mesh.build_uniform_mesh(1.0, 10, example.interfaces)
    dofmap = DofMap(mesh, 2)
    rng    = np.random.default_rng(31)
    v      = random_iterate(dofmap, rng)
    for order in [list(range(mesh.num_elements))[::-1], [int(e) for e in rng.permutation(mesh.num_elements)]]:
        for assemble in [Assembly.assemble_a, Assembly.assemble_b]:
            expected = assemble(v, example.model)
            shuffled = assemble(v, example.model, element_order=order)
            assert np.max(np.abs(shuffled - expected)) <= 1e-12*max(1.0, np.max(np.abs(expected)))
        load = Assembly.assemble_load(example.source, dofmap)
        assert np.max(np.abs(Assembly.assemble_load(example.source, dofmap, element_order=order) - load)) <= 1e-12

if __name__ == '__main__':
    test_stiffness_stencil()
    test_constraint_value()
