import numpy as np
import pytest

from sgfem.Basis import DofMap, EnrichmentFunction, LagrangeBasis
from sgfem.Error import IndexOutOfRange, OutOfDomain
from sgfem.Mesh  import Interval, Mesh


@pytest.mark.parametrize("degree,i,xi,expected", [
    (1, 0, 0.25,     (0.75, -1.0)),
    (2, 1, 0.5,      (1.0,   0.0)),
])
def test_shape_eval(degree, i, xi, expected):
    value, deriv = LagrangeBasis(degree).shape_eval(i, xi)
    assert value == pytest.approx(expected[0], abs=1e-14)
    assert deriv == pytest.approx(expected[1], abs=1e-13)

def test_nodal_property():
    for degree in [1, 2, 3, 4]:
        basis = LagrangeBasis(degree)
        assert np.allclose(basis.values(basis.nodes), np.eye(degree+1), atol=1e-13)
        # partition of unity
        xi = np.linspace(0.0, 1.0, 11)
        assert np.allclose(basis.values(xi).sum(axis=0), 1.0, atol=1e-13)
        assert np.allclose(basis.derivatives(xi).sum(axis=0), 0.0, atol=1e-11)

    value, _ = LagrangeBasis(3).shape_eval(2, 1.0/3.0)
    assert abs(value) < 1e-14

def test_shape_eval_errors():
    basis = LagrangeBasis(2)
    with pytest.raises(IndexOutOfRange):
        basis.shape_eval(3, 0.5)
    with pytest.raises(IndexOutOfRange):
        basis.shape_eval(-1, 0.5)
    with pytest.raises(OutOfDomain):
        basis.shape_eval(0, 1.5)

@pytest.mark.parametrize("gamma,x,expected", [(0.5, 0.5, 0.5), (0.25, 0.25, 0.375), (0.5, 0.0, 0.0), (0.5, 1.0, 0.0)])
def test_enrichment_values(gamma, x, expected):
    value, _ = EnrichmentFunction(Interval(0.0, 1.0), gamma).enrichment_eval(x)
    assert value == pytest.approx(expected, abs=1e-15)

def test_enrichment_matches_definition():
    """
    Interpolant of |x - gamma| minus |x - gamma|.
    """
    element = Interval(0.2, 0.7)
    gamma   = 0.31
    enrich  = EnrichmentFunction(element, gamma)
    x       = np.linspace(element.left, element.right, 41)
    line    = abs(element.left - gamma) + (abs(element.right - gamma) - abs(element.left - gamma))*(x - element.left)/element.length
    assert np.allclose(enrich.values(x)[0], line - np.abs(x - gamma), atol=1e-14)
    assert enrich.peak == pytest.approx(2.0*(gamma - element.left)*(element.right - gamma)/element.length)

    value, (dleft, dright) = enrich.enrichment_eval(gamma)
    assert dleft  == pytest.approx(2.0*(1.0 - enrich.ratio))
    assert dright == pytest.approx(-2.0*enrich.ratio)
    # outside the element
    assert enrich.enrichment_eval(0.9) == (0.0, (0.0, 0.0))

def test_dof_numbering():
    mesh   = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0])
    dofmap = DofMap(mesh, 2)
    assert dofmap.standard_count == 19
    assert dofmap.enriched_count == 6
    assert dofmap.dimension      == 25
    assert list(dofmap.element_dofs(0)) == [-1, 0, 1]
    assert list(dofmap.element_dofs(9)) == [17, 18, -1]
    assert list(dofmap.element_dofs(3)) == [5, 6, 7, 19, 20, 21]
    assert list(dofmap.element_dofs(6)) == [11, 12, 13, 22, 23, 24]

    fem = DofMap(mesh, 2, enriched=False)
    assert fem.dimension == 19
    assert len(fem.element_dofs(3)) == 3
    assert dofmap.dof_kind(18) == DofMap.KIND_STANDARD
    assert dofmap.dof_kind(19) == DofMap.KIND_ENRICHED

def test_support():
    mesh   = Mesh.build_uniform_mesh(1.0, 4, [0.3])
    dofmap = DofMap(mesh, 2)
    assert dofmap.support(0) == [(0, 1)]
    assert dofmap.support(1) == [(0, 2), (1, 0)]
    assert dofmap.support(dofmap.standard_count) == [(1, 3)]
    with pytest.raises(IndexOutOfRange):
        dofmap.support(dofmap.dimension)

def test_enriched_basis_eval():
    mesh   = Mesh([0.0, 1.0, 2.0], [0.5])
    dofmap = DofMap(mesh, 1)
    assert dofmap.standard_count == 1
    assert dofmap.dimension      == 3

    value, _ = dofmap.enriched_basis_eval(1, 0.5)
    assert value == pytest.approx(0.25)
    value, derivs = dofmap.enriched_basis_eval(1, 1.5)
    assert value  == 0.0
    assert derivs == (0.0, 0.0)

    # hat function at the node x=1 has one-sided derivatives 1 and -1
    value, (dleft, dright) = dofmap.enriched_basis_eval(0, 1.0)
    assert value  == pytest.approx(1.0)
    assert dleft  == pytest.approx(1.0)
    assert dright == pytest.approx(-1.0)

    with pytest.raises(OutOfDomain):
        dofmap.enriched_basis_eval(0, 2.5)

def test_enriched_basis_vanishes_at_nodes():
    mesh   = Mesh.build_uniform_mesh(1.0, 5, [0.47])
    dofmap = DofMap(mesh, 3)
    for g in range(dofmap.standard_count, dofmap.dimension):
        for x in mesh.nodes:
            assert dofmap.enriched_basis_eval(g, x)[0] == pytest.approx(0.0, abs=1e-15)

def test_node_coordinates():
    dofmap = DofMap(Mesh.build_uniform_mesh(1.0, 4), 3)
    coords = dofmap.node_coordinates()
    assert len(coords) == 13
    assert np.allclose(coords, np.linspace(0.0, 1.0, 13))

def test_segments_split_at_interfaces():
    mesh     = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0])
    segments = DofMap(mesh, 1).segments()
    assert len(segments) == 12
    assert [seg.subdomain for seg in segments if seg.element == 3] == [0, 1]
    assert [seg.side for seg in segments if seg.element == 6] == [Mesh.LEFT, Mesh.RIGHT]

if __name__ == '__main__':
    test_dof_numbering()
    test_enriched_basis_eval()
