import numpy as np
import pytest

from sgfem.Error import EndpointOnInterface, InterfaceOnNode, InvalidMesh, OutOfDomain, TwoInterfacesInElement
from sgfem.Mesh  import ControlVolumeSet, Interval, Mesh


def test_interface_on_node():
    with pytest.raises(InterfaceOnNode):
        Mesh.build_uniform_mesh(1.0, 3, [1.0/3.0, 2.0/3.0])

def test_two_interfaces_in_element():
    with pytest.raises(TwoInterfacesInElement):
        Mesh.build_uniform_mesh(1.0, 2, [0.2, 0.3])

def test_bad_meshes():
    with pytest.raises(InvalidMesh):
        Mesh.build_uniform_mesh(1.0, 1)
    with pytest.raises(InvalidMesh):
        Mesh.build_uniform_mesh(0.0, 10)
    with pytest.raises(InvalidMesh):
        Mesh([0.0, 0.5, 0.4, 1.0])
    with pytest.raises(InvalidMesh):
        Mesh.build_uniform_mesh(1.0, 10, [0.55, 0.25])
    with pytest.raises(InvalidMesh):
        Mesh.build_uniform_mesh(1.0, 10, [1.5])

def test_enriched_elements():
    mesh = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0])
    assert mesh.num_elements      == 10
    assert mesh.num_subdomains    == 3
    assert mesh.enriched_elements == [3, 6]
    assert np.allclose([mesh.element(3).left, mesh.element(3).right], [0.3, 0.4])
    assert np.allclose([mesh.element(6).left, mesh.element(6).right], [0.6, 0.7])
    assert mesh.element_interface[3] == 1.0/3.0
    assert mesh.h == pytest.approx(0.1)

def test_no_interfaces():
    mesh = Mesh.build_uniform_mesh(1.0, 10, [])
    assert mesh.enriched_elements == []
    assert mesh.num_subdomains    == 1

def test_nodes_exact():
    mesh = Mesh.build_uniform_mesh(1.0, 9, [0.5])
    assert mesh.nodes[3] == 1.0/3.0
    assert mesh.nodes[-1] == 1.0
    assert np.allclose(mesh.element_lengths(), 1.0/9.0)
    assert mesh.element_lengths().sum() == pytest.approx(1.0)

def test_subdomain_of():
    mesh = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0])
    assert mesh.subdomain_of(0.1) == 0
    assert mesh.subdomain_of(0.5) == 1
    assert mesh.subdomain_of(1.0/3.0) == 0
    assert mesh.subdomain_of(1.0/3.0, Mesh.RIGHT) == 1
    assert list(mesh.subdomain_of(np.array([0.0, 0.5, 1.0]))) == [0, 1, 2]

    mesh = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0, 8.0/9.0])
    assert mesh.subdomain_of(0.95) == 3

    with pytest.raises(OutOfDomain):
        mesh.subdomain_of(1.5)

def test_element_of():
    mesh = Mesh.build_uniform_mesh(1.0, 4)
    assert mesh.element_of(0.3) == 1
    assert mesh.element_of(0.25) == 0
    assert mesh.element_of(0.25, Mesh.RIGHT) == 1
    assert mesh.element_of(0.0) == 0
    assert mesh.element_of(1.0, Mesh.RIGHT) == 3

def test_control_volumes_dual_midpoint():
    cvs = Mesh.build_uniform_mesh(1.0, 4).build_control_volumes(ControlVolumeSet.KIND_DUAL_MIDPOINT)
    assert len(cvs) == 3
    assert [(vol.left, vol.right) for vol in cvs] == [(0.125, 0.375), (0.375, 0.625), (0.625, 0.875)]
    assert not cvs.interface_endpoints_allowed

def test_control_volumes_whole_domain():
    cvs = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0]).build_control_volumes(ControlVolumeSet.KIND_WHOLE_DOMAIN)
    assert len(cvs) == 1
    assert cvs[0] == Interval(0.0, 1.0)

def test_control_volumes_per_subdomain():
    mesh = Mesh.build_uniform_mesh(1.0, 10, [1.0/3.0, 2.0/3.0, 8.0/9.0])
    cvs  = mesh.build_control_volumes(ControlVolumeSet.KIND_PER_SUBDOMAIN)
    assert len(cvs) == 4
    assert cvs[1] == Interval(1.0/3.0, 2.0/3.0)
    assert cvs.interface_endpoints_allowed

def test_control_volume_on_interface():
    mesh = Mesh.build_uniform_mesh(1.0, 2, [0.25])
    with pytest.raises(EndpointOnInterface):
        mesh.build_control_volumes(ControlVolumeSet.KIND_DUAL_MIDPOINT)

def test_unknown_control_volume_kind():
    with pytest.raises(InvalidMesh):
        Mesh.build_uniform_mesh(1.0, 4).build_control_volumes("everything")

if __name__ == '__main__':
    test_enriched_elements()
    test_subdomain_of()
    test_control_volumes_dual_midpoint()
