import numpy as np
import pytest

from sgfem.Error      import UnsupportedOrder
from sgfem.Mesh       import Mesh
from sgfem.Quadrature import Quadrature


@pytest.mark.parametrize("n", [1, 2, 5, 16, 32])
def test_gauss_rule(n):
    rule = Quadrature.gauss_rule(n)
    assert len(rule) == n
    assert np.all(rule.points > 0.0) and np.all(rule.points < 1.0)
    assert np.all(rule.weights > 0.0)
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
    # exact for degree 2n-1
    degree = 2*n - 1
    assert np.dot(rule.weights, rule.points**degree) == pytest.approx(1.0/(degree + 1), rel=1e-12)

def test_unsupported_rule():
    with pytest.raises(UnsupportedOrder):
        Quadrature.gauss_rule(0)
    with pytest.raises(UnsupportedOrder):
        Quadrature.gauss_rule(Quadrature.MAX_POINTS + 1)

@pytest.mark.parametrize("gamma,expected", [(0.5, 0.25), (0.25, 0.3125)])
def test_split_at_interface(gamma, expected):
    mesh  = Mesh([0.0, 1.0], [gamma])
    total = Quadrature.integrate_element(mesh, 0, lambda x, side: np.abs(x - gamma), Quadrature.gauss_rule(2))
    assert total == pytest.approx(expected, abs=1e-15)

def test_one_sided_pieces():
    mesh  = Mesh([0.0, 1.0], [0.4])
    # the side flag picks the piece: integrate the indicator of the right half
    total = Quadrature.integrate_element(mesh, 0, lambda x, side: np.full(len(x), float(side == Mesh.RIGHT)),
                                         Quadrature.gauss_rule(1))
    assert total == pytest.approx(0.6)

def test_constant_integrand():
    mesh = Mesh.build_uniform_mesh(2.0, 5, [0.3])
    for e in range(mesh.num_elements):
        total = Quadrature.integrate_element(mesh, e, lambda x, side: np.ones(len(x)), Quadrature.gauss_rule(3))
        assert total == pytest.approx(mesh.element(e).length, abs=1e-15)

def test_integrate_interval():
    mesh   = Mesh.build_uniform_mesh(1.0, 4, [0.3])
    pieces = Quadrature.interval_pieces(mesh, 0.1, 0.6)
    assert [a for a, b in pieces] == pytest.approx([0.1, 0.25, 0.3, 0.5])
    assert pieces[-1][1] == 0.6

    total = Quadrature.integrate_interval(mesh, 0.1, 0.6, lambda x, side: np.abs(x - 0.3), Quadrature.gauss_rule(1))
    assert total == pytest.approx(0.5*0.2**2 + 0.5*0.3**2, abs=1e-15)

if __name__ == '__main__':
    test_split_at_interface(0.25, 0.3125)
