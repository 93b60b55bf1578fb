"""
Custom problem: -(kappa u')' = 1 on (0,1), u(0) = u(1) = 0, with kappa = 1 left of GAMMA and
KAPPA_RIGHT right of it.  GAMMA must match ``interfaces`` in config_sgfem.txt.
"""
import numpy as np

GAMMA       = 0.3183098861837907
KAPPA_RIGHT = 10.0

# kappa u' = FLUX_CONSTANT - x on both sides
FLUX_CONSTANT = (KAPPA_RIGHT*GAMMA**2 - GAMMA**2 + 1.0)/(2.0*(GAMMA*(KAPPA_RIGHT - 1.0) + 1.0))

kappa_pieces = [1.0, KAPPA_RIGHT]
source       = 1.0
u_box        = (-1.0, 1.0)

reference_pieces = [
    lambda x: FLUX_CONSTANT*x - 0.5*x**2,
    lambda x: (FLUX_CONSTANT*(x - 1.0) - 0.5*(x**2 - 1.0))/KAPPA_RIGHT,
]
reference_derivative_pieces = [
    lambda x: FLUX_CONSTANT - x,
    lambda x: (FLUX_CONSTANT - x)/KAPPA_RIGHT,
]
