import os

import pytest

from sgfem import Run

pytestmark = [pytest.mark.slow, pytest.mark.usefixtures("restore_configuration")]

MESH_SIZES = "10,20,40,80,160"

# (problem, p) -> fitted H1 slope bounds for SGFEM
H1_BOUNDS = {("example1", 1): (0.8, 1.35), ("example1", 2): (1.8, 2.35), ("example1", 3): (2.8, 3.35),
             ("example1", 4): (3.8, 4.35),
             ("example2", 1): (0.8, 1.35), ("example2", 2): (1.8, 2.35), ("example2", 3): (2.8, 3.35),
             ("example2", 4): (3.0, None)}

# (problem, p) -> fitted L2 slope bounds for SGFEM
L2_BOUNDS = {("example1", 1): (1.75, 2.4), ("example1", 3): (3.75, 4.4), ("example2", 1): (1.75, 2.4)}


def series(rates_df, method, p):
    return rates_df.loc[(rates_df["method"] == method) & (rates_df["p"] == p)]

def in_bounds(value, bounds):
    low, high = bounds
    return value >= low and (high is None or value <= high)


@pytest.mark.parametrize("problem", ["example1", "example2"])
def test_convergence(problem, tmp_path):
    '''
    SGFEM is optimal in H1 and L2, standard FEM is stuck near half order.
    '''
    rates_df = Run.run_sgfem(
        command     = "convergence",
        output_dir  = str(tmp_path),
        problem     = problem,
        method      = "fem,sgfem",
        orders      = "1,2,3,4",
        mesh_sizes  = MESH_SIZES)

    # zero initial guess always converges
    assert rates_df["iterations"].max() <= 50
    assert rates_df["residual"].max()   <= 1e-10

    for p in [1, 2, 3, 4]:
        sgfem, fem = series(rates_df, "sgfem", p), series(rates_df, "fem", p)
        assert in_bounds(sgfem["slope_h1"].iloc[0], H1_BOUNDS[(problem, p)]), "%s p=%d" % (problem, p)
        if (problem, p) in L2_BOUNDS:
            assert in_bounds(sgfem["slope_l2"].iloc[0], L2_BOUNDS[(problem, p)]), "%s p=%d" % (problem, p)

        assert fem["slope_h1"].iloc[0] <= 0.8
        assert fem["err_h1"].iloc[-1] >= 10.0*sgfem["err_h1"].iloc[-1]

    for filename in ["rates.csv", "h1.svg", "l2.svg"]:
        assert os.path.exists(os.path.join(str(tmp_path), filename))

def test_conservation(tmp_path):
    '''
    Local conservation keeps the H1 rate, and the multiplier corrector recovers the L2 rate.
    '''
    lce_df, mean_df, rates_lc_df = Run.run_sgfem(
        command         = "conservation",
        output_dir      = str(tmp_path),
        problem         = "example2",
        method          = "sgfem",
        orders          = "1,2,3",
        mesh_sizes      = MESH_SIZES,
        control_volumes = "dual-midpoint")

    for p in [1, 2, 3]:
        constrained = series(rates_lc_df, "sgfem", p)
        assert in_bounds(constrained["slope_h1_lc"].iloc[0], H1_BOUNDS[("example2", p)]), "p=%d" % p

    constrained = series(rates_lc_df, "sgfem", 2)
    corrected   = constrained["slope_l2_lc_lambda"].iloc[0]
    assert corrected >= constrained["slope_l2_lc"].iloc[0] + 0.5
    assert 2.75 <= corrected <= 3.4

    at_40 = lce_df.loc[(lce_df["N"] == 40) & (lce_df["p"].isin([2, 3]))]
    assert at_40["lce_constrained"].abs().max() <= 1e-12
    assert at_40["lce_unconstrained"].abs().max() > 1e-6

    # the unconstrained local errors shrink under refinement
    unconstrained = mean_df.loc[mean_df["p"] == 1, "mean_lce_unconstrained"].to_numpy()
    assert unconstrained[-1] < unconstrained[0]


if __name__ == '__main__':
    Run.run_sgfem(command="convergence", output_dir="output", problem="example1", method="fem,sgfem",
                  orders="1,2,3,4", mesh_sizes=MESH_SIZES)
