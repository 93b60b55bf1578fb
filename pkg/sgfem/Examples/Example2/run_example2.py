import os
from sgfem import Run

ex_dir = os.path.abspath(os.path.dirname(__file__))
print("Running sgfem in %s" % (ex_dir.split(os.sep)[-1:]))

Run.run_sgfem(
    command      = "conservation",
    output_dir   = os.path.join(ex_dir, "output"),
    run_config   = os.path.join(ex_dir, "config_sgfem.txt"))
