"""Exact symbolic calculus for Malliavin operators and differential forms
over a Brownian motion discretised on a rational time grid.

The exact engine represents random tensor fields by finite chaos
expansions whose kernels are piecewise constant on grid cells, refined by
strict within-cell orderings.  Every operator (gradient, divergence,
conditioning, adapted projections, exterior derivative, codifferential,
Hodge Laplacian, the two martingale-representation maps) is closed on
this class and computed in rational arithmetic, so identities verify with
residual exactly zero.  A Monte-Carlo module evaluates the same objects
pathwise for independent approximate cross-checks.
"""

from .chaos import (
    HTensorField,
    brownian,
    conditional_expectation,
    constant,
    deterministic_field,
    expectation,
    field,
    is_adapted,
    ito_product,
    l2_inner,
    l2_norm_sq,
    wiener_integral,
)
from .clark_ocone import (
    ClosednessWitness,
    Decomposition,
    closedness_witness,
    reconstruct_closed,
    reconstruct_coclosed,
    represent_co1,
    represent_co2,
    s_map,
    t_map,
)
from .contraction import contract, tensor_product
from .forms import (
    codifferential,
    commutation_check_codifferential,
    commutation_check_derivative,
    exterior_derivative,
    laplacian,
)
from .grid import TimeGrid
from .kernels import (
    CellOrderedKernel,
    KernelAtom,
    alternate,
    canonicalize,
    get_caps,
    inner_product,
    kernel,
    make_atoms,
    order_restrict,
    scalar_kernel,
    set_caps,
    swap_axes,
    symmetrize,
    zero_kernel,
)
from .malliavin import (
    condition_on_axis,
    gradient,
    ito_integral,
    project_adapted,
    project_adapted_j,
    skorohod,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
