"""Numerical laboratory for an interlacing particle process.

Exact Monte Carlo simulation of a push-block interlacing dynamics together
with contour-integral evaluation of its determinantal correlation kernels:
the finite-time kernel, the tacnode scaling limit, the GUE-minor degeneration
and the Pearcey degeneration, plus the macroscopic saddle-point geometry.
"""

from tacnode_lab.contours import (
    Circle,
    Cross,
    Inverted,
    KernelValue,
    NonConvergence,
    NonFinite,
    QuadNode,
    RayPair,
    VerticalLine,
    integrate_adaptive,
    nodes,
)
from tacnode_lab.correlations import (
    RhoValue,
    complement_kernel,
    endpoint_block_rho,
    rho,
)
from tacnode_lab.finite_kernel import (
    GridPoint,
    ModelParams,
    kernel_finite,
    recurrence_residuals,
)
from tacnode_lab.limits import (
    GUEPoint,
    PearceyPoint,
    kernel_gue_limit,
    kernel_gue_minor,
    kernel_pearcey,
    scaled_finite_for_tacnode,
    scaled_tacnode_for_gue,
    scaled_tacnode_for_pearcey,
    window_grid_point,
)
from tacnode_lab.macro import (
    BoundaryPoint,
    MacroPoint,
    SaddleResult,
    boundary_curve,
    cusp_points,
    saddle,
)
from tacnode_lab.simulate import (
    EndpointTarget,
    PairTarget,
    ParticleConfig,
    SimConfig,
    apply_jump,
    estimate_occupancy,
    estimate_pair_and_endpoints,
    init_config,
    run_trials,
)
from tacnode_lab.tacnode import (
    TacnodeParams,
    TacnodePoint,
    endpoint_kernel,
    kernel_tacnode,
)

__version__ = "0.1.0"
