"""Monge-Ampère capacities of toric compacts via copolar covolumes.

Log-images of Reinhardt compacts are complete convex sets in the negative
orthant (:class:`GeneratorSet`); their copolars are complete sets in the
positive orthant (:class:`HalfSpaceSet`). Capacities relative to the unit
polydisk are ``n!`` times covolumes of copolars.
"""

__version__ = "0.1.0"

from .covolume import CovolumeResult, bounding_box, capacity, covolume, covolume_exact, covolume_mc, weighted_energy
from .geodesic import (
    GeodesicSpec,
    WeightedExtremal,
    contact_set_test,
    equality_case_detect,
    eval_extremal,
    eval_geodesic,
    geodesic_min,
    grid_llt_oracle,
    legendre_image,
)
from .harness import (
    CapacityReport,
    ExperimentConfig,
    check_concavity,
    check_copolar_add,
    check_logconvexity,
    check_volume_reverse_bm,
    check_weighted_bm,
    equilibrate_weights,
    run_capacity_curve,
)
from .orthant import (
    GeneratorSet,
    HalfSpaceSet,
    contains,
    copolar,
    copolar_add,
    copolar_inverse,
    interpolate,
    reduce,
    scale,
    support_function,
)
from .simplex import NumericalError
from .toric import ReinhardtSpec, geometric_mean, log_image, volume
