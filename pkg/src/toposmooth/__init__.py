"""toposmooth: topology-preserving smoothing of 2D binary images.

Building blocks: an exact squared Euclidean distance transform (two-phase,
data-parallel), dilation/erosion by Euclidean discs, simple-point
classification with homotopic thinning and thickening, an alternating
cut/fill smoothing filter, and a balanced non-preemptive task scheduler.
"""

from .edt import edt_bruteforce, edt_phase1_columns, edt_phase2_rows, edt_squared, inf_value, sep
from .grid import (
    ADJ_48,
    ADJ_84,
    Adjacency,
    as_binary,
    background_component_count,
    complement,
    component_count,
    connected_components,
    neighbors,
)
from .morph import background_distances, dilate, erode
from .netpbm import NetpbmError, read_pbm, read_pgm, write_pbm, write_pgm
from .sched import (
    TaskAssignment,
    TaskFailure,
    nps_assign,
    run_phase,
    strided_partition,
    validate_assignment,
    worst_case_load,
)
from .smoothing import SmoothingConfig, hasf, homotopic_cutting, homotopic_filling, smooth
from .topo import (
    TopoClassification,
    connectivity_numbers,
    homotopic_thicken,
    homotopic_thin,
    is_simple,
    neighborhood_codes,
    simple_point_mask,
)

__version__ = "0.1.0"

__all__ = [
    "ADJ_48",
    "ADJ_84",
    "Adjacency",
    "NetpbmError",
    "SmoothingConfig",
    "TaskAssignment",
    "TaskFailure",
    "TopoClassification",
    "as_binary",
    "background_component_count",
    "background_distances",
    "complement",
    "component_count",
    "connected_components",
    "connectivity_numbers",
    "dilate",
    "edt_bruteforce",
    "edt_phase1_columns",
    "edt_phase2_rows",
    "edt_squared",
    "erode",
    "hasf",
    "homotopic_cutting",
    "homotopic_filling",
    "homotopic_thicken",
    "homotopic_thin",
    "inf_value",
    "is_simple",
    "neighborhood_codes",
    "neighbors",
    "nps_assign",
    "read_pbm",
    "read_pgm",
    "run_phase",
    "sep",
    "simple_point_mask",
    "smooth",
    "strided_partition",
    "validate_assignment",
    "worst_case_load",
    "write_pbm",
    "write_pgm",
]
