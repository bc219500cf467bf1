"""Interface treatment: jump systems, fictitious reps and their lookup table."""
from .interp import InterpolationWeights, extrapolation_weights, lagrange_weights
from .jump import (C_ORDER, Drop, JumpSystem, SideModuli, build_jump_system, column, eliminate,
                   jump_matrix, on_axis, pivot)
from .reps import (FictitiousRep, crossing_reps, fictitious_disassociate, fictitious_extrapolate,
                   fictitious_irregular, fictitious_regular)
from .table import RepTable, dump_reps

__all__ = ["InterpolationWeights", "extrapolation_weights", "lagrange_weights", "C_ORDER", "Drop",
           "JumpSystem", "SideModuli", "build_jump_system", "column", "eliminate", "jump_matrix",
           "on_axis", "pivot", "FictitiousRep", "crossing_reps", "fictitious_disassociate",
           "fictitious_extrapolate", "fictitious_irregular", "fictitious_regular", "RepTable",
           "dump_reps"]
