from .model import FRSequenceLP, LinearSet, LpExposingVector, OrthantFace
from .exposing import (find_exposing, find_minimal_exposing, is_minimal_step,
                       max_support_exposing)
from .sequence import (SequenceReport, fra_minimal, minimal_cone_lp, msd_lp,
                       sd_lp, verify_sequence_lp)
from .brute import brute_force_msd, is_realizable, longest_sequences
from .matrix_sets import all_ones, matrix_linear_set, msd_upper_bound_blocks
