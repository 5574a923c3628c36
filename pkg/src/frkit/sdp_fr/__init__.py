from .model import FRSequenceSDP, SdpExposingVector, SdpFace, SdpProblem
from .ops import (ExposingStatus, apply_fr_step, build_sequence, check_exposing_sdp,
                  diagonal_lp, rank_of_exposing, sdp_to_lp_if_diagonal,
                  simplify_blockdiag, subspace_intersection, subspace_sum,
                  verify_sequence_sdp)
from .lowrank import fra_lowrank, lowrank_exposing_search
from .fixtures import notminex, sdpex2, slater_instance, worst_case_instance
