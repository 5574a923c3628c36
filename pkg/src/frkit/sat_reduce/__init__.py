from .cnf import (CnfInstance, assumption_violation, brute_force_sat, check_assignment,
                  duplicate_clauses, parse_dimacs, preprocess, violated_clause)
from .reduction import (IndexUniverse, ReductionInstance, assignment_to_sequence,
                        assignment_values, build_msd_sdp, exact_msd_of_reduction,
                        match_key, match_matrix, reduced_lp_for_assignment,
                        reduced_lp_with_labels, sequence_steps, truth_face_support)
from .certify import CertifyReport, certify, complete_cnf, three_variable_cnfs
