"""Random arithmetic-progression hypergraphs, AP-constrained NAE-SAT and 2-coloring."""

from .core import Coloring, Progression, enumerate_progressions, is_prime, overlap_fraction, progression_vertices, xor_coloring
from .counting import (MonoCount, beta_fraction, bichromatic_prob_single, count_monochromatic_brute,
                       find_mono_count_witness, mono_ap3_closed_form, pair_bichromatic_prob, pair_nae_satisfy_prob)
from .generators import (ApHypergraph, Formula, SignedClause, clause_count, make_rng, parse_instance,
                         format_instance, sample_ap_hypergraph_m, sample_ap_hypergraph_p, sample_nae_formula)
from .harness import (ScanRow, crossover_estimate, estimate_sat_probability, threshold_scan,
                      verify_moments_montecarlo)
from .moments import (MomentReport, binary_entropy, f_alpha, first_moment_threshold, log2_first_moment_2col,
                      log2_first_moment_nae, log2_second_moment_2col, log2_second_moment_nae, moment_report,
                      second_moment_diagnostic, second_moment_diagnostic_2col)
from .solvers import (SolveResult, Status, count_2col_exhaustive, count_nae_exhaustive, decide_2col,
                      decide_nae, nae_evaluate)

__version__ = "0.1.0"
