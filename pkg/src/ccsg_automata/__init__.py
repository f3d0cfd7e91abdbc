"""Linear 90/150 cellular automata models of shrinking generators and CCSGs."""

from ccsg_automata.attack import interleave_complete, nt_estimate, propagate_window, reconstruct
from ccsg_automata.automata import ca_char_poly, ca_run, ca_solve_initial_state, ca_step
from ccsg_automata.exceptions import CcsgError
from ccsg_automata.gf2poly import BinaryPolynomial, berlekamp_massey, min_poly_of_power
from ccsg_automata.keystream import ccsg_decimate, ccsg_keystream, shrink
from ccsg_automata.lfsr import lfsr_period, lfsr_sequence
from ccsg_automata.linearize import cattell_muzio_synthesize, double_rules, linearize_generator
from ccsg_automata.models import (
    CaState,
    CcsgSpec,
    InterceptedWindow,
    LfsrSpec,
    LinearizationReport,
    ReconstructionResult,
    RuleString,
    ShiftTable,
)
from ccsg_automata.phaseshift import phase_shift_table, s_discrete_log

__version__ = "0.1.0"
