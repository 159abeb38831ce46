"""Exact arithmetic over Q and Q(i) with several valuations at once:
weak approximation, tuple scrambling, semilocal ring predicates,
ball-basis topologies, and a bounded checker for two-sorted local
sentences."""

from .errors import (
    AllZero, ConstructionFailed, FieldMismatch, InconsistentTargets,
    MultivalError, NonDecreasingDiscrepancy, NotInClosure, SameValuation,
    SentenceSyntaxError, SpecMismatch, Undecided, UnsupportedArity,
    UnsupportedRing, ZeroEntry, ZeroInput,
)
from .fields import (
    Q, QI, FieldElem, GaussianInt, elem, factor_int, format_elem,
    gaussian_factor, is_prime, one, parse_elem, rational_factor, zero,
)
from .valuations import (
    INF, ResidueElem, Valuation, conjugate_valuation, format_valuation,
    gaussian_valuation, parse_valuation, rational_valuation, residue,
    uniformizer, val, value_vector,
)
from .approx import (
    ValueTarget, approximate, at_least, congruence, exact_value,
    greater_than, separate,
)
from .scramble import (
    PrimeFieldMatrix, ScrambleTrace, discrepancy, is_scrambled, scramble,
    scramble_step,
)
from .rings import (
    EmbedResult, GluedRing, LocalityVerdict, MembershipAnswer,
    ModuleCertificate, MultiValuationRing, co_embeddable, contains,
    embeddability_witness, format_ring, in_jacobson, independent,
    integrality_witness, is_local_ring, is_unit, key_localizations,
    module_generator, module_membership, parse_ring, re_slide_verify,
    underlying_valuations,
)
from .topology import (
    LOCAL_RING_NONLOCAL_TOPOLOGY,
    Ball, LocalComponents, Report, TopologySpec, TopoLocalityVerdict,
    associativity_check, ball_intersection_witness, density_witness,
    independent_sum_check, is_coarser, is_local_topology, local_components,
    parse_topology, v_coarsenings,
)
from .locsent import (
    GENERATION_CONVERSE_TEXT, GENERATION_FORWARD_TEXT,
    LOCALITY_SENTENCE_TEXT, EvalVerdict, PolarityReport, SearchBounds,
    check_polarity, default_scale_bound, evaluate, generation_converse,
    generation_forward, locality_sentence, parse, to_text,
)

__version__ = "0.1.0"
