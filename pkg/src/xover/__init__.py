"""n-points crossover relations, reachability closures and crossover distances."""

__version__ = "0.1.0"

from .distance import (DistanceValue, KStarPolicy, directed_distance, individual_distance,
                       individual_min_generations, resolve_kstar, symmetric_distance)
from .genome import (BINARY, Alphabet, InheritanceMask, crossover_apply, enumerate_masks, genome,
                     individuals_related, offspring_pool, population, populations_related, read_population)
from .oracle import Semantics, oracle_closure_member, oracle_min_generations, s_sequence
from .poset import (IntervalUnion, LowerSet, SCnPoset, alternating_number, canonicalize, enumerate_scn,
                    mu_saturate, mu_step, represent)

__all__ = [
    "Alphabet", "BINARY", "DistanceValue", "InheritanceMask", "IntervalUnion", "KStarPolicy", "LowerSet",
    "SCnPoset", "Semantics", "alternating_number", "canonicalize", "crossover_apply", "directed_distance",
    "enumerate_masks", "enumerate_scn", "genome", "individual_distance", "individual_min_generations",
    "individuals_related", "mu_saturate", "mu_step", "offspring_pool", "oracle_closure_member",
    "oracle_min_generations", "population", "populations_related", "read_population", "represent",
    "resolve_kstar", "s_sequence", "symmetric_distance",
]
