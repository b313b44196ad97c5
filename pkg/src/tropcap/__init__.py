"""Capacities, the max-plus integral, and comonotonically maxitive functionals on finite spaces."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .capacities import (Capacity, PossibilityDensity, SpaceMap, density_of, dirac,
                         is_possibility, load_capacity, possibility_capacity, pushforward,
                         random_capacity, random_density, random_map, unanimity,
                         validate_capacity)
from .category import (FiniteSupportOuter, compose, dirac_outer, eta_image,
                       functional_pushforward, monad_law_harness, mu_bruteforce_oracle,
                       mu_inner_first, mu_outer_first, mu_possibility, naturality_check)
from .errors import (BoundaryViolation, CapacityValidationError, DomainMismatchError,
                     InvalidFunctionalError, MonotonicityViolation, NonStabilizationError,
                     PreconditionViolation, RangeViolation, TropcapError)
from .functionals import (Functional, PropertyReport, Verdict, generate_comonotone_pair,
                          property_report, refine_comonotone, upsilon_member)
from .integrals import (choquet_integral, maxplus_integral, maxplus_integral_grid_oracle,
                        sugeno_integral)
from .representation import (integral_functional, maxitivity_witness, reconstruct_capacity,
                             roundtrip_check)
from .space import (NEG_INF, FiniteSpace, RealFunction, Subset, comonotonic, distinct_values,
                    level_set)
