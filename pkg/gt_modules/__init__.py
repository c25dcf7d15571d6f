from .action import BasisSpec, FormalVector, TableauBasis, apply_e, apply_f, apply_h, enumerate_ball
from .gamma import fingerprint, gamma_value
from .gg import IndexFamily, gg_relation_set, lp_condition, theorem1_check
from .realization import is_realization, max_satisfied_set, sample_realization, satisfied_set
from .relations import RelationSet, is_admissible, parse_relations, reduce, standard_set
from .tableau import Tableau, enumerate_standard, is_standard
from .verifier import check_defining_relations, cross_validate, frz_check, sweep_small_sets
