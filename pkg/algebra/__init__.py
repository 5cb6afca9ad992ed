"""
Algebra Package
===============
Finite groups, cohomology with exact integer linear algebra, factor systems,
kernels, crossed modules and automorphisms of extensions.
"""

from .errors import (
    BoundExceeded,
    ExtkitError,
    InvariantViolation,
    MalformedDocument,
    SchemaMismatch,
    ValidationError,
)
from .groups import (
    Automorphism,
    FiniteGroup,
    GroupMap,
    OuterClassTable,
    Subgroup,
    automorphism_group,
    center,
    direct_product,
    homomorphisms,
    inner_and_outer,
    isomorphic,
    make_group,
    quotient,
)
from .cohomology import (
    Cochain,
    CoefficientModule,
    CohomologyClass,
    CohomologyGroup,
    cohomology,
    crossed_homomorphisms,
    differential,
    h1_pointed,
    seven_term_prefix,
)
from .factor_systems import (
    ExtensionGroup,
    FactorSystem,
    OuterActionLift,
    build_extension,
    c1_act,
    d_s_omega,
    equivalent,
    extract_factor_system,
    is_split,
    make_factor_system,
    semidirect,
)
from .kernels import (
    ExtClassification,
    GKernel,
    baer_product,
    characteristic_class,
    classify,
    kernels,
    make_kernel,
    torsor_act,
)
from .crossed_modules import (
    ActionData,
    CrossedModule,
    build_GS,
    decompose,
    enlarge,
    obstruction_Q,
    reduce_to_abelian,
    validate_crossed_module,
)
from .ext_automorphisms import (
    CompatiblePair,
    ExtAutomorphism,
    aut_preserving,
    gauge_group,
    lift_group_action,
    lift_pair,
    pair_action,
    wells_cocycle,
)

__all__ = [
    'BoundExceeded',
    'ExtkitError',
    'InvariantViolation',
    'MalformedDocument',
    'SchemaMismatch',
    'ValidationError',
    'Automorphism',
    'FiniteGroup',
    'GroupMap',
    'OuterClassTable',
    'Subgroup',
    'automorphism_group',
    'center',
    'direct_product',
    'homomorphisms',
    'inner_and_outer',
    'isomorphic',
    'make_group',
    'quotient',
    'Cochain',
    'CoefficientModule',
    'CohomologyClass',
    'CohomologyGroup',
    'cohomology',
    'crossed_homomorphisms',
    'differential',
    'h1_pointed',
    'seven_term_prefix',
    'ExtensionGroup',
    'FactorSystem',
    'OuterActionLift',
    'build_extension',
    'c1_act',
    'd_s_omega',
    'equivalent',
    'extract_factor_system',
    'is_split',
    'make_factor_system',
    'semidirect',
    'ExtClassification',
    'GKernel',
    'baer_product',
    'characteristic_class',
    'classify',
    'kernels',
    'make_kernel',
    'torsor_act',
    'ActionData',
    'CrossedModule',
    'build_GS',
    'decompose',
    'enlarge',
    'obstruction_Q',
    'reduce_to_abelian',
    'validate_crossed_module',
    'CompatiblePair',
    'ExtAutomorphism',
    'aut_preserving',
    'gauge_group',
    'lift_group_action',
    'lift_pair',
    'pair_action',
    'wells_cocycle',
]
