"""Computable kernel for the five finite enrichment bases."""

from .core import (
    BaseError,
    BaseMismatch,
    BaseTag,
    VMorphism,
    VObject,
    compose,
    identity,
    morphism_from_dict,
)
from .build import (
    chain,
    coproduct,
    coproduct_copairing,
    discrete,
    initial,
    make_graph,
    make_metric,
    make_poset,
    make_quiver,
    make_set,
    path,
    product,
    product_pairing,
    tensor,
    tensor_projections,
    terminal,
    two_eps,
    unit,
)
from .homs import (
    enumerate_morphisms,
    hom,
    hom_edge_data,
    hom_element_images,
    hom_element_name,
    hom_functions,
    hom_post,
    hom_pre,
    point_indices,
    points,
    transpose,
    untranspose,
)
from .isos import curry_iso, hom_coprod_iso, pairing_iso
from .coherence import ECoprod, ETensor, Leaf, coherence_iso, evaluate
from .limits import (
    coequalizer,
    coequalizer_mediate,
    pullback,
    pullback_mediate,
)
from .classify import (
    MorphClassReport,
    classify,
    find_section,
    is_epi,
    is_mono,
    is_regular_epi,
    is_strong_epi,
    is_surjection,
    surj_inj_factor,
)
from .audit import (
    AuditResult,
    BudgetExceeded,
    Deadline,
    DEFAULT_MET_VALUES,
    adjunction_audit,
    enumerate_objects,
    is_stable,
    verify_unit_generator,
)

__all__ = [name for name in dir() if not name.startswith("_")]
