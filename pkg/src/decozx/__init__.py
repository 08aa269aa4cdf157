"""Decohered ZX diagrams: construct, evaluate, normalize, compare, synthesize."""

from .diagram import (
    Diagram,
    Node,
    affine_state,
    bend_name,
    big_green,
    big_red,
    cap,
    compose_par,
    compose_seq,
    cup,
    divide_registers,
    empty,
    fourier_gadget_state,
    gather_registers,
    green,
    identity,
    isomorphic,
    matrix_arrow,
    permutation_diagram,
    red,
    scalar,
    swap,
    unbend,
    validate,
)
from .f2linalg import (
    AffineSupport,
    affine_violation,
    canonical_basis,
    canonical_coset_rep,
    induced_permutation,
    is_affine,
    pack_bits,
    rank,
    rref,
    solve,
    subset_matrix,
    unpack_bits,
)
from .formats import (
    diagram_from_dict,
    diagram_to_dict,
    matrix_from_dict,
    matrix_to_dict,
    normal_form_from_dict,
    normal_form_to_dict,
)
from .fourier import FourierData, fourier_evaluate, fourier_synthesize, walsh_hadamard
from .fuzz import FuzzReport, random_diagram, run_fuzz
from .normalform import (
    NonAffineSupportError,
    NormalForm,
    ZeroForm,
    diagrams_equal,
    nf_to_diagram,
    normal_forms_close,
    normalize_diagram,
    normalize_state,
    synthesize,
)
from .rewrite import (
    RuleInstance,
    RuleMatchError,
    RuleSoundnessError,
    apply_rule,
    apply_rule_L,
    bialgebra,
    check_rule_soundness,
    color_convert_state,
    copy_rule,
    find_bialgebra_sites,
    find_convert_sites,
    find_copy_sites,
    find_fusion_sites,
    find_identity_sites,
    find_rule_l_sites,
    fuse_green,
    fuse_red,
    prob_xor,
    remove_identity,
    simplify,
    simplify_traced,
)
from .semantics import (
    InvalidDiagramError,
    approx_equal,
    decohere_pure,
    evaluate,
    matrix_wires,
    support,
)

__version__ = "0.1.0"
