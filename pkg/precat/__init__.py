"""
Free n-precategories generated by polygraphs.

This package contains:
- Normal forms of cells and normalizing composition (cells.py, composition.py)
- An independent rewriting oracle (oracle.py)
- Morphisms of polygraphs and Conduché factorization (functor.py)
- Support and principality (support.py)
- Pushouts and polyplex liftings (polyplex.py)
- Plexes and presheaf checks (presheaf.py)
"""

from .cells import (
    MINUS, PLUS, BoundaryError, BudgetExhausted, Cell, ClassTag, Classification, Context, Element,
    Generator, Identity, InputError, Point, Polygraph, PrecatError, Whiskers, classify, include,
    truncate,
)
from .composition import (
    CompositionError, ContextError, boundary, cell_of, compose, compose_many, enumerate_cells,
    eval_context, generator_cell, identity, size, true_dim,
)
from .functor import (
    ConducheError, PolyMap, PolyMapError, all_polymaps, apply_free, check_polymap, compose_polymaps,
    conduche_factorize, enumerate_splittings, identity_polymap, inverse, is_iso, is_mono, left_divide,
    lift_identity, random_polymap, right_divide,
)
from .oracle import (
    ExprSyntaxError, TypingError, evaluate_expr, expr_boundary, normalize_expr, one_step_rewrites,
    parse, random_equal_pair, random_expr, random_polygraph, to_expr, to_text,
)
from .polyplex import (
    LiftingError, PolyplexLifting, PushoutError, build_Dkl, build_Dn, canonical_element, coproduct,
    element_iso, is_generic, is_polyplex, polyplex_lift, polyplex_measure, pushout, split_lift,
)
from .presheaf import (
    Plex, PlexTable, enumerate_plexes, makkai_check, plex_morphisms, realize_presheaf,
    restrict_along, terminal_fragment,
)
from .support import NotPrincipalError, element_morphisms, is_principal, restrict, supp, unique_morphism
from .validation import validate_polygraph

__all__ = [
    'MINUS', 'PLUS', 'Cell', 'Context', 'Element', 'Generator', 'Identity', 'Point', 'Polygraph',
    'Whiskers', 'ClassTag', 'Classification', 'classify', 'truncate', 'include',
    'identity', 'compose', 'compose_many', 'boundary', 'eval_context', 'generator_cell', 'cell_of',
    'true_dim', 'size', 'enumerate_cells',
    'parse', 'to_text', 'to_expr', 'evaluate_expr', 'normalize_expr', 'expr_boundary',
    'one_step_rewrites', 'random_expr',
    'random_equal_pair', 'random_polygraph',
    'PolyMap', 'check_polymap', 'apply_free', 'compose_polymaps', 'identity_polymap', 'is_iso',
    'inverse', 'is_mono', 'conduche_factorize', 'lift_identity', 'enumerate_splittings',
    'left_divide', 'right_divide', 'all_polymaps', 'random_polymap',
    'supp', 'restrict', 'is_principal', 'unique_morphism', 'element_morphisms',
    'PolyplexLifting', 'pushout', 'coproduct', 'polyplex_lift', 'split_lift', 'canonical_element', 'element_iso',
    'is_polyplex', 'is_generic', 'polyplex_measure', 'build_Dn', 'build_Dkl',
    'Plex', 'PlexTable', 'terminal_fragment', 'enumerate_plexes', 'realize_presheaf',
    'plex_morphisms', 'restrict_along', 'makkai_check',
    'validate_polygraph',
    'PrecatError', 'InputError', 'BoundaryError', 'BudgetExhausted', 'CompositionError',
    'ContextError', 'ExprSyntaxError', 'TypingError', 'PolyMapError', 'ConducheError',
    'NotPrincipalError', 'PushoutError', 'LiftingError',
]
