"""Combinatorial polytopes given by vertex-facet incidences, with tools for
excess degree, structural classification and executable checks."""

from .errors import InputError, NonPolytopalError, PolytopeError, ResourceLimitError
from .lattice import (FaceLattice, IncidencePolytope, Realizability, closure, dual, f_vector,
                      face_figure, face_lattice, face_rank, from_facets, graph, is_face, load,
                      loads, save, dumps, sub_polytope, vertex_figure)
from .sanity import SanityReport, require_sane, sanity_check
from .constructions import (FaceSelector, cyclic, delta, free_join, glue, j_poly, m_poly, polygon,
                            prism, product, pyramid, simplex, stack, truncate, wedge)
from .canonical import canonical_form, is_isomorphic
from .analysis import (ExcessProfile, StructureReport, classify, excess_profile,
                       facet_intersection_spectrum, identify_family, nonsimple_structure)
from .dsl import evaluate, parse, to_text
from .harness import (CorpusSpec, SuiteReport, TheoremCheck, builtin_checks, generate_corpus,
                      run_suite)

__version__ = "0.1.0"
