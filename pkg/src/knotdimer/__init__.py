"""knotdimer: knot colorings, BOT graphs and dimer coverings.

Computes Fox and Dehn coloring matrices of knot diagrams given as PD codes,
the balanced overlaid Tait graph, Kasteleyn weightings, determinants and
Smith normal forms by matrix and by graph-theoretic routes.
"""

from .diagram import KnotDiagram, PDCode, build_diagram, diagram_from_text, faces_adjacent_to_unbounded, parse_pd
from .coloring import (
    ColoringMatrix,
    DehnColoring,
    DihedralElement,
    FoxColoring,
    count_from_snf,
    dehn_matrix_full,
    dehn_rep,
    dehn_torsion_matrix,
    dihedral_rep,
    enumerate_colorings,
    fox_matrix_full,
    fox_torsion_matrix,
    integrate,
    is_dehn_coloring,
    is_fox_coloring,
    phi,
)
from .bot import (
    BotGraph,
    KasteleynWeighting,
    build_bot,
    dehn_weighting,
    extend_weighting,
    graph_faces,
    is_kasteleyn,
    kasteleyn_weighting,
    remove_pair,
)
from .dimer import (
    determinant_report,
    enumerate_matchings,
    forcing_analysis,
    kasteleyn_determinant,
    knot_determinant,
    partition_function,
)
from .snf import SmithData, coloring_module_structure, cyclicity_by_forcing, snf_graph, snf_matrix
from .linalg import bareiss_det, minor_gcds
from .fixtures import FixtureEntry, get_fixture, load_catalog
from .errors import (
    ColoringError,
    ComponentError,
    CostCapError,
    CrossCheckError,
    DiagramError,
    KnotDimerError,
    LabelError,
    PDSyntaxError,
    PlanarityError,
    ReducednessError,
    WeightingError,
)

__version__ = "0.1.0"
