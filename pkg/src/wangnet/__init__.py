"""Wang-algebra network analysis and constant-R bridged T-coil design."""
from .algebra import (
    ONE,
    ZERO,
    MissingAssignmentError,
    Symbol,
    WangPoly,
    add,
    evaluate,
    intern_symbol,
    mul,
    symbols,
    wang_product,
)
from .determinant import (
    StructuredSymMatrix,
    bareiss_det,
    leibniz_det,
    numeric_det_via_wang,
    row_sum,
    wang_det,
)
from .network import (
    Element,
    LoopBasisError,
    Network,
    NetlistError,
    PoleError,
    cotrees,
    count_trees,
    duality_check,
    joint_impedance,
    load_network,
    mesh_determinant,
    mesh_matrix,
    node_determinant,
    node_matrix,
    parse_network,
    spanning_trees,
)

__version__ = "0.1.0"
