"""Box-covering based hierarchical routing on network graphs."""
from .covering import (
    Algorithm,
    Box,
    BoxCover,
    CoverError,
    GCMode,
    ciea_cover,
    cover,
    excluded_mass,
    gc_cover,
    memb_cover,
    validate_cover,
)
from .graph import (
    UNREACHABLE,
    DistanceField,
    EdgeListError,
    Graph,
    GraphError,
    HopField,
    apsp_oracle,
    bfs_hops,
    dijkstra_sssp,
    eccentricities,
    gen_random_graph,
    gen_ternary_tree,
    parse_edge_list,
    write_edge_list,
)
from .routing import (
    Method,
    NoRouteError,
    Route,
    SuperGraph,
    bcr_route,
    build_supergraph,
    compute_stretch,
    dijkstra_route,
)

__version__ = "0.1.0"
