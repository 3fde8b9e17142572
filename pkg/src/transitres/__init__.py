"""Multilayer transit network resilience analysis toolkit."""

from .attacks import AttackKind, AttackStrategy, DegradationCurve, attack_order, degradation_curve
from .build import add_transfer_edges, build_graph, core_segments
from .cascade import (
    CascadeState,
    LoadModel,
    beta_sweep,
    estimate_loads,
    node_throughput,
    recoverability_profile,
    run_cascade,
    shock_sweep,
    shortest_path_lex,
)
from .errors import InputError, NumericalError, TransitResError
from .geo import EARTH_RADIUS_M, haversine, pairs_within
from .graphio import (
    deserialize,
    load_graph,
    read_routes_csv,
    read_stations_csv,
    save_graph,
    serialize,
    write_routes_csv,
    write_stations_csv,
)
from .metrics import (
    NetworkSummary,
    NodeMetricVector,
    betweenness,
    degree_vector,
    geospatial_efficiency,
    gini,
    global_efficiency,
    network_summary,
    out_degree_vector,
    path_stats,
)
from .model import Edge, EdgeKind, Mode, MultilayerGraph, Route, Station, graph_from_edges
from .motifs import MotifCensus, enumerate_ffl, motif_attack_order, structural_hierarchy
from .nullmodel import (
    NullModelEnsemble,
    build_ensemble,
    correlation_matrix,
    pearson,
    random_replica,
    static_vs_dynamic_report,
    z_score,
)
from .paths import largest_wcc_fraction, weak_components
from .relocation import RelocationModel, RelocationResult, relocation_rate
from .sweeps import ParetoPoint, pareto_sweep, stepwise_integration
from .synth import SyntheticCitySpec, er_graph, generate_city, scale_free_graph
from .theory import (
    OptimalIntegration,
    UtilityParams,
    fit_utility_params,
    marginal_gap,
    optimal_d_closed_form_k1,
    second_derivative,
    sensitivity,
    solve_optimal_d,
    utility,
)

__version__ = "0.1.0"
