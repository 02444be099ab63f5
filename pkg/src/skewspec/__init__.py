"""skewspec: spectra of randomly oriented Erdos-Renyi random graphs.

Sampling of random orientations, a real skew-symmetric eigensolver,
semicircle-law reference quantities, exact closed-walk oracles, and a
parallel Monte Carlo ensemble driver with a CLI front end.
"""

from .ensemble import (
    EnsembleConfig,
    EnsembleReport,
    Histogram,
    replica_spectrum,
    run_ensemble,
    weyl_report_for_seed,
)
from .errors import (
    DegenerateNormalization,
    EnumerationBoundExceeded,
    InvalidConfig,
    MalformedWalk,
    NotSkewSymmetric,
    SkewSpecError,
)
from .graph_model import (
    GraphParams,
    OrientedGraph,
    SeedSpec,
    SkewMatrix,
    read_arcs,
    sample_graph,
    skew_adjacency,
    write_arcs,
)
from .normalization import (
    EntryDistribution,
    NormalizationContext,
    ShiftMatrix,
    compute_context,
    entry_distribution,
    shifted_skew_matrix,
)
from .semicircle import catalan, cdf, empirical_moment, ks_distance, moment, pdf
from .spectral import (
    ESD,
    Spectrum,
    WeylReport,
    eig_skew,
    esd,
    spectral_radius,
    weyl_bounds,
    y_spectrum_closed_form,
)
from .walk_oracle import (
    MCEstimate,
    Walk,
    WalkClassification,
    classify_walk,
    count_tree_walks,
    exact_entry_moment,
    trace_moment_exact_tiny,
    trace_moment_mc,
    trace_moment_walk_sum,
)

__version__ = "0.1.0"
