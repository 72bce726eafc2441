"""cohortlens: dynamic hierarchical aggregation over outcome-labeled
temporal event sequences."""

from .cut import CutParams, CutResult, comparison_ratio, informative_cut, scent
from .hierarchy import TypeHierarchy, build_hierarchy, derive_prefix_hierarchy
from .layout import FocusLayout, HexBinGrid, focus_layout, hexbin, optimize_y, overlap
from .model import Cohort, EntityRecord, Event
from .query import (
    AnalyticContext,
    AttributeConstraint,
    QuerySpec,
    apply_attribute_filter,
    context_window,
    execute_query,
    whole_record_context,
)
from .stats import (
    ContingencyTable,
    EventTypeStats,
    chi_square_yates,
    correlation,
    occurrence_vectors,
    stats_for_all_types,
)
from .store import Dataset, ingest, load_dataset, save_dataset
from .synth import SyntheticSpec, generate_synthetic
from .timeline import SurvivalCurve, TimelineModel, add_milestone, build_timeline, kaplan_meier

__version__ = "0.1.0"
