"""rfbroker: a service broker for cloud render-farm selection.

Matches studio functional requirements against provider catalogs, scores
providers with a sensitivity-weighted aggregate utility, filters by the
threshold utility of the requester's minimum acceptable QoS, and manages SLA
negotiation plus third-party violation reports.
"""

from .catalog import (
    Catalog,
    CatalogStore,
    FunctionalCapabilities,
    ProviderProfile,
    QoSAttribute,
    QosMode,
    Tendency,
    catalog_to_dict,
    ingest_catalog,
)
from .matching import FunctionalRequirements, MatchResult, discover, matches
from .pipeline import (
    SelectionRequest,
    parse_selection_request,
    report_to_dict,
    run_selection,
)
from .scoring import (
    MinimumRequirements,
    NormalizedOffer,
    RankingEntry,
    RankingReport,
    SensitivityVector,
    WeightVector,
    aggregate_utility,
    individual_utility,
    normalize_offers,
    rank,
    threshold_utility,
    validate_request,
)
from .sla import (
    Action,
    Actor,
    Comparator,
    SlaDraft,
    SlaManager,
    SlaState,
    SlaTerm,
    ViolationReport,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Actor",
    "Catalog",
    "CatalogStore",
    "Comparator",
    "FunctionalCapabilities",
    "FunctionalRequirements",
    "MatchResult",
    "MinimumRequirements",
    "NormalizedOffer",
    "ProviderProfile",
    "QoSAttribute",
    "QosMode",
    "RankingEntry",
    "RankingReport",
    "SelectionRequest",
    "SensitivityVector",
    "SlaDraft",
    "SlaManager",
    "SlaState",
    "SlaTerm",
    "Tendency",
    "ViolationReport",
    "WeightVector",
    "aggregate_utility",
    "catalog_to_dict",
    "discover",
    "individual_utility",
    "ingest_catalog",
    "matches",
    "normalize_offers",
    "parse_selection_request",
    "rank",
    "report_to_dict",
    "run_selection",
    "threshold_utility",
    "validate_request",
]
