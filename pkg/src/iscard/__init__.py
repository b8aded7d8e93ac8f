"""Systematic, order-free design of learning-analytics indicators.

Supply a goal/question, an analysis task, and/or tabular data in any
order; the engine recommends suitable chart idioms, validates data-to-
channel bindings, and produces renderable chart specifications plus
persisted indicator cards.
"""

from .cards import (
    BindingSet,
    CardStatus,
    IdiomKind,
    IndicatorCard,
    TaskAbstraction,
    TaskKind,
    card_completeness,
    create_card,
    update_card,
)
from .catalog import ChannelRequirement, IdiomCatalogEntry, MappingConfig, load_mapping_config
from .charts import ChartSpec, build_chart_spec, parse_chart_spec, serialize_chart_spec
from .recommender import (
    Level,
    Recommendation,
    channel_requirements,
    recommend,
    recommend_by_data,
    recommend_by_task,
    validate_binding,
)
from .store import Store
from .tabular import (
    ColumnType,
    DataSignature,
    DataTable,
    data_signature,
    generate_table,
    infer_column_type,
    parse_csv,
    serialize_csv,
    set_column_type,
)

__version__ = "0.1.0"

__all__ = [
    "BindingSet",
    "CardStatus",
    "ChannelRequirement",
    "ChartSpec",
    "ColumnType",
    "DataSignature",
    "DataTable",
    "IdiomCatalogEntry",
    "IdiomKind",
    "IndicatorCard",
    "Level",
    "MappingConfig",
    "Recommendation",
    "Store",
    "TaskAbstraction",
    "TaskKind",
    "build_chart_spec",
    "card_completeness",
    "channel_requirements",
    "create_card",
    "data_signature",
    "generate_table",
    "infer_column_type",
    "load_mapping_config",
    "parse_chart_spec",
    "parse_csv",
    "recommend",
    "recommend_by_data",
    "recommend_by_task",
    "serialize_chart_spec",
    "serialize_csv",
    "set_column_type",
    "update_card",
    "validate_binding",
]
