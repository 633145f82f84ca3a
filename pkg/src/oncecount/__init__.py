"""Time-constrained serial episode counting in one pass over an event stream."""

from .engine import CounterHandle, Engine, EngineMetrics, ShardedEngine
from .model import (Event, EventBatch, FrequencyKind, Symbol, SymbolTable,
                    TimeConstrainedEpisode, are_distinct, are_nonoverlapped,
                    intern_symbol, is_valid_occurrence, make_batch, make_episode,
                    parse_episode)
from .occmap import OccMap, ValidationResult
from .rules import Alert, IncidentRule, RuleMonitor, load_rules
from .streamio import GeneratorSpec, generate_uniform, read_stream, write_stream

__all__ = [
    "Alert", "CounterHandle", "Engine", "EngineMetrics", "Event", "EventBatch",
    "FrequencyKind", "GeneratorSpec", "IncidentRule", "OccMap", "RuleMonitor",
    "ShardedEngine", "Symbol", "SymbolTable", "TimeConstrainedEpisode",
    "ValidationResult", "are_distinct", "are_nonoverlapped", "generate_uniform",
    "intern_symbol", "is_valid_occurrence", "load_rules", "make_batch",
    "make_episode", "parse_episode", "read_stream", "write_stream",
]
__version__ = "0.1.0"
