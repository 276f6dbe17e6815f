from .interp import (
    coerce_to_string, compare_values, evaluate, format_num, num_to_str,
)
from .prelude import PRELUDE_NAMES, PRELUDE_SOURCE, define_defs, prelude
from .values import (
    BoolV, BuiltinV, CellAddress, ClauseClosureV, ClosureV, Env, ListV, NumV,
    OrderingV, RecordV, StrV, Value, load_dataset, show,
)

__all__ = [
    "coerce_to_string", "compare_values", "evaluate", "format_num",
    "num_to_str", "PRELUDE_NAMES", "PRELUDE_SOURCE", "define_defs", "prelude",
    "BoolV", "BuiltinV", "CellAddress", "ClauseClosureV", "ClosureV", "Env",
    "ListV", "NumV", "OrderingV", "RecordV", "StrV", "Value", "load_dataset",
    "show",
]
