"""Built-in functions and the standard helper library.

Helpers that read `tableData` are defined in the language itself against the
shared global frame, so they resolve whichever dataset of that name the
project binds later.
"""

from __future__ import annotations

import functools
from decimal import Decimal

from ..errors import EvalError, SourceSpan
from ..lang.parser import parse_defs
from .interp import apply_value, compare_values, evaluate, format_num, num_to_str
from .values import (
    EMPTY_PROV, BoolV, BuiltinV, Env, ListV, NumV, OrderingV, RecordV, StrV,
    Value, kind_name, show,
)

PRELUDE_SOURCE = '''\
let ordinalMap =
   [ { lastDigit: 1, suffix: "st" },
     { lastDigit: 2, suffix: "nd" },
     { lastDigit: 3, suffix: "rd" } ];

let ordinal n =
   if n <= 0 then error "n <= 0 not supported"
   else if (n < 4) then
      numToStr n ++
      (findWithKey_ "lastDigit" n ordinalMap).suffix
   else if (n >= 4) `and` (n <= 20) then
      numToStr n ++ "th"
   else error "n > 20 not supported";

let rankLabel word n =
   (if n == 1 then "" else ordinal n ++ "-") ++ word;

let trendWord n1 n2 compareWord =
    compareWord (compare n1 n2);

let growShrink EQ = "unchanging";
    growShrink LT = "shrinking";
    growShrink GT = "growing";

let smallerHigher EQ = "equal";
    smallerHigher LT = "smaller";
    smallerHigher GT = "larger";

let improvements EQ = "no further improvements";
    improvements LT = "no further improvements";
    improvements GT = "further improvements";

let betterWorse EQ = "comparable";
    betterWorse LT = "worse";
    betterWorse GT = "better";

let unusuallyHighLow EQ = "typical";
    unusuallyHighLow LT = "unusually low";
    unusuallyHighLow GT = "unusually high";

let model_ m rows = findWithKey_ "model" m rows;

let getByYear y = filter (fun x -> x.year == y) tableData;

let getByCategory c y = head (filter (fun x -> x.type == c) (getByYear y));

let cmpTime a b = compare a.time_s b.time_s;
'''


def _want_list(v: Value, who: str, span: SourceSpan) -> ListV:
    if not isinstance(v, ListV):
        raise EvalError("TypeMismatch", f"{who} expects a list, got {kind_name(v)}", span)
    return v


def _want_num(v: Value, who: str, span: SourceSpan) -> NumV:
    if not isinstance(v, NumV):
        raise EvalError("TypeMismatch",
                        f"{who} expects a number, got {kind_name(v)} {show(v)}", span)
    return v


def _want_str(v: Value, who: str, span: SourceSpan) -> StrV:
    if not isinstance(v, StrV):
        raise EvalError("TypeMismatch",
                        f"{who} expects a string, got {kind_name(v)} {show(v)}", span)
    return v


def _want_record(v: Value, who: str, span: SourceSpan) -> RecordV:
    if not isinstance(v, RecordV):
        raise EvalError("TypeMismatch",
                        f"{who} expects a record, got {kind_name(v)}", span)
    return v


def _cells_equal(a: Value, b: Value) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, OrderingV):
        return a.name == b.name
    return getattr(a, "value", None) == getattr(b, "value", None)


def _field(row: RecordV, name: str, span: SourceSpan) -> Value:
    got = row.get(name)
    if got is None:
        raise EvalError("KeyNotFound", f"row has no field {name!r}", span)
    return got.with_extra_prov(row.prov)


def _bi_map(args, span):
    fn, xs = args
    xs = _want_list(xs, "map", span)
    return ListV(xs.prov, tuple(apply_value(fn, x, span) for x in xs.elements))


def _bi_filter(args, span):
    fn, xs = args
    xs = _want_list(xs, "filter", span)
    kept = []
    for x in xs.elements:
        keep = apply_value(fn, x, span)
        if not isinstance(keep, BoolV):
            raise EvalError("TypeMismatch",
                            f"filter predicate returned {kind_name(keep)}", span)
        if keep.value:
            kept.append(x)
    return ListV(xs.prov, tuple(kept))


def _bi_sum(args, span):
    (xs,) = args
    xs = _want_list(xs, "sum", span)
    total = Decimal(0)
    prov = EMPTY_PROV
    for x in xs.elements:
        n = _want_num(x, "sum", span)
        total += n.value
        prov |= n.effective_prov()
    return NumV(prov, total)


def _bi_length(args, span):
    (xs,) = args
    xs = _want_list(xs, "length", span)
    return NumV(EMPTY_PROV, Decimal(len(xs.elements)))


def _bi_head(args, span):
    (xs,) = args
    xs = _want_list(xs, "head", span)
    if not xs.elements:
        raise EvalError("TypeMismatch", "head of empty list", span)
    return xs.elements[0]


def _bi_compare(args, span):
    a, b = args
    return compare_values(a, b, span)


def _bi_sort(args, span):
    cmp, xs = args
    xs = _want_list(xs, "sort", span)

    def order(a: Value, b: Value) -> int:
        out = apply_value(apply_value(cmp, a, span), b, span)
        if not isinstance(out, OrderingV):
            raise EvalError("TypeMismatch",
                            f"sort comparator returned {kind_name(out)}", span)
        return {"LT": -1, "EQ": 0, "GT": 1}[out.name]

    return ListV(xs.prov, tuple(sorted(xs.elements, key=functools.cmp_to_key(order))))


def _bi_sort_by(args, span):
    key, xs = args
    xs = _want_list(xs, "sortBy", span)

    def order(a: Value, b: Value) -> int:
        ka, kb = apply_value(key, a, span), apply_value(key, b, span)
        return {"LT": -1, "EQ": 0, "GT": 1}[compare_values(ka, kb, span).name]

    return ListV(xs.prov, tuple(sorted(xs.elements, key=functools.cmp_to_key(order))))


def _extremum(args, span, want_max: bool, who: str):
    key, xs = args
    xs = _want_list(xs, who, span)
    if not xs.elements:
        raise EvalError("TypeMismatch", f"{who} of empty list", span)
    best = None
    best_key = None
    keys_prov = EMPTY_PROV
    for x in xs.elements:
        k = apply_value(key, x, span)
        keys_prov |= k.effective_prov()
        if best is None:
            best, best_key = x, k
            continue
        order = compare_values(k, best_key, span).name
        if (want_max and order == "GT") or (not want_max and order == "LT"):
            best, best_key = x, k
    # The chosen element flows out; the examined keys decorate it.
    return best.with_extra_prov(keys_prov)


def _bi_find_with_key(args, span):
    k, v, xs = args
    k = _want_str(k, "findWithKey_", span)
    xs = _want_list(xs, "findWithKey_", span)
    for row in xs.elements:
        row = _want_record(row, "findWithKey_", span)
        cell = _field(row, k.value, span)
        if _cells_equal(cell, v):
            return row
    raise EvalError("KeyNotFound", f"no row with {k.value} = {show(v)}", span)


def _bi_find_index(args, span):
    k, v, xs = args
    k = _want_str(k, "findIndex", span)
    xs = _want_list(xs, "findIndex", span)
    for i, row in enumerate(xs.elements):
        row = _want_record(row, "findIndex", span)
        cell = _field(row, k.value, span)
        if _cells_equal(cell, v):
            return NumV(EMPTY_PROV, Decimal(i + 1))
    raise EvalError("KeyNotFound", f"no row with {k.value} = {show(v)}", span)


def _bi_num_to_str(args, span):
    (n,) = args
    n = _want_num(n, "numToStr", span)
    return StrV(n.effective_prov(), num_to_str(n.value))


def _bi_format_num(args, span):
    n, places = args
    n = _want_num(n, "formatNum", span)
    places = _want_num(places, "formatNum", span)
    if places.value != int(places.value) or places.value < 0:
        raise EvalError("TypeMismatch",
                        f"formatNum places must be a non-negative integer, got {show(places)}",
                        span)
    return StrV(n.effective_prov() | places.effective_prov(),
                format_num(n.value, int(places.value)))


def _bi_error(args, span):
    (msg,) = args
    msg = _want_str(msg, "error", span)
    raise EvalError("UserError", msg.value, span)


def _bi_compare_cols(args, span):
    col, other, row = args
    col = _want_str(col, "compareCols", span)
    other = _want_str(other, "compareCols", span)
    row = _want_record(row, "compareCols", span)
    return compare_values(_field(row, col.value, span), _field(row, other.value, span), span)


def _bi_overall_comparison(args, span):
    (xs,) = args
    xs = _want_list(xs, "overallComparison", span)
    counts = {"LT": 0, "EQ": 0, "GT": 0}
    prov = EMPTY_PROV
    for x in xs.elements:
        if not isinstance(x, OrderingV):
            raise EvalError("TypeMismatch",
                            f"overallComparison expects orderings, got {kind_name(x)}", span)
        counts[x.name] += 1
        prov |= x.effective_prov()
    best = max(counts.values()) if counts else 0
    winners = [name for name, c in counts.items() if c == best]
    return OrderingV(prov, winners[0] if len(winners) == 1 else "EQ")


_BUILTINS = [
    ("map", 2, _bi_map),
    ("filter", 2, _bi_filter),
    ("sum", 1, _bi_sum),
    ("length", 1, _bi_length),
    ("head", 1, _bi_head),
    ("compare", 2, _bi_compare),
    ("sort", 2, _bi_sort),
    ("sortBy", 2, _bi_sort_by),
    ("maximumBy", 2, lambda args, span: _extremum(args, span, True, "maximumBy")),
    ("minimumBy", 2, lambda args, span: _extremum(args, span, False, "minimumBy")),
    ("findWithKey_", 3, _bi_find_with_key),
    ("findIndex", 3, _bi_find_index),
    ("numToStr", 1, _bi_num_to_str),
    ("formatNum", 2, _bi_format_num),
    ("error", 1, _bi_error),
    ("compareCols", 3, _bi_compare_cols),
    ("overallComparison", 1, _bi_overall_comparison),
]


def define_defs(env: Env, source: str) -> None:
    """Evaluate top-level definitions into env's own frame."""
    for d in parse_defs(source):
        env.define(d.name, evaluate(d.expr, env))


def prelude() -> Env:
    """Fresh global environment: builtins plus the helper library."""
    env = Env()
    for name, arity, fn in _BUILTINS:
        env.define(name, BuiltinV(EMPTY_PROV, name, arity, fn))
    define_defs(env, PRELUDE_SOURCE)
    return env


PRELUDE_NAMES = frozenset(
    [name for name, _, _ in _BUILTINS]
    + [d.name for d in parse_defs(PRELUDE_SOURCE)]
)
