"""JSON helpers that keep dataset numbers exact.

Floats in source files parse to Decimal; Decimals serialize back as plain
JSON numbers (integers without a point).
"""

from __future__ import annotations

import json
from decimal import Decimal


def _default(o):
    if isinstance(o, Decimal):
        if o == o.to_integral_value() and abs(o) < Decimal(2) ** 53:
            return int(o)
        return float(o)
    if isinstance(o, frozenset):
        return sorted(o)
    raise TypeError(f"not JSON serializable: {o!r}")


def dumps(obj, indent: int | None = 2) -> str:
    return json.dumps(obj, indent=indent, ensure_ascii=False, default=_default)


def loads(text: str):
    return json.loads(text, parse_float=Decimal)


def load_file(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump_file(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj) + "\n")
