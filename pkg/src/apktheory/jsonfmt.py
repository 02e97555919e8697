"""Compact, deterministic JSON: short arrays and objects stay on one line."""

from __future__ import annotations

import json


def compact(x, depth: int = 0, width: int = 72) -> str:
    flat = json.dumps(x, ensure_ascii=False)
    if len(flat) <= width or not isinstance(x, (dict, list)) or not x:
        return flat
    pad, inner = " " * depth, " " * (depth + 1)
    if isinstance(x, dict):
        body = ",\n".join(f"{inner}{json.dumps(k, ensure_ascii=False)}: {compact(v, depth + 1, width)}"
                          for k, v in x.items())
        return "{\n" + body + "\n" + pad + "}"
    body = ",\n".join(inner + compact(v, depth + 1, width) for v in x)
    return "[\n" + body + "\n" + pad + "]"
