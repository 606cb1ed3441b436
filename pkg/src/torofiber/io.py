"""Input documents: YAML in, validated against ``data/input.schema.json``.

Errors point at the offending line of the source text. Indices are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

import jsonschema
import yaml

from .errors import IndexRangeError, SchemaError
from .fans import Fan, make_fan
from .fiber_space import ChartModel, ToricFiberSpace, chart_fiber_space, make_fiber_space


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("torofiber").joinpath("data/input.schema.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class FanData:
    rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]

    def build(self) -> Fan:
        return make_fan(self.rank, self.rays, self.cones)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "cones": [list(c) for c in self.cones]}


@dataclass(frozen=True)
class Options:
    K: int = 4
    S: int = 6
    format: str = "markdown"


@dataclass(frozen=True)
class InputDocument:
    mode: str
    name: str = ""
    source: Optional[FanData] = None
    target: Optional[FanData] = None
    map: tuple[tuple[int, ...], ...] = ()
    chart: Optional[ChartModel] = None
    tau: Optional[tuple[int, ...]] = None
    options: Options = field(default_factory=Options)

    def fiber_space(self) -> ToricFiberSpace:
        if self.mode == "chart":
            return chart_fiber_space(self.chart, self.name)
        return make_fiber_space(self.source.build(), self.target.build(), [list(r) for r in self.map], self.name)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"mode": self.mode}
        if self.name:
            out["name"] = self.name
        if self.mode == "fan":
            out["source"] = self.source.to_dict()
            out["target"] = self.target.to_dict()
            out["map"] = [list(r) for r in self.map]
        else:
            c = self.chart
            out["n"], out["m"] = c.n, c.m
            out["blocks"] = [list(c.block(j)) for j in range(c.m_prime)]
            if c.n_prime > c.blocks[-1]:
                out["horizontal"] = c.n_prime - c.blocks[-1]
        if self.tau is not None:
            out["tau"] = list(self.tau)
        opts = {k: v for k, v in vars(self.options).items() if v != getattr(Options(), k)}
        if opts:
            out["options"] = opts
        return out


def dump(doc: InputDocument) -> str:
    return yaml.safe_dump(doc.to_dict(), sort_keys=False, default_flow_style=None)


def document_from_fiber_space(fs: ToricFiberSpace, tau=None, options: Options = Options()) -> InputDocument:
    def fan(f: Fan) -> FanData:
        return FanData(f.rank, f.rays, tuple(c for c in f.max_cones if c))

    return InputDocument(
        "fan", fs.name, fan(fs.source), fan(fs.target), tuple(tuple(r) for r in fs.phi),
        tau=None if tau is None else tuple(sorted(tau)), options=options,
    )


# ---------------------------------------------------------------------------
# parsing


def _line(node, path) -> Optional[int]:
    """1-based line of the node reached by ``path`` (or of the deepest existing ancestor)."""
    if node is None:
        return None
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            nxt = node.value[key]
        else:
            nxt = None
        if nxt is None:
            break
        node = nxt
    return node.start_mark.line + 1


def parse(text: str) -> InputDocument:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise SchemaError(f"not valid YAML: {getattr(exc, 'problem', exc)}",
                          mark.line + 1 if mark else None) from None
    if data is None:
        raise SchemaError("empty document", 1)
    validator = jsonschema.Draft202012Validator(schema())
    errors = list(validator.iter_errors(data))
    if errors:
        # most specific error first, then the earliest line
        err = min(errors, key=lambda e: (-len(e.absolute_path),
                                         _line(node, list(e.absolute_path)) or 0, e.message))
        where = "/".join(map(str, err.absolute_path)) or "<root>"
        raise SchemaError(f"{where}: {err.message}", _line(node, list(err.absolute_path)))

    def check(cond, msg, path):
        if not cond:
            raise IndexRangeError(msg, _line(node, path))

    opts = Options(**data.get("options", {}))
    tau = data.get("tau")
    if data["mode"] == "chart":
        n, m, blocks = data["n"], data["m"], data["blocks"]
        h = data.get("horizontal", 0)
        starts = [0]
        for b in blocks:
            starts.append(starts[-1] + len(b))
        chart = ChartModel(n, m, starts[-1] + h, len(blocks), tuple(starts),
                           tuple(l for b in blocks for l in b))
        bad = chart.problems()
        if bad:
            raise SchemaError("; ".join(bad), _line(node, ["blocks"]))
        if tau is not None:
            for k, i in enumerate(tau):
                check(i < len(blocks), f"tau index {i} out of range", ["tau", k])
        return InputDocument("chart", data.get("name", ""), chart=chart,
                             tau=None if tau is None else tuple(sorted(tau)), options=opts)

    fans = {}
    for key in ("source", "target"):
        f = data[key]
        for k, r in enumerate(f["rays"]):
            check(len(r) == f["rank"], f"{key} ray {k} has length {len(r)}, rank is {f['rank']}", [key, "rays", k])
        for k, c in enumerate(f["cones"]):
            for p, i in enumerate(c):
                check(i < len(f["rays"]), f"{key} cone {k} uses ray {i} of {len(f['rays'])}",
                      [key, "cones", k, p])
        fans[key] = FanData(f["rank"], tuple(tuple(r) for r in f["rays"]),
                            tuple(sorted(tuple(sorted(c)) for c in f["cones"])))
    A = data["map"]
    check(len(A) == fans["target"].rank, f"map needs {fans['target'].rank} rows, has {len(A)}", ["map"])
    for k, row in enumerate(A):
        check(len(row) == fans["source"].rank, f"map row {k} needs {fans['source'].rank} entries", ["map", k])
    if tau is not None:
        for k, i in enumerate(tau):
            check(i < len(fans["target"].rays), f"tau index {i} out of range", ["tau", k])
    return InputDocument("fan", data.get("name", ""), fans["source"], fans["target"],
                         tuple(tuple(r) for r in A), tau=None if tau is None else tuple(sorted(tau)),
                         options=opts)
