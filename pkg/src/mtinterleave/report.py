"""JSON payloads: witness maps, distance reports and run manifests.

Exact values travel as rational strings ("7/2"); any float next to them is
a display-only approximation and carries an ``_approx`` suffix.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

from .engine.search import DistanceReport, InterleaveResult, SearchConfig, Witness
from .mergetree import MergeTree, format_value, parse_value

WITNESS_SCHEMA_ID = "mtinterleave.witness/1"
MANIFEST_SCHEMA_ID = "mtinterleave.run-manifest/1"


def load_schema(name: str) -> dict:
    """Read one of the bundled JSON schemas ("witness" or "run_manifest")."""
    text = resources.files("mtinterleave.schemas").joinpath(f"{name}.v1.json").read_text("utf-8")
    return json.loads(text)


def _tree_nodes(tree: MergeTree, origin) -> list[dict]:
    return [
        {
            "id": u,
            "value": format_value(v),
            "parent": p,
            "origin": origin.get(u),
        }
        for u, v, p in tree.records()
    ]


def witness_to_dict(w: Witness) -> dict:
    aug = w.aug
    f, g = aug.aug_f, aug.aug_g
    src_input, dst_input = ("a", "b") if w.direction.value == "f->g" else ("b", "a")
    return {
        "schema": WITNESS_SCHEMA_ID,
        "epsilon": format_value(w.epsilon),
        "direction": w.direction.value,
        "source": {"input": src_input, "nodes": _tree_nodes(f, aug.origin_f)},
        "target": {"input": dst_input, "nodes": _tree_nodes(g, aug.origin_g)},
        "leaf_assignment": [
            {"leaf": u, "target": w.assignment[u]} for u in sorted(w.assignment)
        ],
        "node_map": [
            {
                "source": x,
                "source_value": format_value(f.value(x)),
                "target": y,
                "target_value": format_value(g.value(y)),
            }
            for x, y in sorted(w.tree_map.mapping.items())
        ],
    }


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def config_to_dict(cfg: SearchConfig) -> dict:
    return {
        "refinement": cfg.refinement,
        "max_maps": cfg.max_maps,
        "parallel": cfg.parallel,
        "deterministic_witness": cfg.deterministic_witness,
    }


def config_from_dict(d: dict) -> SearchConfig:
    return SearchConfig(
        refinement=d["refinement"],
        max_maps=d["max_maps"],
        parallel=d["parallel"],
        deterministic_witness=d["deterministic_witness"],
    )


def interleave_result_to_dict(r: InterleaveResult, with_witness: bool = True) -> dict:
    return {
        "epsilon": format_value(r.epsilon),
        "interleaved": r.interleaved,
        "direction": r.direction.value,
        "maps_enumerated": r.maps_enumerated,
        "target_sizes": list(r.target_sizes),
        "refined_target_sizes": None if r.refined_target_sizes is None else list(r.refined_target_sizes),
        "kappa": r.kappa,
        "early_exit": r.early_exit,
        "witness": witness_to_dict(r.witness) if (with_witness and r.witness) else None,
    }


def distance_report_to_dict(rep: DistanceReport) -> dict:
    return {
        "epsilon_star": format_value(rep.epsilon_star),
        "epsilon_star_approx": float(rep.epsilon_star),
        "candidate_count": rep.candidate_count,
        "direction": rep.direction.value,
        "trace": [
            {"epsilon": format_value(e), "interleaved": ok, "maps_enumerated": n}
            for e, ok, n in rep.trace
        ],
        "total_maps": rep.total_maps,
        "target_sizes": list(rep.result.target_sizes),
        "refined_target_sizes": None
        if rep.result.refined_target_sizes is None
        else list(rep.result.refined_target_sizes),
        "witness": witness_to_dict(rep.witness) if rep.witness else None,
    }


def manifest(subcommand: str, inputs: list[str], cfg: Optional[SearchConfig], result: dict,
             wall_time: Optional[float] = None, extra: Optional[dict] = None) -> dict:
    from . import __version__

    out = {
        "schema": MANIFEST_SCHEMA_ID,
        "tool_version": __version__,
        "subcommand": subcommand,
        "inputs": list(inputs),
        "config": None if cfg is None else config_to_dict(cfg),
        "result": result,
        "timing": {"wall_time_seconds": wall_time},
    }
    if extra:
        out.update(extra)
    return out


def exact(text: str) -> Fraction:
    """Inverse of the rational-string encoding used in every payload."""
    return parse_value(text)
