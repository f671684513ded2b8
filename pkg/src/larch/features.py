"""Per-file numeric features for the ranker.

Mirrors the labeling functions but keeps raw magnitudes (char length, import
counts, graph distance) instead of thresholded votes, and has no columns for
the two training-time oracles, which are unavailable at inference time.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .analysis import CodeFacts, ImportGraph
from .errors import MissingAnalysis
from .labeling import ENTRY_POINT_NAMES
from .repo import RepoSnapshot

FEATURE_NAMES = (
    "f1_main_fn",
    "f2_argparser",
    "f3_webframework",
    "f4b_char_length",
    "f5_main_in_name",
    "f6_entrypointish",
    "f7_dunder_init",
    "f8_testish",
    "f9_dir_depth",
    "f10b_dist_from_top",
    "f11_import_bottom",
    "f12_import_count",
    "f13_importer_count",
    "f14b_inherited_count",
)


@dataclass(frozen=True)
class FeatureVector:
    f1_main_fn: int
    f2_argparser: int
    f3_webframework: int
    f4b_char_length: int
    f5_main_in_name: int
    f6_entrypointish: int
    f7_dunder_init: int
    f8_testish: int
    f9_dir_depth: int
    f10b_dist_from_top: int
    f11_import_bottom: int
    f12_import_count: int
    f13_importer_count: int
    f14b_inherited_count: int

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if v < 0:
                raise ValueError(f"{f.name} must be non-negative, got {v}")

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=float)


def extract_features(path: str, facts: CodeFacts, graph: ImportGraph) -> FeatureVector:
    """Features for one file; facts/graph must cover it."""
    if facts.path != path:
        raise MissingAnalysis(f"facts are for {facts.path!r}, not {path!r}")
    if path not in graph.stats:
        raise MissingAnalysis(f"no graph node for {path!r}")
    node = graph.node(path)
    base = path.rsplit("/", 1)[-1]
    return FeatureVector(
        f1_main_fn=int(any("main" in fn.lower() for fn in facts.function_names)),
        f2_argparser=int(facts.has_arg_parser),
        f3_webframework=int(facts.has_web_framework),
        f4b_char_length=facts.char_length,
        f5_main_in_name=int("main" in base),
        f6_entrypointish=int(base in ENTRY_POINT_NAMES),
        f7_dunder_init=int(base == "__init__.py"),
        f8_testish=int(base.startswith("test_")),
        f9_dir_depth=path.count("/"),
        f10b_dist_from_top=node.dist_from_root,
        f11_import_bottom=int(node.is_leaf),
        f12_import_count=node.import_count,
        f13_importer_count=node.importer_count,
        f14b_inherited_count=node.inherited_count,
    )


def feature_matrix(
    snapshot: RepoSnapshot,
    facts: dict[str, CodeFacts],
    graph: ImportGraph,
) -> tuple[tuple[str, ...], np.ndarray]:
    """(paths, n x 14 float matrix) over the snapshot's Python candidates."""
    candidates = snapshot.python_candidates()
    paths = tuple(f.path for f in candidates)
    if not paths:
        return paths, np.zeros((0, len(FEATURE_NAMES)))
    rows = [extract_features(p, facts[p], graph).to_array() for p in paths]
    return paths, np.vstack(rows)
