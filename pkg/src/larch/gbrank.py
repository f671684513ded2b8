"""Gradient-boosted pairwise ranking of candidate files.

Within each repository, files whose label-model posteriors differ by at
least ``pair_margin`` form ordered preference pairs; small regression trees
are fit to the pairwise logistic loss's negative gradients (RankNet style)
with Newton-step leaf values.  Training uses no randomness, so identical
inputs produce bit-identical models.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .analysis import CodeFacts, ImportGraph
from .errors import MalformedModel, NoPythonFiles, NoUsablePairs, VersionMismatch
from .features import FEATURE_NAMES, feature_matrix
from .repo import RepoSnapshot

MODEL_VERSION = 1
_EPS = 1e-9
_MIN_GAIN = 1e-12


@dataclass(frozen=True)
class RankerHyperparams:
    n_trees: int = 300
    max_depth: int = 3
    learning_rate: float = 0.1
    min_leaf: int = 5
    pair_margin: float = 0.1

    def to_dict(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "learning_rate": self.learning_rate,
            "min_leaf": self.min_leaf,
            "pair_margin": self.pair_margin,
        }


@dataclass(frozen=True)
class RepoExamples:
    """One repository's training rows: per-file features and posteriors."""

    repo_id: str
    features: np.ndarray  # (n_files, 14)
    posteriors: np.ndarray  # (n_files,)
    paths: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "features", np.asarray(self.features, dtype=float))
        object.__setattr__(self, "posteriors", np.asarray(self.posteriors, dtype=float))
        if self.features.ndim != 2 or len(self.posteriors) != self.features.shape[0]:
            raise ValueError("features must be (n, d) with one posterior per row")


@dataclass
class RankModel:
    trees: list[list[dict]]
    learning_rate: float
    hyperparams: RankerHyperparams
    feature_names: tuple[str, ...] = FEATURE_NAMES
    version: int = MODEL_VERSION
    train_loss: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class RankedFile:
    path: str
    score: float


def _predict_tree(nodes: list[dict], x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0])
    stack = [(0, np.arange(x.shape[0]))]
    while stack:
        ni, rows = stack.pop()
        if rows.size == 0:
            continue
        node = nodes[ni]
        if "value" in node:
            out[rows] = node["value"]
            continue
        left = x[rows, node["feature"]] <= node["threshold"]
        stack.append((node["left"], rows[left]))
        stack.append((node["right"], rows[~left]))
    return out


def score_vectors(model: RankModel, x: np.ndarray) -> np.ndarray:
    """Raw ranking scores for an (n, 14) feature matrix."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    total = np.zeros(x.shape[0])
    for tree in model.trees:
        total += _predict_tree(tree, x)
    return total


def _best_split(
    x: np.ndarray, g: np.ndarray, h: np.ndarray, idx: np.ndarray, min_leaf: int
) -> tuple[int, float, np.ndarray, np.ndarray] | None:
    g_sum = g[idx].sum()
    h_sum = h[idx].sum()
    parent = g_sum * g_sum / (h_sum + _EPS)
    n = idx.size
    best_gain = _MIN_GAIN
    best = None
    for j in range(x.shape[1]):
        vals = x[idx, j]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        cg = np.cumsum(g[idx][order])[:-1]
        ch = np.cumsum(h[idx][order])[:-1]
        pos = np.arange(1, n)
        valid = (sv[1:] != sv[:-1]) & (pos >= min_leaf) & (n - pos >= min_leaf)
        if not valid.any():
            continue
        gains = cg * cg / (ch + _EPS) + (g_sum - cg) ** 2 / (h_sum - ch + _EPS) - parent
        gains = np.where(valid, gains, -np.inf)
        p = int(np.argmax(gains))
        if gains[p] > best_gain:
            best_gain = float(gains[p])
            thr = (sv[p] + sv[p + 1]) / 2.0
            left = idx[order[: p + 1]]
            right = idx[order[p + 1 :]]
            best = (j, float(thr), left, right)
    return best


def _build_tree(
    x: np.ndarray, g: np.ndarray, h: np.ndarray, hp: RankerHyperparams
) -> list[dict]:
    nodes: list[dict] = []

    def grow(idx: np.ndarray, depth: int) -> int:
        ni = len(nodes)
        split = None
        if depth < hp.max_depth and idx.size >= 2 * hp.min_leaf:
            split = _best_split(x, g, h, idx, hp.min_leaf)
        if split is None:
            value = hp.learning_rate * g[idx].sum() / (h[idx].sum() + _EPS)
            nodes.append({"value": float(value)})
            return ni
        feature, thr, left_idx, right_idx = split
        nodes.append({"feature": feature, "threshold": thr, "left": -1, "right": -1})
        nodes[ni]["left"] = grow(left_idx, depth + 1)
        nodes[ni]["right"] = grow(right_idx, depth + 1)
        return ni

    grow(np.arange(x.shape[0]), 0)
    return nodes


def _build_pairs(
    dataset: Sequence[RepoExamples], margin: float
) -> tuple[np.ndarray, np.ndarray]:
    winners: list[np.ndarray] = []
    losers: list[np.ndarray] = []
    offset = 0
    for repo in dataset:
        n = repo.posteriors.shape[0]
        if n >= 2:
            diff = repo.posteriors[:, None] - repo.posteriors[None, :]
            np.fill_diagonal(diff, -np.inf)
            wi, li = np.nonzero(diff >= margin)
            if wi.size:
                winners.append(wi + offset)
                losers.append(li + offset)
        offset += n
    if not winners:
        raise NoUsablePairs(
            "no file pair within any repository separates posteriors by the pair margin"
        )
    return np.concatenate(winners), np.concatenate(losers)


def _pairwise_loss(scores: np.ndarray, wi: np.ndarray, li: np.ndarray) -> float:
    return float(np.logaddexp(0.0, -(scores[wi] - scores[li])).sum())


def train_ranker(
    dataset: Sequence[RepoExamples],
    hp: RankerHyperparams | None = None,
    seed: int = 0,
) -> RankModel:
    """Fit the boosted ranker on per-repo (features, posteriors) groups.

    The recorded ``train_loss`` starts with the constant-zero-score loss and
    appends the loss after each accepted tree; it is non-increasing by
    construction (a tree whose step would raise the loss is shrunk, and
    dropped if shrinking cannot fix it).  ``seed`` is accepted for interface
    stability; the procedure is deterministic without it.
    """
    del seed
    hp = hp or RankerHyperparams()
    dataset = [d if isinstance(d, RepoExamples) else RepoExamples(**d) for d in dataset]
    if not dataset:
        raise NoUsablePairs("empty training dataset")
    x = np.vstack([d.features for d in dataset])
    wi, li = _build_pairs(dataset, hp.pair_margin)

    scores = np.zeros(x.shape[0])
    losses = [_pairwise_loss(scores, wi, li)]
    trees: list[list[dict]] = []
    for _ in range(hp.n_trees):
        d = scores[wi] - scores[li]
        sigma = 1.0 / (1.0 + np.exp(d))
        g = np.zeros(x.shape[0])
        np.add.at(g, wi, sigma)
        np.add.at(g, li, -sigma)
        hess = sigma * (1.0 - sigma)
        h = np.zeros(x.shape[0])
        np.add.at(h, wi, hess)
        np.add.at(h, li, hess)

        tree = _build_tree(x, g, h, hp)
        step = _predict_tree(tree, x)
        if not np.abs(step).max() > 0:
            break
        new_loss = _pairwise_loss(scores + step, wi, li)
        shrinks = 0
        while new_loss > losses[-1] and shrinks < 30:
            step *= 0.5
            for node in tree:
                if "value" in node:
                    node["value"] *= 0.5
            new_loss = _pairwise_loss(scores + step, wi, li)
            shrinks += 1
        if new_loss > losses[-1]:
            break
        scores = scores + step
        trees.append(tree)
        losses.append(new_loss)

    return RankModel(
        trees=trees,
        learning_rate=hp.learning_rate,
        hyperparams=hp,
        train_loss=losses,
    )


def rank_files(
    model: RankModel,
    snapshot: RepoSnapshot,
    facts: dict[str, CodeFacts],
    graph: ImportGraph,
) -> list[RankedFile]:
    """All Python candidates scored and sorted best-first.

    Descending score, ties broken by lexicographic path, so the result is a
    total order independent of input file ordering.
    """
    paths, x = feature_matrix(snapshot, facts, graph)
    if not paths:
        raise NoPythonFiles("repository has no Python candidates to rank")
    scores = score_vectors(model, x)
    ranked = sorted(zip(paths, scores), key=lambda ps: (-ps[1], ps[0]))
    return [RankedFile(path=p, score=float(s)) for p, s in ranked]


def select_random_file(snapshot: RepoSnapshot, seed: int) -> str:
    """Uniform baseline selector over the same candidate set the ranker sees."""
    candidates = snapshot.python_candidates()
    if not candidates:
        raise NoPythonFiles("repository has no Python candidates")
    rng = random.Random(seed)
    return rng.choice([f.path for f in candidates])


def _validate_tree(tree: object, n_features: int) -> list[dict]:
    if not isinstance(tree, list) or not tree:
        raise MalformedModel("each tree must be a non-empty node list")
    out = []
    for node in tree:
        if not isinstance(node, dict):
            raise MalformedModel("tree nodes must be objects")
        if "value" in node:
            value = float(node["value"])
            if not np.isfinite(value):
                raise MalformedModel("leaf values must be finite")
            out.append({"value": value})
            continue
        try:
            feature = int(node["feature"])
            threshold = float(node["threshold"])
            left = int(node["left"])
            right = int(node["right"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedModel(f"bad tree node: {node!r}") from exc
        if not 0 <= feature < n_features:
            raise MalformedModel(f"feature index {feature} out of range")
        if not (0 < left < len(tree) and 0 < right < len(tree)):
            raise MalformedModel("child index out of range")
        out.append(
            {"feature": feature, "threshold": threshold, "left": left, "right": right}
        )
    return out


def model_to_json(model: RankModel) -> str:
    return json.dumps(
        {
            "version": model.version,
            "hyperparams": model.hyperparams.to_dict(),
            "feature_names": list(model.feature_names),
            "trees": model.trees,
        },
        indent=2,
    )


def model_from_json(text: str) -> RankModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedModel(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "version" not in data:
        raise MalformedModel("model file missing version tag")
    if data["version"] != MODEL_VERSION:
        raise VersionMismatch(
            f"model version {data['version']!r} unsupported (expected {MODEL_VERSION})"
        )
    try:
        hp = RankerHyperparams(**data["hyperparams"])
        names = tuple(data["feature_names"])
        raw_trees = data["trees"]
    except (KeyError, TypeError) as exc:
        raise MalformedModel(f"model file missing field: {exc}") from exc
    if not isinstance(raw_trees, list):
        raise MalformedModel("trees must be a list")
    trees = [_validate_tree(t, len(names)) for t in raw_trees]
    return RankModel(
        trees=trees,
        learning_rate=hp.learning_rate,
        hyperparams=hp,
        feature_names=names,
    )


def save_model(model: RankModel, sink: str | IO[str]) -> None:
    text = model_to_json(model)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w", encoding="utf-8") as fh:
            fh.write(text)


def load_model(source: str | IO[str]) -> RankModel:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return model_from_json(text)
