"""Rebuild the packaged default ranking model.

Trains on the deterministic synthetic corpus and writes the result to
src/larch/data/pretrained_model.json.  Rerunning produces a byte-identical
file; bump the corpus size or seed here to refresh the artifact.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from larch.gbrank import model_to_json
from larch.pipeline import identify_representative, train_from_snapshots
from larch.repo import strip_held_out
from larch.synthetic import make_synthetic_corpus

CORPUS_SIZE = 200
HOLDOUT_SIZE = 60
SEED = 0

OUT_PATH = os.path.join(
    os.path.dirname(__file__), "..", "src", "larch", "data", "pretrained_model.json"
)


def main() -> int:
    corpus = make_synthetic_corpus(CORPUS_SIZE, seed=SEED, prefix="train")
    result = train_from_snapshots([r.snapshot for r in corpus], seed=SEED)

    holdout = make_synthetic_corpus(HOLDOUT_SIZE, seed=SEED + 1, prefix="check")
    hits = 0
    for repo in holdout:
        stripped = strip_held_out(repo.snapshot)
        top = identify_representative(stripped, result.rank_model)[0].path
        hits += top == repo.planted_path
    accuracy = hits / len(holdout)
    print(f"holdout top-1 accuracy: {accuracy:.3f} ({hits}/{len(holdout)})")
    if accuracy < 0.9:
        print("refusing to ship a model below 0.9 holdout accuracy", file=sys.stderr)
        return 1

    os.makedirs(os.path.dirname(OUT_PATH), exist_ok=True)
    with open(OUT_PATH, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(result.rank_model))
    print(f"wrote {os.path.normpath(OUT_PATH)} ({len(result.rank_model.trees)} trees)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
