"""ROUGE-1/2/L scoring for generated readmes.

Tokenization is deliberately minimal (lowercase, alphanumeric runs) so the
scores are reproducible across implementations.  ROUGE-L uses the
Allison-Dix bit-parallel longest-common-subsequence, which handles
multi-thousand-token documents quickly while staying exact.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    def __post_init__(self):
        for v in (self.precision, self.recall, self.f1):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"ROUGE components must lie in [0, 1], got {v}")

    @classmethod
    def from_counts(cls, overlap: int, n_candidate: int, n_reference: int) -> "RougeScore":
        p = overlap / n_candidate if n_candidate else 0.0
        r = overlap / n_reference if n_reference else 0.0
        f1 = 2 * p * r / (p + r) if p + r else 0.0
        return cls(precision=p, recall=r, f1=f1)


def tokenize_for_rouge(text: str) -> list[str]:
    """Lowercased alphanumeric runs; every other character is a separator."""
    return _TOKEN_RE.findall(text.lower())


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """Clipped n-gram overlap; empty inputs score zero rather than erroring."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(tokenize_for_rouge(candidate), n)
    ref = _ngrams(tokenize_for_rouge(reference), n)
    overlap = sum(min(count, ref[gram]) for gram, count in cand.items())
    return RougeScore.from_counts(overlap, sum(cand.values()), sum(ref.values()))


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    masks: dict[str, int] = {}
    for i, tok in enumerate(a):
        masks[tok] = masks.get(tok, 0) | (1 << i)
    row = 0
    for tok in b:
        y = masks.get(tok, 0) | row
        row = y & ~(y - ((row << 1) | 1))
    return bin(row).count("1")


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """Token-level longest common subsequence, f1 with equal weighting."""
    cand = tokenize_for_rouge(candidate)
    ref = tokenize_for_rouge(reference)
    lcs = _lcs_length(cand, ref)
    return RougeScore.from_counts(lcs, len(cand), len(ref))
