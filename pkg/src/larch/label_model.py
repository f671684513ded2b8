"""Probabilistic label model over the labeling-function vote matrix.

A two-class model with per-function accuracy and vote propensity, fit by EM.
Each file has a latent binary label y (1 = representative).  Labeling
function j votes with probability beta_j; when it votes it agrees with y
with probability theta_j.  The posterior p(y=1 | votes) becomes the training
signal for the ranker, replacing any need for hand labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateInput
from .labeling import LF_NAMES, LabelMatrix

THETA_MIN = 0.05
THETA_MAX = 0.95
PI_MIN = 1e-6
PI_MAX = 1.0 - 1e-6


@dataclass(frozen=True)
class LabelModelConfig:
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    init_class_prior: float = 0.05


@dataclass
class LabelModelParams:
    theta: np.ndarray  # per-LF accuracy, clamped to [0.05, 0.95]
    beta: np.ndarray  # per-LF vote propensity (observed non-abstain rate)
    pi: float  # class prior p(y=1)
    lf_names: tuple[str, ...] = LF_NAMES
    n_iter: int = 0
    converged: bool = False
    log_likelihood: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.beta = np.asarray(self.beta, dtype=float)
        if self.theta.shape != self.beta.shape or self.theta.ndim != 1:
            raise ValueError("theta and beta must be 1-d arrays of equal length")

    def to_json(self) -> str:
        return json.dumps(
            {
                "version": 1,
                "theta": self.theta.tolist(),
                "beta": self.beta.tolist(),
                "pi": self.pi,
                "lf_names": list(self.lf_names),
                "n_iter": self.n_iter,
                "converged": self.converged,
                "log_likelihood": self.log_likelihood,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "LabelModelParams":
        data = json.loads(text)
        return cls(
            theta=np.array(data["theta"], dtype=float),
            beta=np.array(data["beta"], dtype=float),
            pi=float(data["pi"]),
            lf_names=tuple(data["lf_names"]),
            n_iter=int(data.get("n_iter", 0)),
            converged=bool(data.get("converged", False)),
            log_likelihood=[float(x) for x in data.get("log_likelihood", [])],
        )


def _stack_votes(matrices: Sequence[LabelMatrix] | np.ndarray) -> np.ndarray:
    if isinstance(matrices, np.ndarray):
        votes = matrices
    else:
        parts = [m.votes for m in matrices]
        if not parts:
            raise DegenerateInput("no label matrices given")
        votes = np.vstack(parts)
    votes = np.asarray(votes)
    if votes.ndim != 2 or votes.shape[0] == 0:
        raise DegenerateInput("vote matrix must be non-empty and 2-d")
    if not np.isin(votes, (-1, 0, 1)).all():
        raise DegenerateInput("votes must be -1, 0 or +1")
    if not (votes != 0).any():
        raise DegenerateInput("every labeling function abstained on every file")
    return votes.astype(np.int8)


def _log_odds(votes: np.ndarray, theta: np.ndarray, pi: float) -> np.ndarray:
    pos = (votes == 1).astype(float)
    neg = (votes == -1).astype(float)
    logt = np.log(theta)
    log1t = np.log1p(-theta)
    s_plus = pos @ logt + neg @ log1t
    s_minus = pos @ log1t + neg @ logt
    return np.log(pi) - np.log1p(-pi) + s_plus - s_minus


def _log_likelihood(votes: np.ndarray, theta: np.ndarray, beta: np.ndarray, pi: float) -> float:
    pos = (votes == 1).astype(float)
    neg = (votes == -1).astype(float)
    logt = np.log(theta)
    log1t = np.log1p(-theta)
    s_plus = pos @ logt + neg @ log1t
    s_minus = pos @ log1t + neg @ logt
    per_row = np.logaddexp(np.log(pi) + s_plus, np.log1p(-pi) + s_minus)

    n = votes.shape[0]
    obs_count = (votes != 0).sum(axis=0).astype(float)
    abst_count = n - obs_count
    # Guard 0 * log(0): a propensity of exactly 0 or 1 only occurs when the
    # matching count is itself 0.
    beta_term = np.where(obs_count > 0, obs_count * np.log(np.clip(beta, 1e-300, None)), 0.0)
    abst_term = np.where(
        abst_count > 0, abst_count * np.log(np.clip(1.0 - beta, 1e-300, None)), 0.0
    )
    return float(per_row.sum() + beta_term.sum() + abst_term.sum())


def _m_step(votes: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, float]:
    pos = (votes == 1).astype(float)
    neg = (votes == -1).astype(float)
    obs_count = pos.sum(axis=0) + neg.sum(axis=0)
    agree = pos.T @ p + neg.T @ (1.0 - p)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(obs_count > 0, agree / obs_count, 0.5)
    theta = np.clip(theta, THETA_MIN, THETA_MAX)
    pi = float(np.clip(p.mean(), PI_MIN, PI_MAX))
    return theta, pi


def fit_label_model(
    matrices: Sequence[LabelMatrix] | np.ndarray,
    config: LabelModelConfig | None = None,
) -> LabelModelParams:
    """Fit accuracies, propensities and the class prior by EM.

    Deterministic: the initial responsibilities come from a soft vote
    average, not random draws, so refitting the same matrix reproduces the
    same parameters bit for bit.  The log-likelihood after every E-step is
    recorded in ``log_likelihood`` and is non-decreasing.
    """
    config = config or LabelModelConfig()
    votes = _stack_votes(matrices)
    n, n_lf = votes.shape

    beta = (votes != 0).sum(axis=0) / float(n)

    vote_sum = votes.sum(axis=1).astype(float)
    has_vote = (votes != 0).any(axis=1)
    p = np.where(has_vote, (1.0 + vote_sum / n_lf) / 2.0, config.init_class_prior)
    p = np.clip(p, 1e-6, 1.0 - 1e-6)

    history: list[float] = []
    theta = np.full(n_lf, 0.5)
    pi = config.init_class_prior
    converged = False
    n_iter = 0
    for it in range(config.max_iter):
        theta, pi = _m_step(votes, p)
        ll = _log_likelihood(votes, theta, beta, pi)
        p = 1.0 / (1.0 + np.exp(-_log_odds(votes, theta, pi)))
        history.append(ll)
        n_iter = it + 1
        if it > 0:
            prev = history[-2]
            if ll + 1e-9 * (1.0 + abs(prev)) < prev:
                raise AssertionError(f"log-likelihood decreased: {prev} -> {ll}")
            if abs(ll - prev) < config.tol:
                converged = True
                break

    names = (
        matrices[0].lf_names
        if not isinstance(matrices, np.ndarray) and len(matrices) > 0
        else tuple(f"lf{j}" for j in range(n_lf))
    )
    if len(names) != n_lf:
        names = tuple(f"lf{j}" for j in range(n_lf))
    return LabelModelParams(
        theta=theta,
        beta=beta,
        pi=pi,
        lf_names=names,
        n_iter=n_iter,
        converged=converged,
        log_likelihood=history,
    )


def posteriors(params: LabelModelParams, votes: LabelMatrix | np.ndarray) -> np.ndarray:
    """p(y=1 | votes) for each row, as a float array."""
    if isinstance(votes, LabelMatrix):
        votes = votes.votes
    votes = np.asarray(votes)
    if votes.ndim == 1:
        votes = votes[None, :]
    if votes.shape[1] != params.theta.shape[0]:
        raise ValueError(
            f"vote matrix has {votes.shape[1]} columns, model expects {params.theta.shape[0]}"
        )
    return 1.0 / (1.0 + np.exp(-_log_odds(votes, params.theta, float(params.pi))))
