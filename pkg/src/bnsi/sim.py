"""Monte Carlo retransmission rounds: encode, corrupt side information,
decode at every user, count successes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoder import build_decoder, decode_batch, encode_batch
from .errors import GuardExceeded, InvalidEncoder
from .problem import BnsiProblem
from .validity import as_encoder, is_valid_by_rank


@dataclass(frozen=True)
class SimReport:
    trials: int
    users: tuple[tuple[int, int], ...]  # (user, successes)
    N: int
    n: int
    seed: int
    fault_weight: int | None = None

    @property
    def savings(self) -> int:
        return self.n - self.N

    @property
    def failures(self) -> int:
        return sum(self.trials - s for _, s in self.users)

    def as_dict(self) -> dict:
        return {
            "trials": self.trials,
            "users": [{"i": i, "successes": s} for i, s in self.users],
            "N": self.N,
            "n": self.n,
            "savings": self.savings,
            "seed": self.seed,
            "fault_weight": self.fault_weight,
            "failures": self.failures,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream for one trial: Philox keyed by (seed, trial)."""
    key = np.array([seed & (2**64 - 1), trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw_error(rng: np.random.Generator, length: int, delta_s: int, q: int,
                fault_weight: int | None) -> np.ndarray:
    eps = np.zeros(length, dtype=np.int64)
    if fault_weight is None:
        w = int(rng.integers(0, min(delta_s, length) + 1))
    else:
        w = min(fault_weight, length)
    if w:
        support = rng.choice(length, size=w, replace=False)
        eps[support] = rng.integers(1, q, size=w)
    return eps


def simulate(p: BnsiProblem, L, trials: int, seed: int, *, fault_weight: int | None = None,
             check: bool = True) -> SimReport:
    """Run ``trials`` rounds. Each draws x uniformly, then for every user an
    error of uniform weight in 0..delta_s (or exactly ``fault_weight``) with
    uniform support and nonzero values.

    A decode that fails or returns the wrong symbols counts as a failure.
    With a valid encoder and no fault weight there are none.
    """
    L = as_encoder(p, L)
    if check:
        try:
            if not is_valid_by_rank(p, L):
                raise InvalidEncoder("encoder fails the validity check")
        except GuardExceeded:
            pass
    f = p.field
    xs = np.zeros((trials, p.n), dtype=np.int64)
    errs = [np.zeros((trials, len(x)), dtype=np.int64) for x in p.x0]
    for t in range(trials):
        rng = trial_rng(seed, t)
        xs[t] = rng.integers(0, f.q, size=p.n)
        for i0, x in enumerate(p.x0):
            errs[i0][t] = _draw_error(rng, len(x), p.delta_s, f.q, fault_weight)
    C = encode_batch(p, L, xs)
    users = []
    for i0, x in enumerate(p.x0):
        d = build_decoder(p, L, i0 + 1, fallback=True)
        truth = xs[:, list(x)]
        XE = f.add(truth, errs[i0])
        out, ok = decode_batch(d, C, XE)
        good = ok & (out == truth).all(axis=1)
        users.append((i0 + 1, int(good.sum())))
    return SimReport(trials, tuple(users), L.cols, p.n, seed, fault_weight)
