"""Dirichlet posterior over party shares and its reproducible draw stream.

    The multinomial pseudo-counts of a :class:`~koalition_py.pooling.PooledSample`
    update a Dirichlet prior by conjugate addition. Draws are produced as
    normalized Gamma variates. Rows are generated in fixed chunks of
    ``DRAW_CHUNK`` and every (chunk, party) pair has its own Philox stream
    keyed by the seed, the chunk number and the UTF-8 bytes of the party id, so
    the output is a function of the seed and the row index only, whatever
    the number of worker threads.

.. platform:: Unix, Windows, Mac
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from .errors import ModelError
from .pooling import PooledSample

DEFAULT_PRIOR_ALPHA = 0.5
DEFAULT_DRAWS = 100000
DRAW_CHUNK = 4096


def prior_vector(prior_alpha, party_ids):
    """Expand a scalar or per-party prior into a dictionary in party order."""
    if isinstance(prior_alpha, Mapping):
        missing = [p for p in party_ids if p not in prior_alpha]
        if missing:
            raise ModelError(
                "prior missing for %s" % ", ".join(missing), code="bad-prior"
            )
        prior = {p: float(prior_alpha[p]) for p in party_ids}
    else:
        prior = {p: float(prior_alpha) for p in party_ids}
    if not all(value > 0 for value in prior.values()):
        raise ModelError("prior components must be positive", code="bad-prior")
    return prior


@dataclass(frozen=True)
class DirichletPosterior:
    """Concentration vector over parties, in registry order.

    :param alpha: Party id to positive concentration.
    :param source: The pooled sample the posterior was built from, if any.
    """

    alpha: Mapping[str, float]
    source: Optional[PooledSample] = None

    def __post_init__(self):
        if not self.alpha:
            raise ModelError("posterior needs at least one party", code="bad-prior")
        if not all(value > 0 for value in self.alpha.values()):
            raise ModelError("alpha components must be positive", code="bad-prior")

    @property
    def party_ids(self):
        return tuple(self.alpha)

    def alpha_vector(self):
        return np.array(list(self.alpha.values()), dtype=float)

    @property
    def concentration(self):
        return float(self.alpha_vector().sum())

    def mean(self):
        """Posterior mean share of every party."""
        total = self.concentration
        return {p: a / total for p, a in self.alpha.items()}

    def variance(self):
        """Marginal variance ``mean * (1 - mean) / (sum(alpha) + 1)``."""
        total = self.concentration
        return {
            p: (a / total) * (1 - a / total) / (total + 1)
            for p, a in self.alpha.items()
        }


def posterior_from(pooled, prior_alpha=DEFAULT_PRIOR_ALPHA):
    """Conjugate update: ``alpha_k = prior_alpha_k + counts_k``.

    :param pooled: The :class:`~koalition_py.pooling.PooledSample`.
    :param prior_alpha: Positive scalar (symmetric prior) or party mapping.
    :rtype: :class:`DirichletPosterior`
    :raises ModelError: ``bad-prior`` for non-positive prior components.
    """
    prior = prior_vector(prior_alpha, tuple(pooled.counts))
    alpha = {p: prior[p] + count for p, count in pooled.counts.items()}
    return DirichletPosterior(alpha=alpha, source=pooled)


@dataclass(frozen=True)
class DrawMatrix:
    """Monte-Carlo share vectors, one row per draw, columns in party order."""

    draws: np.ndarray
    seed: int
    m: int
    party_ids: Tuple[str, ...]

    def column(self, party_id):
        return self.draws[:, self.party_ids.index(party_id)]


def party_key(party_id):
    """Distinct non-negative integer per party id.

    The leading 0x01 byte keeps ids that differ only by leading NUL
    characters apart.
    """
    return int.from_bytes(b"\x01" + party_id.encode("utf-8"), "big")


def _gamma_chunk(alpha, keys, seed, chunk):
    """Gamma variates of one chunk: ``DRAW_CHUNK`` rows, one column per party."""
    block = np.empty((DRAW_CHUNK, len(alpha)), dtype=float)
    for column, (shape, key) in enumerate(zip(alpha, keys)):
        sequence = np.random.SeedSequence(seed, spawn_key=(chunk, key))
        generator = np.random.Generator(np.random.Philox(sequence))
        block[:, column] = generator.standard_gamma(shape, size=DRAW_CHUNK)
    return block


def sample_gammas(alpha, party_ids, m, seed, workers=1):
    """Unnormalized Gamma variates for the first ``m`` rows of the stream."""
    keys = [party_key(p) for p in party_ids]
    chunks = range((m + DRAW_CHUNK - 1) // DRAW_CHUNK)

    def generate(chunk):
        return _gamma_chunk(alpha, keys, seed, chunk)

    if workers is None or workers <= 1 or len(chunks) == 1:
        blocks = [generate(chunk) for chunk in chunks]
    else:
        # map keeps chunk order, so the schedule cannot reorder rows
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(generate, chunks))
    return np.concatenate(blocks, axis=0)[:m]


def sample_shares(posterior, m, seed, workers=1):
    """Draw ``m`` share vectors from ``Dirichlet(alpha)``.

    :param posterior: The :class:`DirichletPosterior`.
    :param int m: Number of draws, at least 1.
    :param int seed: Non-negative 64-bit seed.
    :param int workers: Threads used to generate chunks; does not change the
        result.
    :rtype: :class:`DrawMatrix`
    :raises ModelError: ``empty-request`` when ``m`` is 0, ``bad-seed`` for a
        seed outside the unsigned 64-bit range.
    """
    if m < 1:
        raise ModelError("at least one draw is required", code="empty-request")
    if not 0 <= seed < 2 ** 64:
        raise ModelError("seed must be an unsigned 64-bit integer", code="bad-seed")
    gammas = sample_gammas(
        posterior.alpha_vector(), posterior.party_ids, m, seed, workers
    )
    totals = gammas.sum(axis=1, keepdims=True)
    draws = gammas / totals
    logger.debug("sampled {} draws (seed={}, workers={})", m, seed, workers)
    return DrawMatrix(draws=draws, seed=seed, m=m, party_ids=posterior.party_ids)
