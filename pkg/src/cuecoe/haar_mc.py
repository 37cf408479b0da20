"""Monte Carlo oracle: Haar-distributed CUE/COE samples and estimates of
correlators and transport moments with standard errors.

CUE matrices come from the QR decomposition of a complex Ginibre matrix with
the R-diagonal phase normalization; COE matrices are W = U U^T.  Sampling is
batched (stacked QR) for throughput; statistics are accumulated with
chunk-merged Welford updates, so estimates are deterministic for a fixed
seed and sample count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlator import COE, CUE, TRANSMISSION, CorrelatorSpec, MomentSpec

_CHUNK = 4096


@dataclass(frozen=True)
class McEstimate:
    mean: complex
    stderr: float
    samples: int
    seed: int


def _cue_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[:, np.newaxis, :]


def sample_cue(n: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed unitary matrix of size n."""
    return _cue_batch(n, 1, rng)[0]


def sample_coe(n: int, rng: np.random.Generator) -> np.ndarray:
    """One COE matrix W = U U^T with U Haar unitary."""
    u = sample_cue(n, rng)
    return u @ u.T


class _Accumulator:
    """Welford mean/scatter with pairwise chunk merging."""

    __slots__ = ("count", "mean", "m2")

    def __init__(self):
        self.count = 0
        self.mean = 0.0 + 0.0j
        self.m2 = 0.0

    def add_chunk(self, values: np.ndarray):
        k = values.size
        if k == 0:
            return
        mean = complex(values.mean())
        m2 = float(np.abs(values - mean).__pow__(2).sum())
        if self.count == 0:
            self.count, self.mean, self.m2 = k, mean, m2
            return
        delta = mean - self.mean
        total = self.count + k
        self.m2 += m2 + abs(delta) ** 2 * self.count * k / total
        self.mean += delta * k / total
        self.count = total

    def estimate(self, seed: int) -> McEstimate:
        if self.count < 2:
            return McEstimate(self.mean, float("inf"), self.count, seed)
        var = self.m2 / (self.count - 1)
        return McEstimate(self.mean, math.sqrt(var / self.count), self.count, seed)


def _estimate(n: int, ensemble: str, samples: int, seed: int, value) -> McEstimate:
    """`value` maps a stacked batch of matrices to one complex per sample."""
    rng = np.random.default_rng(seed)
    acc = _Accumulator()
    left = samples
    while left > 0:
        k = min(left, _CHUNK)
        m = _cue_batch(n, k, rng)
        if ensemble == COE:
            m = m @ np.transpose(m, (0, 2, 1))
        acc.add_chunk(np.asarray(value(m)))
        left -= k
    return acc.estimate(seed)


def mc_correlator(spec: CorrelatorSpec, n: int, samples: int, seed: int) -> McEstimate:
    """Estimate the element-product average of `spec` at matrix size n."""
    a, b = spec.a, spec.b

    def value(m: np.ndarray) -> np.ndarray:
        out = np.ones(m.shape[0], dtype=complex)
        for r, c in a:
            out = out * m[:, r - 1, c - 1]
        for r, c in b:
            out = out * m[:, r - 1, c - 1].conj()
        return out

    return _estimate(n, spec.ensemble, samples, seed, value)


def mc_moment(spec: MomentSpec, samples: int, seed: int) -> McEstimate:
    """Estimate the transport moment of `spec`."""
    n1, n2 = spec.n1, spec.n2
    n = n1 + n2
    if spec.block == TRANSMISSION:
        rows, cols = slice(n1, n), slice(0, n1)
    else:
        rows, cols = slice(0, n1), slice(0, n1)

    def value(m: np.ndarray) -> np.ndarray:
        x = m[:, rows, cols]
        g = np.einsum("kij,kil->kjl", x.conj(), x)
        out = np.ones(m.shape[0], dtype=complex)
        for length in spec.traces:
            p = g
            for _ in range(length - 1):
                p = p @ g
            out = out * np.trace(p, axis1=-2, axis2=-1)
        return out

    return _estimate(n, spec.ensemble, samples, seed, value)
