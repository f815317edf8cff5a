"""Monte Carlo estimate of the angular kernel, used as an independent oracle.

Random numbers come from numpy's PCG64 bit generator (64-bit state increment,
128-bit LCG with XSL-RR output). Sampling is split into fixed-size shards;
shard ``k`` is seeded by ``SeedSequence(seed).spawn(...)[k]``, so the sample
stream does not depend on how many workers run the shards. Shard sums and
the final reduction use ``math.fsum``, which is correctly rounded and hence
independent of summation order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, SamplingError
from .kernels import SATURATION, Mode

SHARD_SIZE = 1 << 16
MIN_SAMPLES = 1000
_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class McEstimate:
    mean: complex
    stderr_re: float
    stderr_im: float
    n_samples: int
    seed: int


def sample_directional_cosine(rng, n):
    """Draw u from the density 3/8 (1 + u^2) on [-1, 1] by inverse CDF.

    The CDF equation u^3 + 3u + 4 = 8r has the single real root
    u = 2 sinh(asinh(4r - 2) / 3), since 2 sinh(3s) = 8 sinh^3 s + 6 sinh s.
    """
    r = rng.random(n)
    u = 2.0 * np.sinh(np.arcsinh(4.0 * r - 2.0) / 3.0)
    if np.any(np.abs(u) > 1.0 + _BOUND_SLACK):
        raise SamplingError("inverse-CDF sample left [-1, 1]")
    return u


def _directional_values(rng, n, z):
    u = sample_directional_cosine(rng, n)
    w = z * (1.0 - u)
    s = np.sin(0.5 * w)
    return SATURATION * 2.0 * s * s, -SATURATION * np.sin(w)


def _isotropic_values(rng, n, z):
    c_in = 2.0 * rng.random(n) - 1.0
    c_out = 2.0 * rng.random(n) - 1.0
    dphi = 2.0 * math.pi * rng.random(n)
    cos_angle = c_in * c_out + np.sqrt((1.0 - c_in ** 2) * (1.0 - c_out ** 2)) * np.cos(dphi)
    if np.any(np.abs(cos_angle) > 1.0 + _BOUND_SLACK):
        raise SamplingError("scattering-angle cosine left [-1, 1]")
    weight = 0.5 * (1.0 + cos_angle ** 2)
    w = z * (c_in - c_out)
    s = np.sin(0.5 * w)
    return weight * 2.0 * s * s, -weight * np.sin(w)


def _shard(args):
    seed_seq, n, z, mode = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if mode is Mode.DIRECTIONAL:
        re, im = _directional_values(rng, n, z)
    else:
        re, im = _isotropic_values(rng, n, z)
    return (math.fsum(re), math.fsum(im), math.fsum(re * re), math.fsum(im * im))


def _shard_sizes(n_samples):
    full, rest = divmod(n_samples, SHARD_SIZE)
    return [SHARD_SIZE] * full + ([rest] if rest else [])


def mc_kernel(z, mode=Mode.DIRECTIONAL, n_samples=1_000_000, seed=0, threads=1):
    """Sample-mean estimate of F_ang(z) with standard errors.

    Directional mode samples the outgoing polar cosine from the cross-section
    shape and averages 2/3 (1 - exp(iz(1 - u))). Isotropic mode samples both
    directions uniformly on the sphere and averages
    (1 + cos^2 Theta)/2 (1 - exp(iz(c_in - c_out))).
    The result is identical for any ``threads``.
    """
    mode = Mode(mode)
    z = float(z)
    if not (math.isfinite(z) and z >= 0.0):
        raise DomainError(f"z must be finite and non-negative, got {z!r}")
    if n_samples < MIN_SAMPLES:
        raise DomainError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples!r}")
    sizes = _shard_sizes(int(n_samples))
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(c, n, z, mode) for c, n in zip(children, sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_shard, jobs))
    else:
        parts = [_shard(job) for job in jobs]
    n = float(n_samples)
    sums = [math.fsum(p[k] for p in parts) for k in range(4)]
    mean_re, mean_im = sums[0] / n, sums[1] / n

    def stderr(total_sq, mean):
        var = (total_sq - n * mean * mean) / (n - 1.0)
        return math.sqrt(max(var, 0.0) / n)

    return McEstimate(complex(mean_re, mean_im), stderr(sums[2], mean_re),
                      stderr(sums[3], mean_im), int(n_samples), int(seed))


def _exact_moment(k):
    """E[u^k] under 3/8 (1 + u^2) as a Fraction."""
    if k % 2:
        return Fraction(0)
    return Fraction(3, 8) * (Fraction(2, k + 1) + Fraction(2, k + 3))


@dataclass(frozen=True)
class MomentCheck:
    order: int
    empirical: float
    exact: float
    stderr: float
    z_score: float
    passed: bool


def sampler_selftest(n_samples=1_000_000, seed=0, orders=(1, 2, 3, 4), sigmas=5.0):
    """Compare empirical moments of the directional sampler with exact values."""
    if n_samples < 100_000:
        raise DomainError(f"self-test needs at least 1e5 samples, got {n_samples!r}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = sample_directional_cosine(rng, int(n_samples))
    checks = []
    for k in orders:
        exact = _exact_moment(k)
        var = _exact_moment(2 * k) - exact * exact
        se = math.sqrt(float(var) / n_samples)
        emp = math.fsum(u ** k) / n_samples
        zs = (emp - float(exact)) / se
        checks.append(MomentCheck(k, emp, float(exact), se, zs, abs(zs) <= sigmas))
    return checks
