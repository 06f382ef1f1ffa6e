"""Floating-point sampling oracle for projective tropicalizations.

The exact routes compute PTrop combinatorially.  This module approaches the
same set numerically, the way one would probe an unknown germ: follow paths
x -> 0 inside the variety, record the vector of -log|coordinate| values,
normalize, and cluster the resulting directions.  Agreement within loose
tolerance is strong evidence that the exact combinatorics match the
analytic limit set; the oracle is deliberately independent of the exact
code (numpy root finding, no rational arithmetic).

Paths are radial: for plane germs x1 = r exp(i theta) with r halved at each
depth step, solving for the other coordinate with numpy.roots; for surface
germs the first two coordinates get random positive weights w and x3 is
solved for.  The growth exponent of a vanishing branch is read off as a
difference quotient of log|x_last| between consecutive radii, which cancels
multiplicative constants and converges quickly.  Directions are clustered
by single linkage in angular distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from .errors import DimensionMismatch, NoBranchFound
from .tropical import PTropSet, TropicalPolynomial

IVec = tuple[int, ...]


@dataclass(frozen=True)
class SampleConfig:
    """Knobs for the path sampler; defaults match the reported experiments."""

    paths: int = 200
    depth: int = 12
    seed: int = 0
    initial_radius: float = 0.1
    decay: float = 0.5
    min_slope: float = 0.08
    max_slope: float = 50.0
    cluster_angle: float = 3e-3


@dataclass(frozen=True)
class Cluster:
    """A bundle of sampled limit directions, normalized to coordinate sum 1."""

    direction: tuple[float, ...]
    size: int


def lift_coefficients(f: TropicalPolynomial, seed: int = 0
                      ) -> dict[IVec, complex]:
    """Generic complex coefficients for the support of f (moduli in [1/2, 2])."""
    rng = np.random.default_rng(seed)
    out = {}
    for e, _ in f.terms:
        modulus = 0.5 + 1.5 * rng.random()
        phase = 2 * math.pi * rng.random()
        out[e] = modulus * complex(math.cos(phase), math.sin(phase))
    return out


def _last_var_roots(coeffs: Mapping[IVec, complex], fixed: Sequence[complex]
                    ) -> np.ndarray:
    """Roots in the last variable after substituting the other coordinates."""
    top = max(e[-1] for e in coeffs)
    poly = np.zeros(top + 1, dtype=complex)
    for e, c in coeffs.items():
        scale = c
        for val, k in zip(fixed, e):
            scale *= val ** k
        poly[e[-1]] += scale
    return np.roots(poly[::-1])


def _branch_slopes(coeffs: Mapping[IVec, complex], fixed_at,
                   config: SampleConfig) -> list[float]:
    """Exponent estimates for vanishing branches along one shrinking path."""
    radii = [config.initial_radius * config.decay ** k
             for k in range(config.depth)]
    logs_prev = None
    slopes: list[float] = []
    for k, r in enumerate(radii):
        roots = _last_var_roots(coeffs, fixed_at(r))
        mags = np.sort(np.abs(roots))
        logs = np.log(np.maximum(mags, 1e-280))
        if k == len(radii) - 1 and logs_prev is not None \
                and len(logs) == len(logs_prev):
            quot = (logs - logs_prev) / math.log(config.decay)
            slopes = [float(s) for s in quot
                      if config.min_slope < s < config.max_slope]
        logs_prev = logs
    return slopes


def _cluster(directions: np.ndarray, angle: float) -> list[Cluster]:
    """Single-linkage clustering at the given angular threshold."""
    m = len(directions)
    unit = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    gram = np.clip(unit @ unit.T, -1.0, 1.0)
    close = np.arccos(gram) < angle
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if close[i, j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    clusters = []
    for members in groups.values():
        total = unit[members].sum(axis=0)
        norm = total / total.sum()
        clusters.append(Cluster(tuple(float(c) for c in norm), len(members)))
    return sorted(clusters, key=lambda c: c.direction)


def ptrop_sample_oracle(coeffs: Mapping[IVec, complex], n: int,
                        config: SampleConfig = SampleConfig()
                        ) -> tuple[Cluster, ...]:
    """Sampled PTrop directions of the germ of {poly = 0} at the origin."""
    if n not in (2, 3):
        raise DimensionMismatch(
            f"the sampler handles 2 or 3 variables, not {n}")
    if not coeffs:
        raise ValueError("need at least one coefficient")
    rng = np.random.default_rng(config.seed)
    directions: list[tuple[float, ...]] = []
    for _ in range(config.paths):
        if n == 2:
            theta = 2 * math.pi * rng.random()
            phase = complex(math.cos(theta), math.sin(theta))
            weights = (1.0,)

            def fixed_at(r, phase=phase):
                return (r * phase,)
        else:
            thetas = 2 * math.pi * rng.random(2)
            w = 0.25 + 1.75 * rng.random(2)
            phases = [complex(math.cos(t), math.sin(t)) for t in thetas]
            weights = (float(w[0]), float(w[1]))

            def fixed_at(r, phases=phases, w=w):
                return (r ** w[0] * phases[0], r ** w[1] * phases[1])

        for slope in _branch_slopes(coeffs, fixed_at, config):
            vec = weights + (slope,)
            total = sum(vec)
            directions.append(tuple(c / total for c in vec))
    if not directions:
        raise NoBranchFound(
            "no path produced a branch approaching the origin; the germ may "
            "miss the origin entirely")
    return tuple(_cluster(np.asarray(directions), config.cluster_angle))


def angular_distance(u: Sequence[float], v: Sequence[float]) -> float:
    """Angle between two nonzero direction vectors."""
    a = np.asarray(u, dtype=float)
    b = np.asarray(v, dtype=float)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return math.pi / 2
    return float(np.arccos(np.clip(a @ b / (na * nb), -1.0, 1.0)))


def distance_to_cone(rays: Sequence[Sequence[int]], u: Sequence[float]
                     ) -> float:
    """Angular distance from a direction to a cone given by its rays."""
    a = np.asarray(u, dtype=float)
    a = a / np.linalg.norm(a)
    mat = np.asarray(rays, dtype=float).T
    coeffs, _ = nnls(mat, a)
    proj = mat @ coeffs
    norm = np.linalg.norm(proj)
    if norm < 1e-12:
        return math.pi / 2
    return float(np.arccos(np.clip(a @ proj / norm, -1.0, 1.0)))


def distance_to_ptrop(ptset: PTropSet, u: Sequence[float]) -> float:
    """Angular distance from a direction to the exact PTrop set."""
    best = math.pi / 2
    for cone in ptset.cones:
        best = min(best, distance_to_cone(cone.rays, u))
    return best
