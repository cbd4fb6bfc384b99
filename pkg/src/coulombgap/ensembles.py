"""Exact samplers for four random normal-matrix ensembles.

Each sampler draws a matrix whose eigenvalues form a planar Coulomb gas at
determinantal temperature for one of these potentials:

* elliptic Ginibre   -- ``sqrt(1+tau) H1 + i sqrt(1-tau) H2`` with GUE blocks,
* induced Ginibre    -- ``(G^* G)^(1/2) U`` with ``G`` tall Gaussian, ``U`` Haar,
* induced spherical  -- ``(G2^* G2)^(-1/2) G1`` with unit-variance Gaussians,
* truncated unitary  -- the upper-left block of a larger Haar unitary.

Randomness is counter based: every trial owns a Philox stream keyed by
``(master_seed, trial_index)``, so replays are bit exact and trials can run
in any order or in parallel.  Complex Gaussians are produced by the polar
Box-Muller transform from two uniforms per entry.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .gapstats import PointSample, sort_by_precedence

__all__ = [
    "ELLIPTIC_GINIBRE",
    "INDUCED_GINIBRE",
    "INDUCED_SPHERICAL",
    "TRUNCATED_UNITARY",
    "ENSEMBLE_KINDS",
    "EnsembleSpec",
    "SeedStream",
    "SamplingError",
    "sample_ginibre",
    "sample_haar_unitary",
    "sample_eigenvalues",
]

ELLIPTIC_GINIBRE = "elliptic-ginibre"
INDUCED_GINIBRE = "induced-ginibre"
INDUCED_SPHERICAL = "induced-spherical"
TRUNCATED_UNITARY = "truncated-unitary"
ENSEMBLE_KINDS = (ELLIPTIC_GINIBRE, INDUCED_GINIBRE, INDUCED_SPHERICAL, TRUNCATED_UNITARY)

_MASK64 = (1 << 64) - 1


class SamplingError(RuntimeError):
    """Eigenvalue extraction failed for one trial."""

    def __init__(self, message: str, trial_index: int):
        super().__init__(f"trial {trial_index}: {message}")
        self.trial_index = trial_index


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the four matrix models with its size and shape parameter.

    ``tau`` applies to the elliptic kind, ``a`` to the other three.  The
    integer matrix dimensions are derived by rounding, and the *effective*
    parameter actually realized (``effective_a``) is what downstream theory
    should use.
    """

    kind: str
    n: int
    tau: float = 0.0
    a: float = 0.0

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.kind == ELLIPTIC_GINIBRE:
            if not 0.0 <= self.tau < 1.0:
                raise ValueError("elliptic parameter tau must lie in [0, 1)")
        elif self.kind == INDUCED_GINIBRE:
            if self.a < 0.0:
                raise ValueError("induced-ginibre parameter a must be >= 0")
        elif self.kind == INDUCED_SPHERICAL:
            if self.a <= 1.0:
                raise ValueError("induced-spherical parameter a must be > 1")
            if self.m <= self.n:
                raise ValueError("induced-spherical needs m = round(a n) > n")
        else:
            if self.a <= 0.0:
                raise ValueError("truncated-unitary parameter a must be > 0")

    @property
    def m(self) -> int:
        """Row count of the rectangular Gaussian factor, where applicable."""
        if self.kind == INDUCED_GINIBRE:
            return int(round(self.n * (1.0 + self.a)))
        if self.kind == INDUCED_SPHERICAL:
            return int(round(self.n * self.a))
        raise AttributeError(f"{self.kind} has no rectangular factor")

    @property
    def alpha(self) -> int:
        """Number of truncated rows/columns of the Haar unitary."""
        if self.kind != TRUNCATED_UNITARY:
            raise AttributeError(f"{self.kind} has no truncation order")
        return max(1, int(round(self.a * self.n)) + 1)

    @property
    def effective_a(self) -> float:
        """The shape parameter actually realized after integer rounding."""
        if self.kind == ELLIPTIC_GINIBRE:
            return self.tau
        if self.kind == INDUCED_GINIBRE:
            return (self.m - self.n) / self.n
        if self.kind == INDUCED_SPHERICAL:
            return self.m / self.n
        return (self.alpha - 1) / self.n

    def effective_parameters(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        if self.kind == ELLIPTIC_GINIBRE:
            out["tau"] = self.tau
        else:
            out["a_requested"] = self.a
            out["a_effective"] = self.effective_a
            if self.kind == TRUNCATED_UNITARY:
                out["alpha"] = self.alpha
            else:
                out["m"] = self.m
        return out


@dataclass(frozen=True)
class SeedStream:
    """Deterministic per-trial randomness: Philox keyed by (seed, trial)."""

    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed <= _MASK64:
            raise ValueError("master_seed must fit in 64 bits")
        if self.trial_index < 0:
            raise ValueError("trial_index must be >= 0")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.trial_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _complex_gaussian(gen: np.random.Generator, shape, variance: float) -> np.ndarray:
    """I.i.d. centered complex Gaussians with E|g|^2 = variance (Box-Muller)."""
    u1 = gen.random(shape)
    u2 = gen.random(shape)
    radius = np.sqrt(-variance * np.log1p(-u1))
    return radius * np.exp(2j * np.pi * u2)


def sample_ginibre(rows: int, cols: int, variance: float, seed: SeedStream) -> np.ndarray:
    """A rows x cols matrix of i.i.d. centered complex Gaussian entries."""
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    if variance <= 0:
        raise ValueError("variance must be positive")
    return _complex_gaussian(seed.generator(), (rows, cols), variance)


def _haar_unitary(gen: np.random.Generator, dim: int) -> np.ndarray:
    g = _complex_gaussian(gen, (dim, dim), 1.0)
    q, r = linalg.qr_decompose(g)
    phases = np.diagonal(r).copy()
    return q * (phases / np.abs(phases))


def sample_haar_unitary(dim: int, seed: SeedStream) -> np.ndarray:
    """A Haar-distributed unitary: QR of a Gaussian matrix with the diagonal
    phases of R divided out."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _haar_unitary(seed.generator(), dim)


def _build_matrix(spec: EnsembleSpec, gen: np.random.Generator) -> np.ndarray:
    n = spec.n
    if spec.kind == ELLIPTIC_GINIBRE:
        g1 = _complex_gaussian(gen, (n, n), 1.0 / n)
        g2 = _complex_gaussian(gen, (n, n), 1.0 / n)
        h1 = (g1 + g1.conj().T) / 2.0
        h2 = (g2 + g2.conj().T) / 2.0
        return np.sqrt(1.0 + spec.tau) * h1 + 1j * np.sqrt(1.0 - spec.tau) * h2
    if spec.kind == INDUCED_GINIBRE:
        g = _complex_gaussian(gen, (spec.m, n), 1.0 / n)
        u = _haar_unitary(gen, n)
        root = linalg.hermitian_power(g.conj().T @ g, 0.5)
        return root @ u
    if spec.kind == INDUCED_SPHERICAL:
        g1 = _complex_gaussian(gen, (n, n), 1.0)
        g2 = _complex_gaussian(gen, (spec.m, n), 1.0)
        inv_root = linalg.hermitian_power(g2.conj().T @ g2, -0.5)
        return inv_root @ g1
    u = _haar_unitary(gen, n + spec.alpha)
    return u[:n, :n]


def sample_eigenvalues(spec: EnsembleSpec, seed: SeedStream) -> PointSample:
    """Draw one matrix from ``spec`` and return its eigenvalues as a sorted
    point configuration.  Raises :class:`SamplingError` on eigensolver
    failure so the caller can account for the lost trial."""
    gen = seed.generator()
    matrix = _build_matrix(spec, gen)
    spectrum = linalg.eigenvalues_general(matrix)
    if not spectrum.converged:
        raise SamplingError("eigenvalue iteration did not converge", seed.trial_index)
    return PointSample(points=sort_by_precedence(spectrum.values), spec=spec)
