"""Numerical tolerances used across the package.

Every function that compares floats takes its default from ``TOL`` and
accepts a keyword override.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # input validation
    hermitian: float = 1e-12
    trace: float = 1e-12
    psd: float = 1e-10
    unit_norm: float = 1e-12
    # Jacobi eigensolver: stop when off(A)_F < jacobi_rel * ||A||_F
    jacobi_rel: float = 1e-14
    jacobi_max_sweeps: int = 100
    # Kraus truncation
    kraus_tail: float = 1e-14
    kraus_max_terms: int = 400
    # RK4 stability guard: dt * (max|dE| + gamma * max dE^2)
    rk4_stability: float = 0.1
    # steady state: degeneracy tolerance relative to the spectral width
    degeneracy_rel: float = 1e-9
    # level crossings: two affine energy lines count as identical below this
    crossing: float = 1e-12


TOL = Tolerances()
