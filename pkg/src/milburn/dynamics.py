"""Milburn intrinsic-decoherence dynamics.

Three independent routes to the same state:

* :func:`evolve` - closed form in the Hamiltonian eigenbasis, where the
  coherence between levels k and j is multiplied by
  ``exp(-gamma t/2 (E_k - E_j)^2 - i t (E_k - E_j))``;
* :func:`kraus_operators` / :func:`apply_kraus` - truncated operator-sum
  representation;
* :func:`integrate_master` - classical RK4 on the second-order master
  equation ``d rho/dt = -i[H, rho] - gamma/2 [H, [H, rho]]`` in the
  computational basis (no eigendecomposition involved).
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import (DimensionMismatch, NegativeTime, NoSteadyState, StepTooLarge,
                     TailNotConverged)
from .linalg import Spectrum, as_matrix, check_hermitian, dagger, hermitian_eig
from .states import DensityMatrix
from .tolerances import TOL


@dataclass(frozen=True)
class Propagator:
    spectrum: Spectrum
    gamma: float

    def __post_init__(self):
        if not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")

    @classmethod
    def from_hamiltonian(cls, h, gamma: float) -> "Propagator":
        return cls(hermitian_eig(h), float(gamma))

    @property
    def dim(self) -> int:
        return self.spectrum.dim

    def gaps(self) -> np.ndarray:
        """Matrix of E_k - E_j (row k, column j)."""
        e = self.spectrum.eigenvalues
        return e[:, None] - e[None, :]

    def kernel(self, t: float) -> np.ndarray:
        """Entrywise damping-and-phase factor applied in the eigenbasis."""
        g = self.gaps()
        return np.exp(-0.5 * self.gamma * t * g * g - 1j * t * g)


def _rho_array(rho0, dim: int) -> np.ndarray:
    m = rho0.matrix if isinstance(rho0, DensityMatrix) else as_matrix(rho0)
    if m.shape != (dim, dim):
        raise DimensionMismatch(f"state has shape {m.shape}, propagator dimension is {dim}")
    return m


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0.0:
        raise NegativeTime(f"time must be >= 0, got {t}")
    return t


def evolve_matrix(rho0, prop: Propagator, t: float) -> np.ndarray:
    """Like :func:`evolve` but returns the raw array without validation."""
    t = _check_time(t)
    m = _rho_array(rho0, prop.dim)
    if t == 0.0:
        return np.array(m, copy=True)
    spec = prop.spectrum
    out = spec.from_eigenbasis(spec.to_eigenbasis(m) * prop.kernel(t))
    return 0.5 * (out + dagger(out))


def evolve(rho0, prop: Propagator, t: float, *, validate: bool = True) -> DensityMatrix:
    out = evolve_matrix(rho0, prop, t)
    return DensityMatrix(out) if validate else DensityMatrix.unchecked(out)


def evolve_many(rho0, prop: Propagator, times, *, validate: bool = False) -> list[DensityMatrix]:
    """Evolve one initial state to each of ``times`` (rotating into the eigenbasis once)."""
    m = _rho_array(rho0, prop.dim)
    spec = prop.spectrum
    m_e = spec.to_eigenbasis(m)
    make = DensityMatrix if validate else DensityMatrix.unchecked
    out = []
    for t in times:
        t = _check_time(t)
        r = spec.from_eigenbasis(m_e * prop.kernel(t)) if t > 0 else np.array(m, copy=True)
        out.append(make(0.5 * (r + dagger(r))))
    return out


# --- Kraus representation ---------------------------------------------------

def poisson_rate(prop: Propagator, t: float) -> float:
    """gamma * t * max_k E_k^2, the Poisson mean that bounds the Kraus tail."""
    e = prop.spectrum.eigenvalues
    return prop.gamma * t * float(np.max(e * e)) if len(e) else 0.0


def kraus_terms_needed(prop: Propagator, t: float, tail: float | None = None,
                       max_terms: int | None = None) -> int:
    """Smallest p_max whose Poisson tail beyond p_max is below ``tail``."""
    tail = TOL.kraus_tail if tail is None else tail
    max_terms = TOL.kraus_max_terms if max_terms is None else max_terms
    lam = poisson_rate(prop, _check_time(t))
    if lam == 0.0:
        return 0
    for p_max in range(max_terms + 1):
        if poisson.sf(p_max, lam) < tail:
            return p_max
    raise TailNotConverged(
        f"Kraus tail still >= {tail:.1e} after {max_terms} terms (Poisson mean {lam:.4g})")


@dataclass(frozen=True)
class KrausSeries:
    operators: list[np.ndarray]
    completeness_defect: float
    tail_bound: float

    @property
    def p_max(self) -> int:
        return len(self.operators) - 1


def kraus_operators(prop: Propagator, t: float, p_max: int | None = None) -> KrausSeries:
    """M_p = sqrt((gamma t)^p / p!) H^p exp(-iHt) exp(-gamma t H^2 / 2), p = 0..p_max.

    Built in the eigenbasis with the scalar weights evaluated in log space, so
    large p and large |E| do not overflow. With ``p_max=None`` the truncation
    is chosen by :func:`kraus_terms_needed`.
    """
    t = _check_time(t)
    if p_max is None:
        p_max = kraus_terms_needed(prop, t)
    if p_max < 0:
        raise ValueError(f"p_max must be >= 0, got {p_max}")
    spec = prop.spectrum
    e = spec.eigenvalues
    v = spec.eigenvectors
    gt = prop.gamma * t
    phase = np.exp(-1j * e * t)
    ops = []
    with np.errstate(divide="ignore"):
        log_abs_e = np.log(np.abs(e))
    for p in range(p_max + 1):
        if p == 0:
            w = np.exp(-0.5 * gt * e * e)
        elif gt == 0.0:
            w = np.zeros_like(e)
        else:
            logw = 0.5 * (p * math.log(gt) - gammaln(p + 1)) + p * log_abs_e - 0.5 * gt * e * e
            w = np.exp(logw) * np.sign(e) ** p
        ops.append((v * (w * phase)) @ dagger(v))
    completeness = sum(dagger(m) @ m for m in ops)
    defect = float(np.max(np.abs(completeness - np.eye(prop.dim))))
    lam = poisson_rate(prop, t)
    tail = float(poisson.sf(p_max, lam)) if lam > 0 else 0.0
    return KrausSeries(ops, defect, tail)


def apply_kraus(ops, rho0) -> np.ndarray:
    if isinstance(ops, KrausSeries):
        ops = ops.operators
    m = rho0.matrix if isinstance(rho0, DensityMatrix) else as_matrix(rho0)
    out = sum(k @ m @ dagger(k) for k in ops)
    return 0.5 * (out + dagger(out))


# --- master equation ---------------------------------------------------------

def rhs_master(rho, h, gamma: float) -> np.ndarray:
    """-i[H, rho] - gamma/2 [H, [H, rho]]."""
    rho = as_matrix(rho)
    h = as_matrix(h)
    if rho.shape != h.shape or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"shapes differ: rho {rho.shape}, H {h.shape}")
    return _rhs(rho, h, gamma)


def _rhs(rho, h, gamma):
    c = h @ rho - rho @ h
    return -1j * c - (0.5 * gamma) * (h @ c - c @ h)


def _spread(h: np.ndarray) -> float:
    # LAPACK here keeps the stability guard independent of the Jacobi solver
    w = np.linalg.eigvalsh(h)
    return float(w[-1] - w[0])


def _check_step(h: np.ndarray, gamma: float, dt: float, limit: float | None) -> None:
    limit = TOL.rk4_stability if limit is None else limit
    w = _spread(h)
    score = dt * (w + gamma * w * w)
    if score > limit:
        raise StepTooLarge(
            f"dt={dt:g} too large: dt*(spread + gamma*spread^2) = {score:.3g} > {limit:g}")


def integrate_master_times(rho0, h, gamma: float, times, dt: float, *,
                           stability: float | None = None) -> list[np.ndarray]:
    """RK4 solution sampled at each of the (non-decreasing) ``times``.

    Each interval between samples is split into equal steps no longer
    than ``dt``, so every sample time is hit exactly.
    """
    h = check_hermitian(h)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    _check_step(h, gamma, dt, stability)
    m = np.array(_rho_array(rho0, h.shape[0]), copy=True)
    out = []
    t_now = 0.0
    for t in times:
        t = _check_time(t)
        if t < t_now:
            raise ValueError("sample times must be non-decreasing")
        span = t - t_now
        n = max(1, math.ceil(span / dt - 1e-9)) if span > 0 else 0
        step = span / n if n else 0.0
        for _ in range(n):
            k1 = _rhs(m, h, gamma)
            k2 = _rhs(m + (0.5 * step) * k1, h, gamma)
            k3 = _rhs(m + (0.5 * step) * k2, h, gamma)
            k4 = _rhs(m + step * k3, h, gamma)
            m = m + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_now = t
        out.append(0.5 * (m + dagger(m)))
    return out


def integrate_master(rho0, h, gamma: float, t_end: float, dt: float, *,
                     validate: bool = True) -> DensityMatrix:
    (m,) = integrate_master_times(rho0, h, gamma, [t_end], dt)
    return DensityMatrix(m) if validate else DensityMatrix.unchecked(m)


# --- steady state ------------------------------------------------------------

def default_deg_tol(spectrum: Spectrum) -> float:
    e = spectrum.eigenvalues
    spread = float(e[-1] - e[0]) if len(e) else 0.0
    return max(TOL.degeneracy_rel * spread, np.finfo(float).tiny)


def degenerate_mask(spectrum: Spectrum, deg_tol: float) -> np.ndarray:
    e = spectrum.eigenvalues
    return np.abs(e[:, None] - e[None, :]) <= deg_tol


def steady_state_matrix(rho0, prop: Propagator, deg_tol: float | None = None) -> np.ndarray:
    if prop.gamma == 0.0:
        raise NoSteadyState("gamma = 0 gives unitary evolution with no steady state")
    if deg_tol is None:
        deg_tol = default_deg_tol(prop.spectrum)
    if not deg_tol > 0:
        raise ValueError(f"deg_tol must be positive, got {deg_tol}")
    spec = prop.spectrum
    m = _rho_array(rho0, prop.dim)
    out = spec.from_eigenbasis(spec.to_eigenbasis(m) * degenerate_mask(spec, deg_tol))
    return 0.5 * (out + dagger(out))


def steady_state(rho0, prop: Propagator, deg_tol: float | None = None, *,
                 validate: bool = True) -> DensityMatrix:
    """t -> infinity limit: keep eigenbasis coherences only between levels within ``deg_tol``."""
    out = steady_state_matrix(rho0, prop, deg_tol)
    return DensityMatrix(out) if validate else DensityMatrix.unchecked(out)
