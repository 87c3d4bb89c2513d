"""Cross-check suite: every closed form against the numerical pipeline.

:func:`validate` returns a :class:`ValidationReport`; its text is fully
determined by the seed (no timings, no addresses).
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import analytic
from .dynamics import (Propagator, apply_kraus, evolve_matrix, integrate_master_times,
                       kraus_operators, steady_state_matrix)
from .linalg import hermitian_eig
from .model import ModelParams, analytic_energies, analytic_spectrum, build_hamiltonian
from .quantifiers import (l1_coherence, l1_coherence_closed, linear_entropy,
                          linear_entropy_closed, negativity)
from .states import isotropic_matrix, random_density, werner_crossing, werner_negativity
from .sweep import SweepConfig, field_scan, grid, local_maxima, spectrum_scan

REFERENCE_J, REFERENCE_K, REFERENCE_P, REFERENCE_GAMMA = 0.8, -0.4, 0.7, 0.03
FIELDS = (0.0, 1.0, 1.8, 4.0)
TIMES = (0.5, 5.0, 20.0)
# value quoted for the negativity / linear-entropy crossing of the isotropic family
QUOTED_CROSSING = 0.6672


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: max residual {self.residual:.3e} (tol {self.tol:.0e})"
        return text + (f"; {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    seed: int
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def add(self, name, residual, tol, detail="", passed=None) -> Check:
        residual = float(residual)
        ok = (residual <= tol) if passed is None else bool(passed)
        if math.isnan(residual):
            ok = False
        c = Check(name, ok, residual, tol, detail)
        self.checks.append(c)
        return c

    def text(self) -> str:
        n_fail = sum(not c.passed for c in self.checks)
        out = [f"validation report (seed {self.seed})", ""]
        out += [c.line() for c in self.checks]
        out += ["", "corrections applied to reference closed forms:"]
        out += [f"  - {f.key}: {f.description} -> {f.correction}" for f in analytic.PRINTED_FORMS]
        if self.notes:
            out += ["", "notes:"]
            out += [f"  - {n}" for n in self.notes]
        out += ["", f"{len(self.checks) - n_fail}/{len(self.checks)} checks passed"
                + ("" if n_fail == 0 else f"; {n_fail} FAILED")]
        return "\n".join(out) + "\n"


def _model(bz, J=REFERENCE_J, K=REFERENCE_K):
    return ModelParams(J, K, bz)


def _prop(mp, gamma):
    return Propagator.from_hamiltonian(build_hamiltonian(mp), gamma)


def _worst_element(diff: np.ndarray) -> str:
    r, c = np.unravel_index(int(np.argmax(np.abs(diff))), diff.shape)
    return f"worst element rho_{r + 1},{c + 1}"


def check_spectrum(rep: ValidationReport):
    worst = 0.0
    for bz in FIELDS:
        mp = _model(bz)
        numeric = hermitian_eig(build_hamiltonian(mp)).eigenvalues
        worst = max(worst, float(np.max(np.abs(np.sort(analytic_energies(mp)) - numeric))))
        h = build_hamiltonian(mp)
        for pair in analytic_spectrum(mp):
            worst = max(worst, float(np.max(np.abs(h @ pair.vector - pair.energy * pair.vector))))
    rep.add("analytic spectrum E1..E9 vs eigensolver, Bz in {0,1,1.8,4}", worst, 1e-10)


def check_oracle_triangle(rep: ValidationReport, propagate=evolve_matrix, dt=1e-3):
    rho0 = isotropic_matrix(REFERENCE_P)
    worst = {"evolve-kraus": 0.0, "evolve-rk4": 0.0, "kraus-rk4": 0.0}
    tails = 0.0
    for bz in FIELDS:
        mp = _model(bz)
        prop = _prop(mp, REFERENCE_GAMMA)
        rk = integrate_master_times(rho0, build_hamiltonian(mp), REFERENCE_GAMMA, TIMES, dt)
        for t, r in zip(TIMES, rk):
            ev = propagate(rho0, prop, t)
            ks = kraus_operators(prop, t)
            tails = max(tails, ks.tail_bound)
            kr = apply_kraus(ks, rho0)
            worst["evolve-kraus"] = max(worst["evolve-kraus"], float(np.max(np.abs(ev - kr))))
            worst["evolve-rk4"] = max(worst["evolve-rk4"], float(np.max(np.abs(ev - r))))
            worst["kraus-rk4"] = max(worst["kraus-rk4"], float(np.max(np.abs(kr - r))))
    for k, v in worst.items():
        rep.add(f"oracle triangle {k} (dt={dt:g})", v, 1e-8)
    rep.add("Kraus Poisson tail bound", tails, 1e-14)


def check_printed_forms(rep: ValidationReport, propagate=evolve_matrix):
    rho0 = isotropic_matrix(REFERENCE_P)
    comp = energy = 0.0
    comp_where = energy_where = ""
    variants = {"as_printed": 0.0, "flipped_d": 0.0, "reciprocal": 0.0}
    for bz in FIELDS:
        mp = _model(bz)
        prop = _prop(mp, REFERENCE_GAMMA)
        for t in TIMES:
            ev = propagate(rho0, prop, t)
            diff = analytic.analytic_rho_computational(mp, REFERENCE_P, REFERENCE_GAMMA, t) - ev
            if np.max(np.abs(diff)) >= comp:
                comp, comp_where = float(np.max(np.abs(diff))), f"{_worst_element(diff)} at Bz={bz:g}, t={t:g}"
            ev_e = analytic.computational_to_energy(ev)
            diff_e = analytic.analytic_rho_energy_basis(mp, REFERENCE_P, REFERENCE_GAMMA, t) - ev_e
            if np.max(np.abs(diff_e)) >= energy:
                energy = float(np.max(np.abs(diff_e)))
                energy_where = f"{_worst_element(diff_e).replace('rho', 'rho^E')} at Bz={bz:g}, t={t:g}"
            for name, block in analytic.printed_block_variants(mp, REFERENCE_P, REFERENCE_GAMMA, t).items():
                res = max(abs(v - ev[r - 1, c - 1]) for (r, c), v in block.items())
                variants[name] = max(variants[name], float(res) if np.isfinite(res) else np.inf)
    rep.add("computational-basis closed form vs evolve", comp, 1e-12, comp_where)
    rep.add("energy-basis 4x4 block form vs evolve", energy, 1e-12, energy_where)
    rep.add("block entries read with 1/(27 d_tabulated) vs evolve", variants["reciprocal"], 1e-12)
    rep.notes.append(
        "block entries rho_33/35/37/55 with prefactor d/27: residual "
        f"{variants['as_printed']:.3e} with the growing d, {variants['flipped_d']:.3e} with the "
        "sign-flipped d; neither reproduces the dynamics, so the corrected forms are used")


def check_closed_quantifiers(rep: ValidationReport, rng: np.random.Generator, n: int = 200,
                             propagate=evolve_matrix):
    w_l1 = w_sl = 0.0
    for _ in range(n):
        J, K, bz = rng.uniform(-2.0, 2.0, 3)
        gamma = rng.uniform(0.0, 0.5)
        p = rng.uniform(0.0, 1.0)
        t = rng.uniform(0.0, 30.0)
        mp = ModelParams(J, K, bz)
        r = propagate(isotropic_matrix(p), _prop(mp, gamma), t)
        w_l1 = max(w_l1, abs(l1_coherence(r) - l1_coherence_closed(mp, p, gamma, t)))
        w_sl = max(w_sl, abs(linear_entropy(r) - linear_entropy_closed(mp, p, gamma, t)))
    rep.add(f"closed-form l1 coherence vs generic ({n} random tuples)", w_l1, 1e-10)
    rep.add(f"closed-form linear entropy vs generic ({n} random tuples)", w_sl, 1e-10)
    t0 = 0.0
    for p in np.linspace(0, 1, 11):
        mp = ModelParams(REFERENCE_J, REFERENCE_K, 1.3)
        t0 = max(t0, abs(l1_coherence_closed(mp, p, 0.1, 0.0) - 2 * p),
                 abs(linear_entropy_closed(mp, p, 0.1, 0.0) - (1 - p * p)))
    rep.add("closed forms at t=0 equal 2p and 1-p^2", t0, 1e-14)


def check_werner(rep: ValidationReport):
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 101):
        worst = max(worst, abs(negativity(isotropic_matrix(p)) - werner_negativity(p)))
    rep.add("isotropic negativity, generic vs 3 max(0,(4p-1)/9), 101 points", worst, 1e-10)
    root = werner_crossing()
    rep.add("negativity / linear entropy crossing at p = 2/3", abs(root - 2 / 3), 1e-6)
    rep.notes.append(
        f"negativity and linear entropy of the isotropic state cross at p = {root:.10f} (= 2/3); "
        f"the quoted value {QUOTED_CROSSING} differs by {abs(QUOTED_CROSSING - root):.1e} and is not used")


def check_steady(rep: ValidationReport, propagate=evolve_matrix):
    p = REFERENCE_P
    expected = {0.0: 1 - 7 * p * p / 9, 1.0: 1 - 7 * p * p / 36,
                1.8: 1 - 10 * p * p / 36, 4.0: 1 - 7 * p * p / 36}
    rho0 = isotropic_matrix(p)
    worst_sl = worst_evo = 0.0
    values = {}
    for bz, sl in expected.items():
        prop = _prop(_model(bz), REFERENCE_GAMMA)
        ss = steady_state_matrix(rho0, prop)
        values[bz] = (negativity(ss), l1_coherence(ss))
        worst_sl = max(worst_sl, abs(linear_entropy(ss) - sl))
        worst_evo = max(worst_evo, float(np.max(np.abs(propagate(rho0, prop, 1e4) - ss))))
    rep.add("steady linear entropy 1-7p^2/9, 1-7p^2/36, 1-10p^2/36", worst_sl, 1e-9)
    rep.add("evolve at t=1e4 approaches the steady projector", worst_evo, 1e-6)
    n_res, c_res = values[1.8]
    ok = all(n_res > values[b][0] and c_res > values[b][1] for b in (1.0, 4.0))
    margin = min(min(n_res - values[b][0], c_res - values[b][1]) for b in (1.0, 4.0))
    rep.add("steady negativity and coherence larger at Bz=1.8 than at Bz=1, 4", 0.0, 0.0,
            f"smallest margin {margin:.6f}", passed=ok)

    g_worst = 0.0
    for bz in FIELDS:
        outs = [steady_state_matrix(rho0, _prop(_model(bz), g)) for g in (1e-3, 0.03, 0.3)]
        g_worst = max(g_worst, *(float(np.max(np.abs(o - outs[0]))) for o in outs[1:]))
    rep.add("steady state independent of gamma in {1e-3, 0.03, 0.3}", g_worst, 1e-12)


def check_resonances(rep: ValidationReport):
    bzs = grid(-4.0, 4.0, 0.01)
    for J, K in ((REFERENCE_J, REFERENCE_K), (-REFERENCE_J, -REFERENCE_K)):
        cfg = SweepConfig(J=J, K=K, p=REFERENCE_P, gamma=[REFERENCE_GAMMA], bz=bzs)
        table = field_scan(cfg)
        target = np.array([-1.8, 0.0, 1.8])
        for col in ("negativity", "coherence"):
            peaks = np.array(local_maxima(table, col))
            ok = len(peaks) == 3 and bool(np.all(np.abs(peaks - target) <= 0.01 + 1e-12))
            res = float(np.max(np.abs(peaks - target))) if len(peaks) == 3 else np.inf
            rep.add(f"steady {col} maxima at -1.8, 0, 1.8 (J={J:g}, K={K:g})", res, 0.01,
                    f"peaks {[round(float(x), 6) for x in peaks]}", passed=ok)
        spec = spectrum_scan(cfg)
        e = {i: spec.column(f"E{i}") for i in range(1, 10)}
        bz = spec.column("bz")
        crossings = {}
        for a, b in ((1, 6), (1, 9)):
            diff = e[a] - e[b]
            crossings[(a, b)] = float(bz[int(np.argmin(np.abs(diff)))])
        if J > 0:
            want = {(1, 6): 1.8, (1, 9): -1.8}
        else:
            want = {(1, 6): -1.8, (1, 9): 1.8}
        res = max(abs(crossings[k] - v) for k, v in want.items())
        rep.add(f"level crossings E1-E6, E1-E9 (J={J:g}, K={K:g})", res, 1e-12,
                ", ".join(f"E{a}=E{b} at {v:g}" for (a, b), v in crossings.items()))


def check_channel(rep: ValidationReport, rng: np.random.Generator, n: int = 100,
                  propagate=evolve_matrix):
    tr = herm = semi = gauge = 0.0
    lo = np.inf
    purity_ok = True
    for _ in range(n):
        J, K, bz = rng.uniform(-2.0, 2.0, 3)
        gamma = rng.uniform(0.01, 0.5)
        t1, t2 = rng.uniform(0.0, 10.0, 2)
        mp = ModelParams(J, K, bz)
        h = build_hamiltonian(mp)
        prop = _prop(mp, gamma)
        rho0 = random_density(9, rng).matrix
        out = propagate(rho0, prop, t1)
        tr = max(tr, abs(np.trace(out) - 1))
        herm = max(herm, float(np.max(np.abs(out - out.conj().T))))
        lo = min(lo, float(np.linalg.eigvalsh(out)[0]))
        semi = max(semi, float(np.max(np.abs(propagate(out, prop, t2) - propagate(rho0, prop, t1 + t2)))))
        for c in (-10.0, -1.0, 1.0, 10.0):
            shifted = Propagator.from_hamiltonian(h + c * np.eye(9), gamma)
            gauge = max(gauge, float(np.max(np.abs(propagate(rho0, shifted, t1) - out))))
        ts = np.linspace(0.0, 20.0, 50)
        pur = [float(np.real(np.vdot(m, m))) for m in (propagate(rho0, prop, t) for t in ts)]
        purity_ok &= all(b <= a + 1e-12 for a, b in zip(pur, pur[1:]))
    rep.add("channel: trace preserved", tr, 1e-12)
    rep.add("channel: Hermiticity preserved", herm, 1e-12)
    rep.add("channel: positivity (min eigenvalue >= -1e-10)", max(0.0, -lo), 1e-10)
    rep.add("channel: semigroup law", semi, 1e-11)
    rep.add("channel: invariance under H -> H + cI", gauge, 1e-12)
    rep.add("channel: purity non-increasing on a 50-point grid", 0.0, 0.0, passed=purity_ok)


def validate(seed: int = 42, *, propagate=evolve_matrix, quick: bool = False) -> ValidationReport:
    """Run every cross-check. ``propagate`` may be swapped in tests as a negative control."""
    rng = np.random.default_rng(seed)
    rep = ValidationReport(seed)
    check_spectrum(rep)
    check_oracle_triangle(rep, propagate, dt=2e-3 if quick else 1e-3)
    check_printed_forms(rep, propagate)
    check_closed_quantifiers(rep, rng, 40 if quick else 200, propagate)
    check_werner(rep)
    check_steady(rep, propagate)
    check_resonances(rep)
    check_channel(rep, rng, 20 if quick else 100, propagate)
    return rep
