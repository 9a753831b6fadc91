"""Verification stages run by the command line front end.

Each stage returns a plain ``dict`` of JSON-ready values and appends
``(name, value, tolerance)`` checks to a shared list; a check passes when
``value <= tolerance`` (or ``value > tolerance`` for the nontriviality floor).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .automorphy import chain_rule_residual, check_integrality
from .config import ExperimentConfig
from .equivariant import (AffineTau, check_equivariance, compute_B, weight_certificate,
                          weight_invariance_residual)
from .forms import build_forms, landau_residual, mixed_residual, nontriviality_scan, probe_points
from .group import GroupElement, translation
from .lattice import Lattice
from .phi import (CharacterTable, chi_hat_residual, chi_tau, phi_affine, phi_pde_residual,
                  phi_quadrature, pseudo_char_residual, psi_reduction_residual)

TOLERANCES = {
    "equivariance": 1e-12,
    "chain_rule": 1e-12,
    "weight_constancy": 1e-8,
    "weight_invariance": 1e-8,
    "phi_closed_vs_quadrature": 1e-10,
    "phi_path_independence": 1e-10,
    "phi_pde": 1e-6,
    "psi_reduction": 1e-6,
    "chi_hat": 1e-11,
    "pseudo_character": 1e-11,
}
NONTRIVIALITY_FLOOR = 1e-6
CHAIN_RULE_PAIRS = 200
PSEUDO_CHAR_RANGE = 5


def form_tolerance(cfg: ExperimentConfig) -> float:
    return max(1e-8, 10 * cfg.tol)


@dataclass
class Context:
    cfg: ExperimentConfig
    tau: AffineTau = field(init=False)
    lattice: Lattice = field(init=False)
    checks: list = field(default_factory=list)

    def __post_init__(self):
        cfg = self.cfg
        self.tau = AffineTau(cfg.c, cfg.d, cfg.e)
        self.lattice = Lattice(cfg.omega1, cfg.omega2)
        self.weights = compute_B(self.tau, cfg.nu, cfg.mu)
        self.rng = np.random.default_rng(cfg.rng_seed)
        box = cfg.box
        n = cfg.probe_count
        self.samples = self.rng.uniform(-box, box, n) + 1j * self.rng.uniform(-box, box, n)

    def check(self, name: str, value: float, tol: float | None = None):
        tol = TOLERANCES[name] if tol is None else tol
        self.checks.append((name, float(value), tol, float(value) <= tol))
        return float(value)

    def admissible_elements(self, count: int):
        """Random translations and the rotations ``tau`` is compatible with."""
        tau, rng, box = self.tau, self.rng, self.cfg.box
        free_rotation = tau.c == 0 or tau.d == 0
        out = []
        for _ in range(count):
            b = complex(rng.uniform(-box, box), rng.uniform(-box, box))
            kind = rng.integers(3)
            if kind == 0:
                a = 1.0
            elif free_rotation:
                a = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
            else:
                a = -1.0
            out.append(GroupElement(a, b))
        return out

    @property
    def failed(self) -> list:
        return [name for name, _, _, ok in self.checks if not ok]


def stage_validate(ctx: Context) -> dict:
    L, tau, w = ctx.lattice, ctx.tau, ctx.weights
    elements = [translation(L.omega1), translation(L.omega2)] + ctx.admissible_elements(20)
    eq = ctx.check("equivariance", check_equivariance(tau, elements, ctx.samples))
    ok, table = check_integrality(tau, w, L)
    return {"equivariance_residual": eq, "integrality": {"ok": ok, "table": table.tolist()}}


def stage_weight(ctx: Context) -> dict:
    tau, w = ctx.tau, ctx.weights
    cert = ctx.check("weight_constancy", weight_certificate(tau, w, ctx.samples))
    inv = max(weight_invariance_residual(tau, w, g, ctx.samples) for g in ctx.admissible_elements(10))
    ctx.check("weight_invariance", inv)
    return {"B": w.B, "constancy_certificate": cert, "invariance_residual": inv}


def stage_chain_rule(ctx: Context) -> dict:
    tau, w = ctx.tau, ctx.weights
    gs = ctx.admissible_elements(CHAIN_RULE_PAIRS)
    hs = ctx.admissible_elements(CHAIN_RULE_PAIRS)
    worst = max(chain_rule_residual(tau, w, g, h, ctx.samples[: 8]) for g, h in zip(gs, hs))
    return {"chain_rule_residual": ctx.check("chain_rule", worst)}


def stage_phi(ctx: Context) -> dict:
    tau, w = ctx.tau, ctx.weights
    phi = phi_affine(tau, w)
    closed = phi(ctx.samples)
    straight = np.array([phi_quadrature(tau, w, z) for z in ctx.samples])
    bent = np.array([phi_quadrature(tau, w, z, [0, z.real, z]) for z in ctx.samples])
    return {
        "kappa": [tau.kappa.real, tau.kappa.imag],
        "closed_vs_quadrature": ctx.check("phi_closed_vs_quadrature", np.max(np.abs(closed - straight))),
        "path_independence": ctx.check("phi_path_independence", np.max(np.abs(straight - bent))),
        "pde_residual": ctx.check("phi_pde", phi_pde_residual(tau, w, phi, ctx.samples)),
        "psi_reduction_residual": ctx.check("psi_reduction", psi_reduction_residual(tau, w, phi, ctx.samples)),
    }


def stage_character(ctx: Context) -> dict:
    tau, w, L = ctx.tau, ctx.weights, ctx.lattice
    phi = phi_affine(tau, w)
    gens = {"omega1": L.omega1, "omega2": L.omega2}
    table = {}
    for key, om in gens.items():
        v = complex(chi_tau(tau, w, phi, om))
        table[key] = [v.real, v.imag]
    spread = max(chi_hat_residual(tau, w, phi, g, ctx.samples)
                 for g in (L.omega1, L.omega2, L.omega1 + L.omega2))
    ok, _ = check_integrality(tau, w, L)
    pseudo = pseudo_char_residual(tau, w, phi, L, PSEUDO_CHAR_RANGE)
    ctx.check("chi_hat", spread)
    # the pseudo-character law only holds under integrality
    if ok:
        ctx.check("pseudo_character", pseudo)
    return {"chi_tau": table, "chi_hat_spread": spread, "pseudo_character_residual": pseudo}


def stage_forms(ctx: Context):
    """Build both forms and probe them; returns ``(summary, landau, mixed, character)``."""
    cfg, tau, w, L = ctx.cfg, ctx.tau, ctx.weights, ctx.lattice
    phi, chi, landau, mixed = build_forms(tau, w, L, cfg.tol, max_radius=cfg.max_radius,
                                          rng_seed=cfg.rng_seed)
    z, g = probe_points(L, cfg.probe_count, cfg.rng_seed, box=cfg.box)
    tol = form_tolerance(cfg)
    lres = ctx.check("landau", np.max(landau_residual(landau, chi, w.B, z, g)), tol)
    mres = ctx.check("mixed", np.max(mixed_residual(mixed, tau, w, z, g)), tol)
    scan = nontriviality_scan(landau, L, max(cfg.nx, cfg.ny))
    ctx.checks.append(("nontriviality", scan, NONTRIVIALITY_FLOOR, scan > NONTRIVIALITY_FLOOR))
    summary = {
        "landau_residual": lres,
        "mixed_residual": mres,
        "nontriviality_max_abs": scan,
        "landau": landau.metadata(),
        "mixed": mixed.metadata(),
    }
    return summary, landau, mixed, chi


def finite_or_none(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def character_table_dict(chi: CharacterTable) -> dict:
    c1, c2 = chi.values
    return {"omega1": [c1.real, c1.imag], "omega2": [c2.real, c2.imag], "B": chi.B}
