#!/usr/bin/env python3
"""Open-system dynamics of the two modes + emitter.

Integrates the master equation for three initial field states with the
atom in the ground state (g=1, gamma=1, kappa=g/100), then compares the
quantum and factorized semiclassical models for an excited atom probing
out-of-phase fields. Takes about half a minute.
"""

import math

import numpy as np

from brightdark import (
    CoherentSpec,
    DensityOperator,
    HilbertConfig,
    SystemParams,
    coherent,
    lindblad_evolve,
    semiclassical_evolve,
    upsilon,
)

ALPHA = 1 / math.sqrt(2)
PARAMS = SystemParams(g=1.0, gamma=1.0, kappa=0.01)
CUTOFF = 10  # keeps the dark input dark to ~1e-9 over the whole run


def coh(cfg, alphas, atom_level=0):
    return coherent(cfg, CoherentSpec(alphas, tolerance=1e-8), atom_level)


def main():
    cfg = HilbertConfig(2, CUTOFF, atom_levels=2)
    t = np.linspace(0.0, 10.0, 101)

    print("ground-state atom, three field inputs:")
    for label, state in (
        ("|a,a>", coh(cfg, (ALPHA, ALPHA))),
        ("|a,-a>", coh(cfg, (ALPHA, -ALPHA))),
        ("upsilon", upsilon(cfg)),
    ):
        series = lindblad_evolve(
            cfg, PARAMS, DensityOperator.from_state(state), t,
            convergence_check=False,
        )
        see = series["sigma_ee"]
        print(
            f"  {label:8s} peak sigma_ee = {see.max():.2e}   "
            f"nA(10)/nA(0) = {series['nA'][-1] / series['nA'][0]:.4f}"
        )
    print("  bare-cavity decay over t=10 would give", f"{math.exp(-0.1):.4f}")
    print("  the dark input decays at exactly that rate; bright inputs decay faster")

    print("\nexcited atom probing out-of-phase fields:")
    quantum = lindblad_evolve(
        cfg, PARAMS,
        DensityOperator.from_state(coh(cfg, (ALPHA, -ALPHA), atom_level=1)),
        t, convergence_check=False,
    )
    sc = semiclassical_evolve(PARAMS, 0.0, "e", t)
    slopes = np.diff(quantum["sigma_ee"])
    wiggles = int(np.sum(slopes[:-1] * slopes[1:] < 0))
    print(f"  quantum model: {wiggles} slope reversals (vacuum Rabi exchange)")
    print(f"  semiclassical: monotone, max |sigma_ee - e^(-2t)| = "
          f"{np.abs(sc['sigma_ee'] - np.exp(-2 * t)).max():.1e}")
    print("  an excited atom therefore distinguishes dark quantum fields")
    print("  from classically silent ones.")


if __name__ == "__main__":
    main()
