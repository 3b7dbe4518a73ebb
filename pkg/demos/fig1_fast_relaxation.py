"""
Faster relaxation with a two-photon coupling
============================================

One qubit, driven oscillator (beta = 1.25k, so |alpha| = 2.5), zero
temperature. The qubit relaxes at gamma_l; for two-photon exchange that rate
picks up a factor 1 + 4|alpha|^2 = 26.
"""

import numpy as np

from lindblad_twophoton import (
    DensityMatrix,
    HilbertSpace,
    ModelParams,
    build_effective_generator,
    effective_params,
    evolve,
    excited_population,
    one_qubit_steady_analytic,
)

ground = DensityMatrix.basis(HilbertSpace.qubits(1), 0)
t = np.linspace(0, 12500, 26)

curves = {}
for l in (1, 2):
    p = ModelParams(l=l, N=1, g=0.01, beta=1.25)
    eff = effective_params(p)
    print(f"{l}ph: gamma_l = {eff.gamma_l:.4g}, steady rho_ee = {one_qubit_steady_analytic(p).rho_ee:.6f}")
    traj = evolve(build_effective_generator(p), ground, t[-1], t, observables={"ee": excited_population})
    curves[l] = traj["ee"]

print()
print("      t    rho_ee(1ph)  rho_ee(2ph)")
for ti, a, b in zip(t, curves[1], curves[2]):
    print(f"{ti:7.0f}   {a:10.6f}   {b:10.6f}")

# The full oscillator+qubit model (n_cut = 40) reproduces these curves to
# about 1e-2; it takes a few minutes per curve:
#
#   lindblad-twophoton --preset fig1 --output fig1.csv
