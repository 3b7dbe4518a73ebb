"""
Rewriting a two-photon model as a one-photon model
==================================================

The effective two-photon generator can be reproduced by a one-photon model
with rescaled coupling, drive, temperature, pump and local decay, provided
the required pump is not negative.
"""

import numpy as np

from lindblad_twophoton import (
    DensityMatrix,
    HilbertSpace,
    ModelParams,
    UnmappableError,
    build_effective_generator,
    evolve,
    j_corr,
    map_2ph_to_1ph,
)

p = ModelParams.from_alpha(2, 2, 0.01, 1.2 * np.exp(0.4j), nbar=0.6, P=1.5e-3, gamma_loc=1e-4)
q = map_2ph_to_1ph(p)
print("two-photon:", p)
print("one-photon:", q)

t = np.linspace(0, 3000, 7)
rho0 = DensityMatrix.basis(HilbertSpace.qubits(2), 0)
obs = {"J": lambda s: j_corr(s, 2)}
a = evolve(build_effective_generator(p), rho0, t[-1], t, observables=obs)
b = evolve(build_effective_generator(q), rho0, t[-1], t, observables=obs)
for ti, x, y in zip(t, a["J"], b["J"]):
    print(f"t={ti:6.0f}  J 2ph = {x: .10f}   J mapped 1ph = {y: .10f}")

# without pump, any local decay makes the mapping ask for a negative pump
try:
    map_2ph_to_1ph(ModelParams.from_alpha(2, 2, 0.01, 1.0, nbar=0.5, gamma_loc=1e-4))
except UnmappableError as exc:
    print("\nunmappable:", exc)
