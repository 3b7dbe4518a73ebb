"""
Steady-state coherence versus drive strength
============================================

For large |alpha| the two-photon steady state stops depending on |alpha|:
rho_ee -> 1/(2 + 64 (g/k)^2) and |rho_eg| -> 4 (g/k)/(1 + 32 (g/k)^2).
The one-photon state instead saturates to rho_ee = 1/2 with no coherence.
"""

import numpy as np

from lindblad_twophoton import (
    ModelParams,
    build_effective_generator,
    coherence,
    excited_population,
    one_qubit_large_alpha_limit,
    steady_state,
)

print(" |alpha|   rho_ee 1ph  |rho_eg| 1ph   rho_ee 2ph  |rho_eg| 2ph")
for a in np.linspace(0, 2.5, 11):
    row = []
    for l in (1, 2):
        rho = steady_state(build_effective_generator(ModelParams.from_alpha(l, 1, 0.01, -1j * a)))
        row += [excited_population(rho), abs(coherence(rho))]
    print(f"{a:7.2f}   " + "   ".join(f"{v:10.6f}" for v in row))

ee, eg = one_qubit_large_alpha_limit(ModelParams.from_alpha(2, 1, 0.01, -2.5j))
print(f"\nlarge-|alpha| limit (2ph): rho_ee = {ee:.6f}, |rho_eg| = {abs(eg):.6f}")

# g/k that maximises the limiting coherence
x = np.linspace(0.01, 0.5, 4901)
best = x[np.argmax(4 * x / (1 + 32 * x ** 2))]
print(f"coherence is largest near g/k = {best:.3f} (1/(4 sqrt 2) = {1 / (4 * np.sqrt(2)):.3f})")
