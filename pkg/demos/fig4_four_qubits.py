"""
Four qubits: a temperature-driven sign change
=============================================

At P = 1.5 P* the one-photon model stays superradiant for all temperatures.
In the two-photon model gamma_2 = gamma_1 (1 + 2 nbar) overtakes the pump at
nbar = 0.3125 and J_corr turns negative. The "1ph (2w)" column is the
one-photon model with oscillator and qubits at 2*omega, i.e. with the thermal
occupation nbar^2/(1 + 2 nbar).
"""

import numpy as np

from lindblad_twophoton import (
    ModelParams,
    build_effective_generator,
    j_corr,
    nbar_double_frequency,
    steady_state,
)

g, gamma_loc = 0.01, 1e-4
P = 1.5 * (4 * g ** 2 + gamma_loc)


def jc(l, nbar):
    p = ModelParams(l=l, N=4, g=g, nbar=nbar, P=P, gamma_loc=gamma_loc)
    return j_corr(steady_state(build_effective_generator(p)), 4)


print(" nbar     J 1ph       J 1ph (2w)    J 2ph")
for nbar in np.linspace(0, 2, 11):
    print(f"{nbar:5.2f}  {jc(1, nbar): .4f}    {jc(1, nbar_double_frequency(nbar)): .4f}     {jc(2, nbar): .4f}")

print(f"\npredicted 2ph crossing: nbar = {((P - gamma_loc) / (4 * g ** 2) - 1) / 2:.4f}")
