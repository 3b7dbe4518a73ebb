"""
Super- and subradiance of two qubits
====================================

J_corr = <J+ J-> - sum_i <sigma+_i sigma-_i> in the steady state, without
coherent drive. Its sign follows P - gamma_l - gamma_loc. At P = P* =
gamma_1 + gamma_loc the one-photon model sits on J_corr = 0 at every
temperature, while gamma_2 grows with temperature and pushes the two-photon
model into subradiance.
"""

import numpy as np

from lindblad_twophoton import ModelParams, build_effective_generator, j_corr, steady_state, two_qubit_jcorr_analytic

g, gamma_loc = 0.01, 1e-4
p_star = 4 * g ** 2 + gamma_loc

print(f"P* = {p_star:.1e}\n")
print(" nbar    J 1ph (P*)    J 2ph (P*)    closed form 2ph")
for nbar in np.linspace(0, 2, 9):
    vals = []
    for l in (1, 2):
        p = ModelParams(l=l, N=2, g=g, nbar=nbar, P=p_star, gamma_loc=gamma_loc)
        vals.append(j_corr(steady_state(build_effective_generator(p)), 2))
    ref = two_qubit_jcorr_analytic(ModelParams(l=2, N=2, g=g, nbar=nbar, P=p_star, gamma_loc=gamma_loc))
    print(f"{nbar:5.2f}   {vals[0]: .3e}   {vals[1]: .3e}   {ref.value: .3e}")

# the whole (nbar, P) map, as a CSV:
#   lindblad-twophoton --preset fig3 --output fig3.csv
