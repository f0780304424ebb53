#!/usr/bin/env python3
"""Train the 2-qubit machine on single targets and inspect the optima.

Walks through the landmark targets of the two-parameter family
|psi(r, phi)>: a first-quadrant state that is represented exactly, the
maximally-hard state at (sqrt2/2, 3pi/4), and the r = 0 Bell mixture limit.
"""

import numpy as np

from qbm import bfgs, grad, model, opalg

mv = model.visible_model_2q()
print("model:", ", ".join(mv.basis.labels))
print()

# --- a first-quadrant target: exactly representable, entropy -> 0
r, phi = 0.5, np.pi / 4
target = model.target_state(r, phi)
res = bfgs.minimize(mv, target.density, np.zeros(5))
print(f"target (r, phi) = ({r}, pi/4)")
print(f"  s_min = {res.s_min:.3e} bits after {res.iterations} iterations "
      f"(converged={res.converged}, on parameter box={res.boundary})")
print(f"  a_opt = {np.round(res.a_opt, 3)}")
print("  the optimum runs toward the zero-temperature ray: the state is the")
print("  unique ground state of a member Hamiltonian, so the Gibbs family")
print("  approaches it but never attains it at finite parameters")
print()

# --- the hardest target: every moment vanishes, so a = 0 is stationary
r, phi = np.sqrt(2) / 2, 3 * np.pi / 4
target = model.target_state(r, phi)
print(f"target (r, phi) = (sqrt2/2, 3pi/4)")
print("  moments:", np.round(model.moments(target.density, mv.basis), 12))
res = bfgs.minimize(mv, target.density, np.zeros(5))
print(f"  s_min = {res.s_min:.6f} bits at a_opt = {np.round(res.a_opt, 6)}")
print("  the maximally mixed state is already optimal: 2 bits, the largest")
print("  minimal relative entropy over the whole family")
print()

# --- r = 0: the symmetric Bell mixture costs exactly 1 bit
res = bfgs.minimize(mv, model.target_state(0.0, 1.0).density, np.zeros(5))
print("target (r, phi) = (0, anything)")
print(f"  s_min = {res.s_min:.6f} bits, |a|_max = {np.abs(res.a_opt).max():.2f}")
print()

# --- moment matching at an interior optimum (second quadrant)
r, phi = 0.6, 2.2
target = model.target_state(r, phi)
res = bfgs.minimize(mv, target.density, np.zeros(5))
rho = model.boltzmann_state(mv, res.a_opt)
mism = model.moments(rho, mv.basis) - model.moments(target.density, mv.basis)
lhs = grad.objective(mv, target.density, res.a_opt)
rhs = opalg.von_neumann_entropy(rho) - opalg.von_neumann_entropy(target.density)
print(f"target (r, phi) = ({r}, {phi}) in the second quadrant")
print(f"  s_min = {res.s_min:.6f} bits (positive: the state sits inside the")
print("  numerical range and cannot be represented exactly)")
print(f"  moment-matching residual at the optimum: {np.abs(mism).max():.2e}")
print(f"  entropy identity S(sigma|rho) = S(rho) - S(sigma): "
      f"|{lhs:.9f} - {rhs:.9f}| = {abs(lhs - rhs):.2e}")
