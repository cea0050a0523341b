"""
Variation, alpha and the functional norm for a signed measure.

For mu(p) = trace(rho p) with Hermitian rho, alpha(1) is the sum of the
positive eigenvalues and 2 alpha(1) - mu(1) is the trace norm.  Shifting by
alpha(1) times the trace gives a positive measure; removing the central part
and rescaling pins alpha(1) at one half.
"""
import numpy as np

from projlattice import (
    Element,
    TraceForm,
    centre_normalize,
    matrix_functionals,
    positivity_shift,
    random_selfadjoint,
    variation_and_alpha,
)
from projlattice.measures import alpha_one

rho = random_selfadjoint((4,), seed=7)
mu = TraceForm(rho)
one = Element.identity(rho.shape)

print("eigenvalues of rho:", np.round(np.linalg.eigvalsh(rho.blocks[0]), 4))
v, a = variation_and_alpha(mu, one)
print(f"V(1) = {v:.6f}   alpha(1) = {a:.6f}   mu(1) = {mu(one).real:.6f}")
print(f"2 alpha(1) - mu(1) = {2 * a - mu(one).real:.12f}")
print(f"trace norm         = {matrix_functionals(rho).trace_norm:.12f}")

shifted = positivity_shift(mu)
print("\nalpha(1) I - rho has eigenvalues", np.round(np.linalg.eigvalsh(shifted.rho.blocks[0]), 4))

rho2 = random_selfadjoint((3, 4), seed=8)
out = centre_normalize(TraceForm(rho2))
print("\ncentral coefficients:", np.round(out.sigma, 4), " scale:", round(out.scale, 4))
print("alpha(1) after normalization:", alpha_one(out.normalized))
