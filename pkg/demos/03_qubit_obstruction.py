"""
A bounded additive measure on the 2x2 projections with no linear extension.

mu(p(n)) = 1/2 + n_z**3 / 2 on rank-one projections.  Orthogonal pairs in M_2
are antipodal, so the odd cubic term cancels and mu is additive.  It is also
linear along every single Bloch axis, yet no trace form comes within 1/8 of
it: the best affine approximation of t**3/2 on [-1, 1] is 3t/8, off by 1/8.
"""
from projlattice import additivity_check, cubic_measure, linearity_audit, nonlinearity_residual, reconstruct

mu = cubic_measure()

print("additivity violation:", f"{additivity_check(mu, 500, seed=0).max_violation:.1e}")
audit = linearity_audit(mu, 500, seed=0)
print("omega defect, commuting pairs:", f"{audit.max_commuting_defect:.1e}")
print("omega defect, general pairs:  ", f"{audit.max_general_defect:.3f}")

for grid in (256, 2048, 20000):
    cert = nonlinearity_residual(mu, grid)
    print(f"grid {grid:6d}: minimax residual {cert.residual:.6f}  witness n_z={cert.witness.n[2]:+.4f}")
print("best trace-form fit:\n", cert.best_fit.blocks[0].real.round(4))

res = reconstruct(mu, tol=1e-6)
print("\nreconstruct ->", res.status.value, f"residual {res.residual:.4f}")
