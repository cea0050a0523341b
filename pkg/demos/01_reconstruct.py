"""
Recovering a linear functional from its values on projections.

A measure given only as a black box on projections is extended to the
whole algebra by solving on a spanning family of projections, then checked
on random projections it was never fitted to.
"""
import numpy as np

from projlattice import AlgebraShape, Table, TraceForm, random_selfadjoint, reconstruct

shape = AlgebraShape((1, 3, 4))
rho0 = random_selfadjoint(shape, seed=2024)

# hide rho0 behind a black box: the reconstruction only sees mu(p)
black_box = Table(shape, oracle=TraceForm(rho0))
result = reconstruct(black_box, tol=1e-8, seed=1)

print("shape:", list(shape.blocks), "  Type I2 summand:", shape.has_I2_summand)
print("status:", result.status.value)
print("residual on", result.verified_on, "projections:", f"{result.residual:.2e}")
print("||rho - rho0||_op =", f"{(result.rho - rho0).op_norm():.2e}")

# a function that is not additive is caught by the same verification
squared = Table.trace_power((3,), 2)
bad = reconstruct(squared)
print("\nmu(p) = trace(p)**2 ->", bad.status.value, f"(residual {bad.residual:.2f})")
print("fitted rho:\n", np.round(bad.rho.blocks[0].real, 6))
