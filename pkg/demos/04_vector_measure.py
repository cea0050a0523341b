"""
Lifting a C^5-valued measure to a bounded linear operator.

Each coordinate is extended separately.  The operator norm (max-coordinate
norm on C^5) never exceeds four times the largest value of the measure on
projections.
"""
from projlattice import TraceForm, VectorMeasure, extend_vector_measure, random_selfadjoint

rhos = [random_selfadjoint((3,), seed=s) for s in range(5)]
m = VectorMeasure([TraceForm(r) for r in rhos])
T = extend_vector_measure(m, samples=500, seed=0)

print("max recovery error:", max((a - b).op_norm() for a, b in zip(rhos, T.rhos)))
print(f"K = sup ||m(p)|| ~ {T.K:.4f}")
print(f"||T|| ~ {T.norm_bound:.4f}  <=  4K = {4 * T.K:.4f}")
