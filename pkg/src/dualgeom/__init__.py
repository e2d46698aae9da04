"""Jacobi/Riccati duality on model manifolds and the checks built on it.

Submodules
----------
radial_fn
    Radial function expressions.
ode_engine
    Jacobi and Riccati solvers with dense output.
duality
    Transform and reverse between the two equation types.
comparison
    Comparison certificates.
model_geometry
    Model manifolds, curvature hypotheses and Hessian bounds.
growth
    Growth-type classifiers.
flat_forms
    Exact exterior calculus on polynomial forms in R^n.
inequalities
    CKN, Costa and Hardy constants and their verification.
energy_monotonicity
    Monotonicity exponents and vanishing checks.
cli
    Command-line front end.
"""

__version__ = "0.1.0"
