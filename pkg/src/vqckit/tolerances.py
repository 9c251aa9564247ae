"""Central table of numeric tolerances.

Every module takes its default tolerances from here so that a single
adjustment propagates consistently.  Values are absolute unless noted.
"""

# Hermiticity of inputs to herm_expm / Observable construction.
HERMITICITY = 1e-10

# ||K1 diag(s) K2^H - A||_F after a singular value decomposition.
SVD_RECONSTRUCTION = 1e-10

# ||Q^H Q - I||_F for SVD factors.
SVD_FACTOR_UNITARITY = 1e-10

# ||U^H U - I||_F for a Hermitian matrix exponential.
EXPM_UNITARITY = 1e-9

# ||P^H P - I||_F for a nearest-unitary projection.
PROJECTION_UNITARITY = 1e-9

# Allowed |Im <psi|O|psi>| for Hermitian O.
EXPECTATION_IMAG = 1e-12

# Allowed | ||psi|| - 1 | for states fed to expectation values.
STATE_NORM = 1e-10

# Norm defect tolerance for amplitude-encoded vectors.
ENCODE_NORM = 1e-12

# Unitarity tolerance applied when reading a matrix from a UMAT file
# or accepting a circuit-realization target.
TARGET_UNITARITY = 1e-8

# BFGS curvature guard: skip the inverse-Hessian update when s.y is below.
CURVATURE_GUARD = 1e-12

# Relative residual allowed for the ridge dual solve.
RIDGE_RESIDUAL = 1e-8
