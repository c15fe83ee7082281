from .frobenius import ExactSolution, solve_truncation
from .oracle import RadialProblem, solve_state, validate_exact
from .spectrum import SpectralCurve, build_curve, interpolate
