"""odelip - Lipschitz-regularized recovery of ODE right-hand sides"""

__version__ = "0.1.0"
