"""
bpdd: Basis Pursuit double descent
Simulation and verification toolkit for the model error of interpolating
estimators (Basis Pursuit, minimum-l2-norm) in sparse Gaussian regression,
together with the theoretical bounds that describe their double descent.
"""

__version__ = "0.1.0"
