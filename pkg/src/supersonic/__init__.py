"""Single-excitation dynamics of an accelerating bosonic chain.

Simulation of the effective excitation Hamiltonian, the moment-constrained
tail-probability linear program, the full spin-1 bosonic model used as an
oracle, and the uniform hopping reduction of Bose-Hubbard-type chains.
"""

__version__ = "0.1.0"
