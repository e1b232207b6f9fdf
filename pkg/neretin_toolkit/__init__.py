"""
Exact computations in the almost-automorphism groups of the trees T_{d,k}.
"""

__version__ = '0.1.0'
