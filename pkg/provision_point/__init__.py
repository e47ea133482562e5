"""
Provision Point - refund bonus mechanisms for civic crowdfunding:
scheme evaluation, condition checks, equilibria, simulation and gas costs.
"""

__version__ = "1.0.0"
