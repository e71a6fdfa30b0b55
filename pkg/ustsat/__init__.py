"""Unipolar-set termination (UST) toolkit for DPLL SAT solving"""

__version__ = "1.0.0"
