"""Pseudometrics and metric operators for PT-symmetric SSH chains."""

__version__ = "0.1.0"
