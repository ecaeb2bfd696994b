"""Toolkit for clausal proofs in the redundancy systems BC/RAT/SPR/PR/SR."""

__version__ = "0.1.0"
