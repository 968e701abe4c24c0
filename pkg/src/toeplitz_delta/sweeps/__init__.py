"""Sweeps driven by the toeplitz-delta CLI."""

from toeplitz_delta.sweeps.base import BaseSweep, SweepTable

__all__ = ["BaseSweep", "SweepTable"]
