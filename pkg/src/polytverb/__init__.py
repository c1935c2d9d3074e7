"""Tverberg-type polytopal partitions of point clouds."""

__version__ = "0.1.0"
