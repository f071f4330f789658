"""
Test suite for Surface Immersions.
"""
