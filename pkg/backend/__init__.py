"""Collective-spin entanglement library."""
