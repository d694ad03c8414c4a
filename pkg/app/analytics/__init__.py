"""
Analytics layer - independent reference oracles.

Brute-force and LP-based recomputations of what the solvers and learners
produce. Tests and diagnostics import from here; production code never does,
so an oracle can not silently share a bug with the code it checks.
"""
