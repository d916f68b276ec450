"""
Simulation, Markov analysis, likelihood, estimation and identifiability services.
"""
