"""Household schedulers: genetic algorithm, harmony search, exhaustive oracle and baseline."""
