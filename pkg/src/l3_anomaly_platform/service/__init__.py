"""
Service module: SDL simulation, windowing, prompting, detection and evaluation.
"""
