"""
Core module: models, converters, formatters, backends and observability.
"""
