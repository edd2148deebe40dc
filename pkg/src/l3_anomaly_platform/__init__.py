"""
L3 anomaly platform package.

Blind DoS detection over RRC/NAS telemetry with prompt-based detectors and an
offline evaluation harness.
"""

__version__ = "0.1.0"
