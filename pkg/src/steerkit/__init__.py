"""Linear steering inequalities: operators, enumerated thresholds, certification."""

__version__ = "0.1.0"
