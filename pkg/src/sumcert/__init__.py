"""Certified bounds for the discrete-spectrum hydrogen sum rules."""

from sumcert.numeric_core import (
    DEFAULT_CONTEXT,
    DomainError,
    Enclosure,
    PrecisionContext,
    PrecisionError,
)

__all__ = ["DEFAULT_CONTEXT", "DomainError", "Enclosure", "PrecisionContext", "PrecisionError"]
__version__ = "0.1.0"
