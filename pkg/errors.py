#!/usr/bin/env python3
"""
Error types for icckit.

Usage errors mean the caller asked for something that does not exist
(unknown variable, wrong coordinates, index out of range). Validation
errors mean the data itself is bad (rows that do not sum to one, broken
independence, unrecoverable interference). The CLI maps both to exit 2.
"""


class IcckitError(Exception):
    """Base class for every error raised by icckit."""


class UsageError(IcckitError, ValueError):
    """Raised when an operation is called with arguments outside its domain."""


class ValidationError(IcckitError, ValueError):
    """Raised when an input table, channel or factorization is invalid."""


class ResourceError(IcckitError):
    """Raised when a simulation would exceed the configured memory caps."""


class ConfigError(IcckitError):
    """Raised when configuration values fail validation."""
