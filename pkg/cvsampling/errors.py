# -*- coding: utf-8 -*-
"""Exceptions that the command line interface maps onto exit codes."""
from typing import Optional


class ConfigError(ValueError):
    """Invalid configuration value. The message starts with the offending field."""


class MissingArtifactError(FileNotFoundError):
    """An artifact required by a stage has not been produced yet."""


class ArtifactMismatchError(ValueError):
    """Artifacts were produced with different configurations."""


class NumericGuardError(RuntimeError):
    """A numerical guard refused to continue, for example because a Fock cutoff captures too little probability mass.

    Args:
        message: Explanation of the refusal.
        suggested_cutoff: A cutoff that would pass the guard, if known.
    """
    def __init__(self, message: str, suggested_cutoff: Optional[int] = None) -> None:
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff
