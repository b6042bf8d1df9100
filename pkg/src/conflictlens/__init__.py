"""Believed conflicts between two agents: detection, justification and staged resolution."""

__version__ = "1.0.0"
