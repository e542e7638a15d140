"""Alexander-module obstructions to free quotients of finitely presented groups."""

__version__ = "0.1.0"
