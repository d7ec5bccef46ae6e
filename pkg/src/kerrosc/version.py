"""Single source of the tool version embedded in every output header."""

__version__ = "0.1.0"
