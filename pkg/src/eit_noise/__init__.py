"""Quantum noise of pump and probe fields in a cavity EIT model."""

__version__ = "0.1.0"
