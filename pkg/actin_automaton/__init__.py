"""Excitable three-state automata on molecular graphs."""

__version__ = "1.0.0"
