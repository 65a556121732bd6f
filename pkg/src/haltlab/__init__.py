"""Partial recursive functions, register machines and a sound, incomplete halting analyzer."""

__version__ = "0.1.0"
