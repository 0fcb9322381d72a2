"""Build and check the corrected two-path graph constructions and their weight tables."""

__version__ = "0.1.0"
