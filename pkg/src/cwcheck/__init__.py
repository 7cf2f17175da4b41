"""Safety verification of linearly ordered parameterized systems with counted words."""

__version__ = "0.1.0"
