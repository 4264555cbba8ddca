"""Root subsystems, real structures and plane linear series for weak Del Pezzo surfaces."""

__version__ = "0.1.0"
