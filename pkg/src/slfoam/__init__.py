"""
slfoam: a symbolic engine for the combinatorial sl(n) foam invariant of
colored framed oriented links, with bigraded homology extraction and the
decategorified quantum invariant, in exact arithmetic.
"""

__version__ = "0.1.0"
