"""Exact arithmetic toolkit for piecewise-affine interval map dynamics."""

from .maps import (AffinePiece, MapInvariantError, MapSyntaxError, MINUS,
                   PLUS, PieceLimitError, PiecewiseMap, PowerLimitError,
                   PwdynError, SpecialPoints, compose, evaluate,
                   format_rational, iterate, lateral_limit, map_to_text,
                   parse_map, parse_rational, preimage, special_points,
                   special_preimage_set)
from .orbits import (Germ, GermOrbit, GermStepResult, OrbitResult,
                     PeriodicOrbit, StructureGraph, VariantSelector,
                     germ_orbit, germ_step, orbit, periodic_points, structure,
                     variants)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
