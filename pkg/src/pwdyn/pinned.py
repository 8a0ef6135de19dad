"""Pinned example maps shipped as package data.

These are fixed test subjects, never regenerated: the jump-translation map
(`shift`), the expanding tent, the contracting hat, a pure contraction, a
semi-stable fixed point, a four-point jump cycle whose endpoints exchange no
lateral neighbourhoods, a decreasing two-cycle witness, a stable two-cycle,
and the identity.
"""

from __future__ import annotations

from importlib import resources

from .maps import PiecewiseMap, parse_map

PINNED_NAMES = ("shift", "tent", "hat", "contraction", "semistable",
                "fourcycle", "decreasing2", "twocycle", "identity")


def pinned_text(name: str) -> str:
    if name not in PINNED_NAMES:
        raise KeyError(f"unknown pinned map {name!r}")
    return resources.files("pwdyn").joinpath(f"data/{name}.map").read_text()


def pinned_map(name: str) -> PiecewiseMap:
    return parse_map(pinned_text(name))


def pinned_maps() -> dict[str, PiecewiseMap]:
    return {name: pinned_map(name) for name in PINNED_NAMES}
