"""Exact engine for hull resolutions of edge ideals and their Morse matchings."""

__version__ = "0.1.0"
