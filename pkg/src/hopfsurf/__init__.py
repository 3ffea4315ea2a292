"""Degree-one proper self-maps of infinite-type surfaces that are not pi1-injective."""

__version__ = "0.1.0"
