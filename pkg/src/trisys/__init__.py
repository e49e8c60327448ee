"""Certified systole upper bounds for congruence quotients of hyperbolic triangle groups."""

from __future__ import annotations

__version__ = "0.1.0"
