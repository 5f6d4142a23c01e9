"""Separability of superradiant Dicke states via truncated Hausdorff moments."""

from ._core import *  # noqa: F401,F403
from ._core import DickeError, InfeasibleError

__all__ = [name for name in dir() if not name.startswith("_")]
