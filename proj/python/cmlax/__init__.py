"""Calogero-Moser systems: special functions, Lax matrices, Hamiltonians and flows."""

from ._cmlax import *  # noqa: F401,F403
from ._cmlax import __doc__  # noqa: F401
