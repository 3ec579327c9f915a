"""Opetopes, opetopic sets and algebras, and dependently sorted theories."""

from ._core import *  # noqa: F401,F403
from ._core import OpetopeError, __version__  # noqa: F401
