"""Python bindings for the sdcl sample difficulty and curriculum library."""

from ._sdcl import *  # noqa: F401,F403
from ._sdcl import __doc__  # noqa: F401

__version__ = "0.1.0"
