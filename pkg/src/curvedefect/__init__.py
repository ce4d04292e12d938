"""Jacobian syzygies and the defect of reduced plane curves, in exact arithmetic."""

from .forms import Form, parse_form
from .jacobian import (
    CurveError,
    JacobianProfile,
    NonReducedError,
    mdr,
    profile,
    saturate,
    tau,
    theorem12_crosscheck,
)

__all__ = [
    "CurveError",
    "Form",
    "JacobianProfile",
    "NonReducedError",
    "mdr",
    "parse_form",
    "profile",
    "saturate",
    "tau",
    "theorem12_crosscheck",
]
__version__ = "0.1.0"
