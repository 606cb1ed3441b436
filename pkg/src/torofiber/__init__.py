"""Exact calculator for toroidal degenerations of toric fiber spaces."""

__version__ = "0.1.0"

from .fans import Fan, make_fan
from .fiber_space import ToricFiberSpace, make_fiber_space
from .fixtures import FIXTURES

__all__ = ["Fan", "FIXTURES", "ToricFiberSpace", "__version__", "make_fan", "make_fiber_space"]
