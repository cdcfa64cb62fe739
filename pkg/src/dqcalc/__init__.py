"""Exact symbol calculus for deformation quantization on cotangent bundles."""
from . import cech, errors, lagrange, scalars, starexp, symbols, wcalc
from .cech import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .lagrange import *  # noqa: F401,F403
from .parser import evaluate, parse_expr
from .scalars import *  # noqa: F401,F403
from .starexp import *  # noqa: F401,F403
from .symbols import *  # noqa: F401,F403
from .wcalc import *  # noqa: F401,F403

__version__ = "0.1.0"
__all__ = ["evaluate", "parse_expr"] + [
    name for mod in (errors, scalars, symbols, wcalc, starexp, cech, lagrange) for name in mod.__all__
]
