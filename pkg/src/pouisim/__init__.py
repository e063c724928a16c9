from .harness import run
from .loader import load_params, validate_params
from .poui import SimParams
from .trace import SimTrace

__version__ = "0.1.0"
