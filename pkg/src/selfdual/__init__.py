"""Einstein self-dual metric ansatze, their curvature, and residual verification."""

from .charts import Chart, ChartPoint, point
from .expr import DomainError, ExprError, SyntaxErrorAt, UnknownIdentifier, parse_expr, to_str
from .jets import Jet2, eval_jet2, fd_oracle

__all__ = [
    "Chart",
    "ChartPoint",
    "point",
    "parse_expr",
    "to_str",
    "Jet2",
    "eval_jet2",
    "fd_oracle",
    "ExprError",
    "SyntaxErrorAt",
    "UnknownIdentifier",
    "DomainError",
]

__version__ = "0.1.0"
