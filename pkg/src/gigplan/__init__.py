"""gigplan: graph-in-graph embodied planner at desk scale."""

__version__ = "0.1.0"
