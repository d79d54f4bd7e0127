"""Exception hierarchy shared by the package."""


class GraphSummError(Exception):
    """Base class for all package errors."""


class EdgeListParseError(GraphSummError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EmptyGraphError(GraphSummError):
    pass


class DegenerateGraphError(GraphSummError):
    pass


class SummaryFormatError(GraphSummError):
    pass


class NodeUniverseMismatch(GraphSummError):
    def __init__(self, node_id, message=None):
        super().__init__(message or f"node id {node_id} is not part of the graph")
        self.node_id = node_id


class BudgetInfeasibleError(GraphSummError):
    """The membership term alone exceeds the bit budget."""

    def __init__(self, target_bits, size_bits):
        super().__init__(
            f"budget infeasible: {size_bits:.1f} bits remain after dropping every "
            f"superedge, target is {target_bits:.1f} bits"
        )
        self.target_bits = target_bits
        self.size_bits = size_bits
