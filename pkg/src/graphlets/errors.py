"""Exception types shared across the package."""


class GraphletError(Exception):
    pass


class UsageError(GraphletError, ValueError):
    """Bad arguments or a violated precondition."""


class ParseError(GraphletError, ValueError):
    def __init__(self, line, msg):
        self.line = line
        super().__init__(f"line {line}: {msg}")


class EmptyInstanceError(GraphletError):
    """The graph has no k-graphlet (or no admissible start state)."""


class UnsupportedOperation(GraphletError):
    pass


class GuardExceeded(GraphletError):
    """An oracle computation would exceed its size guard."""
