"""Exception hierarchy shared by the library and the CLI."""


class BartholdiError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(BartholdiError):
    pass


class SelfLoop(ValidationError):
    def __init__(self, vertex: int):
        super().__init__(f"self-loop at vertex {vertex}")
        self.vertex = vertex


class DuplicateEdge(ValidationError):
    def __init__(self, edge: tuple[int, int]):
        super().__init__(f"duplicate edge {edge[0]}-{edge[1]}")
        self.edge = edge


class Disconnected(ValidationError):
    def __init__(self, vertex: int):
        super().__init__(f"graph is disconnected: vertex {vertex} unreachable from vertex 0")
        self.vertex = vertex


class NotInRange(BartholdiError):
    """Right-hand side is not orthogonal to the Laplacian kernel."""


class ZeroPolynomial(BartholdiError):
    pass


class BadConstantTerm(BartholdiError):
    pass


class SingularQu(BartholdiError):
    """Q_u is not invertible at the requested bump parameter."""


class NotRegular(BartholdiError):
    pass


class ForbiddenU(BartholdiError):
    pass


class DegenerateStrip(BartholdiError):
    """Minimal and maximal pole magnitudes coincide, so the s-map is undefined."""


class BudgetExceeded(BartholdiError):
    pass


class ParseError(BartholdiError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class BadRational(ParseError):
    pass
