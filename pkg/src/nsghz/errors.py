"""Exception hierarchy shared by every nsghz module."""


class NsghzError(Exception):
    """Base class for library errors."""


class DimensionError(NsghzError, ValueError):
    """Operands disagree on qudit dimension, system size or site index."""


class CapExceededError(NsghzError):
    """A requested state would exceed the configured amplitude cap."""


class HypergraphError(NsghzError, ValueError):
    """Invalid hyperedge, phase edge or hypergraph."""


class ParseError(HypergraphError):
    """Syntax error in the hypergraph text format.

    ``lineno`` is 1-based and ``None`` when the error is not tied to a line.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
