"""Exception hierarchy shared by all chiralwalk modules."""


class ChiralWalkError(ValueError):
    """Base class for every error raised by chiralwalk."""


# linalg
class NotSquare(ChiralWalkError):
    pass


class NotHermitian(ChiralWalkError):
    pass


class ShapeMismatch(ChiralWalkError):
    pass


class ConvergenceFailure(ChiralWalkError):
    pass


# graphs
class NotSimpleGraph(ChiralWalkError):
    pass


class ZeroNotSimple(ChiralWalkError):
    pass


class AllOnesNotKernel(ChiralWalkError):
    pass


class SizeCap(ChiralWalkError):
    pass


class SigningRequiresD4(ChiralWalkError):
    pass


class NotHermitianCirculant(ChiralWalkError):
    pass


class NotOdd(ChiralWalkError):
    pass


class NotEven(ChiralWalkError):
    pass


class ConstructionCheckFailed(ChiralWalkError):
    pass


class TooSmall(ChiralWalkError):
    pass


class SpectrumMismatch(ChiralWalkError):
    pass


class NotEulerian(ChiralWalkError):
    pass


class Disconnected(ChiralWalkError):
    pass


class InvalidGroupTable(ChiralWalkError):
    pass


class ConnectionNotInverseClosed(ChiralWalkError):
    pass


class ConnectionContainsIdentity(ChiralWalkError):
    pass


class InvalidGraphSpec(ChiralWalkError):
    pass


# mixing
class IndexOutOfRange(ChiralWalkError, IndexError):
    pass


class PreconditionUnmet(ChiralWalkError):
    pass


# quotient
class NotEquitable(ChiralWalkError):
    def __init__(self, j, k, row, message):
        super().__init__(message)
        self.j = j
        self.k = k
        self.row = row


class ClosedFormMismatch(ChiralWalkError):
    pass


class CellNotSingleton(ChiralWalkError):
    pass


class SupportMismatch(ChiralWalkError):
    pass


class InvalidPartition(ChiralWalkError):
    pass


# measured
class DimensionMismatch(ChiralWalkError):
    pass


class ConeInvalid(ChiralWalkError):
    pass
