"""Exception hierarchy shared by every module of the package."""


class AFBError(Exception):
    """Base class for all errors raised by :mod:`afbposet`."""


class PosetError(AFBError, ValueError):
    pass


class CycleInCovers(PosetError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cover relation contains a cycle: " + " -> ".join(self.cycle))


class RedundantCover(PosetError):
    def __init__(self, lower, upper):
        self.pair = (lower, upper)
        super().__init__(f"cover ({lower}, {upper}) is implied by other covers")


class UnknownElement(PosetError):
    pass


class PairNotIncomparable(PosetError):
    def __init__(self, pair):
        self.pair = tuple(pair)
        super().__init__(f"pair {self.pair} is not an incomparable pair")


class NotALinearExtension(PosetError):
    def __init__(self, index, reason=""):
        self.index = index
        super().__init__(f"extension #{index} is not a linear extension" + (f": {reason}" if reason else ""))


class SearchBudgetExceeded(AFBError):
    pass


class NotMinimal(PosetError):
    pass


class NotConnected(PosetError):
    pass


class NotComparable(PosetError):
    pass


class NotIncomparable(PosetError):
    pass


class NotInUpset(PosetError):
    pass


class NotInDownset(PosetError):
    pass


class NotAZero(PosetError):
    pass


class NoZero(PosetError):
    pass


class NotBelowY(PosetError):
    pass


class DiagramError(AFBError, ValueError):
    pass


class NotValidated(DiagramError):
    def __init__(self, report):
        self.report = report
        kinds = sorted({v.kind for v in report.violations})
        super().__init__("diagram failed validation: " + ", ".join(kinds))


class NotAFB(DiagramError):
    def __init__(self, violators):
        self.violators = list(violators)
        super().__init__("diagram is not accessible from below; trapped minimals: " + ", ".join(self.violators))


class AFBViolation(DiagramError):
    """A consequence of the AFB property failed to hold on a diagram."""


class UniquenessViolated(AFBViolation):
    pass


class BoundaryNotSimple(DiagramError):
    pass


class InternalIrreversible(AFBError):
    def __init__(self, name, cycle):
        self.name = name
        self.cycle = cycle
        super().__init__(f"set {name} expected reversible but contains alternating cycle {cycle.pairs}")


class IrreversibleSet(InternalIrreversible):
    pass


class VerificationFailed(AFBError):
    pass
