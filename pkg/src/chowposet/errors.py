"""Exception hierarchy.

Every error that carries a counterexample stores it in ``witness`` so
callers (and the CLI) can report it without re-deriving anything.
"""


class ChowPosetError(Exception):
    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidPoset(ChowPosetError):
    pass


class NotBounded(InvalidPoset):
    pass


class NotGraded(InvalidPoset):
    pass


class NotComparable(ChowPosetError):
    pass


class RankZeroInterval(ChowPosetError):
    pass


class SizeLimitExceeded(ChowPosetError):
    pass


# polynomials
class ZeroPolynomial(ChowPosetError):
    pass


class NotPalindromic(ChowPosetError):
    pass


class DegreeTooHigh(ChowPosetError):
    pass


class NotRealRooted(ChowPosetError):
    pass


class DegreeGap(ChowPosetError):
    pass


class InexactDivision(ChowPosetError):
    pass


# labelings
class LabelingError(ChowPosetError):
    pass


class NotACover(LabelingError):
    pass


class MissingCover(LabelingError):
    pass


class TopElement(LabelingError):
    pass


class NotEL(LabelingError):
    pass


class NotUMEL(LabelingError):
    pass


# lattices
class NotALattice(ChowPosetError):
    pass


class InvalidChain(ChowPosetError):
    pass


class NotRankUniform(ChowPosetError):
    pass


class NotSupersolvable(ChowPosetError):
    pass


class NotLowerRankUniform(ChowPosetError):
    pass


class MethodDisagreement(ChowPosetError):
    pass


# input documents
class SchemaError(ChowPosetError):
    pass


class UnknownFamily(ChowPosetError):
    pass
