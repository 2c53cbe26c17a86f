"""Exception hierarchy.

Validators return reports for axiom failures; exceptions are reserved for
unusable input (bad shapes, wrong kinds, caps) and for broken invariants.
"""


class XmodkitError(ValueError):
    pass


class MalformedBackend(XmodkitError):
    pass


class UnknownSymbol(XmodkitError):
    pass


class ArityMismatch(XmodkitError):
    pass


class CapExceeded(XmodkitError):
    pass


class SignatureMismatch(XmodkitError):
    pass


class NotInKernel(XmodkitError):
    pass


class SourceTargetMismatch(XmodkitError):
    pass


class PrecrossedTarget(XmodkitError):
    pass


class MiddleMismatch(XmodkitError):
    pass


class InternalTheoremViolation(AssertionError):
    """A constructed object failed a check that theory guarantees.

    Seeing this on valid input means a bug in xmodkit, not in the input.
    """


class LevelMismatch(XmodkitError):
    pass


class MooreTooLong(XmodkitError):
    pass


class NotSimplicial(XmodkitError):
    pass


class RestrictionEscapesKernel(XmodkitError):
    pass


class KindMismatch(XmodkitError):
    pass


class NotLinear(XmodkitError):
    pass


class CharTwo(XmodkitError):
    pass


class SchemaError(XmodkitError):
    pass
