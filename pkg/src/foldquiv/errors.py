"""Exception types shared across the package."""


class FoldquivError(Exception):
    pass


class NotASubgroup(FoldquivError):
    pass


class NotAutomorphism(FoldquivError):
    pass


class GroupMismatch(FoldquivError):
    pass


class ActionInvalid(FoldquivError):
    pass


class CyclicQuiver(FoldquivError):
    pass


class NotEI(FoldquivError):
    pass


class TooLarge(FoldquivError):
    pass


class InvalidChoices(FoldquivError):
    pass


class ConstructionFailure(FoldquivError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NonIntegerEntry(FoldquivError):
    pass


class InvalidTriple(FoldquivError):
    pass


class DaggerViolated(FoldquivError):
    pass


class NotIsomorphic(FoldquivError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ImageNotRoot(FoldquivError):
    pass


class PrecondViolated(FoldquivError):
    pass


class NotIso(FoldquivError):
    pass


class NotAdmissible(FoldquivError):
    pass


class NotPresented(FoldquivError):
    pass


class SetupViolated(FoldquivError):
    pass


class NotSink(FoldquivError):
    pass


class NotSource(FoldquivError):
    pass


class RootNotPositive(FoldquivError):
    pass


class ParseError(FoldquivError):
    def __init__(self, msg, line: int = 0, col: int = 0, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col, self.source = line, col, source


class SemanticError(FoldquivError):
    pass
