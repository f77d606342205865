"""Exception types raised by the gpnd toolchain."""


class GpndError(Exception):
    pass


class ParseError(GpndError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class ArityConflict(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class CyclicDefinition(GpndError):
    pass


class InvalidPath(GpndError):
    pass


class UncheckedLemma(GpndError):
    pass


class OutOfFragment(GpndError):
    pass


class IllTyped(GpndError):
    def __init__(self, path, expected, found):
        super().__init__(f"ill-typed at {'.'.join(map(str, path)) or 'root'}: expected {expected}, found {found}")
        self.path = tuple(path)
        self.expected = expected
        self.found = found


class StepLimitExceeded(GpndError):
    pass


class DepthOutOfRange(GpndError):
    pass


class WidthExceeded(GpndError):
    pass
