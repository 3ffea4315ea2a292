"""Error type shared by every module; each error carries a stable code."""


class HopfError(Exception):
    """An error with a machine-readable code such as ``E_FINITE_TYPE``."""

    def __init__(self, code, message=""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)


class ParseError(HopfError):
    def __init__(self, message, line, column, code="E_PARSE"):
        self.line = line
        self.column = column
        super().__init__(code, f"{message} at line {line}, column {column}")
