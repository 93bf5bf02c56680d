class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Undecided(RuntimeError):
    """A bounded search ran out of budget before reaching an answer."""
