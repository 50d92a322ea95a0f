"""Shared error types with CLI exit-code semantics."""


class InputError(ValueError):
    """Malformed user input (bad code, bad group spec): exit code 1."""


class CapExceeded(RuntimeError):
    """A configured resource cap was hit: exit code 2."""
