"""Error taxonomy shared by the library and the CLI exit-code mapping."""


class InputError(ValueError):
    """Malformed or invariant-violating input (bad model file, unknown point, ...)."""


class PreconditionError(InputError):
    """An operation was called on data that fails its stated precondition."""


class CapabilityError(RuntimeError):
    """The exact algorithm cannot handle this instance size; a fallback exists."""
