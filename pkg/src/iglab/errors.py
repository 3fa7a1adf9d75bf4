"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: InputError -> 2, NumericalError -> 3.
Everything else is a plain bug and propagates.
"""


class InputError(ValueError):
    """Bad user input: unknown family, malformed file, invalid parameters."""


class FamilyDefinitionError(InputError):
    """A family rule produced an invalid weight or measure."""


class UnsupportedFamilyError(InputError):
    """A registered name whose construction is deliberately not implemented."""


class NumericalError(RuntimeError):
    """A solver or estimate failed to reach its required accuracy."""
