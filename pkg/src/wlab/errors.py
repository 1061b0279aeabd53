"""Error types shared across the library.

The CLI maps InputError to exit code 2 and verification mismatches to
exit code 1; everything else is a bug.
"""


class InputError(ValueError):
    """Malformed or inconsistent input (bad class vector, wrong lattice,

    invalid fixture, unsupported surface, ...)."""
