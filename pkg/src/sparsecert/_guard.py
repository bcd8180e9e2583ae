"""Shared limit on exhaustive column-subset enumeration."""

MAX_ENUMERATION_COLUMNS = 24


class EnumerationGuardError(ValueError):
    """Raised when a subset enumeration would exceed the column limit."""


def check_enumeration(n_columns: int, force_large: bool = False) -> None:
    if n_columns > MAX_ENUMERATION_COLUMNS and not force_large:
        raise EnumerationGuardError(
            f"{n_columns} columns exceeds the enumeration limit of "
            f"{MAX_ENUMERATION_COLUMNS}; pass force_large=True (CLI: --force-large) to proceed"
        )
