"""Schema version embedded in every JSON artifact the package writes."""

from __future__ import annotations

SCHEMA_VERSION = "1.0"


class SchemaVersionError(ValueError):
    """Raised when a reader meets an artifact with an unknown major version."""


def check_schema_version(version: str) -> str:
    """Accept *version* if its major component matches :data:`SCHEMA_VERSION`.

    Minor bumps are additive and always readable.

    Raises:
        SchemaVersionError: On a different or unparsable major version.
    """
    major = str(version).split(".", 1)[0]
    expected = SCHEMA_VERSION.split(".", 1)[0]
    if major != expected:
        raise SchemaVersionError(
            f"unsupported schema_version {version!r} (expected {expected}.x)"
        )
    return version
