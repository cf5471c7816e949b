"""Shared error taxonomy for the platform.

Every module raises subclasses of :class:`PaddydxError` so callers (CLI,
HTTP layer) can map failures to exit codes / status codes in one place.
"""


class PaddydxError(Exception):
    """Base class for all platform errors."""


class NotFound(PaddydxError):
    """A referenced entity (class slug, queue, upload, job, ...) does not exist."""


class InvalidInput(PaddydxError):
    """Arguments violate a documented precondition."""


class Unsupported(PaddydxError):
    """The backend does not implement the requested capability."""


class FixtureMiss(NotFound):
    """A fixture backend has no canned output for the given image digest."""


class LeaseInvalid(PaddydxError):
    """ack/nack attempted with an expired, foreign, or already-settled lease."""


class Unavailable(PaddydxError):
    """A required service (broker) is not reachable."""


class Conflict(PaddydxError):
    """State precludes the operation (duplicate username, result not ready)."""


class Unauthorized(PaddydxError):
    """Missing or invalid credentials/token."""


class Forbidden(PaddydxError):
    """Authenticated caller does not own the referenced resource."""


class PayloadTooLarge(PaddydxError):
    """Upload exceeds the configured size limit."""


class UnsupportedMedia(PaddydxError):
    """Uploaded bytes do not decode as a supported image format."""


class Refused(PaddydxError):
    """Operation ordering rule violated (e.g. augmenting an unsplit dataset)."""
