"""Password hashing and opaque bearer tokens."""

from __future__ import annotations

import hashlib
import hmac
import secrets
import threading

from paddydx.broker.clock import Clock
from paddydx.errors import Unauthorized

_ITERATIONS = 100_000


def hash_password(password: str, salt: bytes | None = None) -> str:
    salt = salt if salt is not None else secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, _ITERATIONS)
    return f"pbkdf2_sha256${_ITERATIONS}${salt.hex()}${digest.hex()}"


def verify_password(password: str, encoded: str) -> bool:
    try:
        _, iterations, salt_hex, digest_hex = encoded.split("$")
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(digest.hex(), digest_hex)
    except ValueError:
        return False


class TokenStore:
    """Opaque 32-byte random tokens with a fixed TTL; in-memory only."""

    def __init__(self, clock: Clock, ttl_seconds: float = 24 * 3600.0):
        self._clock = clock
        self._ttl = ttl_seconds
        self._lock = threading.Lock()
        self._tokens: dict[str, tuple[str, float]] = {}

    def issue(self, user_id: str) -> str:
        token = secrets.token_hex(32)
        with self._lock:
            self._tokens[token] = (user_id, self._clock.now() + self._ttl)
        return token

    def resolve(self, token: str | None) -> str:
        """user_id for a live token; raises Unauthorized otherwise."""
        if not token:
            raise Unauthorized("missing bearer token")
        now = self._clock.now()
        with self._lock:
            entry = self._tokens.get(token)
            if entry is None:
                raise Unauthorized("invalid token")
            user_id, expires_at = entry
            if expires_at <= now:
                del self._tokens[token]
                raise Unauthorized("token expired")
            return user_id

    def revoke(self, token: str) -> None:
        with self._lock:
            self._tokens.pop(token, None)
