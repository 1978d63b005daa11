"""Unguessable session tokens for retrieval URLs."""

from __future__ import annotations

import re
import secrets

# 128 bits, base64url without padding: always 22 characters.
TOKEN_BYTES = 16
TOKEN_RE = re.compile(r"^[A-Za-z0-9_-]{22}$")


def mint_token() -> str:
    """Mint a fresh URL-safe token from the OS entropy source."""
    token = secrets.token_urlsafe(TOKEN_BYTES)
    assert TOKEN_RE.match(token), token
    return token


def is_token(value: str) -> bool:
    """True when the value has the exact shape of a minted token."""
    return bool(TOKEN_RE.match(value))
