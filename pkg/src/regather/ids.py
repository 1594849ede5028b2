"""Sortable unique identifiers (ULID-style) for platform-minted URIs."""

import secrets
import threading
import time

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"

_lock = threading.Lock()
_last = (0, 0)  # (millis, randomness) of the previous id, for same-ms ordering


def _encode(value, length):
    chars = []
    for _ in range(length):
        chars.append(_CROCKFORD[value & 0x1F])
        value >>= 5
    return "".join(reversed(chars))


def new_ulid():
    """26-char Crockford base32 id: 48-bit ms timestamp + 80-bit randomness.

    Ids minted by one process are strictly increasing, so registration order
    and lexicographic order agree.
    """
    global _last
    with _lock:
        millis = int(time.time() * 1000)
        rand = secrets.randbits(80)
        if millis < _last[0]:
            millis = _last[0]
        if millis == _last[0] and rand <= _last[1]:
            rand = _last[1] + 1
            if rand >= 1 << 80:  # randomness overflow: step the clock
                millis += 1
                rand = secrets.randbits(80)
        _last = (millis, rand)
    return _encode(millis, 10) + _encode(rand, 16)
