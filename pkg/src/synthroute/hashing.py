"""Deterministic 64-bit FNV-1a hashing, stable across platforms and runs."""

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def fnv1a_text(text: str) -> int:
    return fnv1a_64(text.encode("utf-8"))
