import zlib

# strings shorter than this never shrink under zlib
MIN_COMPRESS_LENGTH = 24


def compress(data: bytes, level: int = 6) -> bytes:
    return zlib.compress(data, level)


def decompress(data: bytes) -> bytes:
    return zlib.decompress(data)


def maybe_compress(data: bytes) -> tuple[bytes, bool]:
    """returns (payload, compressed) keeping whichever form is shorter"""
    if len(data) < MIN_COMPRESS_LENGTH:
        return data, False
    packed = compress(data)
    if len(packed) < len(data):
        return packed, True
    return data, False
