import struct
from typing import BinaryIO
import numpy as np
from ..compressor import maybe_compress
from .Identifier import (
    MAGIC,
    VERSION,
    EOF_MARKER,
    DataTypesIdentifier,
    TYPE_TO_DataTypeIdentifer,
    Encoder,
    LengthSizeMarkers,
)

_INT_RANGES = (
    (Encoder.INT8, "<b", -(1 << 7), (1 << 7) - 1),
    (Encoder.INT16, "<h", -(1 << 15), (1 << 15) - 1),
    (Encoder.INT32, "<i", -(1 << 31), (1 << 31) - 1),
    (Encoder.INT64, "<q", -(1 << 63), (1 << 63) - 1),
    (Encoder.UINT64, "<Q", 0, (1 << 64) - 1),
)


def _plain(value):
    # numpy scalars behave like their Python counterparts
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


class Writer:
    def __init__(self, source: dict, buffer: BinaryIO):
        self.source = source
        self.buffer = buffer

    def save(self) -> None:
        self.buffer.write(MAGIC + bytes([VERSION]))
        self._write_length(len(self.source))
        for key, value in self.source.items():
            self._write_key_value(key, value)
        self.buffer.write(bytes([EOF_MARKER]))

    def _write_length(self, length: int) -> int:
        if length <= LengthSizeMarkers.SIX_BIT_ENCODING.value:
            self.buffer.write(bytes([length]))
            return 1
        if length <= 0x3FFF:
            # 01 prefix on the high byte
            self.buffer.write(bytes([0x40 | (length >> 8), length & 0xFF]))
            return 2
        self.buffer.write(bytes([LengthSizeMarkers.THIRTY_TWO_BIT_ENCODING.value]))
        self.buffer.write(struct.pack("<I", length))
        return 5

    def _write_key_value(self, key, value) -> None:
        value = _plain(value)
        try:
            object_type = TYPE_TO_DataTypeIdentifer[type(value)]
        except KeyError:
            raise TypeError(f"cannot snapshot value of type {type(value).__name__}") from None
        self.buffer.write(bytes([object_type.value]))
        if key is not None:
            self._write_string(str(key))

        if object_type == DataTypesIdentifier.MAP:
            self._write_length(len(value))
            for k, v in value.items():
                self._write_key_value(k, v)
        elif object_type == DataTypesIdentifier.LIST:
            self._write_length(len(value))
            for entry in value:
                self._write_key_value(None, entry)
        elif object_type == DataTypesIdentifier.NONE:
            pass
        elif object_type == DataTypesIdentifier.BOOL:
            self._write_int(1 if value else 0)
        elif object_type == DataTypesIdentifier.INT:
            self._write_int(value)
        elif object_type == DataTypesIdentifier.FLOAT:
            self._write_encoding(Encoder.FLOAT64)
            self.buffer.write(struct.pack("<d", value))
        else:
            self._write_string(value)

    def _write_encoding(self, encoding: Encoder) -> None:
        self.buffer.write(bytes([3 << 6 | encoding.value]))

    def _write_int(self, value: int) -> None:
        for encoding, fmt, low, high in _INT_RANGES:
            if low <= value <= high:
                self._write_encoding(encoding)
                self.buffer.write(struct.pack(fmt, value))
                return
        raise OverflowError(f"integer {value} does not fit in 64 bits")

    def _write_string(self, value: str) -> None:
        payload, compressed = maybe_compress(value.encode("utf-8"))
        if compressed:
            self._write_encoding(Encoder.COMPRESSED)
        self._write_length(len(payload))
        self.buffer.write(payload)
