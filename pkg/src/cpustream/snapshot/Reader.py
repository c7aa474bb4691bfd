import struct
from typing import BinaryIO
from ..compressor import decompress
from ..errors import ValidationError
from .Identifier import (
    MAGIC,
    VERSION,
    EOF_MARKER,
    DataTypesIdentifier,
    Encoder,
    LengthSizeMarkers,
)

_INT_FORMATS = {
    Encoder.INT8: ("<b", 1),
    Encoder.INT16: ("<h", 2),
    Encoder.INT32: ("<i", 4),
    Encoder.INT64: ("<q", 8),
    Encoder.UINT64: ("<Q", 8),
}


class Reader:
    def __init__(self, source_buffer: BinaryIO):
        self.buffer = source_buffer
        self.data = {}

    def _read(self, size: int) -> bytes:
        chunk = self.buffer.read(size)
        if len(chunk) != size:
            raise ValidationError("truncated snapshot")
        return chunk

    def load(self) -> dict:
        header = self.buffer.read(len(MAGIC) + 1)
        if header[: len(MAGIC)] != MAGIC:
            raise ValidationError("not a model snapshot (bad magic)")
        if header[len(MAGIC)] != VERSION:
            raise ValidationError(f"unsupported snapshot version {header[len(MAGIC)]}")
        keys = self._read_length()
        for _ in range(keys):
            key, value = self._read_key_value(expect_key=True)
            self.data[key] = value
        if self._read(1)[0] != EOF_MARKER:
            raise ValidationError("snapshot is missing its end marker")
        return self.data

    def _read_length(self) -> int:
        marker = self._read(1)[0]
        if marker <= LengthSizeMarkers.SIX_BIT_ENCODING.value:
            return marker
        if marker <= LengthSizeMarkers.FORTEEN_BIT_ENCODING.value:
            # 0x3F drops the 01 prefix
            return ((marker & 0x3F) << 8) | self._read(1)[0]
        if marker == LengthSizeMarkers.THIRTY_TWO_BIT_ENCODING.value:
            return struct.unpack("<I", self._read(4))[0]
        raise ValidationError(f"Unknown length marker: {marker}")

    def _peek_encoding(self):
        first_byte = self._read(1)[0]
        # the top 2 bits (11) due to 3 << 6
        if first_byte >> 6 == 3:
            return Encoder(first_byte & 0x3F)
        self.buffer.seek(-1, 1)
        return None

    def _read_string(self) -> str:
        encoding = self._peek_encoding()
        length = self._read_length()
        payload = self._read(length)
        if encoding == Encoder.COMPRESSED:
            payload = decompress(payload)
        return payload.decode("utf-8")

    def _read_int(self) -> int:
        encoding = self._peek_encoding()
        fmt, size = _INT_FORMATS[encoding]
        return struct.unpack(fmt, self._read(size))[0]

    def _read_key_value(self, expect_key: bool = True):
        object_type = DataTypesIdentifier(self._read(1)[0])
        key = self._read_string() if expect_key else None

        if object_type == DataTypesIdentifier.MAP:
            value = {}
            for _ in range(self._read_length()):
                k, v = self._read_key_value(expect_key=True)
                value[k] = v
        elif object_type == DataTypesIdentifier.LIST:
            value = [self._read_key_value(expect_key=False)[1] for _ in range(self._read_length())]
        elif object_type == DataTypesIdentifier.NONE:
            value = None
        elif object_type == DataTypesIdentifier.BOOL:
            value = bool(self._read_int())
        elif object_type == DataTypesIdentifier.INT:
            value = self._read_int()
        elif object_type == DataTypesIdentifier.FLOAT:
            if self._peek_encoding() != Encoder.FLOAT64:
                raise ValidationError("float without FLOAT64 encoding")
            value = struct.unpack("<d", self._read(8))[0]
        else:
            value = self._read_string()
        return key, value
