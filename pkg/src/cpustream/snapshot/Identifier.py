"""
Model snapshot layout

[MAGIC "CPSN"][VERSION]
[KEY_COUNT]
  [OBJECT_TYPE][KEY][VALUE] ...
[EOF]

Lengths use a variable-size marker:
00xxxxxx               6-bit length (0x00 to 0x3F)
01xxxxxx xxxxxxxx      14-bit length
10000000 + 4 bytes     32-bit length

Scalar values start with an encoding byte carrying the 11 prefix
(3 << 6 | encoding), so 0xC0.. marks integers, floats and compressed
strings; any other first byte is the length of a plain UTF-8 string.
"""

from enum import Enum

MAGIC = b"CPSN"
VERSION = 1


class DataTypesIdentifier(Enum):
    STRING = 1
    MAP = 2
    LIST = 3
    INT = 4
    FLOAT = 5
    NONE = 9
    BOOL = 10


TYPE_TO_DataTypeIdentifer = {
    str: DataTypesIdentifier.STRING,
    dict: DataTypesIdentifier.MAP,
    list: DataTypesIdentifier.LIST,
    tuple: DataTypesIdentifier.LIST,
    int: DataTypesIdentifier.INT,
    float: DataTypesIdentifier.FLOAT,
    type(None): DataTypesIdentifier.NONE,
    bool: DataTypesIdentifier.BOOL,
}

SequenceTypes = (DataTypesIdentifier.MAP, DataTypesIdentifier.LIST)


class Encoder(Enum):
    INT8 = 0
    INT16 = 1
    INT32 = 2
    COMPRESSED = 3
    INT64 = 4
    FLOAT64 = 5
    UINT64 = 6


EOF_MARKER = 0x00


class LengthSizeMarkers(Enum):
    SIX_BIT_ENCODING = 63
    FORTEEN_BIT_ENCODING = 127
    THIRTY_TWO_BIT_ENCODING = 0x80
