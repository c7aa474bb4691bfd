from .Writer import Writer
from .Reader import Reader
from .Snapshot import (
    SnapshotConfig,
    SnapshotStore,
    default_config,
    load_snapshot,
    describe_snapshot,
)
