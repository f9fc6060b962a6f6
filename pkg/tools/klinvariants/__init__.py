# Kerler-Lyubashenko invariants at u_q(sl2)

import os
from datetime import UTC, datetime

__version__ = "0.1.0"


def get_build_datetime() -> datetime:
    """Return the report timestamp, respecting SOURCE_DATE_EPOCH.

    When ``SOURCE_DATE_EPOCH`` is set (integer seconds since the Unix epoch)
    JSON reports carry that instant, so repeated runs emit identical files.
    Otherwise ``datetime.now(UTC)`` is used.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        return datetime.fromtimestamp(int(epoch), tz=UTC)
    return datetime.now(UTC)
