from paddydx.broker.clock import Clock, ManualClock, MonotonicClock, SystemClock
from paddydx.broker.queue import (
    DEFAULT_LEASE_SECONDS,
    DEFAULT_MAX_DELIVERIES,
    Broker,
    Envelope,
    Lease,
    QueueStats,
)

__all__ = [
    "Broker",
    "Clock",
    "DEFAULT_LEASE_SECONDS",
    "DEFAULT_MAX_DELIVERIES",
    "Envelope",
    "Lease",
    "ManualClock",
    "MonotonicClock",
    "QueueStats",
    "SystemClock",
]
