from paddydx.orchestrator.master import (
    BackendRegistry,
    Master,
    MasterConfig,
    start_master,
)
from paddydx.orchestrator.worker import Worker, WorkerHandle, WorkerSpec

__all__ = [
    "BackendRegistry",
    "Master",
    "MasterConfig",
    "Worker",
    "WorkerHandle",
    "WorkerSpec",
    "start_master",
]
