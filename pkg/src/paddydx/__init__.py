"""paddydx: a distributed paddy-disease diagnosis platform.

Subpackages:
    core          taxonomy, geometry, raster images, treatment knowledge base
    metrics       classification and detection evaluation (loss, confusion,
                  IoU, matching, AP/mAP50, report tables)
    augment       dataset splitting, bbox-preserving augmentation, preprocessing
    inference     model backend abstraction, NMS, two-stage verification
    broker        embedded at-least-once message queue
    orchestrator  master-worker inference tier
    gateway       HTTP gateway with auth, uploads, jobs, outbreaks
"""

__version__ = "0.1.0"
