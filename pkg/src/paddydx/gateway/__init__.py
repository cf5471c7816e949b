from paddydx.gateway.auth import TokenStore, hash_password, verify_password
from paddydx.gateway.http import create_app
from paddydx.gateway.remote import RemoteBlobs, RemoteBroker
from paddydx.gateway.service import GatewayConfig, GatewayService
from paddydx.gateway.storage import BlobStore, Repository

__all__ = [
    "BlobStore",
    "GatewayConfig",
    "GatewayService",
    "RemoteBlobs",
    "RemoteBroker",
    "Repository",
    "TokenStore",
    "create_app",
    "hash_password",
    "verify_password",
]
