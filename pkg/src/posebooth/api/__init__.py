"""HTTP service: FastAPI app factory, config, wire schemas."""

from .app import create_app, sign_payload
from .config import ApiConfig

__all__ = ["ApiConfig", "create_app", "sign_payload"]
