"""HTTP face of the package: pydantic request/response models and the app."""

from .app import create_app

__all__ = ["create_app"]
