"""Transmit power control solvers and their kernel backends."""

from . import _backend
from .solvers import (TpcResult, max_min_ee, max_min_se, max_power,
                      min_power_for_sinr)

__all__ = [
    "TpcResult",
    "max_power",
    "min_power_for_sinr",
    "max_min_se",
    "max_min_ee",
    "active_backend",
    "set_backend",
    "available_backends",
]


def active_backend() -> str:
    """Name of the kernel backend in use ('cython' or 'python')."""
    return _backend.name()


def set_backend(name: str) -> None:
    """Switch kernel backends at runtime."""
    _backend.set_backend(name)


def available_backends() -> list[str]:
    return sorted(_backend.available())
