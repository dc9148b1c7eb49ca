"""Thin client for fetching divergence-fused rewards during RL training."""

from .client import BridgeError, ClientConfig, ScoringClient
from .subprocess_bridge import CliBridge

__all__ = ["BridgeError", "ClientConfig", "ScoringClient", "CliBridge"]
__version__ = "0.1.0"
