"""
Runtime configuration read from the environment (and an optional .env file).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

from .utils import env_flag

load_dotenv()


class Config:
    RESIDUAL_TOL = float(os.getenv("JORDANKIT_RESIDUAL_TOL", "1e-10"))
    CLUSTER_RADIUS = float(os.getenv("JORDANKIT_CLUSTER_RADIUS", "1e-6"))
    MAX_ITER = int(os.getenv("JORDANKIT_MAX_ITER", "200"))
    RANK_THRESHOLD = float(os.getenv("JORDANKIT_RANK_THRESHOLD", "1e-8"))
    ROOT_METHOD = os.getenv("JORDANKIT_ROOT_METHOD", "companion")
    MAX_LEN = int(os.getenv("JORDANKIT_MAX_LEN", "8"))
    ZERO_ORDER_CAP = int(os.getenv("JORDANKIT_ZERO_ORDER_CAP", "64"))
    DIVISOR_SEARCH_LIMIT = int(os.getenv("JORDANKIT_DIVISOR_SEARCH_LIMIT", "1000000"))
    REPORT_FORMAT = os.getenv("JORDANKIT_REPORT_FORMAT", "human")
    LOG_LEVEL = os.getenv("JORDANKIT_LOG_LEVEL", "WARNING")
    SAMPLES = os.getenv("JORDANKIT_SAMPLES", "1/2,1,3/2")
    CROSS_CHECK = env_flag("JORDANKIT_CROSS_CHECK", True)


ROOT_METHODS = ("companion", "aberth")


@dataclass(frozen=True)
class NumericSettings:
    """
    Knobs of the floating-point path: root finding, clustering and rank decisions.
    """

    tol: float = Config.RESIDUAL_TOL
    cluster_radius: float = Config.CLUSTER_RADIUS
    max_iter: int = Config.MAX_ITER
    rank_threshold: float = Config.RANK_THRESHOLD
    method: str = Config.ROOT_METHOD

    def __post_init__(self) -> None:
        if self.method not in ROOT_METHODS:
            raise ValueError(f"Invalid root method '{self.method}'. Valid methods: {', '.join(ROOT_METHODS)}")
        if self.tol <= 0 or self.cluster_radius <= 0 or self.rank_threshold <= 0:
            raise ValueError("numeric tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")

    def override(self, **changes) -> "NumericSettings":
        return replace(self, **{key: value for key, value in changes.items() if value is not None})


DEFAULT_SETTINGS = NumericSettings()
